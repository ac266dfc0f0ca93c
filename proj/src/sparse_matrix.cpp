#include "rhors/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rhors {

SymmetricSparseMatrix SymmetricSparseMatrix::from_triplets(Index n,
                                                           std::vector<Triplet> entries) {
  if (n <= 0) throw std::invalid_argument("matrix dimension must be positive");
  if (n > std::numeric_limits<std::int32_t>::max())
    throw std::invalid_argument("matrix dimension exceeds index range");

  for (auto& e : entries) {
    if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= n)
      throw std::invalid_argument("triplet index out of range at (" + std::to_string(e.row) +
                                  ", " + std::to_string(e.col) + ")");
    if (!std::isfinite(e.value))
      throw std::invalid_argument("non-finite value at (" + std::to_string(e.row) + ", " +
                                  std::to_string(e.col) + ")");
    if (e.col > e.row) std::swap(e.row, e.col);
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SymmetricSparseMatrix m;
  m.n_ = n;
  m.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
  m.cols_.reserve(entries.size());
  m.values_.reserve(entries.size());

  std::size_t k = 0;
  while (k < entries.size()) {
    Index r = entries[k].row, c = entries[k].col;
    double v = entries[k].value;
    for (++k; k < entries.size() && entries[k].row == r && entries[k].col == c; ++k)
      v += entries[k].value;
    m.cols_.push_back(static_cast<std::int32_t>(c));
    m.values_.push_back(v);
    m.row_ptr_[r + 1] = static_cast<Index>(m.values_.size());
  }
  for (Index i = 1; i <= n; ++i) m.row_ptr_[i] = std::max(m.row_ptr_[i], m.row_ptr_[i - 1]);
  return m;
}

void SymmetricSparseMatrix::apply(const Vector& x, Vector& y) const {
  y.setZero(n_);
  const double* xv = x.data();
  double* yv = y.data();
  for (Index i = 0; i < n_; ++i) {
    const double xi = xv[i];
    double acc = 0.0;
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const Index j = cols_[k];
      const double v = values_[k];
      acc += v * xv[j];
      if (j != i) yv[j] += v * xi;
    }
    yv[i] += acc;
  }
}

Vector SymmetricSparseMatrix::apply(const Vector& x) const {
  Vector y(n_);
  apply(x, y);
  return y;
}

Vector SymmetricSparseMatrix::row_sums() const { return apply(Vector::Ones(n_)); }

Matrix SymmetricSparseMatrix::to_dense() const {
  Matrix d = Matrix::Zero(n_, n_);
  for_each_stored([&](Index i, Index j, double v) {
    d(i, j) += v;
    if (i != j) d(j, i) += v;
  });
  return d;
}

ArrowheadOperator::ArrowheadOperator(double t, const Vector& g, const SymmetricSparseMatrix& H)
    : t_(t), g_(&g), H_(&H) {
  if (g.size() != H.dim()) throw std::invalid_argument("gradient dimension mismatch");
  xt_.resize(H.dim());
  yt_.resize(H.dim());
}

void ArrowheadOperator::apply(const Vector& x, Vector& y) const {
  const Index n = H_->dim();
  y.resize(n + 1);
  xt_ = x.tail(n);
  H_->apply(xt_, yt_);
  y[0] = t_ * x[0] + g_->dot(xt_);
  y.tail(n) = yt_ + x[0] * (*g_);
}

}  // namespace rhors
