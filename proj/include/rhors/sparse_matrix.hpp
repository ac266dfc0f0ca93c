#pragma once

#include <concepts>
#include <vector>

#include "rhors/types.hpp"

namespace rhors {

struct Triplet {
  Index row = 0;
  Index col = 0;
  double value = 0.0;
};

/// Symmetric sparse matrix stored as CSR over the lower triangle. Each
/// off-diagonal pair appears once in storage; matvec applies both halves.
class SymmetricSparseMatrix {
 public:
  SymmetricSparseMatrix() = default;

  /// Builds an n-by-n symmetric matrix. Entries may address either triangle;
  /// duplicates (including an entry given in both triangles) are summed.
  /// Throws std::invalid_argument on out-of-range indices or non-finite
  /// values.
  static SymmetricSparseMatrix from_triplets(Index n, std::vector<Triplet> entries);

  Index dim() const { return n_; }

  /// Stored lower-triangle entry count after duplicate merging.
  Index stored_entries() const { return static_cast<Index>(values_.size()); }

  void apply(const Vector& x, Vector& y) const;  // y = H x
  Vector apply(const Vector& x) const;

  /// H * ones; cheap deterministic start vector for eigensolves.
  Vector row_sums() const;

  Matrix to_dense() const;  // small-scale checks only

  /// Visits stored lower-triangle entries as f(i, j, value) with j <= i,
  /// ordered by row then column.
  template <class F>
  void for_each_stored(F&& f) const {
    for (Index i = 0; i < n_; ++i) {
      for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
        f(i, static_cast<Index>(cols_[k]), values_[k]);
      }
    }
  }

 private:
  Index n_ = 0;
  std::vector<Index> row_ptr_;
  std::vector<std::int32_t> cols_;
  std::vector<double> values_;
};

/// Implicit symmetric operator [[t, g^T], [g, H]] of dimension n+1. The
/// matrix is never materialized; apply() works through H's matvec. Instances
/// hold scratch buffers, so each must be used from one thread at a time.
class ArrowheadOperator {
 public:
  ArrowheadOperator(double t, const Vector& g, const SymmetricSparseMatrix& H);

  Index dim() const { return H_->dim() + 1; }
  void apply(const Vector& x, Vector& y) const;

  double head() const { return t_; }

 private:
  double t_;
  const Vector* g_;
  const SymmetricSparseMatrix* H_;
  mutable Vector xt_, yt_;
};

template <class Op>
concept SymmetricLinearOperator = requires(const Op& op, const Vector& x, Vector& y) {
  { op.dim() } -> std::convertible_to<Index>;
  op.apply(x, y);
};

}  // namespace rhors
