#include "rhors/dense_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace rhors {

namespace {

constexpr Index kDenseCap = 200;

void check_size(const ProblemInstance& inst, const char* who) {
  if (inst.dim() > kDenseCap)
    throw std::invalid_argument(std::string(who) + ": dense path capped at n = 200");
}

}  // namespace

OracleResult dense_solve(const ProblemInstance& inst) {
  inst.validate();
  check_size(inst, "dense_solve");
  const Index n = inst.dim();

  Eigen::SelfAdjointEigenSolver<Matrix> es(inst.H.to_dense());
  const Vector& lam = es.eigenvalues();
  const Matrix& Q = es.eigenvectors();
  const Vector a = Q.transpose() * inst.g;

  OracleResult out;
  out.lambda_min = lam(0);
  const double lambda_tilde = std::min(0.0, out.lambda_min);
  out.threshold = inst.reg->conjugate_derivative(-lambda_tilde);

  const double ktol = 1e-10 * std::max(1.0, std::abs(out.lambda_min));
  std::vector<Index> kernel;
  for (Index i = 0; i < n && lam(i) <= out.lambda_min + ktol; ++i) kernel.push_back(i);

  double gk_sq = 0.0;
  for (Index i : kernel) gk_sq += a(i) * a(i);
  const bool overlaps = std::sqrt(gk_sq) >= kRangeTestTol * inst.g.norm();

  // increasing secular function ||(H - mu I)^{-1} g||^2 - (rho^+)'(-mu)
  const auto phi = [&](double mu) {
    double s = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double r = a(i) / (lam(i) - mu);
      s += r * r;
    }
    return s - inst.reg->conjugate_derivative(-mu);
  };

  const auto bisect = [&](double hi) {
    double step = 1.0;
    double lo = hi - step;
    while (phi(lo) >= 0.0) {
      step *= 2.0;
      lo = hi - step;
      ++out.bisection_iterations;
      if (step > 1e14) throw std::runtime_error("dense_solve: secular bracket failed");
    }
    for (int it = 0; it < 400; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (!(mid > lo && mid < hi)) break;
      (phi(mid) < 0.0 ? lo : hi) = mid;
      ++out.bisection_iterations;
    }
    return 0.5 * (lo + hi);
  };

  const auto primal_from = [&](double mu) {
    Vector c(n);
    for (Index i = 0; i < n; ++i) c(i) = -a(i) / (lam(i) - mu);
    return Vector(Q * c);
  };

  if (out.lambda_min > 0.0) {
    Vector y = primal_from(0.0);  // -H^{-1} g
    if (y.squaredNorm() <= out.threshold) {
      out.label = CaseLabel::PositiveDefiniteInterior;
      out.lambda_star = 0.0;
      out.x_star = std::move(y);
    } else {
      out.label = CaseLabel::Hard1;
      out.lambda_star = bisect(0.0);
      out.x_star = primal_from(out.lambda_star);
    }
  } else if (overlaps) {
    out.label = CaseLabel::Easy;
    out.lambda_star = bisect(lambda_tilde);
    out.x_star = primal_from(out.lambda_star);
  } else {
    // pseudoinverse solution skips the bottom eigenspace
    Vector c = Vector::Zero(n);
    for (Index i = 0; i < n; ++i) {
      if (std::find(kernel.begin(), kernel.end(), i) == kernel.end())
        c(i) = a(i) / (lam(i) - lambda_tilde);
    }
    const Vector y = Q * c;
    const double ynsq = y.squaredNorm();
    if (ynsq > out.threshold) {
      out.label = CaseLabel::Hard1;
      out.lambda_star = bisect(lambda_tilde);
      out.x_star = primal_from(out.lambda_star);
    } else {
      out.label = CaseLabel::Hard2;
      out.lambda_star = lambda_tilde;
      out.x_star = -y + std::sqrt(out.threshold - ynsq) * Q.col(kernel.front());
    }
  }

  project_to_domain(*inst.reg, out.x_star);
  out.optimal_value = primal_objective(inst, out.x_star);
  out.t_star = out.lambda_star - inst.g.dot(out.x_star);
  return out;
}

GridMaxResult dual_grid_max(const ProblemInstance& inst, double t_lo, double t_hi,
                            int points) {
  inst.validate();
  check_size(inst, "dual_grid_max");
  if (points < 2 || !(t_hi > t_lo))
    throw std::invalid_argument("dual_grid_max: need points >= 2 and t_lo < t_hi");

  const Index n = inst.dim();
  Matrix B = Matrix::Zero(n + 1, n + 1);
  B.block(1, 1, n, n) = inst.H.to_dense();
  B.block(0, 1, 1, n) = inst.g.transpose();
  B.block(1, 0, n, 1) = inst.g;

  GridMaxResult best{t_lo, -std::numeric_limits<double>::infinity()};
  Eigen::SelfAdjointEigenSolver<Matrix> es;
  for (int k = 0; k < points; ++k) {
    const double t = t_lo + (t_hi - t_lo) * k / (points - 1);
    B(0, 0) = t;
    es.compute(B, Eigen::EigenvaluesOnly);
    const double l = es.eigenvalues()(0);
    const double khat = l > 0.0 ? 0.0 : l - inst.reg->conjugate(-l);
    if (khat - t > best.value) best = {t, khat - t};
  }
  return best;
}

double dense_dual_value(const ProblemInstance& inst, double lambda) {
  inst.validate();
  check_size(inst, "dense_dual_value");
  Matrix A = inst.H.to_dense();
  A.diagonal().array() -= lambda;
  Eigen::LDLT<Matrix> ldlt(A);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw std::invalid_argument("dense_dual_value: lambda must lie below lambda_min");
  const Vector y = ldlt.solve(inst.g);
  return -inst.g.dot(y) - inst.reg->conjugate(-lambda);
}

}  // namespace rhors
