#include "rhors/iterative_solvers.hpp"

#include <cmath>

#include "rhors/lanczos.hpp"

namespace rhors {

namespace {

// y = (H - shift I) x, projected off `deflate` when given
void apply_shifted(const SymmetricSparseMatrix& H, double shift, const Vector* deflate,
                   const Vector& x, Vector& y) {
  H.apply(x, y);
  if (shift != 0.0) y -= shift * x;
  if (deflate != nullptr) y -= deflate->dot(y) * (*deflate);
}

}  // namespace

SolveInfo cg_shifted(const SymmetricSparseMatrix& H, double shift, const Vector& b, Vector& x,
                     double rtol, int max_iterations) {
  SolveInfo info;
  const Index n = H.dim();
  const double bnorm = b.norm();
  if (x.size() != n) x = Vector::Zero(n);
  if (bnorm == 0.0) {
    x.setZero();
    info.converged = true;
    return info;
  }

  Vector r(n), p(n), Ap(n);
  apply_shifted(H, shift, nullptr, x, Ap);
  r = b - Ap;

  // outer rounds guard against drift between the recurrence residual and the
  // true residual, so a convergent return always satisfies the contract
  for (int round = 0; round < 3 && !info.breakdown; ++round) {
    double rr = r.squaredNorm();
    p = r;
    while (info.iterations < max_iterations) {
      if (std::sqrt(rr) <= rtol * bnorm) break;
      apply_shifted(H, shift, nullptr, p, Ap);
      const double pAp = p.dot(Ap);
      if (!(pAp > 0.0)) {
        info.breakdown = true;
        break;
      }
      const double a = rr / pAp;
      x += a * p;
      r -= a * Ap;
      const double rr_new = r.squaredNorm();
      p = r + (rr_new / rr) * p;
      rr = rr_new;
      ++info.iterations;
    }
    apply_shifted(H, shift, nullptr, x, Ap);
    r = b - Ap;
    info.relative_residual = r.norm() / bnorm;
    if (info.relative_residual <= rtol || info.iterations >= max_iterations) break;
  }
  info.converged = !info.breakdown && info.relative_residual <= rtol;
  return info;
}

SolveInfo minres_shifted(const SymmetricSparseMatrix& H, double shift, const Vector& b, Vector& x,
                         double rtol, int max_iterations, const Vector* deflate) {
  SolveInfo info;
  const Index n = H.dim();
  if (x.size() != n) x = Vector::Zero(n);

  Vector rhs = b;
  if (deflate != nullptr) rhs -= deflate->dot(rhs) * (*deflate);
  const double bnorm = rhs.norm();
  if (bnorm == 0.0) {
    x.setZero();
    info.converged = true;
    return info;
  }

  Vector v_old = Vector::Zero(n), v = Vector::Zero(n), v_new(n), tmp(n);
  apply_shifted(H, shift, deflate, x, tmp);
  v_new = rhs - tmp;
  double res_norm = v_new.norm();
  double beta_new = res_norm;
  const double beta_one = beta_new;
  double c = 1.0, c_old = 1.0, s = 0.0, s_old = 0.0, eta = 1.0;
  Vector p_oold = Vector::Zero(n), p_old = Vector::Zero(n), p = Vector::Zero(n);

  while (info.iterations < max_iterations && res_norm > rtol * bnorm && beta_new > 0.0) {
    const double beta = beta_new;
    v_old.swap(v);
    v = v_new / beta;
    apply_shifted(H, shift, deflate, v, v_new);
    v_new -= beta * v_old;
    const double alpha = v_new.dot(v);
    v_new -= alpha * v;
    beta_new = v_new.norm();

    const double r2 = s * alpha + c * c_old * beta;
    const double r3 = s_old * beta;
    const double r1_hat = c * alpha - c_old * s * beta;
    const double r1 = std::sqrt(r1_hat * r1_hat + beta_new * beta_new);
    if (r1 == 0.0) break;
    c_old = c;
    s_old = s;
    c = r1_hat / r1;
    s = beta_new / r1;

    p_oold.swap(p_old);
    p_old.swap(p);
    p = (v - r2 * p_old - r3 * p_oold) / r1;
    x += (beta_one * c * eta) * p;
    res_norm *= std::abs(s);
    eta = -s * eta;
    ++info.iterations;
  }

  apply_shifted(H, shift, deflate, x, tmp);
  info.relative_residual = (rhs - tmp).norm() / bnorm;
  info.converged = info.relative_residual <= rtol;
  return info;
}

double norm_estimate(const SymmetricSparseMatrix& H, double tol, int max_iterations) {
  const Index n = H.dim();
  Vector x = H.row_sums();
  if (!(x.norm() > 0.0)) detail::pseudo_random_fill(x, 7);
  x.normalize();
  Vector y(n);
  double est = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    H.apply(x, y);
    const double e = y.norm();
    if (e == 0.0) return 0.0;
    if (it > 0 && std::abs(e - est) <= tol * e) return e;
    est = e;
    x = y / e;
  }
  return est;
}

}  // namespace rhors
