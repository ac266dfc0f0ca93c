#include "rhors/dual_function.hpp"

#include <cmath>

#include "rhors/lanczos.hpp"

namespace rhors {

BorderedEigen lambda_of_t(const ProblemInstance& inst, double t, const DualEvalOptions& opts) {
  ArrowheadOperator B(t, inst.g, inst.H);
  LanczosOptions lopts;
  lopts.tol = opts.eig_tol;
  lopts.max_matvecs = opts.eig_max_matvecs;

  // A warm start can be numerically an exact eigenvector of a *different*
  // eigenvalue (when the bottom eigenvector turns discontinuously, e.g. past
  // t-bar), which makes the iteration converge there with a genuinely small
  // residual. Blending in a fixed full-support component guarantees every
  // eigenvector keeps a recoverable overlap.
  Vector start;
  if (opts.warm_start != nullptr && opts.warm_start->size() == B.dim()) {
    start = *opts.warm_start;
    Vector pert(B.dim());
    detail::pseudo_random_fill(pert, 0x9e3779b97f4a7c15ULL);
    start += (1e-6 * start.norm() / pert.norm()) * pert;
    lopts.start = &start;
  }
  auto r = smallest_eigenpair(B, lopts);

  BorderedEigen out;
  out.lambda = r.value;
  out.matvecs = r.matvecs;
  out.converged = r.converged;
  if (r.vector[0] < 0.0) r.vector = -r.vector;
  out.eigvec = std::move(r.vector);
  out.v0 = out.eigvec[0];
  return out;
}

DualEvaluation evaluate_khat(const ProblemInstance& inst, double t, const DualEvalOptions& opts) {
  auto eig = lambda_of_t(inst, t, opts);

  DualEvaluation e;
  e.t = t;
  e.lambda = eig.lambda;
  e.v0 = eig.v0;
  e.eigvec = std::move(eig.eigvec);
  e.matvecs = eig.matvecs;
  e.gamma = inst.reg->gamma_minimizer(e.lambda);

  if (e.gamma.is_point()) {
    e.khat = inst.reg->rho(e.gamma.lo - 1.0) + e.gamma.lo * e.lambda;
  } else {
    // flat case: every gamma in the interval attains rho == 0, lambda == 0
    e.khat = 0.0;
  }
  const double v0sq = e.v0 * e.v0;
  e.supergrad_lo = e.gamma.lo * v0sq;
  e.supergrad_hi = e.gamma.hi * v0sq;
  e.slope_lo = e.supergrad_lo - 1.0;
  e.slope_hi = e.supergrad_hi - 1.0;
  e.smooth = e.gamma.is_point() && std::abs(e.v0) >= kHeadTol;
  return e;
}

TbarResult compute_tbar(const ProblemInstance& inst, double lambda_min, const Vector& v_star,
                        double rtol, int max_iterations) {
  TbarResult out;
  if (std::abs(v_star.dot(inst.g)) >= kRangeTestTol * inst.g.norm()) return out;  // infinite

  Vector y;
  out.solve_info =
      minres_shifted(inst.H, lambda_min, inst.g, y, rtol, max_iterations, &v_star);
  if (!out.solve_info.converged && out.solve_info.relative_residual >= 1e-8) return out;
  out.finite = true;
  out.pseudo_g_inner = inst.g.dot(y);
  out.tbar = lambda_min + out.pseudo_g_inner;
  return out;
}

SecularResult secular_residual(const ProblemInstance& inst, double lambda, double rtol,
                               int max_iterations, const Vector* warm) {
  SecularResult out;
  if (warm != nullptr) out.y = *warm;
  out.info = cg_shifted(inst.H, lambda, inst.g, out.y, rtol, max_iterations);
  out.norm_y_sq = out.y.squaredNorm();
  out.residual = out.norm_y_sq - inst.reg->conjugate_derivative(-lambda);
  return out;
}

IntervalBounds initial_interval(const ProblemInstance& inst, double lambda_min, double norm_g,
                                double norm_H, double tbar) {
  IntervalBounds b;
  b.tau = inst.reg->tau_bound(norm_g, norm_H);
  b.kappa = inst.reg->kappa_bound(norm_g, lambda_min);
  b.lower = lambda_min - b.kappa;
  b.upper = std::min(tbar, lambda_min + b.tau * norm_g);
  return b;
}

}  // namespace rhors
