#pragma once

#include "rhors/iterative_solvers.hpp"
#include "rhors/problem.hpp"

namespace rhors {

/// Relative size below which g is treated as having no component along an
/// eigenvector (the range test for singular shifted systems).
inline constexpr double kRangeTestTol = 1e-8;

/// Head-component size below which an arrowhead eigenvector cannot be used
/// for primal recovery and the probe is treated as non-smooth.
inline constexpr double kHeadTol = 1e-12;

struct DualEvalOptions {
  double eig_tol = 1e-8;
  int eig_max_matvecs = 5000;
  const Vector* warm_start = nullptr;  // previous arrowhead eigenvector, length n+1
};

/// lambda(t): smallest eigenvalue of the bordered operator [[t, g'], [g, H]],
/// with its unit eigenvector split into head v0 and tail.
struct BorderedEigen {
  double lambda = 0.0;
  double v0 = 0.0;
  Vector eigvec;  // full (n+1)-vector, sign-normalized so v0 >= 0
  int matvecs = 0;
  bool converged = false;
};
BorderedEigen lambda_of_t(const ProblemInstance& inst, double t, const DualEvalOptions& opts = {});

/// One evaluation of the reduced dual k(t) = inf_{gamma >= 0} { rho(gamma-1)
/// + gamma lambda(t) } together with its supergradient information. The
/// supergradient of k at t is gamma * v0^2; at lambda(t) == 0 the gamma set
/// is an interval and both endpoints are reported. `smooth` marks probes
/// usable for interpolation and primal recovery (point gamma, |v0| above
/// kHeadTol).
struct DualEvaluation {
  double t = 0.0;
  double lambda = 0.0;
  double v0 = 0.0;
  Vector eigvec;
  GammaSet gamma;
  double khat = 0.0;
  double supergrad_lo = 0.0, supergrad_hi = 0.0;
  double slope_lo = 0.0, slope_hi = 0.0;  // of k(t) - t
  bool smooth = false;
  int matvecs = 0;

  double psi() const { return khat - t; }  // the dual objective k(t) - t
  double slope() const { return slope_hi; }
};
DualEvaluation evaluate_khat(const ProblemInstance& inst, double t,
                             const DualEvalOptions& opts = {});

/// t-bar: the value of lambda + g'(H - lambda I)^{-1} g as lambda approaches
/// lambda_min(H) from below. Finite exactly when g has no component in the
/// lambda_min eigenspace; beyond it lambda(t) stays pinned at lambda_min(H).
struct TbarResult {
  bool finite = false;
  double tbar = std::numeric_limits<double>::infinity();
  double pseudo_g_inner = 0.0;  // g'(H - lambda_min I)^+ g when finite
  SolveInfo solve_info;
};
TbarResult compute_tbar(const ProblemInstance& inst, double lambda_min, const Vector& v_star,
                        double rtol = 1e-10, int max_iterations = 5000);

/// residual(lambda) = ||(H - lambda I)^{-1} g||^2 - (rho^+)'(-lambda) for
/// lambda strictly below min{0, lambda_min(H)}; strictly increasing there,
/// with the optimal multiplier as its root. `y` is the linear solve result
/// (warm-startable through x0).
struct SecularResult {
  double residual = 0.0;
  double norm_y_sq = 0.0;
  Vector y;
  SolveInfo info;
};
SecularResult secular_residual(const ProblemInstance& inst, double lambda, double rtol = 1e-10,
                               int max_iterations = 5000, const Vector* warm = nullptr);

/// Search interval [lower, upper] guaranteed to contain a maximizer of
/// k(t) - t: lower = lambda_min - kappa, upper = min(tbar, lambda_min +
/// tau ||g||).
struct IntervalBounds {
  double lower = 0.0;
  double upper = 0.0;
  double tau = 0.0;
  double kappa = 0.0;
};
IntervalBounds initial_interval(const ProblemInstance& inst, double lambda_min, double norm_g,
                                double norm_H, double tbar);

}  // namespace rhors
