#pragma once

#include "rhors/case_analysis.hpp"

namespace rhors {

/// Reference solution computed by the dense path: full eigendecomposition of
/// H plus a long bisection on the secular equation. Deliberately slow and
/// simple; used to validate the sparse solvers. Capped at n <= 200.
struct OracleResult {
  CaseLabel label = CaseLabel::Easy;
  double lambda_min = 0.0;
  double threshold = 0.0;      // (rho^+)'_+(-lambda~), lambda~ = min{0, lambda_min}
  double lambda_star = 0.0;    // optimal multiplier, <= lambda~
  double t_star = 0.0;         // lambda* - g'x*
  double optimal_value = 0.0;  // primal objective at x*
  Vector x_star;
  int bisection_iterations = 0;
};

OracleResult dense_solve(const ProblemInstance& inst);

/// Maximum of the concave curve psi(t) = khat(t) - t over a uniform grid,
/// with khat evaluated through dense bordered eigensolves and the conjugate
/// formula khat = lambda - rho^+(-lambda) (zero once lambda > 0).
struct GridMaxResult {
  double t = 0.0;
  double value = 0.0;
};
GridMaxResult dual_grid_max(const ProblemInstance& inst, double t_lo, double t_hi,
                            int points);

/// Dual objective -g'(H - lambda I)^{-1}g - rho^+(-lambda) through a dense
/// factorization; requires lambda strictly below lambda_min(H).
double dense_dual_value(const ProblemInstance& inst, double lambda);

}  // namespace rhors
