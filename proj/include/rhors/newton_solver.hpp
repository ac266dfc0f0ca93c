#pragma once

#include "rhors/rw_solver.hpp"

namespace rhors {

struct NewtonConfig {
  double gap_tol = 1e-9;      // |f - d| / (|f| + 1)
  int max_iterations = 10;    // Newton steps
  double armijo_slope = 1e-4;
  double min_step = 1e-10;    // line search floor on |s * delta|
  double cg_rtol = 1e-6;
  int cg_max_iterations = 5000;
  double eig_tol = 1e-8;
  int eig_max_matvecs = 5000;
  double hard_exit_tol = 1e-10;  // proximity to lambda~ that triggers the boundary exit
  bool keep_x = true;
  bool record_trace = false;
};

/// Safeguarded Newton iteration on the plain dual d(lambda) = -g'(H -
/// lambda I)^{-1}g - rho^+(-lambda) over lambda < lambda~ = min{0,
/// lambda_min}. Two warm-started CG solves per step give the gradient
/// -||y||^2 + (rho^+)'(-lambda) and curvature -2 y'z - (rho^+)''(-lambda).
/// Iterates pinned against lambda~ take the boundary exit: an eigenvector
/// correction when lambda_min <= 0, the plain solve otherwise. Trace entries
/// store (lambda, d(lambda), gradient) in the (t, khat, slope) fields.
SolveResult newton_solve(const ProblemInstance& inst, const NewtonConfig& cfg = {});

}  // namespace rhors
