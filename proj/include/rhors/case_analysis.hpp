#pragma once

#include <string>

#include "rhors/dual_function.hpp"

namespace rhors {

/// How an instance sits relative to the singular shift lambda~ = min{0,
/// lambda_min(H)}:
///  - Easy: g has a component in the lambda_min eigenspace (lambda_min <= 0),
///    so the multiplier lies strictly below lambda~ and the secular equation
///    is well posed.
///  - Hard1: g is orthogonal to that eigenspace but the pseudo-solution is
///    long enough that the multiplier still lies strictly below lambda~.
///  - Hard2: the pseudo-solution is short; the solution needs an explicit
///    eigenvector correction at lambda~.
///  - PositiveDefiniteInterior: H is positive definite and -H^{-1}g already
///    minimizes, with multiplier exactly zero.
enum class CaseLabel { Easy, Hard1, Hard2, PositiveDefiniteInterior };

const char* to_string(CaseLabel label);

struct ClassifyOptions {
  double eig_tol = 1e-8;
  int eig_max_matvecs = 5000;
  double range_test_tol = kRangeTestTol;
  double singular_rtol = 1e-10;     // MINRES tolerance for the pseudo-solve
  double singular_accept = 1e-8;    // residual level accepted as "consistent"
  int linear_max_iterations = 5000;
};

struct CaseReport {
  CaseLabel label = CaseLabel::Easy;
  double lambda_min = 0.0;   // lambda_min(H)
  double lambda_tilde = 0.0; // min{0, lambda_min}
  double threshold = 0.0;    // (rho^+)'_+(-lambda_tilde)
  Vector v_star;             // unit eigenvector for lambda_min

  bool has_pseudo = false;   // the fields below are set when the pseudo-system was solved
  double pseudo_norm_sq = 0.0;   // ||(H - lambda_tilde I)^+ g||^2
  double pseudo_g_inner = 0.0;   // g'(H - lambda_tilde I)^+ g
  Vector pseudo_solution;        // (H - lambda_tilde I)^+ g

  bool has_explicit = false;  // set for Hard2 and PositiveDefiniteInterior
  Vector explicit_solution;

  int eig_matvecs = 0;
  std::string diagnostic;     // non-fatal notes (e.g. pseudo-solve fallback)
};

/// Step-0 case check: one eigensolve of H plus, when g passes the range
/// test, one (deflated) solve of the singular system.
CaseReport classify(const ProblemInstance& inst, const ClassifyOptions& opts = {});

/// Explicit optimizer for the short-pseudo-solution case: -pseudo + alpha
/// v_star with alpha = sqrt(threshold - ||pseudo||^2), which brings
/// ||x||^2 exactly to the subdifferential threshold.
Vector hard_case2_solution(const Vector& pseudo_solution, const Vector& v_star, double threshold);

}  // namespace rhors
