#pragma once

#include "rhors/sparse_matrix.hpp"

namespace rhors {

struct SolveInfo {
  int iterations = 0;
  double relative_residual = 0.0;  // ||b - (H - shift I) x|| / ||b||, recomputed at exit
  bool converged = false;
  bool breakdown = false;  // CG only: indefiniteness detected
};

/// Conjugate gradients on (H - shift I) x = b. Requires the shifted matrix to
/// be positive definite; indefiniteness shows up as breakdown. `x` is the
/// warm start on entry (resized to zero if empty) and the solution on exit.
SolveInfo cg_shifted(const SymmetricSparseMatrix& H, double shift, const Vector& b, Vector& x,
                     double rtol, int max_iterations);

/// MINRES on (H - shift I) x = b for symmetric, possibly singular but
/// consistent systems. Started from x = 0 the iterates stay in the Krylov
/// space of b, so the limit is the minimum-norm solution. When `deflate` is
/// given (a unit vector spanning an approximate null space), b and every
/// operator application are projected off it.
SolveInfo minres_shifted(const SymmetricSparseMatrix& H, double shift, const Vector& b, Vector& x,
                         double rtol, int max_iterations, const Vector* deflate = nullptr);

/// Power-iteration estimate of ||H||_2; `tol` is the relative-change stopping
/// threshold. Mild underestimates are possible, as with any power method.
double norm_estimate(const SymmetricSparseMatrix& H, double tol = 1e-2, int max_iterations = 200);

}  // namespace rhors
