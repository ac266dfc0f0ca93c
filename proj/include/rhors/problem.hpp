#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "rhors/regularizer.hpp"
#include "rhors/sparse_matrix.hpp"

namespace rhors {

/// Provenance of a generated instance; empty/zero for hand-built ones.
struct InstanceMeta {
  std::uint64_t seed = 0;
  std::string recipe;  // "easy", "hard1", "hard2", or "" when hand-built
  double density = 0.0;
};

/// One problem datum: minimize 2 g'x + x'Hx + rho(||x||^2) over x.
struct ProblemInstance {
  SymmetricSparseMatrix H;
  Vector g;
  std::shared_ptr<const Regularizer> reg;
  InstanceMeta meta;

  Index dim() const { return H.dim(); }

  /// Throws std::invalid_argument when the pieces are inconsistent
  /// (dimension mismatch, zero or non-finite g, missing regularizer).
  void validate() const;
};

/// 2 g'x + x'Hx + rho(||x||^2); +infinity outside the regularizer's domain.
double primal_objective(const ProblemInstance& inst, const Vector& x);

/// Radially rescale x onto the regularizer's squared-norm domain bound when
/// rounding pushed it marginally (within rel_tol) outside; larger violations
/// are left alone so real errors stay visible.
void project_to_domain(const Regularizer& reg, Vector& x, double rel_tol = 1e-6);

}  // namespace rhors
