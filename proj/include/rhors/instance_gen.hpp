#pragma once

#include <cstdint>
#include <random>

#include "rhors/problem.hpp"

namespace rhors {

/// Deterministic random stream built on std::mt19937_64, whose output
/// sequence is pinned by the C++ standard, so instances reproduce across
/// platforms. Uniforms take the top 53 bits; normals use the Marsaglia polar
/// transform (sqrt/log only, no trig).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1]; safe as a log() argument.
  double uniform_open() { return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53; }

  /// Standard normal.
  double normal();

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Symmetric random sparsity: every lower-triangle position (diagonal
/// included) is present independently with probability `density`, present
/// values i.i.d. standard normal. Expected full-matrix nonzero count is
/// density * n^2. Runs in O(nnz) via geometric gap skipping.
SymmetricSparseMatrix random_sparse_symmetric(Index n, double density, RandomStream& rs);

struct GenOptions {
  double density = 0.005;
  RegKind kind = RegKind::Power;
  double p = 3.0;
  double M = 0.0;   // <= 0 means auto: 1.2 * norm_estimate(H)
  double s = 10.0;  // squared-norm bound for tr/ptr kinds
  int max_h_draws = 50;       // hard recipes: redraw budget for lambda_min < 0
  double eig_tol = 1e-8;      // generation-time eigensolve tolerance
  int eig_max_matvecs = 5000;
};

/// H random sparse symmetric, g standard normal (redrawn if it comes out
/// zero). Deterministic under seed.
ProblemInstance gen_easy(Index n, std::uint64_t seed, const GenOptions& opts = {});

/// Degenerate recipes: redraw H until lambda_min(H) < 0 (error past
/// max_h_draws), then v = (H - lambda_min I)u for Gaussian u rescaled to
/// ||v|| = c * sqrt((rho^+)'_+(-lambda_min)), and g = (H - lambda_min I)v.
/// gen_hard1 uses c = 1.1 (pseudo-solution past the threshold), gen_hard2
/// uses c = 0.9 (explicit boundary solution).
ProblemInstance gen_hard1(Index n, std::uint64_t seed, const GenOptions& opts = {});
ProblemInstance gen_hard2(Index n, std::uint64_t seed, const GenOptions& opts = {});

}  // namespace rhors
