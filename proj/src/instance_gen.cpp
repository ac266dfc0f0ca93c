#include "rhors/instance_gen.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rhors/iterative_solvers.hpp"
#include "rhors/lanczos.hpp"

namespace rhors {

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, q;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    q = u * u + v * v;
  } while (q >= 1.0 || q == 0.0);
  const double f = std::sqrt(-2.0 * std::log(q) / q);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

SymmetricSparseMatrix random_sparse_symmetric(Index n, double density, RandomStream& rs) {
  if (n < 1) throw std::invalid_argument("random_sparse_symmetric: n < 1");
  if (!(density > 0.0) || density > 1.0)
    throw std::invalid_argument("random_sparse_symmetric: density outside (0, 1]");

  const Index total = n * (n + 1) / 2;  // lower-triangle positions
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(density * static_cast<double>(total) * 1.05) + 16);

  const double log_miss = std::log1p(-density);  // -inf at density == 1
  Index k = -1;
  Index i = 0;  // row of position k, advanced monotonically
  while (true) {
    const double skip = std::floor(std::log(rs.uniform_open()) / log_miss);
    if (!(skip >= 0.0) || skip >= static_cast<double>(total)) break;
    k += 1 + static_cast<Index>(skip);
    if (k >= total) break;
    while ((i + 1) * (i + 2) / 2 <= k) ++i;
    const Index j = k - i * (i + 1) / 2;
    entries.push_back({i, j, rs.normal()});
  }
  return SymmetricSparseMatrix::from_triplets(n, std::move(entries));
}

namespace {

Vector draw_normal_vector(Index n, RandomStream& rs) {
  Vector g(n);
  for (Index i = 0; i < n; ++i) g[i] = rs.normal();
  return g;
}

std::shared_ptr<const Regularizer> build_regularizer(const GenOptions& opts,
                                                     const SymmetricSparseMatrix& H) {
  double M = opts.M;
  if (M <= 0.0 && opts.kind != RegKind::TrustRegion) M = 1.2 * norm_estimate(H);
  switch (opts.kind) {
    case RegKind::Power:
      return std::make_shared<PRegularizer>(opts.p, M);
    case RegKind::TrustRegion:
      return std::make_shared<TrustRegionIndicator>(opts.s);
    case RegKind::PowerTrustRegion:
      return std::make_shared<PTrustRegion>(opts.p, M, opts.s);
  }
  throw std::logic_error("build_regularizer: unknown kind");
}

void check_gen_pre(Index n, const GenOptions& opts) {
  if (n < 2) throw std::invalid_argument("instance generation: n < 2");
  if (!(opts.density > 0.0) || opts.density > 1.0)
    throw std::invalid_argument("instance generation: density outside (0, 1]");
}

ProblemInstance gen_hard_core(Index n, std::uint64_t seed, const GenOptions& opts, double c,
                              const char* recipe) {
  check_gen_pre(n, opts);
  RandomStream rs(seed);

  SymmetricSparseMatrix H;
  double lambda_min = 0.0;
  bool accepted = false;
  for (int attempt = 0; attempt < opts.max_h_draws; ++attempt) {
    H = random_sparse_symmetric(n, opts.density, rs);
    LanczosOptions lopt;
    lopt.tol = opts.eig_tol;
    lopt.max_matvecs = opts.eig_max_matvecs;
    const auto eig = smallest_eigenpair(H, lopt);
    if (eig.value < 0.0) {
      lambda_min = eig.value;
      accepted = true;
      break;
    }
  }
  if (!accepted)
    throw std::runtime_error(std::string("gen_") + recipe + ": no draw with lambda_min < 0 in " +
                             std::to_string(opts.max_h_draws) + " attempts");

  ProblemInstance inst;
  inst.reg = build_regularizer(opts, H);
  const double target = c * std::sqrt(inst.reg->conjugate_derivative(-lambda_min));

  Vector v;
  double norm_g = 0.0;
  do {
    const Vector u = draw_normal_vector(n, rs);
    v = H.apply(u) - lambda_min * u;
    const double nv = v.norm();
    if (nv == 0.0) continue;  // degenerate draw, take a fresh u
    v *= target / nv;
    inst.g = H.apply(v) - lambda_min * v;
    norm_g = inst.g.norm();
  } while (norm_g == 0.0);

  inst.H = std::move(H);
  inst.meta = {seed, recipe, opts.density};
  inst.validate();
  return inst;
}

}  // namespace

ProblemInstance gen_easy(Index n, std::uint64_t seed, const GenOptions& opts) {
  check_gen_pre(n, opts);
  RandomStream rs(seed);

  ProblemInstance inst;
  inst.H = random_sparse_symmetric(n, opts.density, rs);
  do {
    inst.g = draw_normal_vector(n, rs);
  } while (inst.g.norm() == 0.0);
  inst.reg = build_regularizer(opts, inst.H);
  inst.meta = {seed, "easy", opts.density};
  inst.validate();
  return inst;
}

ProblemInstance gen_hard1(Index n, std::uint64_t seed, const GenOptions& opts) {
  return gen_hard_core(n, seed, opts, 1.1, "hard1");
}

ProblemInstance gen_hard2(Index n, std::uint64_t seed, const GenOptions& opts) {
  return gen_hard_core(n, seed, opts, 0.9, "hard2");
}

}  // namespace rhors
