#include "rhors/problem.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rhors {

void ProblemInstance::validate() const {
  if (!reg) throw std::invalid_argument("problem instance has no regularizer");
  if (g.size() != H.dim()) throw std::invalid_argument("gradient dimension mismatch");
  if (!g.allFinite()) throw std::invalid_argument("gradient has non-finite entries");
  if (!(g.norm() > 0.0)) throw std::invalid_argument("gradient must be nonzero");
}

double primal_objective(const ProblemInstance& inst, const Vector& x) {
  const Vector Hx = inst.H.apply(x);
  return 2.0 * inst.g.dot(x) + x.dot(Hx) + inst.reg->rho(x.squaredNorm());
}

void project_to_domain(const Regularizer& reg, Vector& x, double rel_tol) {
  const double bound = reg.dom_sq_norm_bound();
  if (!std::isfinite(bound)) return;
  double nsq = x.squaredNorm();
  if (!(nsq > bound) || nsq > bound * (1.0 + rel_tol)) return;
  x *= std::sqrt(bound / nsq);
  // the rescale itself rounds; nudge until the recomputed norm is inside
  for (int i = 0; i < 10 && x.squaredNorm() > bound; ++i)
    x *= 1.0 - 2.0 * std::numeric_limits<double>::epsilon();
}

}  // namespace rhors
