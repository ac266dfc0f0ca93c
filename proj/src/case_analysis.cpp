#include "rhors/case_analysis.hpp"

#include <cmath>

#include "rhors/lanczos.hpp"

namespace rhors {

const char* to_string(CaseLabel label) {
  switch (label) {
    case CaseLabel::Easy:
      return "easy";
    case CaseLabel::Hard1:
      return "hard1";
    case CaseLabel::Hard2:
      return "hard2";
    case CaseLabel::PositiveDefiniteInterior:
      return "pd_interior";
  }
  return "?";
}

Vector hard_case2_solution(const Vector& pseudo_solution, const Vector& v_star,
                           double threshold) {
  const double alpha_sq = std::max(0.0, threshold - pseudo_solution.squaredNorm());
  return -pseudo_solution + std::sqrt(alpha_sq) * v_star;
}

CaseReport classify(const ProblemInstance& inst, const ClassifyOptions& opts) {
  inst.validate();
  CaseReport rep;

  LanczosOptions lopts;
  lopts.tol = opts.eig_tol;
  lopts.max_matvecs = opts.eig_max_matvecs;
  auto eig = smallest_eigenpair(inst.H, lopts);
  rep.lambda_min = eig.value;
  rep.v_star = std::move(eig.vector);
  rep.eig_matvecs = eig.matvecs;
  if (!eig.converged) rep.diagnostic = "eigensolve did not reach tolerance; ";
  rep.lambda_tilde = std::min(0.0, rep.lambda_min);
  rep.threshold = inst.reg->conjugate_derivative(-rep.lambda_tilde);

  if (rep.lambda_min > 0.0) {
    // nonsingular at the boundary shift 0: one positive definite solve decides
    Vector y;
    auto info = cg_shifted(inst.H, 0.0, inst.g, y, opts.singular_rtol,
                           opts.linear_max_iterations);
    rep.has_pseudo = true;
    rep.pseudo_solution = std::move(y);
    rep.pseudo_norm_sq = rep.pseudo_solution.squaredNorm();
    rep.pseudo_g_inner = inst.g.dot(rep.pseudo_solution);
    if (!info.converged) rep.diagnostic += "interior solve stalled; ";
    if (rep.pseudo_norm_sq <= rep.threshold) {
      rep.label = CaseLabel::PositiveDefiniteInterior;
      rep.has_explicit = true;
      rep.explicit_solution = -rep.pseudo_solution;
    } else {
      rep.label = CaseLabel::Hard1;
    }
    return rep;
  }

  if (std::abs(rep.v_star.dot(inst.g)) >= opts.range_test_tol * inst.g.norm()) {
    rep.label = CaseLabel::Easy;
    return rep;
  }

  Vector y;
  auto info = minres_shifted(inst.H, rep.lambda_tilde, inst.g, y, opts.singular_rtol,
                             opts.linear_max_iterations, &rep.v_star);
  if (info.relative_residual >= opts.singular_accept) {
    rep.label = CaseLabel::Easy;
    rep.diagnostic += "singular pseudo-solve inconsistent (relres " +
                      std::to_string(info.relative_residual) + "); treating as easy";
    return rep;
  }
  rep.has_pseudo = true;
  rep.pseudo_solution = std::move(y);
  rep.pseudo_norm_sq = rep.pseudo_solution.squaredNorm();
  rep.pseudo_g_inner = inst.g.dot(rep.pseudo_solution);

  if (rep.pseudo_norm_sq > rep.threshold) {
    rep.label = CaseLabel::Hard1;
  } else {
    rep.label = CaseLabel::Hard2;
    rep.has_explicit = true;
    rep.explicit_solution =
        hard_case2_solution(rep.pseudo_solution, rep.v_star, rep.threshold);
  }
  return rep;
}

}  // namespace rhors
