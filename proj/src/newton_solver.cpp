#include "rhors/newton_solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "rhors/lanczos.hpp"

namespace rhors {

namespace {

void clip_to_domain(const Regularizer& reg, Vector& x) {
  const double bound = reg.dom_sq_norm_bound();
  if (!std::isfinite(bound)) return;
  const double nsq = x.squaredNorm();
  if (nsq > bound) {
    x *= std::sqrt(bound / nsq);
    project_to_domain(reg, x);  // absorb the rescale rounding
  }
}

}  // namespace

SolveResult newton_solve(const ProblemInstance& inst, const NewtonConfig& cfg) {
  const auto clock_start = std::chrono::steady_clock::now();
  inst.validate();
  if (cfg.max_iterations < 1) throw std::invalid_argument("newton_solve: max_iterations < 1");

  SolveResult out;
  out.method = "newton";

  LanczosOptions lopt;
  lopt.tol = cfg.eig_tol;
  lopt.max_matvecs = cfg.eig_max_matvecs;
  const auto eig = smallest_eigenpair(inst.H, lopt);
  const double lambda_min = eig.value;
  const Vector& v_star = eig.vector;
  const double lambda_tilde = std::min(0.0, lambda_min);
  const double norm_g = inst.g.norm();
  const bool overlaps = std::abs(v_star.dot(inst.g)) >= kRangeTestTol * norm_g;
  const double threshold = inst.reg->conjugate_derivative(-lambda_tilde);

  double lambda = lambda_tilde - 1.0;
  Vector y, z;

  const auto solve_y = [&](double lam, Vector& y_io) {
    auto info = cg_shifted(inst.H, lam, inst.g, y_io, cfg.cg_rtol, cfg.cg_max_iterations);
    return info.converged && !info.breakdown;
  };
  Vector hy;
  const auto dual_value = [&](double lam, const Vector& y_at) {
    // Quadratic-form evaluation: min_x 2g'x + x'(H-lam I)x is attained near
    // x = -y, and evaluating the quadratic at -y keeps this a valid lower
    // bound even when the shifted solve is inexact.
    inst.H.apply(y_at, hy);
    const double quad = y_at.dot(hy) - lam * y_at.squaredNorm();
    return -2.0 * inst.g.dot(y_at) + quad - inst.reg->conjugate(-lam);
  };

  if (!solve_y(lambda, y))
    throw std::runtime_error("newton_solve: initial shifted solve failed");
  double dval = dual_value(lambda, y);

  double f_best = std::numeric_limits<double>::infinity();
  Vector x_best;
  double d_best = -std::numeric_limits<double>::infinity();

  const auto consider_primal = [&](const Vector& x) {
    const double f = primal_objective(inst, x);
    if (f < f_best) {
      f_best = f;
      x_best = x;
    }
  };
  const auto rel_gap = [&]() { return std::abs(f_best - d_best) / (std::abs(f_best) + 1.0); };

  bool pinned = false;  // iterate stalled against lambda~ while still ascending
  SolveStatus status = SolveStatus::IterationLimit;

  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    // curvature solve: z = (H - lambda I)^{-2} g
    cg_shifted(inst.H, lambda, y, z, cfg.cg_rtol, cfg.cg_max_iterations);
    const double grad = -y.squaredNorm() + inst.reg->conjugate_derivative(-lambda);
    const double hess = -2.0 * y.dot(z) - inst.reg->conjugate_second_derivative(-lambda);

    if (cfg.record_trace) out.trace.push_back({lambda, dval, grad});
    d_best = std::max(d_best, dval);

    Vector x = -y;
    clip_to_domain(*inst.reg, x);
    consider_primal(x);
    if (rel_gap() <= cfg.gap_tol) {
      status = SolveStatus::Converged;
      out.iterations = iter;
      break;
    }
    if (std::abs(lambda - lambda_tilde) <= cfg.hard_exit_tol * (1.0 + std::abs(lambda_tilde)) &&
        grad >= 0.0) {
      pinned = true;
      out.iterations = iter;
      break;
    }

    double delta;
    if (hess < 0.0) {
      delta = -grad / hess;
    } else {
      // flat curvature fallback: head for the boundary or take a unit step left
      delta = grad > 0.0 ? 0.4 * (lambda_tilde - lambda) : -(1.0 + std::abs(lambda));
    }

    bool accepted = false;
    bool tried_boundary = false;
    double step = 1.0;
    Vector y_trial;
    const double boundary = lambda_tilde - 1e-14 * (1.0 + std::abs(lambda_tilde));
    while (std::abs(step * delta) >= cfg.min_step) {
      double trial = lambda + step * delta;
      if (trial >= boundary) {
        // A trial past lambda~ loses positive definiteness.  Project the first
        // such trial onto the boundary (a boundary optimum is reachable in one
        // step this way); thereafter fall back to plain halving.
        if (tried_boundary || boundary <= lambda) {
          step *= 0.5;
          continue;
        }
        tried_boundary = true;
        trial = boundary;
      }
      y_trial = y;  // warm start from the accepted iterate
      if (!solve_y(trial, y_trial)) {
        step *= 0.5;
        continue;
      }
      const double dtrial = dual_value(trial, y_trial);
      if (dtrial >= dval + cfg.armijo_slope * (trial - lambda) * grad) {
        lambda = trial;
        y = std::move(y_trial);
        dval = dtrial;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    out.iterations = iter + 1;
    if (!accepted) {
      pinned = std::abs(lambda - lambda_tilde) <=
                   cfg.hard_exit_tol * (1.0 + std::abs(lambda_tilde)) &&
               grad >= 0.0;
      break;
    }
  }

  double lambda_report = lambda;
  bool corrected = false;
  if (pinned) {
    lambda_report = lambda_tilde;
    const double d_exit = dual_value(lambda_tilde, y);
    d_best = std::max(d_best, d_exit);
    const double root_th = std::sqrt(std::max(0.0, threshold));
    const bool short_enough =
        (y.norm() - root_th) / (root_th + 1.0) <= cfg.hard_exit_tol;
    if (lambda_min <= 0.0 && short_enough) {
      // boundary optimum needs an eigenvector correction onto ||x||^2 = threshold
      Vector x = -y;
      const double vx = v_star.dot(x);
      const double alpha = -vx + std::sqrt(std::max(0.0, vx * vx + threshold - x.squaredNorm()));
      x += alpha * v_star;
      project_to_domain(*inst.reg, x);
      consider_primal(x);
      corrected = true;
    } else {
      Vector x = -y;
      clip_to_domain(*inst.reg, x);
      consider_primal(x);
    }
    if (rel_gap() <= cfg.gap_tol) status = SolveStatus::Converged;
  }

  if (!std::isfinite(f_best))
    throw std::runtime_error("newton_solve: no finite primal value produced");

  // The reported x should satisfy the stationarity system at the *reported*
  // multiplier well below the line-search CG tolerance, and the best-f iterate
  // may even predate the final lambda. One tighter warm-started solve fixes
  // both whenever the shifted system is safely positive definite. When the
  // optimum sits on the domain boundary (conjugate kink), the gap test can
  // stop with ||y(lambda)||^2 still measurably past the bound, and clipping
  // would transfer that mismatch into the stationarity residual; a couple of
  // Newton steps on ||y(lambda)||^2 = bound remove it first.
  const double interior_margin = 1e-10 * (1.0 + std::abs(lambda_tilde));
  if (lambda_report < lambda_tilde - interior_margin) {
    const double refine_rtol = std::min(cfg.cg_rtol, 1e-8);
    const double dom_bound = inst.reg->dom_sq_norm_bound();
    double lam_ref = lambda_report;
    Vector y_ref = -x_best;
    bool solved = false;
    bool on_boundary = false;
    for (int pi = 0; pi < 4; ++pi) {
      const auto info =
          cg_shifted(inst.H, lam_ref, inst.g, y_ref, refine_rtol, cfg.cg_max_iterations);
      solved = info.converged && !info.breakdown;
      if (!solved) break;
      const double over = y_ref.squaredNorm() - dom_bound;
      if (!std::isfinite(dom_bound) || over <= 2e-7 * dom_bound) break;
      on_boundary = true;  // the stationary ray pierces the ball: active constraint
      if (pi == 3) break;  // out of resolves; keep the (lambda, y) pair consistent
      cg_shifted(inst.H, lam_ref, y_ref, z, refine_rtol, cfg.cg_max_iterations);
      const double dover = 2.0 * y_ref.dot(z);  // d||y||^2/dlambda > 0 for lambda < lambda~
      if (!(dover > 0.0)) break;
      const double next = lam_ref - over / dover;
      if (!(next < lambda_tilde - interior_margin)) break;
      lam_ref = next;
    }
    if (solved) {
      Vector x_c = -y_ref;
      if (on_boundary) {
        // An active-constraint optimum must sit exactly on the boundary: the
        // secular steps may land the ray a hair inside, where the objective
        // loses linearly at rate |lambda|.
        x_c *= std::sqrt(dom_bound / x_c.squaredNorm());
        project_to_domain(*inst.reg, x_c);
      } else {
        clip_to_domain(*inst.reg, x_c);
      }
      const double f_c = primal_objective(inst, x_c);
      if (f_c <= f_best + 1e-11 * (1.0 + std::abs(f_best))) {
        f_best = f_c;
        x_best = std::move(x_c);
        lambda_report = lam_ref;
      }
    }
  }

  if (corrected) {
    out.label = CaseLabel::Hard2;
  } else if (lambda_min > 0.0) {
    out.label = x_best.squaredNorm() <= threshold * (1.0 + 1e-8)
                    ? CaseLabel::PositiveDefiniteInterior
                    : CaseLabel::Hard1;
  } else {
    out.label = overlaps ? CaseLabel::Easy : CaseLabel::Hard1;
  }

  out.status = status;
  out.lambda_star = lambda_report;
  out.primal_obj = f_best;
  out.dual_obj = d_best;
  out.rel_gap = rel_gap();
  out.t_star = lambda_report - inst.g.dot(x_best);
  if (cfg.keep_x) {
    out.has_x = true;
    out.x_star = std::move(x_best);
  }
  out.cpu_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
  return out;
}

}  // namespace rhors
