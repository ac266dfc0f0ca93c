#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "rhors/case_analysis.hpp"

namespace rhors {

enum class SolveStatus {
  Converged,         // relative primal-dual gap below gap_tol
  IntervalCollapsed, // bracket width below interval_tol before the gap test fired
  IterationLimit,    // stopped at max_iterations with the best pair so far
  Failed             // no usable primal point was ever produced
};
const char* to_string(SolveStatus status);

struct SolverConfig {
  double gap_tol = 1e-12;       // |f - psi| / (|f| + 1)
  double interval_tol = 1e-12;  // |b - a| / (|a| + |b|)
  int max_iterations = 100;     // dual evaluations (eigensolves)
  double eig_tol = 1e-8;
  int eig_max_matvecs = 5000;
  double linear_rtol = 1e-10;
  int linear_max_iterations = 5000;
  double norm_tol = 1e-2;  // accuracy of the operator norm estimate
  bool keep_x = true;
  bool record_trace = false;
};

struct TraceEntry {
  double t = 0.0;
  double khat = 0.0;
  double slope = 0.0;
};

struct SolveResult {
  CaseLabel label = CaseLabel::Easy;
  std::string method;
  SolveStatus status = SolveStatus::Failed;
  double t_star = 0.0;
  double lambda_star = 0.0;
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  double rel_gap = 0.0;
  int iterations = 0;
  std::vector<TraceEntry> trace;
  bool has_x = false;
  Vector x_star;
  double cpu_seconds = 0.0;

  bool converged() const {
    return status == SolveStatus::Converged || status == SolveStatus::IntervalCollapsed;
  }
};

nlohmann::json to_json(const SolveResult& result);

/// Maximize psi(t) = k(t) - t by bracketing with one eigensolve per probe:
/// classification first (explicit exits take zero iterations), then a
/// safeguarded interpolation loop on the initial interval. Throws
/// std::runtime_error if no primal point can be recovered at all.
SolveResult rw_solve(const ProblemInstance& inst, const SolverConfig& cfg = {});

/// Stationary primal point for a smooth dual evaluation: the eigenvector
/// tail rescaled to the squared norm (rho^+)'(-lambda(t)). Returns false
/// when the evaluation cannot produce one.
bool primal_recovery(const ProblemInstance& inst, const DualEvaluation& eval, Vector& x);

}  // namespace rhors
