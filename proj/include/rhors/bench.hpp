#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rhors/instance_gen.hpp"
#include "rhors/newton_solver.hpp"
#include "rhors/rw_solver.hpp"

namespace rhors {

/// One aggregate row of the benchmark protocol: fixed (case, n, method)
/// cell, means over the configured rep count. ratio_i = (f_i - f_min)/|f_min|
/// against the best objective any competing method reached on instance i, so
/// the per-instance best method scores exactly 0. Failed solves are excluded
/// from the means and counted in `failures`.
struct BenchRow {
  std::string case_label;
  Index n = 0;
  std::string method;
  double cpu_mean = 0.0;
  double iter_mean = 0.0;
  double ratio_mean = 0.0;
  int failures = 0;
  int reps = 0;
};

struct BenchConfig {
  std::vector<Index> sizes;
  std::vector<std::string> cases;    // subset of {"easy", "hard1", "hard2"}
  std::vector<std::string> methods;  // subset of {"rw", "newton"}
  GenOptions gen;
  int reps = 20;
  std::uint64_t seed_base = 1;
  int jobs = 1;  // instance-level parallelism; each solve stays single-threaded
  SolverConfig rw;
  NewtonConfig newton;
};

/// Runs every (case, n) cell: instance seeds are
/// seed_base + 1000003 * cell_index + rep, so a fixed seed_base reproduces
/// every instance (and objective) bitwise. Returns one row per
/// (case, n, method) in configuration order.
std::vector<BenchRow> run_bench(const BenchConfig& cfg);

/// CSV with header case,n,method,cpu_mean,iter_mean,ratio_mean,failures.
std::string bench_csv(const std::vector<BenchRow>& rows);

/// Aligned text table: one line per (case, n) with CPU(iter) and ratio
/// columns per method.
std::string bench_table(const std::vector<BenchRow>& rows);

}  // namespace rhors
