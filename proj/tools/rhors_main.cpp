// Command-line front end: generate instances, solve a saved instance with a
// chosen method, or run the benchmark protocol over (case, n) cells.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rhors/bench.hpp"
#include "rhors/case_analysis.hpp"
#include "rhors/dense_oracle.hpp"
#include "rhors/instance_gen.hpp"
#include "rhors/instances_io.hpp"
#include "rhors/newton_solver.hpp"
#include "rhors/rw_solver.hpp"

namespace {

using namespace rhors;

struct RegFlags {
  std::string reg = "p";
  double p = 3.0;
  std::string M = "auto";
  double s = 10.0;
};

void add_reg_flags(CLI::App* cmd, RegFlags& rf) {
  cmd->add_option("--reg", rf.reg, "regularizer kind: p | tr | ptr")
      ->check(CLI::IsMember({"p", "tr", "ptr"}));
  cmd->add_option("--p", rf.p, "power exponent (> 2) for p/ptr kinds");
  cmd->add_option("--M", rf.M, "power coefficient: auto (= 1.2 * ||H||) or a value > 0");
  cmd->add_option("--s", rf.s, "squared-norm bound (> 0) for tr/ptr kinds");
}

// Applies the flag set to GenOptions, rejecting combinations that the chosen
// kind cannot use.
void fill_gen_options(const CLI::App* cmd, const RegFlags& rf, GenOptions& gen) {
  if (rf.reg == "p")
    gen.kind = RegKind::Power;
  else if (rf.reg == "tr")
    gen.kind = RegKind::TrustRegion;
  else
    gen.kind = RegKind::PowerTrustRegion;

  if (gen.kind == RegKind::Power && cmd->count("--s") > 0)
    throw CLI::ValidationError("--s", "not meaningful with --reg p");
  if (gen.kind == RegKind::TrustRegion) {
    if (cmd->count("--p") > 0) throw CLI::ValidationError("--p", "not meaningful with --reg tr");
    if (cmd->count("--M") > 0) throw CLI::ValidationError("--M", "not meaningful with --reg tr");
  }
  gen.p = rf.p;
  gen.s = rf.s;
  if (rf.M == "auto") {
    gen.M = 0.0;
  } else {
    try {
      std::size_t pos = 0;
      gen.M = std::stod(rf.M, &pos);
      if (pos != rf.M.size()) throw std::invalid_argument(rf.M);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--M", "expected 'auto' or a positive number");
    }
    if (gen.M <= 0.0) throw CLI::ValidationError("--M", "must be positive");
  }
}

nlohmann::json oracle_json(const OracleResult& r) {
  nlohmann::json j;
  j["case"] = to_string(r.label);
  j["method"] = "oracle";
  j["status"] = "converged";
  j["converged"] = true;
  j["lambda_star"] = r.lambda_star;
  j["t_star"] = r.t_star;
  j["primal_obj"] = r.optimal_value;
  j["lambda_min"] = r.lambda_min;
  j["threshold"] = r.threshold;
  j["iterations"] = r.bisection_iterations;
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{"Sparse rho-regularized quadratic minimization: solvers and benchmarks"};
  app.require_subcommand(1);

  // ---- gen ----
  auto* gen_cmd = app.add_subcommand("gen", "generate a random instance and save it");
  Index n = 500;
  double density = 0.005;
  std::string case_name = "easy";
  std::uint64_t seed = 1;
  std::string out_dir;
  RegFlags rf_gen;
  gen_cmd->add_option("--n", n, "dimension (>= 2)")->required();
  gen_cmd->add_option("--density", density, "expected nnz/n^2, in (0, 1]");
  gen_cmd->add_option("--case", case_name, "recipe: easy | hard1 | hard2")
      ->check(CLI::IsMember({"easy", "hard1", "hard2"}));
  add_reg_flags(gen_cmd, rf_gen);
  gen_cmd->add_option("--seed", seed, "random seed");
  gen_cmd->add_option("--out", out_dir, "output directory")->required();

  // ---- solve ----
  auto* solve_cmd = app.add_subcommand("solve", "solve a saved instance, JSON on stdout");
  std::string in_dir;
  std::string method = "rw";
  double gap_tol = -1.0;
  int max_iters = -1;
  bool with_trace = false;
  bool no_x = false;
  solve_cmd->add_option("--in", in_dir, "instance directory")->required();
  solve_cmd->add_option("--method", method, "rw | newton | oracle")
      ->check(CLI::IsMember({"rw", "newton", "oracle"}));
  solve_cmd->add_option("--gap-tol", gap_tol, "override the relative duality-gap tolerance");
  solve_cmd->add_option("--max-iters", max_iters, "override the iteration budget");
  solve_cmd->add_flag("--trace", with_trace, "include the per-iteration trace in the JSON");
  solve_cmd->add_flag("--no-x", no_x, "omit x from the JSON (prints objectives only)");

  // ---- bench ----
  auto* bench_cmd = app.add_subcommand("bench", "benchmark protocol over (case, n) cells");
  std::vector<Index> sizes{500};
  std::vector<std::string> cases{"easy", "hard1", "hard2"};
  std::vector<std::string> methods{"rw", "newton"};
  int reps = 20;
  std::uint64_t seed_base = 1;
  int jobs = 1;
  double bench_density = 0.005;
  std::string csv_path;
  RegFlags rf_bench;
  bench_cmd->add_option("--sizes", sizes, "comma-separated dimensions")->delimiter(',');
  bench_cmd->add_option("--cases", cases, "subset of easy,hard1,hard2")->delimiter(',');
  bench_cmd->add_option("--methods", methods, "subset of rw,newton")->delimiter(',');
  bench_cmd->add_option("--reps", reps, "instances per cell");
  bench_cmd->add_option("--seed-base", seed_base, "base seed (fixes every instance)");
  bench_cmd->add_option("--jobs", jobs, "parallel instances (each solve single-threaded)");
  bench_cmd->add_option("--density", bench_density, "expected nnz/n^2");
  add_reg_flags(bench_cmd, rf_bench);
  bench_cmd->add_option("--csv", csv_path, "also write rows as CSV to this file");

  CLI11_PARSE(app, argc, argv);

  if (gen_cmd->parsed()) {
    GenOptions gen;
    gen.density = density;
    fill_gen_options(gen_cmd, rf_gen, gen);
    ProblemInstance inst;
    if (case_name == "easy")
      inst = gen_easy(n, seed, gen);
    else if (case_name == "hard1")
      inst = gen_hard1(n, seed, gen);
    else
      inst = gen_hard2(n, seed, gen);
    save_instance(inst, out_dir);
    std::cout << "wrote " << out_dir << "/{H.mtx, g.txt, instance.json}  (n = " << inst.dim()
              << ", recipe = " << inst.meta.recipe << ", regularizer = "
              << inst.reg->to_json().dump() << ")\n";
    return 0;
  }

  if (solve_cmd->parsed()) {
    const ProblemInstance inst = load_instance(in_dir);
    if (method == "oracle") {
      const OracleResult r = dense_solve(inst);
      nlohmann::json j = oracle_json(r);
      if (!no_x) {
        j["x_star"] = std::vector<double>(r.x_star.data(), r.x_star.data() + r.x_star.size());
      }
      std::cout << j.dump(2) << '\n';
      return 0;
    }
    SolveResult r;
    if (method == "rw") {
      SolverConfig cfg;
      if (gap_tol > 0.0) cfg.gap_tol = gap_tol;
      if (max_iters > 0) cfg.max_iterations = max_iters;
      cfg.record_trace = with_trace;
      cfg.keep_x = !no_x;
      r = rw_solve(inst, cfg);
    } else {
      NewtonConfig cfg;
      if (gap_tol > 0.0) cfg.gap_tol = gap_tol;
      if (max_iters > 0) cfg.max_iterations = max_iters;
      cfg.record_trace = with_trace;
      cfg.keep_x = !no_x;
      r = newton_solve(inst, cfg);
    }
    std::cout << to_json(r).dump(2) << '\n';
    return r.converged() ? 0 : 2;
  }

  // bench
  BenchConfig bc;
  bc.sizes = sizes;
  bc.cases = cases;
  bc.methods = methods;
  bc.reps = reps;
  bc.seed_base = seed_base;
  bc.jobs = jobs;
  bc.gen.density = bench_density;
  fill_gen_options(bench_cmd, rf_bench, bc.gen);
  const auto rows = run_bench(bc);
  std::cout << bench_table(rows);
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot open " + csv_path);
    out << bench_csv(rows);
    std::cout << "csv written to " << csv_path << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "rhors: error: %s\n", e.what());
    return 1;
  }
}
