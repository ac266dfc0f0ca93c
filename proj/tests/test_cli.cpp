#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "rhors/bench.hpp"
#include "rhors/instances_io.hpp"
#include "rhors/iterative_solvers.hpp"
#include "rhors/rw_solver.hpp"

using namespace rhors;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(RHORS_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() / ("rhors_cli_" + tag)) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("gen writes three files, deterministically, with realized auto M") {
  TempDir a("gen_a"), b("gen_b");
  const std::string flags = "gen --n 300 --case hard2 --reg p --p 3 --seed 7 --out ";
  CHECK(run_cli(flags + a.path.string()).exit_code == 0);
  CHECK(run_cli(flags + b.path.string()).exit_code == 0);
  for (const char* name : {"H.mtx", "g.txt", "instance.json"}) {
    CAPTURE(name);
    CHECK(fs::exists(a.path / name));
    CHECK(slurp(a.path / name) == slurp(b.path / name));
  }
  // --M auto records the realized 1.2 * ||H|| in instance.json
  const auto inst = load_instance(a.path.string());
  const auto j = inst.reg->to_json();
  REQUIRE(j.at("kind") == "p");
  const double expected = 1.2 * norm_estimate(inst.H);
  CHECK(j.at("M").get<double>() == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("gen rejects flags that do not apply to the regularizer kind") {
  TempDir t("gen_bad");
  CHECK(run_cli("gen --n 50 --case easy --reg p --s 5 --out " + t.path.string()).exit_code != 0);
  CHECK(run_cli("gen --n 50 --case easy --reg tr --p 3 --out " + t.path.string()).exit_code != 0);
  CHECK(run_cli("gen --n 50 --case easy --case nosuch --out " + t.path.string()).exit_code != 0);
}

TEST_CASE("solve emits JSON; hard2 goes through the zero-iteration path") {
  TempDir t("solve_h2");
  REQUIRE(run_cli("gen --n 400 --case hard2 --reg p --p 3 --seed 11 --out " + t.path.string())
              .exit_code == 0);
  const auto r = run_cli("solve --in " + t.path.string() + " --method rw --no-x");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("iterations") == 0);
  CHECK(j.at("case") == "hard2");
  CHECK(j.at("converged") == true);
  CHECK(j.at("rel_gap").get<double>() <= 1e-9);
}

TEST_CASE("solve agreement and method guards") {
  TempDir t("solve_easy");
  REQUIRE(run_cli("gen --n 300 --case easy --reg p --p 3 --seed 3 --out " + t.path.string())
              .exit_code == 0);

  const auto rw = run_cli("solve --in " + t.path.string() + " --method rw --no-x");
  const auto nw = run_cli("solve --in " + t.path.string() + " --method newton --no-x");
  CHECK(rw.exit_code == 0);
  CHECK(nw.exit_code == 0);
  const double f_rw = nlohmann::json::parse(rw.out).at("primal_obj").get<double>();
  const double f_nw = nlohmann::json::parse(nw.out).at("primal_obj").get<double>();
  const double f_min = std::min(f_rw, f_nw);
  CHECK(std::abs(f_rw - f_nw) / std::abs(f_min) <= 1e-6);

  // budget exhaustion maps to exit code 2
  const auto tight =
      run_cli("solve --in " + t.path.string() + " --method newton --max-iters 1 --gap-tol 1e-15");
  CHECK(tight.exit_code == 2);
}

TEST_CASE("oracle method enforces its dense-size cap") {
  TempDir t("solve_big");
  REQUIRE(run_cli("gen --n 2000 --case easy --reg p --p 3 --seed 5 --out " + t.path.string())
              .exit_code == 0);
  CHECK(run_cli("solve --in " + t.path.string() + " --method oracle").exit_code == 1);

  TempDir s("solve_small");
  REQUIRE(run_cli("gen --n 60 --case easy --reg p --p 3 --seed 5 --density 0.1 --out " +
                  s.path.string())
              .exit_code == 0);
  const auto r = run_cli("solve --in " + s.path.string() + " --method oracle --no-x");
  CHECK(r.exit_code == 0);
  CHECK(nlohmann::json::parse(r.out).at("method") == "oracle");
}

TEST_CASE("bench protocol: desk-scale table") {
  BenchConfig bc;
  bc.sizes = {500};
  bc.cases = {"easy", "hard1", "hard2"};
  bc.methods = {"rw", "newton"};
  bc.reps = 20;
  bc.seed_base = 42;
  const auto rows = run_bench(bc);
  REQUIRE(rows.size() == 6);

  for (const auto& r : rows) {
    CAPTURE(r.case_label);
    CAPTURE(r.method);
    CHECK(r.reps == 20);
    CHECK(r.ratio_mean >= 0.0);
    if (r.method == "rw") {
      CHECK(r.failures == 0);
      if (r.case_label == "easy") CHECK(r.iter_mean <= 12.0);
      if (r.case_label == "hard2") {
        CHECK(r.ratio_mean <= 1e-12);
        CHECK(r.iter_mean == 0.0);
      }
    }
  }

  const std::string csv = bench_csv(rows);
  CHECK(csv.rfind("case,n,method,cpu_mean,iter_mean,ratio_mean,failures\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  const std::string table = bench_table(rows);
  CHECK(table.find("rw cpu(iter)") != std::string::npos);
  CHECK(table.find("hard2") != std::string::npos);
}

TEST_CASE("bench reps=1 equals a single solve; reruns are bitwise stable") {
  BenchConfig bc;
  bc.sizes = {150};
  bc.cases = {"easy"};
  bc.methods = {"rw"};
  bc.reps = 1;
  bc.seed_base = 9;
  const auto rows = run_bench(bc);
  REQUIRE(rows.size() == 1);

  // the single-instance cell reproduces one direct solve (cell index 0, rep 0)
  SolverConfig cfg;
  cfg.keep_x = false;
  const auto direct = rw_solve(gen_easy(150, 9, GenOptions{}), cfg);
  CHECK(rows[0].iter_mean == static_cast<double>(direct.iterations));
  CHECK(rows[0].ratio_mean == 0.0);

  const auto again = run_bench(bc);
  CHECK(again[0].iter_mean == rows[0].iter_mean);
  CHECK(again[0].ratio_mean == rows[0].ratio_mean);
}
