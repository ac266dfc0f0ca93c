#include "rhors/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

namespace rhors {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct SolveCell {
  bool ok = false;
  double f = kNan;
  double cpu = 0.0;
  int iterations = 0;
};

ProblemInstance make_instance(const std::string& case_name, Index n, std::uint64_t seed,
                              const GenOptions& gen) {
  if (case_name == "easy") return gen_easy(n, seed, gen);
  if (case_name == "hard1") return gen_hard1(n, seed, gen);
  if (case_name == "hard2") return gen_hard2(n, seed, gen);
  throw std::invalid_argument("run_bench: unknown case \"" + case_name + "\"");
}

std::string fmt(const char* spec, double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  if (cfg.sizes.empty() || cfg.cases.empty() || cfg.methods.empty())
    throw std::invalid_argument("run_bench: sizes, cases, and methods must be nonempty");
  if (cfg.reps < 1) throw std::invalid_argument("run_bench: reps < 1");
  for (const auto& m : cfg.methods)
    if (m != "rw" && m != "newton")
      throw std::invalid_argument("run_bench: unknown method \"" + m + "\"");

  SolverConfig rw_cfg = cfg.rw;
  NewtonConfig newton_cfg = cfg.newton;
  rw_cfg.keep_x = false;  // objectives only; drop the vectors at scale
  newton_cfg.keep_x = false;

  struct Task {
    int cell = 0;
    std::string case_name;
    Index n = 0;
    std::uint64_t seed = 0;
  };
  std::vector<Task> tasks;
  int cell = 0;
  for (const auto& case_name : cfg.cases) {
    for (Index n : cfg.sizes) {
      for (int rep = 0; rep < cfg.reps; ++rep)
        tasks.push_back({cell, case_name, n,
                         cfg.seed_base + 1000003ULL * static_cast<std::uint64_t>(cell) +
                             static_cast<std::uint64_t>(rep)});
      ++cell;
    }
  }

  const int n_methods = static_cast<int>(cfg.methods.size());
  std::vector<SolveCell> grid(tasks.size() * static_cast<std::size_t>(n_methods));

  const auto run_task = [&](std::size_t ti) {
    ProblemInstance inst;
    try {
      inst = make_instance(tasks[ti].case_name, tasks[ti].n, tasks[ti].seed, cfg.gen);
    } catch (const std::exception&) {
      return;  // every method records a failure for this instance
    }
    for (int mi = 0; mi < n_methods; ++mi) {
      SolveCell& out = grid[ti * n_methods + mi];
      try {
        const SolveResult r = cfg.methods[mi] == "rw" ? rw_solve(inst, rw_cfg)
                                                      : newton_solve(inst, newton_cfg);
        out.ok = r.converged() && std::isfinite(r.primal_obj);
        out.f = r.primal_obj;
        out.cpu = r.cpu_seconds;
        out.iterations = r.iterations;
      } catch (const std::exception&) {
        out.ok = false;
      }
    }
  };

  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    for (std::size_t ti = 0; ti < tasks.size(); ++ti) run_task(ti);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int workers = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(jobs), tasks.size()));
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t ti = next.fetch_add(1); ti < tasks.size(); ti = next.fetch_add(1))
          run_task(ti);
      });
    for (auto& th : pool) th.join();
  }

  std::vector<BenchRow> rows;
  cell = 0;
  for (const auto& case_name : cfg.cases) {
    for (Index n : cfg.sizes) {
      const std::size_t first =
          static_cast<std::size_t>(cell) * static_cast<std::size_t>(cfg.reps);
      for (int mi = 0; mi < n_methods; ++mi) {
        BenchRow row;
        row.case_label = case_name;
        row.n = n;
        row.method = cfg.methods[mi];
        row.reps = cfg.reps;
        double cpu_sum = 0.0, iter_sum = 0.0, ratio_sum = 0.0;
        int ok_count = 0;
        for (int rep = 0; rep < cfg.reps; ++rep) {
          const std::size_t ti = first + static_cast<std::size_t>(rep);
          const SolveCell& mine = grid[ti * n_methods + mi];
          if (!mine.ok) {
            ++row.failures;
            continue;
          }
          double f_min = mine.f;
          for (int mj = 0; mj < n_methods; ++mj) {
            const SolveCell& other = grid[ti * n_methods + mj];
            if (other.ok && other.f < f_min) f_min = other.f;
          }
          cpu_sum += mine.cpu;
          iter_sum += mine.iterations;
          ratio_sum += (mine.f - f_min) / std::max(std::abs(f_min), 1e-300);
          ++ok_count;
        }
        if (ok_count > 0) {
          row.cpu_mean = cpu_sum / ok_count;
          row.iter_mean = iter_sum / ok_count;
          row.ratio_mean = ratio_sum / ok_count;
        } else {
          row.cpu_mean = row.iter_mean = row.ratio_mean = kNan;
        }
        rows.push_back(std::move(row));
      }
      ++cell;
    }
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "case,n,method,cpu_mean,iter_mean,ratio_mean,failures\n";
  for (const auto& r : rows) {
    os << r.case_label << ',' << r.n << ',' << r.method << ',' << fmt("%.6g", r.cpu_mean) << ','
       << fmt("%.6g", r.iter_mean) << ',' << fmt("%.3e", r.ratio_mean) << ',' << r.failures
       << '\n';
  }
  return os.str();
}

std::string bench_table(const std::vector<BenchRow>& rows) {
  // group rows that share (case, n); emitted order is already cell-major
  std::ostringstream os;
  char buf[128];
  bool header_done = false;
  for (std::size_t i = 0; i < rows.size();) {
    std::size_t j = i;
    while (j < rows.size() && rows[j].case_label == rows[i].case_label && rows[j].n == rows[i].n)
      ++j;
    if (!header_done) {
      std::snprintf(buf, sizeof(buf), "%-8s %8s", "case", "n");
      os << buf;
      for (std::size_t k = i; k < j; ++k) {
        std::snprintf(buf, sizeof(buf), " %16s %10s %5s",
                      (rows[k].method + " cpu(iter)").c_str(), "ratio", "fail");
        os << buf;
      }
      os << '\n';
      header_done = true;
    }
    std::snprintf(buf, sizeof(buf), "%-8s %8lld", rows[i].case_label.c_str(),
                  static_cast<long long>(rows[i].n));
    os << buf;
    for (std::size_t k = i; k < j; ++k) {
      const std::string cpu_iter = fmt("%.3f", rows[k].cpu_mean) + "(" +
                                   fmt("%4.1f", rows[k].iter_mean) + ")";
      std::snprintf(buf, sizeof(buf), " %16s %10s %5d", cpu_iter.c_str(),
                    fmt("%.1e", rows[k].ratio_mean).c_str(), rows[k].failures);
      os << buf;
    }
    os << '\n';
    i = j;
  }
  return os.str();
}

}  // namespace rhors
