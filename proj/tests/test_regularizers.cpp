#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "rhors/regularizer.hpp"

using namespace rhors;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Golden-section maximizer for a concave function on [lo, hi].
double golden_max(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
  }
  return f((a + b) / 2.0);
}

// Independent evaluation of the monotone conjugate sup_{t>=0} { u t - rho(t) }.
double conjugate_oracle(const Regularizer& reg, double u) {
  auto val = [&](double t) {
    const double r = reg.rho(t);
    return r == kInf ? -kInf : u * t - r;
  };
  if (u <= 0.0) return std::max(0.0, val(0.0));
  // bracket the maximizer by doubling while the objective still grows
  double T = 1.0;
  for (int i = 0; i < 200 && val(2.0 * T) > val(T); ++i) T *= 2.0;
  const double hi = std::min(4.0 * T, reg.dom_sq_norm_bound());
  return golden_max(val, 0.0, hi);
}

// Independent gamma minimizer: golden section on the convex inner problem.
double gamma_oracle(const Regularizer& reg, double lambda) {
  auto val = [&](double g) {
    const double r = reg.rho(g - 1.0);
    return r == kInf ? -kInf : -(r + g * lambda);  // maximize the negative
  };
  double G = 2.0;
  for (int i = 0; i < 200 && val(2.0 * G) > val(G); ++i) G *= 2.0;
  const double hi = std::min(4.0 * G, reg.dom_sq_norm_bound() + 1.0);
  // locate the argmax by scanning a fine grid then polishing
  double best_g = 0.0, best = val(0.0);
  const int N = 20000;
  for (int i = 0; i <= N; ++i) {
    const double g = hi * i / N;
    const double v = val(g);
    if (v > best) {
      best = v;
      best_g = g;
    }
  }
  const double lo2 = std::max(0.0, best_g - hi / N), hi2 = std::min(hi, best_g + hi / N);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo2, b = hi2;
  for (int i = 0; i < 300 && b - a > 1e-14 * (1.0 + b); ++i) {
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    if (val(x1) < val(x2))
      a = x1;
    else
      b = x2;
  }
  return (a + b) / 2.0;
}

std::vector<std::shared_ptr<const Regularizer>> suite() {
  std::vector<std::shared_ptr<const Regularizer>> regs;
  for (double p : {2.5, 3.0, 3.5, 4.0})
    for (double M : {0.5, 1.0, 5.0}) regs.push_back(std::make_shared<PRegularizer>(p, M));
  for (double s : {1.0, 10.0}) regs.push_back(std::make_shared<TrustRegionIndicator>(s));
  for (double p : {2.5, 3.0, 3.5, 4.0})
    for (double M : {0.5, 1.0, 5.0})
      for (double s : {1.0, 10.0}) regs.push_back(std::make_shared<PTrustRegion>(p, M, s));
  return regs;
}

}  // namespace

TEST_CASE("frozen conjugate values") {
  PRegularizer p33(3.0, 3.0);
  CHECK(p33.conjugate(3.0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(p33.conjugate_derivative(3.0) == doctest::Approx(4.0).epsilon(1e-12));

  PTrustRegion ptr(3.0, 2.0, 4.0);
  CHECK(ptr.slope_breakpoint() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(ptr.conjugate(3.0) == doctest::Approx(20.0 / 3.0).epsilon(1e-12));
  CHECK(ptr.conjugate_derivative(3.0) == doctest::Approx(4.0).epsilon(1e-12));

  TrustRegionIndicator tr(10.0);
  CHECK(tr.conjugate(2.5) == doctest::Approx(25.0).epsilon(1e-14));
  CHECK(tr.conjugate(-1.0) == 0.0);
  CHECK(tr.conjugate_derivative(0.0) == 10.0);
  CHECK(tr.conjugate_derivative(-0.5) == 0.0);
}

TEST_CASE("frozen gamma minimizers") {
  PRegularizer p(3.0, 2.0);
  auto g = p.gamma_minimizer(-1.0);
  CHECK(g.is_point());
  CHECK(g.lo == doctest::Approx(2.0).epsilon(1e-13));

  PTrustRegion ptr(3.0, 2.0, 4.0);
  auto g2 = ptr.gamma_minimizer(-3.0);  // beyond the breakpoint slope 2
  CHECK(g2.is_point());
  CHECK(g2.lo == doctest::Approx(5.0).epsilon(1e-13));

  // lambda > 0 collapses to zero; lambda == 0 yields the flat interval
  CHECK(p.gamma_minimizer(0.5).is_point());
  CHECK(p.gamma_minimizer(0.5).lo == 0.0);
  auto flat = p.gamma_minimizer(0.0);
  CHECK(flat.lo == 0.0);
  CHECK(flat.hi == 1.0);
  auto flat_tr = TrustRegionIndicator(10.0).gamma_minimizer(0.0);
  CHECK(flat_tr.lo == 0.0);
  CHECK(flat_tr.hi == 11.0);
}

TEST_CASE("frozen interval bound constants") {
  PRegularizer p(3.0, 2.0);
  const double norm_g = std::sqrt(2.0);
  CHECK(p.tau_bound(norm_g, 2.0) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(p.kappa_bound(norm_g, -1.0) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-12));
  // positive definite branch
  CHECK(p.kappa_bound(1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-12));

  TrustRegionIndicator tr(4.0);
  CHECK(tr.tau_bound(5.0, 100.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(tr.kappa_bound(6.0, -1.0) == doctest::Approx(3.0).epsilon(1e-14));

  PTrustRegion ptr(3.0, 2.0, 4.0);
  CHECK(ptr.kappa_bound(6.0, -1.0) == doctest::Approx(std::max(3.0, -1.0 + 2.0)).epsilon(1e-12));
  CHECK(ptr.tau_bound(std::sqrt(2.0), 2.0) == doctest::Approx(2.0).epsilon(1e-12));  // min(sqrt 4, 6)
}

TEST_CASE("conjugate matches the variational oracle") {
  for (const auto& reg : suite()) {
    for (double u : {-2.0, -0.5, 0.0, 0.3, 1.0, 2.7, 10.0}) {
      const double val = reg->conjugate(u);
      const double ref = conjugate_oracle(*reg, u);
      CHECK(std::abs(val - ref) <= 1e-6 * (1.0 + std::abs(ref)));
      if (u <= 0.0) CHECK(val == 0.0);
    }
  }
}

TEST_CASE("conjugate derivatives match central finite differences") {
  for (const auto& reg : suite()) {
    const double uh = reg->kind() == RegKind::PowerTrustRegion
                          ? static_cast<const PTrustRegion&>(*reg).slope_breakpoint()
                          : kInf;
    for (double u : {0.05, 0.3, 1.0, 2.7, 10.0}) {
      if (std::abs(u - uh) < 1e-2 * std::max(1.0, uh)) continue;  // kink window
      const double h = 1e-6 * std::max(1.0, std::abs(u));
      if (u - h < 0.0 || (u < uh && u + h > uh)) continue;
      const double fd = (reg->conjugate(u + h) - reg->conjugate(u - h)) / (2.0 * h);
      const double d = reg->conjugate_derivative(u);
      CHECK(std::abs(d - fd) <= 1e-6 * (1.0 + std::abs(fd)));
      const double fd2 =
          (reg->conjugate_derivative(u + h) - reg->conjugate_derivative(u - h)) / (2.0 * h);
      const double d2 = reg->conjugate_second_derivative(u);
      CHECK(std::abs(d2 - fd2) <= 1e-5 * (1.0 + std::abs(fd2)));
    }
  }
}

TEST_CASE("conjugate satisfies the equality form of Fenchel-Young") {
  for (const auto& reg : suite()) {
    for (double u : {0.3, 1.0, 2.7, 10.0}) {
      const double t = reg->conjugate_derivative(u);
      const double lhs = reg->conjugate(u) + reg->rho(t);
      const double rhs = u * t;
      CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(rhs)));
    }
  }
}

TEST_CASE("gamma minimizer matches the variational oracle") {
  for (const auto& reg : suite()) {
    for (double lam : {-6.0, -2.0, -0.8, -0.1, 0.4, 1.5}) {
      const auto set = reg->gamma_minimizer(lam);
      if (set.is_point()) {
        const double ref = gamma_oracle(*reg, lam);
        CHECK(std::abs(set.lo - ref) <= 1e-6 * (1.0 + std::abs(ref)));
      } else {
        // every point of the interval attains the same (minimal) value
        auto val = [&](double g) { return reg->rho(g - 1.0) + g * lam; };
        const double v0 = val(set.lo), v1 = val(set.hi), vm = val((set.lo + set.hi) / 2.0);
        CHECK(std::abs(v0 - v1) <= 1e-12);
        CHECK(std::abs(v0 - vm) <= 1e-12);
        CHECK(v0 <= val(set.hi + 1e-3) + 1e-12);
      }
    }
  }
}

TEST_CASE("tau and kappa upper-bound their defining suprema") {
  struct Probe {
    double norm_g, norm_H, lambda_min;
  };
  const std::vector<Probe> probes = {{1.0, 1.0, -1.0}, {3.0, 10.0, -0.2}, {0.2, 4.0, 2.0}};
  for (const auto& reg : suite()) {
    for (const auto& pr : probes) {
      const double tau = reg->tau_bound(pr.norm_g, pr.norm_H);
      // scan the definition of tau
      double tau_true = 0.0;
      for (int i = 0; i <= 40000; ++i) {
        const double a = 1.2 * tau * i / 40000.0;
        const double lhs = reg->rho(a * a);
        if (lhs <= 2.0 * std::max(2.0 * pr.norm_g * a, pr.norm_H * a * a)) tau_true = a;
      }
      CHECK(tau >= tau_true * (1.0 - 1e-9));

      const double kap = reg->kappa_bound(pr.norm_g, pr.lambda_min);
      double kap_true = 0.0;
      const double lo = std::max(pr.lambda_min, 0.0);
      for (int i = 1; i <= 40000; ++i) {
        const double b = lo + (std::max(kap, 1.0) * 1.2 - lo) * i / 40000.0;
        if (b <= lo) continue;
        if (b * std::sqrt(reg->conjugate_derivative(b - pr.lambda_min)) <= pr.norm_g)
          kap_true = b;
      }
      CHECK(kap >= kap_true * (1.0 - 1e-9));
    }
  }
}

TEST_CASE("power trust region is continuous at the breakpoint") {
  PTrustRegion ptr(3.5, 1.5, 7.0);
  const double uh = ptr.slope_breakpoint();
  CHECK(ptr.conjugate(uh * (1.0 - 1e-12)) ==
        doctest::Approx(ptr.conjugate(uh * (1.0 + 1e-12))).epsilon(1e-9));
  CHECK(ptr.conjugate_derivative(uh) == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(ptr.rho(7.0 + 1e-9) == kInf);
  CHECK(std::isfinite(ptr.rho(7.0)));
}

TEST_CASE("json round trip and validation") {
  for (const auto& reg : suite()) {
    auto j = reg->to_json();
    auto back = make_regularizer(j);
    CHECK(back->kind() == reg->kind());
    for (double u : {-1.0, 0.5, 2.0}) CHECK(back->conjugate(u) == reg->conjugate(u));
  }

  CHECK_THROWS_AS(make_regularizer(nlohmann::json::array()), std::invalid_argument);
  CHECK_THROWS_AS(make_regularizer({{"p", 3.0}}), std::invalid_argument);
  CHECK_THROWS_AS(make_regularizer({{"kind", "quartic"}}), std::invalid_argument);
  CHECK_THROWS_AS(make_regularizer({{"kind", "p"}, {"p", 3.0}, {"M", 1.0}, {"s", 2.0}}),
                  std::invalid_argument);  // s rejected for kind p
  CHECK_THROWS_AS(make_regularizer({{"kind", "tr"}, {"s", 2.0}, {"p", 3.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_regularizer({{"kind", "tr"}}), std::invalid_argument);
  CHECK_THROWS_AS(make_regularizer({{"kind", "p"}, {"p", 2.0}, {"M", 1.0}}),
                  std::invalid_argument);  // p must exceed 2
  CHECK_THROWS_AS(make_regularizer({{"kind", "p"}, {"p", 3.0}, {"M", 0.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_regularizer({{"kind", "ptr"}, {"p", 3.0}, {"M", 1.0}, {"s", -1.0}}),
                  std::invalid_argument);
}

TEST_CASE("rho basics") {
  for (const auto& reg : suite()) {
    CHECK(reg->rho(0.0) == 0.0);
    CHECK(reg->rho(-3.0) == 0.0);
    double prev = 0.0;
    for (double t : {0.1, 0.5, 0.9}) {
      const double v = reg->rho(t);
      CHECK(v >= prev);
      prev = v;
    }
  }
}
