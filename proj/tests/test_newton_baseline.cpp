#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "rhors/dense_oracle.hpp"
#include "rhors/newton_solver.hpp"
#include "test_util.hpp"

using namespace rhors;
using namespace rhors::testing;

TEST_CASE("newton trace carries correct dual values and gradients") {
  ProblemInstance inst;
  inst.H = random_sparse(40, 0.2, 101);
  inst.g = random_vector(40, 102);
  inst.reg = std::make_shared<PRegularizer>(3.0, 1.0);

  NewtonConfig cfg;
  cfg.record_trace = true;
  cfg.cg_rtol = 1e-10;  // tight solves so the trace is comparable to dense math
  auto r = newton_solve(inst, cfg);
  REQUIRE(r.trace.size() >= 2);

  for (const auto& e : r.trace) {
    const double lam = e.t;
    const double dref = dense_dual_value(inst, lam);
    CHECK(e.khat == doctest::Approx(dref).epsilon(1e-8));
    const double h = 1e-6 * (1.0 + std::abs(lam));
    const double fd =
        (dense_dual_value(inst, lam + h) - dense_dual_value(inst, lam - h)) / (2.0 * h);
    CHECK(e.slope == doctest::Approx(fd).epsilon(1e-4));
  }
}

TEST_CASE("newton frozen easy example") {
  ProblemInstance inst;
  inst.H = diagonal({-1.0, 2.0});
  inst.g = Vector(2);
  inst.g << 1.0, 1.0;
  inst.reg = std::make_shared<PRegularizer>(3.0, 2.0);

  auto r = newton_solve(inst);
  auto ref = dense_solve(inst);
  CHECK(r.method == "newton");
  CHECK(r.label == CaseLabel::Easy);
  CHECK(r.converged());
  CHECK(r.lambda_star > -1.63);
  CHECK(r.lambda_star < -1.62);
  CHECK(r.primal_obj == doctest::Approx(ref.optimal_value).epsilon(1e-8));
}

TEST_CASE("newton agrees with the dense oracle across regularizers") {
  std::vector<std::shared_ptr<const Regularizer>> regs = {
      std::make_shared<PRegularizer>(3.0, 1.0),
      std::make_shared<PRegularizer>(3.5, 2.0),
      std::make_shared<PTrustRegion>(3.0, 1.0, 10.0),
      std::make_shared<TrustRegionIndicator>(10.0),
  };
  for (const auto& reg : regs) {
    for (unsigned seed : {111u, 112u, 113u}) {
      for (double shift : {0.0, -2.0}) {
        ProblemInstance inst;
        inst.H = random_sparse(60, 0.1, seed, shift);
        inst.g = random_vector(60, seed + 5);
        inst.reg = reg;

        auto r = newton_solve(inst);
        auto ref = dense_solve(inst);
        CAPTURE(reg->to_json().dump());
        CAPTURE(seed);
        CAPTURE(shift);
        CHECK(r.label == ref.label);
        CHECK(std::abs(r.primal_obj - ref.optimal_value) <=
              1e-6 * (1.0 + std::abs(ref.optimal_value)));
        CHECK(r.iterations <= 10);
        CHECK(r.dual_obj <= r.primal_obj + 1e-9 * (1.0 + std::abs(r.primal_obj)));
      }
    }
  }
}

TEST_CASE("newton boundary exit handles the degenerate pair") {
  ProblemInstance base;
  base.H = random_sparse(50, 0.2, 121, -3.0);
  base.reg = std::make_shared<PRegularizer>(3.0, 1.0);

  Matrix Hd = base.H.to_dense();
  Eigen::SelfAdjointEigenSolver<Matrix> es(Hd);
  const double lmin = es.eigenvalues()(0);
  REQUIRE(lmin < -1e-3);
  const double threshold = base.reg->conjugate_derivative(-lmin);

  Vector w = random_vector(50, 122);
  Vector g0 = Hd * w - lmin * w;
  Vector wp = w - es.eigenvectors().col(0).dot(w) * es.eigenvectors().col(0);

  for (double c : {1.1, 0.9}) {
    ProblemInstance inst = base;
    inst.g = (c * std::sqrt(threshold) / wp.norm()) * g0;

    auto r = newton_solve(inst);
    auto ref = dense_solve(inst);
    CAPTURE(c);
    CHECK(r.label == ref.label);
    CHECK(std::abs(r.primal_obj - ref.optimal_value) <=
          1e-6 * (1.0 + std::abs(ref.optimal_value)));
    if (c < 1.0) {
      REQUIRE(r.has_x);
      CHECK(r.x_star.squaredNorm() == doctest::Approx(ref.threshold).epsilon(1e-6));
      CHECK(r.lambda_star == doctest::Approx(lmin).epsilon(1e-8));
    }
  }
}

TEST_CASE("newton frozen interior example") {
  ProblemInstance inst;
  inst.H = diagonal({2.0, 5.0});
  inst.g = Vector(2);
  inst.g << 1.0, 4.0;
  inst.reg = std::make_shared<TrustRegionIndicator>(100.0);

  auto r = newton_solve(inst);
  CHECK(r.label == CaseLabel::PositiveDefiniteInterior);
  CHECK(r.converged());
  CHECK(r.primal_obj == doctest::Approx(-3.7).epsilon(1e-8));
  REQUIRE(r.has_x);
  CHECK(r.x_star(0) == doctest::Approx(-0.5).epsilon(1e-6));
  CHECK(r.x_star(1) == doctest::Approx(-0.8).epsilon(1e-6));
}
