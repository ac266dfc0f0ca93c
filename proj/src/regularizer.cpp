#include "rhors/regularizer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rhors {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check_power_params(double p, double M) {
  require(std::isfinite(p) && p > 2.0, "regularizer exponent must satisfy p > 2");
  require(std::isfinite(M) && M > 0.0, "regularizer scale must satisfy M > 0");
}

double power_conjugate(double u, double p, double M) {
  if (u <= 0.0) return 0.0;
  return (p - 2.0) * M / (2.0 * p) * std::pow(2.0 * u / M, p / (p - 2.0));
}

double power_conjugate_derivative(double u, double p, double M) {
  if (u <= 0.0) return 0.0;
  return std::pow(2.0 * u / M, 2.0 / (p - 2.0));
}

double power_conjugate_second_derivative(double u, double p, double M) {
  if (u <= 0.0) return 0.0;
  return 4.0 / (M * (p - 2.0)) * std::pow(2.0 * u / M, (4.0 - p) / (p - 2.0));
}

double power_tau_bound(double norm_g, double norm_H, double p, double M) {
  const double a = std::pow(4.0 * p * norm_g / M, 1.0 / (p - 1.0));
  const double b = std::pow(2.0 * p * norm_H / M, 1.0 / (p - 2.0));
  return std::max(a, b);
}

}  // namespace

PRegularizer::PRegularizer(double p, double M) : p_(p), M_(M) { check_power_params(p, M); }

double PRegularizer::rho(double t) const {
  return t <= 0.0 ? 0.0 : M_ / p_ * std::pow(t, p_ / 2.0);
}

double PRegularizer::conjugate(double u) const { return power_conjugate(u, p_, M_); }

double PRegularizer::conjugate_derivative(double u) const {
  return power_conjugate_derivative(u, p_, M_);
}

double PRegularizer::conjugate_second_derivative(double u) const {
  return power_conjugate_second_derivative(u, p_, M_);
}

GammaSet PRegularizer::gamma_minimizer(double lambda) const {
  if (lambda > 0.0) return {0.0, 0.0};
  if (lambda == 0.0) return {0.0, 1.0};
  const double g = conjugate_derivative(-lambda) + 1.0;
  return {g, g};
}

double PRegularizer::tau_bound(double norm_g, double norm_H) const {
  return power_tau_bound(norm_g, norm_H, p_, M_);
}

double PRegularizer::kappa_bound(double norm_g, double lambda_min) const {
  if (lambda_min > 0.0) return M_ / 2.0 * std::pow(norm_g / lambda_min, p_ - 2.0) + lambda_min;
  return std::pow(M_ / (2.0 * norm_g), 1.0 / (p_ - 1.0)) * norm_g;
}

double PRegularizer::dom_sq_norm_bound() const { return kInf; }

nlohmann::json PRegularizer::to_json() const {
  return {{"kind", "p"}, {"p", p_}, {"M", M_}};
}

TrustRegionIndicator::TrustRegionIndicator(double s) : s_(s) {
  require(std::isfinite(s) && s > 0.0, "trust-region bound must satisfy s > 0");
}

double TrustRegionIndicator::rho(double t) const { return t <= s_ ? 0.0 : kInf; }

double TrustRegionIndicator::conjugate(double u) const { return u <= 0.0 ? 0.0 : s_ * u; }

double TrustRegionIndicator::conjugate_derivative(double u) const {
  return u < 0.0 ? 0.0 : s_;
}

double TrustRegionIndicator::conjugate_second_derivative(double) const { return 0.0; }

GammaSet TrustRegionIndicator::gamma_minimizer(double lambda) const {
  if (lambda > 0.0) return {0.0, 0.0};
  if (lambda == 0.0) return {0.0, s_ + 1.0};
  return {s_ + 1.0, s_ + 1.0};
}

double TrustRegionIndicator::tau_bound(double, double) const { return std::sqrt(s_); }

double TrustRegionIndicator::kappa_bound(double norm_g, double lambda_min) const {
  return std::max({norm_g / std::sqrt(s_), lambda_min, 0.0});
}

double TrustRegionIndicator::dom_sq_norm_bound() const { return s_; }

nlohmann::json TrustRegionIndicator::to_json() const { return {{"kind", "tr"}, {"s", s_}}; }

PTrustRegion::PTrustRegion(double p, double M, double s) : p_(p), M_(M), s_(s) {
  check_power_params(p, M);
  require(std::isfinite(s) && s > 0.0, "trust-region bound must satisfy s > 0");
  u_hat_ = M / 2.0 * std::pow(s, (p - 2.0) / 2.0);
}

double PTrustRegion::rho(double t) const {
  if (t > s_) return kInf;
  return t <= 0.0 ? 0.0 : M_ / p_ * std::pow(t, p_ / 2.0);
}

double PTrustRegion::conjugate(double u) const {
  if (u <= u_hat_) return power_conjugate(u, p_, M_);
  return u * s_ - M_ / p_ * std::pow(s_, p_ / 2.0);
}

double PTrustRegion::conjugate_derivative(double u) const {
  if (u <= u_hat_) return power_conjugate_derivative(u, p_, M_);
  return s_;
}

double PTrustRegion::conjugate_second_derivative(double u) const {
  // at the breakpoint the left value doubles as the curvature surrogate
  if (u <= u_hat_) return power_conjugate_second_derivative(u, p_, M_);
  return 0.0;
}

GammaSet PTrustRegion::gamma_minimizer(double lambda) const {
  if (lambda > 0.0) return {0.0, 0.0};
  if (lambda == 0.0) return {0.0, 1.0};
  if (lambda >= -u_hat_) {
    const double g = power_conjugate_derivative(-lambda, p_, M_) + 1.0;
    return {g, g};
  }
  return {s_ + 1.0, s_ + 1.0};
}

double PTrustRegion::tau_bound(double norm_g, double norm_H) const {
  return std::min(std::sqrt(s_), power_tau_bound(norm_g, norm_H, p_, M_));
}

double PTrustRegion::kappa_bound(double norm_g, double lambda_min) const {
  return std::max(norm_g / std::sqrt(s_), lambda_min + u_hat_);
}

double PTrustRegion::dom_sq_norm_bound() const { return s_; }

nlohmann::json PTrustRegion::to_json() const {
  return {{"kind", "ptr"}, {"p", p_}, {"M", M_}, {"s", s_}};
}

std::shared_ptr<const Regularizer> make_regularizer(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("regularizer description must be an object");
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw std::invalid_argument("regularizer description needs a string 'kind'");
  const std::string kind = j.at("kind").get<std::string>();

  const auto expect_keys = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys)
      if (!j.contains(k) || !j.at(k).is_number())
        throw std::invalid_argument(std::string("regularizer kind '") + kind +
                                    "' needs numeric field '" + k + "'");
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() == "kind") continue;
      bool known = false;
      for (const char* k : keys) known = known || it.key() == k;
      if (!known)
        throw std::invalid_argument("unexpected field '" + it.key() + "' for regularizer kind '" +
                                    kind + "'");
    }
  };

  if (kind == "p") {
    expect_keys({"p", "M"});
    return std::make_shared<PRegularizer>(j.at("p").get<double>(), j.at("M").get<double>());
  }
  if (kind == "tr") {
    expect_keys({"s"});
    return std::make_shared<TrustRegionIndicator>(j.at("s").get<double>());
  }
  if (kind == "ptr") {
    expect_keys({"p", "M", "s"});
    return std::make_shared<PTrustRegion>(j.at("p").get<double>(), j.at("M").get<double>(),
                                          j.at("s").get<double>());
  }
  throw std::invalid_argument("unknown regularizer kind '" + kind + "'");
}

}  // namespace rhors
