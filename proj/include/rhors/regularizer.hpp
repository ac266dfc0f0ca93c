#pragma once

#include <memory>

#include <json.hpp>

namespace rhors {

enum class RegKind { Power, TrustRegion, PowerTrustRegion };

/// Minimizer set of gamma |-> rho(gamma - 1) + gamma * lambda over gamma >= 0.
/// A single minimizer is encoded as lo == hi; at lambda == 0 the set is an
/// interval.
struct GammaSet {
  double lo = 0.0;
  double hi = 0.0;
  bool is_point() const { return lo == hi; }
};

/// A regularizer rho: proper closed convex, nondecreasing, zero on t <= 0,
/// with superlinear growth. `conjugate` is the monotone conjugate
/// rho^+(u) = sup_{t >= 0} { u t - rho(t) }, which vanishes for u <= 0.
class Regularizer {
 public:
  virtual ~Regularizer() = default;

  virtual RegKind kind() const = 0;

  /// rho(t). Trust-region kinds return +infinity beyond their domain bound.
  virtual double rho(double t) const = 0;

  /// rho^+(u); finite everywhere, zero for u <= 0.
  virtual double conjugate(double u) const = 0;

  /// (rho^+)'(u) for u != 0; at u == 0 the right derivative. Zero for u < 0.
  virtual double conjugate_derivative(double u) const = 0;

  /// (rho^+)''(u) for u > 0; zero for u <= 0. Where (rho^+)' has a kink the
  /// left value is returned (it serves as the curvature surrogate there).
  virtual double conjugate_second_derivative(double u) const = 0;

  virtual GammaSet gamma_minimizer(double lambda) const = 0;

  /// Upper bound on sup{ a >= 0 : rho(a^2) <= 2 max{2 ||g|| a, ||H|| a^2} }.
  virtual double tau_bound(double norm_g, double norm_H) const = 0;

  /// Upper bound on sup of { b > max{lambda_min, 0} :
  /// b sqrt((rho^+)'(b - lambda_min)) <= ||g|| } (and 0).
  virtual double kappa_bound(double norm_g, double lambda_min) const = 0;

  /// sup{ t : rho(t) < infinity }; +infinity for the power kind.
  virtual double dom_sq_norm_bound() const = 0;

  virtual nlohmann::json to_json() const = 0;
};

/// rho(t) = (M/p) max(t, 0)^(p/2), p > 2, M > 0.
class PRegularizer final : public Regularizer {
 public:
  PRegularizer(double p, double M);
  RegKind kind() const override { return RegKind::Power; }
  double rho(double t) const override;
  double conjugate(double u) const override;
  double conjugate_derivative(double u) const override;
  double conjugate_second_derivative(double u) const override;
  GammaSet gamma_minimizer(double lambda) const override;
  double tau_bound(double norm_g, double norm_H) const override;
  double kappa_bound(double norm_g, double lambda_min) const override;
  double dom_sq_norm_bound() const override;
  nlohmann::json to_json() const override;

 private:
  double p_, M_;
};

/// rho(t) = 0 for t <= s, +infinity beyond: the classical norm-squared bound.
class TrustRegionIndicator final : public Regularizer {
 public:
  explicit TrustRegionIndicator(double s);
  RegKind kind() const override { return RegKind::TrustRegion; }
  double rho(double t) const override;
  double conjugate(double u) const override;
  double conjugate_derivative(double u) const override;
  double conjugate_second_derivative(double u) const override;
  GammaSet gamma_minimizer(double lambda) const override;
  double tau_bound(double norm_g, double norm_H) const override;
  double kappa_bound(double norm_g, double lambda_min) const override;
  double dom_sq_norm_bound() const override;
  nlohmann::json to_json() const override;

 private:
  double s_;
};

/// Power growth inside a norm-squared bound:
/// rho(t) = (M/p) max(t, 0)^(p/2) + indicator(t <= s).
class PTrustRegion final : public Regularizer {
 public:
  PTrustRegion(double p, double M, double s);
  RegKind kind() const override { return RegKind::PowerTrustRegion; }
  double rho(double t) const override;
  double conjugate(double u) const override;
  double conjugate_derivative(double u) const override;
  double conjugate_second_derivative(double u) const override;
  GammaSet gamma_minimizer(double lambda) const override;
  double tau_bound(double norm_g, double norm_H) const override;
  double kappa_bound(double norm_g, double lambda_min) const override;
  double dom_sq_norm_bound() const override;
  nlohmann::json to_json() const override;

  /// Slope at which the conjugate switches from power growth to the linear
  /// branch: u_hat = (M/2) s^((p-2)/2).
  double slope_breakpoint() const { return u_hat_; }

 private:
  double p_, M_, s_, u_hat_;
};

/// Builds a regularizer from its JSON description:
///   {"kind": "p",   "p": >2, "M": >0}
///   {"kind": "tr",  "s": >0}
///   {"kind": "ptr", "p": >2, "M": >0, "s": >0}
/// The shape is enforced exactly (no extra or missing keys).
std::shared_ptr<const Regularizer> make_regularizer(const nlohmann::json& j);

}  // namespace rhors
