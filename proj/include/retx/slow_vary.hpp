#pragma once

#include <string>

namespace retx {

/// A slowly varying function ℓ used to modulate the power-law coupling
/// between document and channel tails.
///
///   One            ℓ(x) = 1
///   LogPower       ℓ(x) = c (log x)^β            for x >= x_min
///   GammaDocExact  ℓ(x) = 1 / f(log(x) / μ),     x >= 1
///                  f(u) = λ^(k-1)/Γ(k) ∫_0^∞ e^-z (z/λ + u)^(k-1) dz
///                       = e^(λu) Γ(λu, k) / Γ(k)
///
/// GammaDocExact is the exact modulation that turns an Exponential(μ)
/// channel and a Gamma(λ, k) document into the coupled form with α = λ/μ.
/// Arguments below the domain guard are clamped to it.
class SlowVary {
 public:
  enum class Kind { One, LogPower, GammaDocExact };

  static SlowVary one();
  static SlowVary log_power(double coeff, double exponent, double x_min = 2.718281828459045);
  static SlowVary gamma_doc_exact(double rate, double shape, double channel_rate);

  Kind kind() const noexcept { return kind_; }
  bool is_one() const noexcept { return kind_ == Kind::One; }
  double x_min() const noexcept { return x_min_; }

  double coeff() const noexcept { return p0_; }
  double exponent() const noexcept { return p1_; }
  double rate() const noexcept { return p0_; }
  double shape() const noexcept { return p1_; }
  double channel_rate() const noexcept { return p2_; }

  double operator()(double x) const;
  double log_value(double x) const;

  /// Index function x ℓ'(x)/ℓ(x) = d log ℓ / d log x; tends to 0 for the
  /// kinds above.
  double log_index(double x) const;

  std::string describe() const;

 private:
  SlowVary(Kind kind, double p0, double p1, double p2, double x_min)
      : kind_(kind), p0_(p0), p1_(p1), p2_(p2), x_min_(x_min) {}

  Kind kind_;
  double p0_;
  double p1_;
  double p2_;
  double x_min_;
};

}  // namespace retx
