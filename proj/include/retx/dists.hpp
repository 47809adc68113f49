#pragma once

#include <string>
#include <variant>

#include "retx/random_stream.hpp"

namespace retx {

struct Exponential {
  double rate;
};

/// P[X > x] = exp(-(x/scale)^k).
struct Weibull {
  double k;
  double scale;
};

/// P[X > x] = Γ(rate x, shape) / Γ(shape).
struct GammaLaw {
  double rate;
  double shape;
};

/// A continuous law on [0, ∞) with infinite support. Immutable.
///
/// All tail quantities have log-space variants; the retransmission tails of
/// interest live far below the smallest double.
class DistSpec {
 public:
  using Family = std::variant<Exponential, Weibull, GammaLaw>;

  static DistSpec exponential(double rate);
  static DistSpec weibull(double k, double scale);
  static DistSpec gamma(double rate, double shape);

  const Family& family() const noexcept { return family_; }
  std::string family_name() const;
  std::string describe() const;

  double ccdf(double x) const;
  double cdf(double x) const;
  double log_ccdf(double x) const;
  double log_cdf(double x) const;
  double pdf(double x) const;

  /// x with ccdf(x) = q, 0 < q <= 1.
  double quantile_ccdf(double q) const;
  /// x with cdf(x) = p, 0 <= p < 1.
  double quantile_cdf(double p) const;
  /// x with log ccdf(x) = t, t <= 0. Exact in the deep tail.
  double inverse_log_ccdf(double t) const;

  /// Inverse-transform draw.
  double sample(RandomStream& rng) const;

  double mean() const;

 private:
  explicit DistSpec(Family f) : family_(f) {}
  Family family_;
};

}  // namespace retx
