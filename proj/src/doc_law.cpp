#include "retx/doc_law.hpp"

#include <algorithm>
#include <cmath>

#include "retx/detail/solve.hpp"
#include "retx/error.hpp"

namespace retx {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log1mexp(double v) {
  if (v > -0.6931471805599453) return std::log(-std::expm1(v));
  return std::log1p(-std::exp(v));
}

}  // namespace

DerivedLaw::DerivedLaw(DistSpec channel, double alpha, SlowVary ell, double x_anchor)
    : channel_(channel), alpha_(alpha), ell_(std::move(ell)), x_anchor_(x_anchor) {
  require(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive");
}

double DerivedLaw::raw_log_ccdf_at(double log_gbar) const {
  if (log_gbar == -kInf) return -kInf;
  return alpha_ * log_gbar - ell_.log_value(std::exp(-log_gbar));
}

double DerivedLaw::log_ccdf(double x) const {
  if (x <= 0.0) return 0.0;
  return std::min(0.0, raw_log_ccdf_at(channel_.log_ccdf(x)));
}

double DerivedLaw::log_cdf(double x) const {
  if (x <= 0.0) return -kInf;
  return log1mexp(log_ccdf(x));
}

double DerivedLaw::pdf(double x) const {
  if (x < 0.0) return 0.0;
  const double h = std::max(1e-6, 1e-6 * x);
  auto cdf = [&](double u) { return std::exp(log_cdf(u)); };
  if (x < h) return (cdf(x + h) - cdf(x)) / h;
  return (cdf(x + h) - cdf(x - h)) / (2.0 * h);
}

double DerivedLaw::log_gbar_at_log_ccdf(double t) const {
  require(!std::isnan(t) && t <= 0.0, "log ccdf level must be <= 0");
  if (t == -kInf) return -kInf;
  // Inside the clamped region the law has no mass above level t; x = 0.
  if (raw_log_ccdf_at(0.0) <= t) return 0.0;

  // raw(s) = α s - log ℓ(e^-s) increases in s = log Ḡ; its slope is
  // α + index(e^-s).
  auto g = [&](double s) -> std::pair<double, double> {
    return {raw_log_ccdf_at(s) - t, alpha_ + ell_.log_index(std::exp(-s))};
  };
  double lo = std::min(-1.0, 2.0 * t / alpha_);
  int guard = 0;
  while (g(lo).first >= 0.0) {
    lo *= 2.0;
    if (++guard > 60) fail(Errc::NonConvergence, "derived law: no lower bracket");
  }
  return detail::newton_bracketed(g, lo, 0.0, 4.0 * std::numeric_limits<double>::epsilon());
}

double DerivedLaw::inverse_log_ccdf(double t) const {
  const double s = log_gbar_at_log_ccdf(t);
  if (s == 0.0) return 0.0;
  return channel_.inverse_log_ccdf(s);
}

std::string DocLaw::describe() const {
  if (const auto* d = parametric()) return d->describe();
  const auto& dl = *derived();
  return "derived(channel=" + dl.channel().describe() + ", alpha=" + std::to_string(dl.alpha()) +
         ", ell=" + dl.ell().describe() + ")";
}

double DocLaw::log_ccdf(double x) const {
  return std::visit([&](const auto& d) { return d.log_ccdf(x); }, law_);
}
double DocLaw::log_cdf(double x) const {
  return std::visit([&](const auto& d) { return d.log_cdf(x); }, law_);
}
double DocLaw::ccdf(double x) const { return std::exp(log_ccdf(x)); }
double DocLaw::cdf(double x) const { return std::exp(log_cdf(x)); }
double DocLaw::pdf(double x) const {
  return std::visit([&](const auto& d) { return d.pdf(x); }, law_);
}
double DocLaw::inverse_log_ccdf(double t) const {
  return std::visit([&](const auto& d) { return d.inverse_log_ccdf(t); }, law_);
}
double DocLaw::quantile_ccdf(double q) const {
  require(q > 0.0 && q <= 1.0, "quantile_ccdf needs 0 < q <= 1");
  return inverse_log_ccdf(std::log(q));
}

BoundedDoc::BoundedDoc(DocLaw base, double bound) : base_(std::move(base)), bound_(bound) {
  require(bound > 0.0, "document bound must be positive");
  if (bound == kUnbounded) {
    mass_ = 1.0;
    log_tail_b_ = -kInf;
  } else {
    mass_ = base_.cdf(bound);
    log_tail_b_ = base_.log_ccdf(bound);
  }
  if (!(mass_ >= 1e-300)) fail(Errc::DegenerateTruncation, "P[L <= b] below 1e-300");
}

double BoundedDoc::ccdf(double x) const {
  if (x <= 0.0) return 1.0;
  if (x >= bound_) return 0.0;
  // (F(b) - F(x)) / F(b) = (F̄(x) - F̄(b)) / F(b)
  const double tail_b = std::exp(log_tail_b_);
  return std::clamp((base_.ccdf(x) - tail_b) / mass_, 0.0, 1.0);
}

double BoundedDoc::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= bound_) return 1.0;
  return std::clamp(base_.cdf(x) / mass_, 0.0, 1.0);
}

double BoundedDoc::sample(RandomStream& rng) const {
  if (!(mass_ >= 1e-300)) fail(Errc::DegenerateTruncation, "P[L <= b] below 1e-300");
  const double level = std::exp(log_tail_b_) + rng.uniform() * mass_;
  const double x = base_.inverse_log_ccdf(std::log(std::min(level, 1.0)));
  return std::min(x, bound_);
}

}  // namespace retx
