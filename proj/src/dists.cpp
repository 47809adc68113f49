#include "retx/dists.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "retx/detail/solve.hpp"
#include "retx/error.hpp"
#include "retx/gammafn.hpp"

namespace retx {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNewtonTol = 4.0 * std::numeric_limits<double>::epsilon();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double log1mexp(double v) {
  if (v > -0.6931471805599453) return std::log(-std::expm1(v));
  return std::log1p(-std::exp(v));
}

// Solves log Q(z, k) = t (upper = true) or log P(z, k) = t (upper = false)
// for z, iterating on w = log z so tiny and huge roots converge alike.
double gamma_root(double shape, double t, bool upper) {
  auto g = [&](double w) -> std::pair<double, double> {
    const double z = std::exp(w);
    const double log_dens_z = shape * w - z - std::lgamma(shape);  // z * density
    if (upper) {
      const double lq = gammafn::log_regularized_upper(z, shape);
      return {lq - t, -std::exp(log_dens_z - lq)};
    }
    const double lp = gammafn::log_regularized_lower(z, shape);
    return {lp - t, std::exp(log_dens_z - lp)};
  };
  double lo = -2.0;
  double hi = 2.0;
  // Q decreases in w, P increases; walk the bracket outwards until signs split.
  auto below_root = [&](double w) { return upper ? g(w).first > 0.0 : g(w).first < 0.0; };
  int guard = 0;
  while (!below_root(lo)) {
    lo -= 4.0;
    if (++guard > 200) fail(Errc::NonConvergence, "gamma quantile: no lower bracket");
  }
  guard = 0;
  while (below_root(hi)) {
    hi += 1.0;
    if (++guard > 200) fail(Errc::NonConvergence, "gamma quantile: no upper bracket");
  }
  return std::exp(detail::newton_bracketed(g, lo, hi, kNewtonTol));
}

}  // namespace

DistSpec DistSpec::exponential(double rate) {
  require(rate > 0.0 && std::isfinite(rate), "exponential rate must be positive");
  return DistSpec(Exponential{rate});
}

DistSpec DistSpec::weibull(double k, double scale) {
  require(k > 0.0 && std::isfinite(k), "weibull index must be positive");
  require(scale > 0.0 && std::isfinite(scale), "weibull scale must be positive");
  return DistSpec(Weibull{k, scale});
}

DistSpec DistSpec::gamma(double rate, double shape) {
  require(rate > 0.0 && std::isfinite(rate), "gamma rate must be positive");
  require(shape > 0.0 && shape <= gammafn::kMaxShape, "gamma shape must be in (0, 170]");
  return DistSpec(GammaLaw{rate, shape});
}

std::string DistSpec::family_name() const {
  return std::visit(overloaded{[](const Exponential&) { return std::string("exponential"); },
                               [](const Weibull&) { return std::string("weibull"); },
                               [](const GammaLaw&) { return std::string("gamma"); }},
                    family_);
}

std::string DistSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{[&](const Exponential& d) { os << "exponential(rate=" << d.rate << ")"; },
                        [&](const Weibull& d) { os << "weibull(k=" << d.k << ", scale=" << d.scale << ")"; },
                        [&](const GammaLaw& d) {
                          os << "gamma(rate=" << d.rate << ", shape=" << d.shape << ")";
                        }},
             family_);
  return os.str();
}

double DistSpec::log_ccdf(double x) const {
  require(!std::isnan(x), "ccdf of NaN");
  if (x <= 0.0) return 0.0;
  if (x == kInf) return -kInf;
  return std::visit(
      overloaded{[&](const Exponential& d) { return -d.rate * x; },
                 [&](const Weibull& d) { return -std::pow(x / d.scale, d.k); },
                 [&](const GammaLaw& d) { return gammafn::log_regularized_upper(d.rate * x, d.shape); }},
      family_);
}

double DistSpec::log_cdf(double x) const {
  require(!std::isnan(x), "cdf of NaN");
  if (x <= 0.0) return -kInf;
  if (x == kInf) return 0.0;
  return std::visit(
      overloaded{[&](const Exponential& d) { return log1mexp(-d.rate * x); },
                 [&](const Weibull& d) { return log1mexp(-std::pow(x / d.scale, d.k)); },
                 [&](const GammaLaw& d) { return gammafn::log_regularized_lower(d.rate * x, d.shape); }},
      family_);
}

double DistSpec::ccdf(double x) const { return std::exp(log_ccdf(x)); }
double DistSpec::cdf(double x) const { return std::exp(log_cdf(x)); }

double DistSpec::pdf(double x) const {
  if (x < 0.0) return 0.0;
  return std::visit(overloaded{[&](const Exponential& d) { return d.rate * std::exp(-d.rate * x); },
                               [&](const Weibull& d) {
                                 if (x == 0.0) return d.k < 1.0 ? kInf : (d.k == 1.0 ? 1.0 / d.scale : 0.0);
                                 const double r = x / d.scale;
                                 return d.k / d.scale * std::pow(r, d.k - 1.0) * std::exp(-std::pow(r, d.k));
                               },
                               [&](const GammaLaw& d) {
                                 if (x == 0.0) {
                                   return d.shape < 1.0 ? kInf : (d.shape == 1.0 ? d.rate : 0.0);
                                 }
                                 const double z = d.rate * x;
                                 return d.rate * std::exp((d.shape - 1.0) * std::log(z) - z - std::lgamma(d.shape));
                               }},
                    family_);
}

double DistSpec::inverse_log_ccdf(double t) const {
  require(!std::isnan(t) && t <= 0.0, "inverse_log_ccdf needs t <= 0");
  if (t == 0.0) return 0.0;
  if (t == -kInf) return kInf;
  return std::visit(overloaded{[&](const Exponential& d) { return -t / d.rate; },
                               [&](const Weibull& d) { return d.scale * std::pow(-t, 1.0 / d.k); },
                               [&](const GammaLaw& d) { return gamma_root(d.shape, t, true) / d.rate; }},
                    family_);
}

double DistSpec::quantile_ccdf(double q) const {
  require(q > 0.0 && q <= 1.0, "quantile_ccdf needs 0 < q <= 1");
  return inverse_log_ccdf(std::log(q));
}

double DistSpec::quantile_cdf(double p) const {
  require(p >= 0.0 && p < 1.0, "quantile_cdf needs 0 <= p < 1");
  if (p == 0.0) return 0.0;
  if (const auto* g = std::get_if<GammaLaw>(&family_); g && p <= 0.5) {
    return gamma_root(g->shape, std::log(p), false) / g->rate;
  }
  return inverse_log_ccdf(std::log1p(-p));
}

double DistSpec::sample(RandomStream& rng) const { return inverse_log_ccdf(std::log(rng.uniform())); }

double DistSpec::mean() const {
  return std::visit(overloaded{[](const Exponential& d) { return 1.0 / d.rate; },
                               [](const Weibull& d) { return d.scale * std::tgamma(1.0 + 1.0 / d.k); },
                               [](const GammaLaw& d) { return d.shape / d.rate; }},
                    family_);
}

}  // namespace retx
