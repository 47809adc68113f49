#include "retx/asym.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "retx/detail/solve.hpp"
#include "retx/error.hpp"
#include "retx/gammafn.hpp"

namespace retx {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_prefactor(const ApproxParams& p) {
  return p.prefactor_mode == PrefactorMode::TruncationCorrected ? -std::log(p.F_b) : 0.0;
}

double log1m_gbar(const ApproxParams& p) { return std::log1p(-p.gbar_b); }

void check_n(double n, double lo) {
  require(!std::isnan(n) && n >= lo, "count below the operation's domain");
}

double exp_or_zero(double v) { return v == -kInf ? 0.0 : std::exp(v); }

}  // namespace

ApproxParams ApproxParams::make(double alpha, SlowVary ell, double gbar_b, double F_b, PrefactorMode mode) {
  require(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive");
  require(gbar_b >= 0.0 && gbar_b < 1.0, "gbar_b must be in [0, 1)");
  require(F_b > 0.0 && F_b <= 1.0, "F_b must be in (0, 1]");
  ApproxParams p;
  p.alpha = alpha;
  p.ell = std::move(ell);
  p.gbar_b = gbar_b;
  p.log_gbar_b = gbar_b > 0.0 ? std::log(gbar_b) : -kInf;
  p.F_b = F_b;
  p.prefactor_mode = mode;
  return p;
}

ApproxParams approx_params(const CoupledModel& model, PrefactorMode mode) {
  ApproxParams p = ApproxParams::make(model.alpha(), model.ell(), model.gbar_b(), model.doc_mass(), mode);
  p.log_gbar_b = model.log_gbar_b();
  return p;
}

double tail_argument(const ApproxParams& p, double n) {
  const double g = p.gbar_b;
  if (g < 1e-8) return n * (g + 0.5 * g * g);
  return -n * std::log1p(-g);
}

double log_uniform_approx(const ApproxParams& p, double n) {
  check_n(n, 1.0);
  const double log_n = std::log(n);
  const double ell_arg = std::exp(std::min(log_n, -p.log_gbar_b));
  return log_prefactor(p) + std::log(p.alpha) - p.alpha * log_n - p.ell.log_value(ell_arg) +
         gammafn::log_upper_incomplete_gamma(tail_argument(p, n), p.alpha);
}

double uniform_approx(const ApproxParams& p, double n) { return exp_or_zero(log_uniform_approx(p, n)); }

double log_power_law_limit(const ApproxParams& p, double n) {
  check_n(n, 1.0);
  return std::lgamma(p.alpha + 1.0) - p.ell.log_value(n) - p.alpha * std::log(n);
}

double power_law_limit(const ApproxParams& p, double n) { return exp_or_zero(log_power_law_limit(p, n)); }

double log_exact_integer_ccdf(const ApproxParams& p, double n) {
  check_n(n, 0.0);
  const double k = std::round(p.alpha);
  if (std::fabs(p.alpha - k) > 1e-12) fail(Errc::NotInteger, "alpha must be an integer");
  if (!p.ell.is_one()) fail(Errc::EllNotOne, "the finite sum needs ell == 1");
  const int a = static_cast<int>(k);
  const double l1m = log1m_gbar(p);

  // term_i = α! n! / ((α-i)! (n+i)!) Ḡ^(α-i) (1-Ḡ)^(n+i), summed by log-sum-exp.
  std::vector<double> terms;
  terms.reserve(a);
  double log_ratio = 0.0;  // log n!/(n+i)!
  for (int i = 1; i <= a; ++i) {
    log_ratio -= std::log(n + i);
    const double g_pow = (a - i == 0) ? 0.0 : (a - i) * p.log_gbar_b;
    terms.push_back(std::lgamma(a + 1.0) - std::lgamma(a - i + 1.0) + log_ratio + g_pow + (n + i) * l1m);
  }
  double top = -kInf;
  for (double t : terms) top = std::max(top, t);
  if (top == -kInf) return -kInf;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - top);
  return std::min(0.0, top + std::log(sum) - std::log(p.F_b));
}

double exact_integer_ccdf(const ApproxParams& p, double n) { return exp_or_zero(log_exact_integer_ccdf(p, n)); }

double log_exp_tail_asymptote(const ApproxParams& p, double n, TailForm form) {
  check_n(n, 1.0);
  const double g_pow = p.alpha == 1.0 ? 0.0 : (p.alpha - 1.0) * p.log_gbar_b;
  const double l1m = log1m_gbar(p);
  if (form == TailForm::FixedBound) {
    return std::log(p.alpha) + g_pow - std::log(p.F_b) + (n + 1.0) * l1m - std::log(n + 1.0);
  }
  require(p.gbar_b > 0.0, "the general tail form needs a finite bound");
  return log_prefactor(p) + std::log(p.alpha) - p.ell.log_value(std::exp(-p.log_gbar_b)) - std::log(n) + g_pow +
         n * l1m;
}

double exp_tail_asymptote(const ApproxParams& p, double n, TailForm form) {
  return exp_or_zero(log_exp_tail_asymptote(p, n, form));
}

double log_body(const ApproxParams& p, double n) {
  check_n(n, 2.0);
  return n * log1m_gbar(p) - p.alpha * std::log(n);
}

double log_upper_bound(const ApproxParams& p, double n, double eps) {
  require(eps >= 0.0 && eps < 1.0, "eps must be in [0, 1)");
  return (1.0 - eps) * log_body(p, n);
}

TransitionReport transition_point(const ApproxParams& p) {
  const double g = p.gbar_b;
  if (!(g > 0.0) || g >= p.alpha / std::exp(1.0)) {
    fail(Errc::NoRoot, "n Gbar(b) = alpha log n has no root above alpha / Gbar(b)");
  }
  TransitionReport r;
  r.n_heuristic = p.alpha * std::exp(-p.log_gbar_b);
  // Upper root of n g - α log n; the function is increasing past its minimum at α/g.
  auto h = [&](double n) -> std::pair<double, double> { return {n * g - p.alpha * std::log(n), g - p.alpha / n}; };
  r.bracket_lo = r.n_heuristic;
  r.bracket_hi = 10.0 * p.alpha * (-p.log_gbar_b) / g;
  while (h(r.bracket_hi).first <= 0.0) r.bracket_hi *= 2.0;
  r.n_fixed_point = detail::newton_bracketed(h, r.bracket_lo, r.bracket_hi, 4e-16);
  return r;
}

bool theorem1_region_check(const ApproxParams& p, double n, double eps) {
  require(eps > 0.0, "eps must be positive");
  check_n(n, 1.0);
  return (1.0 + eps) * std::log(n) + p.log_gbar_b <= 0.0;
}

}  // namespace retx
