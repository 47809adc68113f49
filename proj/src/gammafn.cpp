#include "retx/gammafn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "retx/error.hpp"

namespace retx::gammafn {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 2000;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_shape(double a) {
  if (!(a > 0.0)) fail(Errc::InvalidArgument, "shape must be positive, got " + std::to_string(a));
  if (a > kMaxShape) fail(Errc::Overflow, "shape above " + std::to_string(kMaxShape));
}

// log P and log Q for the same (x, a), with the method that produced the
// directly evaluated one.
struct Split {
  double log_p;
  double log_q;
  Method method;
  double rel_err;
};

double log1mexp(double log_v) {
  // log(1 - e^v) for v <= 0, accurate on both ends.
  if (log_v > -0.6931471805599453) return std::log(-std::expm1(log_v));
  return std::log1p(-std::exp(log_v));
}

Split split(double x, double a) {
  check_shape(a);
  if (std::isnan(x) || x < 0.0) fail(Errc::InvalidArgument, "incomplete gamma needs x >= 0");
  if (x == 0.0) return {-kInf, 0.0, Method::Series, 0.0};
  if (x == kInf) return {0.0, -kInf, Method::ContinuedFraction, 0.0};

  const double log_prefix = -x + a * std::log(x) - std::lgamma(a);

  if (x < a + 1.0) {
    // Lower series: γ(a,x) = e^-x x^a Σ x^n / (a (a+1) ... (a+n)).
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    int i = 0;
    for (; i < kMaxIter; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * kEps) break;
    }
    if (i == kMaxIter) fail(Errc::NonConvergence, "incomplete gamma series");
    const double log_p = log_prefix + std::log(sum);
    const double p = std::exp(log_p);
    const double log_q = log1mexp(log_p);
    const double q = std::exp(log_q);
    const double rel = 4.0 * kEps * (1.0 + (q > 0.0 ? p / q : 1.0));
    return {log_p, log_q, Method::Series, rel};
  }

  // Continued fraction for Γ(a,x), modified Lentz.
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  int i = 1;
  for (; i <= kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  if (i > kMaxIter) fail(Errc::NonConvergence, "incomplete gamma continued fraction");
  const double log_q = log_prefix + std::log(h);
  return {log1mexp(log_q), log_q, Method::ContinuedFraction, 8.0 * kEps};
}

}  // namespace

double gamma(double a) {
  check_shape(a);
  return std::tgamma(a);
}

double log_gamma(double a) {
  if (!(a > 0.0)) fail(Errc::InvalidArgument, "log_gamma needs a > 0");
  return std::lgamma(a);
}

GammaEval upper_incomplete_gamma_eval(double x, double a) {
  const Split s = split(x, a);
  GammaEval out;
  out.log_value = s.log_q + std::lgamma(a);
  out.value = std::exp(out.log_value);
  out.method = s.method;
  out.est_rel_err = s.rel_err;
  if (out.value == 0.0) out.est_rel_err = 1.0;
  const double full = std::tgamma(a);
  if (out.value > full) out.value = full;
  return out;
}

double upper_incomplete_gamma(double x, double a) { return upper_incomplete_gamma_eval(x, a).value; }

double log_upper_incomplete_gamma(double x, double a) {
  return upper_incomplete_gamma_eval(x, a).log_value;
}

double regularized_upper(double x, double a) { return std::exp(split(x, a).log_q); }
double regularized_lower(double x, double a) { return std::exp(split(x, a).log_p); }
double log_regularized_upper(double x, double a) { return split(x, a).log_q; }
double log_regularized_lower(double x, double a) { return split(x, a).log_p; }

GammaEval incomplete_gamma_asymptotic_eval(double x, double a, int terms) {
  if (!(x > 0.0)) fail(Errc::InvalidArgument, "asymptotic expansion needs x > 0");
  if (terms < 1) fail(Errc::InvalidArgument, "asymptotic expansion needs at least one term");
  const int cap = std::max(1, static_cast<int>(std::floor(x)));
  const int used = std::min(terms, cap);

  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < used; ++k) {
    term *= (a - k) / x;
    sum += term;
  }
  const double next = std::fabs(term * (a - used) / x);

  GammaEval out;
  out.method = Method::AsymptoticExpansion;
  const double log_lead = (a - 1.0) * std::log(x) - x;
  if (sum <= 0.0) {
    out.value = 0.0;
    out.log_value = -kInf;
    out.est_rel_err = 1.0;
    return out;
  }
  out.log_value = log_lead + std::log(sum);
  out.value = std::exp(out.log_value);
  out.est_rel_err = out.value == 0.0 ? 1.0 : next / sum;
  return out;
}

double incomplete_gamma_asymptotic(double x, double a, int terms) {
  return incomplete_gamma_asymptotic_eval(x, a, terms).value;
}

}  // namespace retx::gammafn
