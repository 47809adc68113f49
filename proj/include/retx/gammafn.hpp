#pragma once

// Complete and incomplete Gamma functions.
//
// Argument order follows the retransmission literature: Γ(x, a) is the
// upper incomplete integral from x to infinity of e^-z z^(a-1) dz.

namespace retx::gammafn {

/// Largest shape accepted; Γ(a) overflows a double shortly above 171.
inline constexpr double kMaxShape = 170.0;

enum class Method { Series, ContinuedFraction, AsymptoticExpansion };

struct GammaEval {
  double value = 0.0;      ///< Γ(x, a), or 0 after underflow
  double log_value = 0.0;  ///< log Γ(x, a); finite even when value underflows
  Method method = Method::Series;
  double est_rel_err = 0.0;  ///< 1 when value underflowed to 0
};

double gamma(double a);
double log_gamma(double a);

GammaEval upper_incomplete_gamma_eval(double x, double a);
double upper_incomplete_gamma(double x, double a);
double log_upper_incomplete_gamma(double x, double a);

// Regularized forms Q(x, a) = Γ(x, a)/Γ(a) and P = 1 - Q. Each one is
// evaluated on the branch where it does not suffer cancellation.
double regularized_upper(double x, double a);
double regularized_lower(double x, double a);
double log_regularized_upper(double x, double a);
double log_regularized_lower(double x, double a);

/// Large-x expansion x^(a-1) e^-x [1 + (a-1)/x + (a-1)(a-2)/x^2 + ...]
/// truncated after `terms` terms. The series diverges, so `terms` is capped
/// at floor(x) (at least one term is always kept).
double incomplete_gamma_asymptotic(double x, double a, int terms);
GammaEval incomplete_gamma_asymptotic_eval(double x, double a, int terms);

}  // namespace retx::gammafn
