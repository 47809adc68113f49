#pragma once

#include "retx/coupled_model.hpp"
#include "retx/slow_vary.hpp"

namespace retx {

enum class PrefactorMode { Plain, TruncationCorrected };

/// Inputs shared by every closed-form approximation.
struct ApproxParams {
  double alpha = 1.0;
  SlowVary ell = SlowVary::one();
  double gbar_b = 0.0;      ///< Ḡ(b); 0 for an unbounded document
  double log_gbar_b = -1e308;  ///< log Ḡ(b), kept separately for exactness
  double F_b = 1.0;         ///< P[L <= b]
  PrefactorMode prefactor_mode = PrefactorMode::TruncationCorrected;

  /// Fills log_gbar_b from gbar_b.
  static ApproxParams make(double alpha, SlowVary ell, double gbar_b, double F_b,
                           PrefactorMode mode = PrefactorMode::TruncationCorrected);
};

ApproxParams approx_params(const CoupledModel& model, PrefactorMode mode = PrefactorMode::TruncationCorrected);

/// -n log(1 - Ḡ(b)), the incomplete-Gamma argument.
double tail_argument(const ApproxParams& p, double n);

/// c α / (n^α ℓ(min(n, 1/Ḡ(b)))) Γ(-n log(1 - Ḡ(b)), α), with c = 1 or 1/F_b.
double uniform_approx(const ApproxParams& p, double n);
double log_uniform_approx(const ApproxParams& p, double n);

/// Γ(α + 1) / (ℓ(n) n^α).
double power_law_limit(const ApproxParams& p, double n);
double log_power_law_limit(const ApproxParams& p, double n);

/// Exact P[N_b > n] for integer α and ℓ ≡ 1 (finite sum). Throws NotInteger
/// or EllNotOne outside that case.
double exact_integer_ccdf(const ApproxParams& p, double n);
double log_exact_integer_ccdf(const ApproxParams& p, double n);

enum class TailForm {
  FixedBound,  ///< α Ḡ^(α-1) / F_b (1 - Ḡ)^(n+1) / (n+1), for ℓ ≡ 1
  GeneralEll,  ///< c α / (ℓ(1/Ḡ) n) Ḡ^(α-1) (1 - Ḡ)^n
};

double exp_tail_asymptote(const ApproxParams& p, double n, TailForm form = TailForm::FixedBound);
double log_exp_tail_asymptote(const ApproxParams& p, double n, TailForm form = TailForm::FixedBound);

/// n log(1 - Ḡ(b)) - α log n, the log-scale body-plus-tail shape.
double log_body(const ApproxParams& p, double n);
/// (1 - eps) log_body.
double log_upper_bound(const ApproxParams& p, double n, double eps);

struct TransitionReport {
  double n_heuristic = 0.0;    ///< α / Ḡ(b)
  double n_fixed_point = 0.0;  ///< upper root of n Ḡ(b) = α log n
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

/// Throws NoRoot when Ḡ(b) >= α/e (or Ḡ(b) = 0).
TransitionReport transition_point(const ApproxParams& p);

/// n^(1+eps) Ḡ(b) <= 1.
bool theorem1_region_check(const ApproxParams& p, double n, double eps);

}  // namespace retx
