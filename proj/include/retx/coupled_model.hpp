#pragma once

#include <optional>
#include <vector>

#include "retx/dists.hpp"
#include "retx/doc_law.hpp"
#include "retx/slow_vary.hpp"

namespace retx {

enum class CouplingMode { Parametric, Derived };

/// Channel availability law A, bounded document law L_b, and the coupling
/// P[L > x] = Ḡ(x)^α / ℓ(1/Ḡ(x)) that ties their tails together.
class CoupledModel {
 public:
  CoupledModel(DistSpec channel, BoundedDoc doc, double alpha, SlowVary ell, CouplingMode mode);

  const DistSpec& channel() const noexcept { return channel_; }
  const BoundedDoc& doc() const noexcept { return doc_; }
  double alpha() const noexcept { return alpha_; }
  const SlowVary& ell() const noexcept { return ell_; }
  CouplingMode mode() const noexcept { return mode_; }

  double bound() const noexcept { return doc_.bound(); }
  /// Ḡ(b) = P[A > b]; 0 when unbounded.
  double gbar_b() const noexcept { return gbar_b_; }
  double log_gbar_b() const noexcept { return log_gbar_b_; }
  /// F(b) = P[L <= b].
  double doc_mass() const noexcept { return doc_.mass(); }

  /// log Ḡ(x) at the document size x where log P[L > x] = t.
  double log_gbar_at_doc_log_ccdf(double t) const;

 private:
  DistSpec channel_;
  BoundedDoc doc_;
  double alpha_;
  SlowVary ell_;
  CouplingMode mode_;
  double gbar_b_;
  double log_gbar_b_;
};

/// Both laws given; the coupling is a claim to be checked by
/// validate_coupling().
CoupledModel make_parametric(const DistSpec& channel, const DistSpec& doc, double bound, double alpha,
                             const SlowVary& ell);

/// Document law built from the channel law, α and ℓ. Throws NotMonotone if
/// the implied ccdf increases anywhere on a 256-point grid over [0, b].
CoupledModel derive_doc_law(const DistSpec& channel, double alpha, const SlowVary& ell, double bound);

struct ResidualPoint {
  double x;
  double gbar;
  double residual;  ///< |F̄(x) ℓ(1/Ḡ(x)) Ḡ(x)^-α - 1|
};

struct CouplingReport {
  double max_residual = 0.0;
  std::vector<ResidualPoint> grid;
};

inline constexpr double kCouplingTolerance = 0.05;

/// Residual of the coupling on 64 points of [x_lo, b], where x_lo is the
/// first point with Ḡ(x) <= 0.9. Parametric models only.
CouplingReport validate_coupling(const CoupledModel& model);

/// α for the pairs where the coupling holds in closed form: exponential
/// pairs, Weibull pairs of equal index, and a Gamma document on an
/// exponential channel.
std::optional<double> infer_alpha(const DistSpec& channel, const DistSpec& doc);

/// Finite upper end for grids over [0, b]: b itself, or the point where
/// Ḡ drops to 1e-12 when b is unbounded.
double effective_upper(const DistSpec& channel, double bound);

}  // namespace retx
