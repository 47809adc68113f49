#pragma once

#include <limits>
#include <string>
#include <variant>

#include "retx/dists.hpp"
#include "retx/random_stream.hpp"
#include "retx/slow_vary.hpp"

namespace retx {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// Document law defined from a channel law through the coupling
///   P[L > x] = min(1, Ḡ(x)^α / ℓ(1/Ḡ(x))).
/// Only the tail is constrained by the coupling; the clamp completes it near
/// the origin. Construct through derive_doc_law().
class DerivedLaw {
 public:
  DerivedLaw(DistSpec channel, double alpha, SlowVary ell, double x_anchor);

  const DistSpec& channel() const noexcept { return channel_; }
  double alpha() const noexcept { return alpha_; }
  const SlowVary& ell() const noexcept { return ell_; }
  /// Smallest checked grid point where the unclamped expression is <= 1.
  double x_anchor() const noexcept { return x_anchor_; }

  /// Unclamped log Ḡ^α/ℓ(1/Ḡ) as a function of s = log Ḡ.
  double raw_log_ccdf_at(double log_gbar) const;

  double log_ccdf(double x) const;
  double log_cdf(double x) const;
  /// Central difference of the cdf, step max(1e-6, 1e-6 x).
  double pdf(double x) const;

  /// log Ḡ at the point where log P[L > x] = t. Skips the channel inverse.
  double log_gbar_at_log_ccdf(double t) const;
  double inverse_log_ccdf(double t) const;

 private:
  DistSpec channel_;
  double alpha_;
  SlowVary ell_;
  double x_anchor_;
};

/// Either a parametric law or a derived one, behind one interface.
class DocLaw {
 public:
  DocLaw(DistSpec d) : law_(d) {}  // NOLINT(google-explicit-constructor)
  DocLaw(DerivedLaw d) : law_(std::move(d)) {}  // NOLINT(google-explicit-constructor)

  bool is_derived() const noexcept { return std::holds_alternative<DerivedLaw>(law_); }
  const DistSpec* parametric() const noexcept { return std::get_if<DistSpec>(&law_); }
  const DerivedLaw* derived() const noexcept { return std::get_if<DerivedLaw>(&law_); }
  std::string describe() const;

  double log_ccdf(double x) const;
  double log_cdf(double x) const;
  double ccdf(double x) const;
  double cdf(double x) const;
  double pdf(double x) const;
  double inverse_log_ccdf(double t) const;
  double quantile_ccdf(double q) const;

 private:
  std::variant<DistSpec, DerivedLaw> law_;
};

/// L_b: the document law conditioned on L <= b, P[L_b <= x] = F(x)/F(b).
/// b = kUnbounded leaves the law untruncated.
class BoundedDoc {
 public:
  /// Throws DegenerateTruncation when F(b) < 1e-300.
  BoundedDoc(DocLaw base, double bound);

  const DocLaw& base() const noexcept { return base_; }
  double bound() const noexcept { return bound_; }
  bool unbounded() const noexcept { return bound_ == kUnbounded; }

  /// F(b) = P[L <= b].
  double mass() const noexcept { return mass_; }
  /// log P[L > b]; -inf when unbounded.
  double log_tail_at_bound() const noexcept { return log_tail_b_; }

  double ccdf(double x) const;
  double cdf(double x) const;

  /// Inverse transform on the truncated law. The ccdf level is drawn as
  /// F̄(b) + U F(b), which has the same law as U F(b) fed to the cdf
  /// inverse but keeps relative precision deep in the tail.
  double sample(RandomStream& rng) const;

 private:
  DocLaw base_;
  double bound_;
  double mass_;
  double log_tail_b_;
};

}  // namespace retx
