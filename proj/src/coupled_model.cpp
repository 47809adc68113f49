#include "retx/coupled_model.hpp"

#include <algorithm>
#include <cmath>

#include "retx/error.hpp"

namespace retx {

CoupledModel::CoupledModel(DistSpec channel, BoundedDoc doc, double alpha, SlowVary ell, CouplingMode mode)
    : channel_(channel), doc_(std::move(doc)), alpha_(alpha), ell_(std::move(ell)), mode_(mode) {
  require(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive");
  log_gbar_b_ = channel_.log_ccdf(doc_.bound());
  gbar_b_ = std::exp(log_gbar_b_);
}

double CoupledModel::log_gbar_at_doc_log_ccdf(double t) const {
  if (const auto* d = doc_.base().derived()) return d->log_gbar_at_log_ccdf(t);
  return channel_.log_ccdf(doc_.base().inverse_log_ccdf(t));
}

double effective_upper(const DistSpec& channel, double bound) {
  if (bound != kUnbounded) return bound;
  return channel.quantile_ccdf(1e-12);
}

CoupledModel make_parametric(const DistSpec& channel, const DistSpec& doc, double bound, double alpha,
                             const SlowVary& ell) {
  return CoupledModel(channel, BoundedDoc(DocLaw(doc), bound), alpha, ell, CouplingMode::Parametric);
}

CoupledModel derive_doc_law(const DistSpec& channel, double alpha, const SlowVary& ell, double bound) {
  require(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive");
  require(bound > 0.0, "bound must be positive");
  const DerivedLaw probe(channel, alpha, ell, 0.0);

  constexpr int kPoints = 256;
  const double hi = effective_upper(channel, bound);
  double x_anchor = hi;
  bool anchored = false;
  double prev = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const double x = hi * i / (kPoints - 1);
    const double raw = probe.raw_log_ccdf_at(channel.log_ccdf(x));
    if (i > 0 && raw > prev + 1e-12 * std::max(1.0, std::fabs(prev))) {
      fail(Errc::NotMonotone, "derived document ccdf increases near x = " + std::to_string(x));
    }
    if (!anchored && raw <= 0.0) {
      x_anchor = x;
      anchored = true;
    }
    prev = raw;
  }
  DerivedLaw law(channel, alpha, ell, x_anchor);
  return CoupledModel(channel, BoundedDoc(DocLaw(std::move(law)), bound), alpha, ell, CouplingMode::Derived);
}

CouplingReport validate_coupling(const CoupledModel& model) {
  require(model.mode() == CouplingMode::Parametric, "validate_coupling expects a parametric model");
  const DistSpec& channel = model.channel();
  const DocLaw& doc = model.doc().base();

  const double hi = effective_upper(channel, model.bound());
  const double lo = std::min(channel.quantile_ccdf(0.9), hi);
  constexpr int kPoints = 64;

  CouplingReport report;
  report.grid.reserve(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    const double x = (hi == lo) ? hi : lo + (hi - lo) * i / (kPoints - 1);
    const double log_g = channel.log_ccdf(x);
    const double log_ratio = doc.log_ccdf(x) + model.ell().log_value(std::exp(-log_g)) - model.alpha() * log_g;
    const double residual = std::fabs(std::expm1(log_ratio));
    report.grid.push_back({x, std::exp(log_g), residual});
    report.max_residual = std::max(report.max_residual, residual);
    if (hi == lo) break;
  }
  return report;
}

std::optional<double> infer_alpha(const DistSpec& channel, const DistSpec& doc) {
  const auto& c = channel.family();
  const auto& d = doc.family();
  if (const auto* ce = std::get_if<Exponential>(&c)) {
    if (const auto* de = std::get_if<Exponential>(&d)) return de->rate / ce->rate;
    if (const auto* dg = std::get_if<GammaLaw>(&d)) return dg->rate / ce->rate;
  }
  if (const auto* cw = std::get_if<Weibull>(&c)) {
    if (const auto* dw = std::get_if<Weibull>(&d); dw && dw->k == cw->k) {
      return std::pow(cw->scale / dw->scale, cw->k);
    }
  }
  return std::nullopt;
}

}  // namespace retx
