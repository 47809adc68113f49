#include "retx/cli/experiment.hpp"

#include <algorithm>
#include <cmath>

#include "retx/error.hpp"
#include "retx/mc.hpp"
#include "retx/oracle.hpp"

namespace retx::cli {
namespace {

constexpr std::uint64_t kFallbackNMax = 10'000;

CcdfCurve point_curve(CurveSource source, const std::vector<std::uint64_t>& grid, auto&& value_at) {
  CcdfCurve c{source, {}};
  for (std::uint64_t n : grid) {
    const std::optional<double> v = value_at(n);
    if (v) c.points.push_back({n, *v, *v, *v});
  }
  return c;
}

bool integer_alpha(double alpha) { return std::fabs(alpha - std::round(alpha)) <= 1e-12; }

}  // namespace

double resolve_alpha(const ModelConfig& m) {
  if (m.alpha) return *m.alpha;
  if (m.doc) {
    if (auto a = infer_alpha(m.channel, *m.doc)) return *a;
  }
  fail(Errc::ConfigInvalid, "alpha is required for this model");
}

CoupledModel build_model(const ModelConfig& m, double bound, bool override_coupling,
                         std::optional<double>* residual) {
  const double alpha = resolve_alpha(m);
  if (!m.doc) return derive_doc_law(m.channel, alpha, m.ell, bound);
  CoupledModel model = make_parametric(m.channel, *m.doc, bound, alpha, m.ell);
  const CouplingReport rep = validate_coupling(model);
  if (residual) *residual = rep.max_residual;
  if (rep.max_residual > kCouplingTolerance && !override_coupling) {
    fail(Errc::CouplingInvalid, "coupling residual " + format_number(rep.max_residual) + " exceeds " +
                                    format_number(kCouplingTolerance) + " for " + m.doc->describe() + " on " +
                                    m.channel.describe());
  }
  return model;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  ExperimentResult result;
  std::uint64_t run_index = 0;

  for (const ModelConfig& m : cfg.models) {
    for (double bound : m.bounds) {
      BoundRun run;
      BoundReport& rep = run.report;
      rep.label = m.label;
      rep.bound = bound;
      const CoupledModel model = build_model(m, bound, cfg.override_coupling, &rep.coupling_residual);
      const ApproxParams params = approx_params(model, cfg.prefactor);
      rep.gbar_b = params.gbar_b;
      rep.F_b = params.F_b;
      rep.alpha = params.alpha;

      try {
        rep.transition = transition_point(params);
      } catch (const Error& e) {
        if (e.code() != Errc::NoRoot) throw;
        rep.notes.push_back("no transition fixed point");
      }

      std::uint64_t n_max = cfg.grid.n_max;
      if (n_max == 0) {
        n_max = rep.transition ? static_cast<std::uint64_t>(std::ceil(10.0 * rep.transition->n_fixed_point))
                               : kFallbackNMax;
      }
      n_max = std::max(n_max, cfg.grid.n_min);
      std::vector<std::uint64_t> grid = log_grid(cfg.grid.n_min, n_max, cfg.grid.points_per_decade);

      // Keep the grid where the oracle still expects at least ten exceedances.
      std::vector<OracleResult> oracle = ccdf_exact_curve(model, grid, cfg.workers);
      const double floor = 10.0 / static_cast<double>(cfg.samples);
      std::size_t keep = 1;
      while (keep < grid.size() && oracle[keep].value >= floor) ++keep;
      grid.resize(keep);
      oracle.resize(keep);
      run.grid = grid;

      std::optional<CcdfCurve> mc;
      if (cfg.wants(CurveSource::MonteCarlo)) {
        std::vector<std::uint64_t> tally_grid{0};
        tally_grid.insert(tally_grid.end(), grid.begin(), grid.end());
        const Tally tally = run_tally(model, tally_grid, cfg.samples, cfg.seed + run_index, cfg.workers);
        if (tally.exceed_counts().front() != tally.total()) rep.notes.push_back("sanity: some draw had N = 0");
        CcdfCurve curve = empirical_ccdf(tally, cfg.confidence);
        curve.points.erase(curve.points.begin());
        mc = curve;
      }

      for (CurveSource s : cfg.curves) {
        switch (s) {
          case CurveSource::MonteCarlo:
            run.curves.push_back(*mc);
            break;
          case CurveSource::Oracle: {
            CcdfCurve c{s, {}};
            for (const auto& o : oracle) c.points.push_back({o.n, o.value, o.value, o.value});
            run.curves.push_back(c);
            break;
          }
          case CurveSource::UniformApprox:
            run.curves.push_back(point_curve(s, grid, [&](std::uint64_t n) -> std::optional<double> {
              return uniform_approx(params, static_cast<double>(n));
            }));
            break;
          case CurveSource::PowerLawLimit:
            run.curves.push_back(point_curve(s, grid, [&](std::uint64_t n) -> std::optional<double> {
              return power_law_limit(params, static_cast<double>(n));
            }));
            break;
          case CurveSource::ExpTail: {
            if (params.gbar_b <= 0.0) {
              rep.notes.push_back("exp_tail skipped: unbounded document");
              break;
            }
            const TailForm form = params.ell.is_one() ? TailForm::FixedBound : TailForm::GeneralEll;
            if (form == TailForm::GeneralEll) rep.notes.push_back("exp_tail uses the general-ell form");
            run.curves.push_back(point_curve(s, grid, [&](std::uint64_t n) -> std::optional<double> {
              return exp_tail_asymptote(params, static_cast<double>(n), form);
            }));
            break;
          }
          case CurveSource::ExactInteger:
            if (!integer_alpha(params.alpha) || !params.ell.is_one()) {
              rep.notes.push_back("exact_integer skipped: needs integer alpha and ell == 1");
              break;
            }
            run.curves.push_back(point_curve(s, grid, [&](std::uint64_t n) -> std::optional<double> {
              return exact_integer_ccdf(params, static_cast<double>(n));
            }));
            break;
          case CurveSource::LogBody:
            run.curves.push_back(point_curve(s, grid, [&](std::uint64_t n) -> std::optional<double> {
              if (n < 2) return std::nullopt;
              return log_body(params, static_cast<double>(n));
            }));
            break;
        }
      }

      for (const CcdfCurve& c : run.curves) {
        if (c.source == CurveSource::MonteCarlo || c.source == CurveSource::Oracle ||
            c.source == CurveSource::LogBody) {
          continue;
        }
        std::optional<double> worst;
        for (const CurvePoint& pt : c.points) {
          const auto i = static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), pt.n) - grid.begin());
          if (pt.n < kReportMinN || oracle[i].value < kReportOracleFloor) continue;
          worst = std::max(worst.value_or(0.0), std::fabs(pt.value / oracle[i].value - 1.0));
        }
        if (worst) rep.max_rel_err[c.source] = *worst;
      }
      if (mc) {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
          if (oracle[i].value * static_cast<double>(cfg.samples) < kCoverageMinCount) continue;
          ++rep.coverage_points;
          const CurvePoint& pt = mc->points[i];
          if (pt.ci_lo <= oracle[i].value && oracle[i].value <= pt.ci_hi) ++hits;
        }
        if (rep.coverage_points > 0) {
          rep.coverage = static_cast<double>(hits) / static_cast<double>(rep.coverage_points);
        }
      }

      result.runs.push_back(std::move(run));
      ++run_index;
    }
  }
  return result;
}

}  // namespace retx::cli
