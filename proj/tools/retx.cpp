// retx: retransmission-count experiments from the command line.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "retx/asym.hpp"
#include "retx/cli/config.hpp"
#include "retx/cli/experiment.hpp"
#include "retx/cli/output.hpp"
#include "retx/error.hpp"
#include "retx/oracle.hpp"

using namespace retx;
using namespace retx::cli;

namespace {

int exit_code(Errc code) {
  switch (code) {
    case Errc::ConfigInvalid:
    case Errc::UnknownPreset:
    case Errc::CouplingInvalid:
      return 2;
    case Errc::Overflow:
    case Errc::NonConvergence:
    case Errc::DegenerateTruncation:
    case Errc::NotMonotone:
    case Errc::QuadratureFailure:
    case Errc::NotInteger:
    case Errc::EllNotOne:
    case Errc::NoRoot:
      return 3;
    default:
      return 1;
  }
}

struct Source {
  std::string config;
  std::string preset;
};

struct Overrides {
  std::optional<std::uint64_t> samples, seed, n_max;
  std::optional<unsigned> workers;
  std::optional<double> confidence;
  std::optional<std::string> output, format;
  bool override_coupling = false;
  bool plain = false;
};

void add_source(CLI::App* cmd, Source& src) {
  auto* c = cmd->add_option("-c,--config", src.config, "Config file");
  auto* p = cmd->add_option("-p,--preset", src.preset, "Preset name");
  c->excludes(p);
}

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--samples", o.samples, "Monte Carlo sample count");
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--workers", o.workers, "Worker threads");
  cmd->add_option("--confidence", o.confidence, "Confidence level of the Monte Carlo intervals");
  cmd->add_option("--n-max", o.n_max, "Largest grid count (0 = automatic)");
  cmd->add_option("-o,--output", o.output, "Output path prefix");
  cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--override-coupling", o.override_coupling, "Run even if the coupling check fails");
  cmd->add_flag("--plain", o.plain, "Drop the 1/P[L <= b] prefactor from the approximations");
}

void apply(ExperimentConfig& cfg, const Overrides& o) {
  if (o.samples) cfg.samples = *o.samples;
  if (o.seed) cfg.seed = *o.seed;
  if (o.workers) cfg.workers = *o.workers;
  if (o.confidence) cfg.confidence = *o.confidence;
  if (o.n_max) cfg.grid.n_max = *o.n_max;
  if (o.output) cfg.output = *o.output;
  if (o.format) cfg.format = *o.format == "json" ? Format::Json : Format::Csv;
  if (o.override_coupling) cfg.override_coupling = true;
  if (o.plain) cfg.prefactor = PrefactorMode::Plain;
  validate(cfg);
}

ExperimentConfig load(const Source& src) {
  if (!src.config.empty()) return load_config(src.config);
  if (!src.preset.empty()) return preset(src.preset);
  fail(Errc::ConfigInvalid, "give --config or --preset");
}

const ModelConfig& pick_model(const ExperimentConfig& cfg, const std::string& label) {
  for (const auto& m : cfg.models) {
    if (m.label == label) return m;
  }
  if (label.empty()) return cfg.models.front();
  fail(Errc::ConfigInvalid, "no model labelled " + label);
}

void print_report(const ExperimentResult& result) {
  for (const BoundRun& run : result.runs) {
    const BoundReport& r = run.report;
    std::printf("%s%sb=%s  alpha=%s  Gbar(b)=%.6g  F(b)=%.6g  points=%zu\n", r.label.c_str(),
                r.label.empty() ? "" : "  ", format_number(r.bound).c_str(), format_number(r.alpha).c_str(), r.gbar_b,
                r.F_b, run.grid.size());
    if (r.coupling_residual) std::printf("  coupling residual  %.3g\n", *r.coupling_residual);
    if (r.transition) {
      std::printf("  transition         heuristic %.6g  fixed point %.6g\n", r.transition->n_heuristic,
                  r.transition->n_fixed_point);
    }
    for (const auto& [src, e] : r.max_rel_err) {
      std::printf("  max rel err %-15s %.4g\n", std::string(column_name(src)).c_str(), e);
    }
    if (r.coverage) std::printf("  mc coverage        %.4f over %zu points\n", *r.coverage, r.coverage_points);
    for (const auto& note : r.notes) std::printf("  note: %s\n", note.c_str());
  }
}

int run_and_emit(ExperimentConfig cfg, const Overrides& o) {
  apply(cfg, o);
  const ExperimentResult result = run_experiment(cfg);
  print_report(result);
  for (const auto& path : emit_curves(result, cfg)) std::printf("wrote %s\n", path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Retransmission-count experiments: simulation, exact quadrature and asymptotics"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides run_opts;
  auto* run = app.add_subcommand("run", "Run an experiment from a config file");
  run->add_option("config", config_path, "Config file")->required();
  add_overrides(run, run_opts);

  std::string preset_name;
  bool print_config = false;
  bool list = false;
  Overrides preset_opts;
  auto* pre = app.add_subcommand("preset", "Run a built-in experiment");
  pre->add_option("name", preset_name, "Preset name");
  pre->add_flag("--print-config", print_config, "Print the preset as a config file and exit");
  pre->add_flag("--list", list, "List preset names");
  add_overrides(pre, preset_opts);

  Source src;
  std::string label;
  double bound = 0.0;
  std::vector<std::uint64_t> counts;
  bool plain = false;
  auto* orc = app.add_subcommand("oracle", "Exact P[N_b > n] by quadrature");
  auto* apx = app.add_subcommand("approx", "Closed-form approximations at given counts");
  for (auto* cmd : {orc, apx}) {
    add_source(cmd, src);
    cmd->add_option("--label", label, "Model label when the config holds several");
    cmd->add_option("-b,--bound", bound, "Document bound (inf allowed)")->required();
    cmd->add_option("-n,--n", counts, "Counts")->required()->delimiter(',');
  }
  apx->add_flag("--plain", plain, "Drop the 1/P[L <= b] prefactor");

  auto* trn = app.add_subcommand("transition", "Transition points for every model and bound");
  add_source(trn, src);
  auto* val = app.add_subcommand("validate", "Check a config and its coupling");
  add_source(val, src);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*run) return run_and_emit(load_config(config_path), run_opts);

    if (*pre) {
      if (list || preset_name.empty()) {
        for (const auto& n : preset_names()) std::printf("%s\n", n.c_str());
        return 0;
      }
      ExperimentConfig cfg = preset(preset_name);
      if (print_config) {
        apply(cfg, preset_opts);
        std::fputs(to_text(cfg).c_str(), stdout);
        return 0;
      }
      return run_and_emit(cfg, preset_opts);
    }

    if (*orc || *apx) {
      const ExperimentConfig cfg = load(src);
      const CoupledModel model = build_model(pick_model(cfg, label), bound, cfg.override_coupling);
      if (*orc) {
        std::printf("n,oracle,log_oracle,est_abs_err,subdivisions\n");
        for (std::uint64_t n : counts) {
          const OracleResult r = ccdf_exact(model, n);
          std::printf("%llu,%s,%s,%s,%ld\n", static_cast<unsigned long long>(n), format_number(r.value).c_str(),
                      format_number(r.log_value).c_str(), format_number(r.est_abs_err).c_str(), r.subdivisions);
        }
        return 0;
      }
      const ApproxParams p = approx_params(model, plain ? PrefactorMode::Plain : cfg.prefactor);
      std::printf("n,uniform_approx,power_law,exp_tail,exact_integer,log_body\n");
      for (std::uint64_t n : counts) {
        const double dn = static_cast<double>(n);
        auto guarded = [](auto&& f) -> std::string {
          try {
            return format_number(f());
          } catch (const Error&) {
            return "";
          }
        };
        const TailForm form = p.ell.is_one() ? TailForm::FixedBound : TailForm::GeneralEll;
        std::printf("%llu,%s,%s,%s,%s,%s\n", static_cast<unsigned long long>(n),
                    guarded([&] { return uniform_approx(p, dn); }).c_str(),
                    guarded([&] { return power_law_limit(p, dn); }).c_str(),
                    guarded([&] { return exp_tail_asymptote(p, dn, form); }).c_str(),
                    guarded([&] { return exact_integer_ccdf(p, dn); }).c_str(),
                    guarded([&] { return log_body(p, dn); }).c_str());
      }
      return 0;
    }

    if (*trn) {
      const ExperimentConfig cfg = load(src);
      std::printf("label,bound,gbar_b,n_heuristic,n_fixed_point\n");
      for (const auto& m : cfg.models) {
        for (double b : m.bounds) {
          const ApproxParams p = approx_params(build_model(m, b, cfg.override_coupling), cfg.prefactor);
          const TransitionReport t = transition_point(p);
          std::printf("%s,%s,%s,%s,%s\n", m.label.c_str(), format_number(b).c_str(), format_number(p.gbar_b).c_str(),
                      format_number(t.n_heuristic).c_str(), format_number(t.n_fixed_point).c_str());
        }
      }
      return 0;
    }

    if (*val) {
      const ExperimentConfig cfg = load(src);
      for (const auto& m : cfg.models) {
        for (double b : m.bounds) {
          std::optional<double> residual;
          build_model(m, b, true, &residual);
          const bool ok = !residual || *residual <= kCouplingTolerance;
          std::printf("%s%sb=%s  %s", m.label.c_str(), m.label.empty() ? "" : "  ", format_number(b).c_str(),
                      ok ? "ok" : "FAIL");
          if (residual) std::printf("  coupling residual %.3g", *residual);
          std::printf("\n");
          if (!ok && !cfg.override_coupling) {
            fail(Errc::CouplingInvalid, "coupling residual above " + format_number(kCouplingTolerance));
          }
        }
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "retx: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "retx: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
