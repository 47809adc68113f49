#include <string>
#include <vector>

#include "retx/cli/config.hpp"
#include "retx/error.hpp"

namespace retx::cli {
namespace {

using S = CurveSource;

ExperimentConfig exponential_pair(std::string name, double doc_rate, double channel_rate, double alpha) {
  ExperimentConfig cfg;
  cfg.name = std::move(name);
  ModelConfig m;
  m.channel = DistSpec::exponential(channel_rate);
  m.doc = DistSpec::exponential(doc_rate);
  m.bounds = {1.0, 2.0, 4.0};
  m.alpha = alpha;
  cfg.models.push_back(m);
  return cfg;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"example1a", "example1b", "example2", "example3", "example4"};
  return names;
}

ExperimentConfig preset(std::string_view name) {
  if (name == "example1a") {
    auto cfg = exponential_pair("example1a", 2.0, 1.0, 2.0);
    cfg.curves = {S::MonteCarlo, S::Oracle, S::UniformApprox, S::PowerLawLimit, S::ExactInteger};
    return cfg;
  }
  if (name == "example1b") {
    auto cfg = exponential_pair("example1b", 1.0, 2.0, 0.5);
    cfg.curves = {S::MonteCarlo, S::Oracle, S::UniformApprox, S::PowerLawLimit};
    return cfg;
  }
  if (name == "example2") {
    auto cfg = exponential_pair("example2", 2.0, 1.0, 2.0);
    cfg.curves = {S::MonteCarlo, S::Oracle, S::UniformApprox, S::PowerLawLimit,
                  S::ExactInteger, S::ExpTail, S::LogBody};
    return cfg;
  }
  if (name == "example3") {
    ExperimentConfig cfg;
    cfg.name = "example3";
    struct Pair {
      const char* label;
      double k;
      double channel_scale;
    };
    for (const Pair& p : {Pair{"k0p5", 0.5, 16.0}, Pair{"k1", 1.0, 4.0}, Pair{"k2", 2.0, 2.0}}) {
      ModelConfig m;
      m.label = p.label;
      m.channel = DistSpec::weibull(p.k, p.channel_scale);
      m.doc = DistSpec::weibull(p.k, 1.0);
      m.bounds = {8.0};
      m.alpha = 4.0;
      cfg.models.push_back(m);
    }
    cfg.curves = {S::MonteCarlo, S::Oracle, S::UniformApprox, S::PowerLawLimit, S::ExactInteger};
    return cfg;
  }
  if (name == "example4") {
    ExperimentConfig cfg;
    cfg.name = "example4";
    ModelConfig m;
    m.channel = DistSpec::exponential(2.0);
    m.doc = DistSpec::gamma(2.0, 2.0);
    m.bounds = {2.0, 3.0, 4.0};
    m.alpha = 1.0;
    m.ell = SlowVary::gamma_doc_exact(2.0, 2.0, 2.0);
    cfg.models.push_back(m);
    cfg.curves = {S::MonteCarlo, S::Oracle, S::UniformApprox, S::PowerLawLimit, S::ExpTail};
    return cfg;
  }
  fail(Errc::UnknownPreset, "unknown preset " + std::string(name));
}

}  // namespace retx::cli
