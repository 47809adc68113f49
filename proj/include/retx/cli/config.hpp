#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "retx/asym.hpp"
#include "retx/curve.hpp"
#include "retx/dists.hpp"
#include "retx/slow_vary.hpp"

namespace retx::cli {

/// One channel/document pair, run at every listed bound. An absent
/// document law means the document is derived from the channel, α and ℓ.
struct ModelConfig {
  std::string label;  ///< empty for a single unlabeled model
  DistSpec channel = DistSpec::exponential(1.0);
  std::optional<DistSpec> doc;
  std::vector<double> bounds;
  std::optional<double> alpha;
  SlowVary ell = SlowVary::one();
};

struct GridConfig {
  std::uint64_t n_min = 1;
  std::uint64_t n_max = 0;  ///< 0: ten times the transition fixed point
  int points_per_decade = 24;
};

enum class Format { Csv, Json };

struct ExperimentConfig {
  std::string name = "custom";
  std::vector<ModelConfig> models;
  GridConfig grid;
  std::uint64_t samples = 10'000'000;
  std::uint64_t seed = 1;
  unsigned workers = 4;
  double confidence = 0.95;
  std::vector<CurveSource> curves;
  std::string output;  ///< path prefix; defaults to the config name
  Format format = Format::Csv;
  bool override_coupling = false;
  PrefactorMode prefactor = PrefactorMode::TruncationCorrected;

  bool wants(CurveSource s) const;
};

/// Flat `key.path = value` text, `#` comments, lists as `[a, b]`.
/// Throws ConfigInvalid on unknown keys, malformed values or failed checks.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);
std::string to_text(const ExperimentConfig& cfg);
void validate(const ExperimentConfig& cfg);

std::optional<CurveSource> parse_source(std::string_view name);
std::string_view source_key(CurveSource s) noexcept;

ExperimentConfig preset(std::string_view name);
const std::vector<std::string>& preset_names();

/// Shortest round-trip form, with "inf"/"-inf"/"nan" spelled out.
std::string format_number(double v);

}  // namespace retx::cli
