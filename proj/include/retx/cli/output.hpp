#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "retx/cli/config.hpp"
#include "retx/cli/experiment.hpp"

namespace retx::cli {

/// Frozen CSV header order.
const std::vector<std::string>& csv_columns();

std::string curves_csv(const BoundRun& run);
std::string curves_json(const BoundRun& run);
std::string meta_json(const ExperimentResult& result, const ExperimentConfig& cfg);

/// `<prefix>[_<label>]_b<bound>`; the prefix is resolved against
/// RETX_OUTPUT_DIR when relative.
std::string output_stem(const ExperimentConfig& cfg, const BoundRun& run);
std::string output_prefix(const ExperimentConfig& cfg);

/// Writes one curve file per bound plus `<prefix>.meta.json`; returns the
/// paths written. Throws IoFailure.
std::vector<std::string> emit_curves(const ExperimentResult& result, const ExperimentConfig& cfg);

struct CurveTable {
  std::vector<std::uint64_t> n;
  std::map<std::string, std::vector<std::optional<double>>> columns;
};

CurveTable parse_curves_csv(const std::string& text);
CurveTable read_curves_csv(const std::string& path);

}  // namespace retx::cli
