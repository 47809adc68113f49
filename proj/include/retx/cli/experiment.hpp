#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "retx/asym.hpp"
#include "retx/cli/config.hpp"
#include "retx/coupled_model.hpp"
#include "retx/curve.hpp"

namespace retx::cli {

/// Agreement summary for one (model, bound) run.
struct BoundReport {
  std::string label;
  double bound = 0.0;
  double gbar_b = 0.0;
  double F_b = 1.0;
  double alpha = 0.0;
  std::optional<double> coupling_residual;  ///< parametric models only
  /// Max |curve/oracle - 1| over grid points with n >= 10 and oracle >= 1e-6.
  /// A source is absent when no grid point qualifies.
  std::map<CurveSource, double> max_rel_err;
  std::optional<double> coverage;  ///< fraction of Monte Carlo CIs containing the oracle
  std::size_t coverage_points = 0;  ///< points with expected exceedance count >= 100
  std::optional<TransitionReport> transition;
  std::vector<std::string> notes;
};

struct BoundRun {
  BoundReport report;
  std::vector<std::uint64_t> grid;
  std::vector<CcdfCurve> curves;
};

struct ExperimentResult {
  std::vector<BoundRun> runs;
};

inline constexpr double kReportOracleFloor = 1e-6;
inline constexpr std::uint64_t kReportMinN = 10;
inline constexpr double kCoverageMinCount = 100.0;

/// Builds the coupled model for one bound. Parametric pairs are checked
/// with validate_coupling; a residual above kCouplingTolerance throws
/// CouplingInvalid unless `override_coupling`.
CoupledModel build_model(const ModelConfig& m, double bound, bool override_coupling,
                         std::optional<double>* residual = nullptr);

/// α as configured, or inferred from a parametric pair.
double resolve_alpha(const ModelConfig& m);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace retx::cli
