#pragma once

#include <cstdint>
#include <vector>

#include "retx/coupled_model.hpp"

namespace retx {

struct OracleResult {
  std::uint64_t n = 0;
  double value = 1.0;      ///< P[N_b > n]
  double log_value = 0.0;  ///< stays finite where value underflows
  double est_abs_err = 0.0;
  long subdivisions = 0;
};

inline constexpr double kOracleRelTol = 1e-12;
inline constexpr long kOracleMaxSubdivisions = 1'000'000;

/// P[N_b > n] = E[(1 - Ḡ(L_b))^n] by adaptive quadrature over the document
/// law. Throws QuadratureFailure when the tolerance is not met.
OracleResult ccdf_exact(const CoupledModel& model, std::uint64_t n);

/// ccdf_exact over a strictly increasing grid, evaluated in parallel.
/// Throws QuadratureFailure if the values increase beyond their error bars.
std::vector<OracleResult> ccdf_exact_curve(const CoupledModel& model, const std::vector<std::uint64_t>& grid,
                                           unsigned threads = 0);

}  // namespace retx
