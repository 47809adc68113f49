#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace retx {

enum class CurveSource { MonteCarlo, Oracle, UniformApprox, PowerLawLimit, ExpTail, ExactInteger, LogBody };

/// CSV column name for each source ("mc_ccdf" for Monte Carlo).
std::string_view column_name(CurveSource source) noexcept;

struct CurvePoint {
  std::uint64_t n = 0;
  double value = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

/// One curve over a count grid. For LogBody, `value` is a natural log of a
/// probability rather than a probability. Sources other than Monte Carlo
/// carry ci_lo = ci_hi = value.
struct CcdfCurve {
  CurveSource source = CurveSource::MonteCarlo;
  std::vector<CurvePoint> points;
};

}  // namespace retx
