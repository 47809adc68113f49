#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "retx/coupled_model.hpp"
#include "retx/curve.hpp"
#include "retx/random_stream.hpp"

namespace retx {

/// Saturation value for counts that do not fit (p so small that the
/// geometric draw overflows).
inline constexpr std::uint64_t kCountSaturated = std::uint64_t{1} << 62;

/// Geometric count on {1, 2, ...} with success probability p, by inversion.
std::uint64_t geometric_count(double p, RandomStream& rng);

/// One retransmission count: draws L_b, then the geometric count given
/// p = Ḡ(L_b).
std::uint64_t sample_N(const CoupledModel& model, RandomStream& rng);

struct NaiveDraw {
  std::uint64_t count = 0;
  bool capped = false;
};

/// Literal loop over channel periods A_1, A_2, ... until one exceeds L_b.
NaiveDraw sample_N_naive(const CoupledModel& model, RandomStream& rng, std::uint64_t cap);

class Tally {
 public:
  Tally() = default;
  explicit Tally(std::vector<std::uint64_t> grid);

  void add(std::uint64_t count);
  /// Adds another tally over the same grid.
  void merge(const Tally& other);

  const std::vector<std::uint64_t>& grid() const noexcept { return grid_; }
  /// Number of samples with N > grid[i].
  const std::vector<std::uint64_t>& exceed_counts() const noexcept { return exceed_; }
  std::uint64_t total() const noexcept { return total_; }

 private:
  friend Tally run_tally(const CoupledModel&, const std::vector<std::uint64_t>&, std::uint64_t, std::uint64_t,
                         unsigned);
  std::vector<std::uint64_t> grid_;
  std::vector<std::uint64_t> exceed_;
  std::uint64_t total_ = 0;
};

/// Splits `samples` across `workers` threads; worker w draws from
/// RandomStream(seed, w). Identical (seed, workers) give identical tallies.
Tally run_tally(const CoupledModel& model, const std::vector<std::uint64_t>& grid, std::uint64_t samples,
                std::uint64_t seed, unsigned workers);

struct Interval {
  double lo;
  double hi;
};

/// Wilson score interval for k successes in n trials.
Interval wilson_interval(std::uint64_t k, std::uint64_t n, double confidence);

CcdfCurve empirical_ccdf(const Tally& tally, double confidence);

/// Integers round(10^(j/per_decade)) within [n_min, n_max], deduplicated,
/// always including both ends.
std::vector<std::uint64_t> log_grid(std::uint64_t n_min, std::uint64_t n_max, int per_decade);

/// Kolmogorov-Smirnov statistics.
double ks_statistic_uniform(std::vector<double> sample);
double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b);
/// Large-sample 95% critical values.
double ks_critical_95(std::size_t n);
double ks_critical_95(std::size_t n, std::size_t m);

}  // namespace retx
