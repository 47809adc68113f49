#include "retx/mc.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <thread>

#include "retx/error.hpp"

namespace retx {

std::string_view column_name(CurveSource source) noexcept {
  switch (source) {
    case CurveSource::MonteCarlo: return "mc_ccdf";
    case CurveSource::Oracle: return "oracle";
    case CurveSource::UniformApprox: return "uniform_approx";
    case CurveSource::PowerLawLimit: return "power_law";
    case CurveSource::ExpTail: return "exp_tail";
    case CurveSource::ExactInteger: return "exact_integer";
    case CurveSource::LogBody: return "log_body";
  }
  return "unknown";
}

std::uint64_t geometric_count(double p, RandomStream& rng) {
  if (p >= 1.0 - 1e-15) return 1;
  if (!(p > 0.0)) return kCountSaturated;
  const double n = std::ceil(std::log(rng.uniform()) / std::log1p(-p));
  if (!(n < static_cast<double>(kCountSaturated))) return kCountSaturated;
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(n));
}

std::uint64_t sample_N(const CoupledModel& model, RandomStream& rng) {
  const double length = model.doc().sample(rng);
  return geometric_count(model.channel().ccdf(length), rng);
}

NaiveDraw sample_N_naive(const CoupledModel& model, RandomStream& rng, std::uint64_t cap) {
  require(cap >= 1, "cap must be at least 1");
  const double length = model.doc().sample(rng);
  for (std::uint64_t n = 1;; ++n) {
    if (model.channel().sample(rng) > length) return {n, false};
    if (n == cap) return {cap, true};
  }
}

Tally::Tally(std::vector<std::uint64_t> grid) : grid_(std::move(grid)), exceed_(grid_.size(), 0) {
  require(std::is_sorted(grid_.begin(), grid_.end()), "tally grid must be sorted");
}

void Tally::add(std::uint64_t count) {
  ++total_;
  for (std::size_t i = 0; i < grid_.size() && grid_[i] < count; ++i) ++exceed_[i];
}

void Tally::merge(const Tally& other) {
  require(other.grid_ == grid_, "cannot merge tallies over different grids");
  total_ += other.total_;
  for (std::size_t i = 0; i < exceed_.size(); ++i) exceed_[i] += other.exceed_[i];
}

Tally run_tally(const CoupledModel& model, const std::vector<std::uint64_t>& grid, std::uint64_t samples,
                std::uint64_t seed, unsigned workers) {
  require(samples >= 1, "samples must be at least 1");
  require(workers >= 1, "workers must be at least 1");
  Tally result(grid);

  // Per worker: histogram of how many grid points each draw exceeds.
  std::vector<std::vector<std::uint64_t>> hist(workers, std::vector<std::uint64_t>(grid.size() + 1, 0));
  auto work = [&](unsigned w) {
    const std::uint64_t share = samples / workers + (w < samples % workers ? 1 : 0);
    RandomStream rng(seed, w);
    auto& h = hist[w];
    for (std::uint64_t i = 0; i < share; ++i) {
      const std::uint64_t n = sample_N(model, rng);
      h[std::lower_bound(grid.begin(), grid.end(), n) - grid.begin()]++;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  for (unsigned w = 0; w < workers; ++w) {
    Tally part(grid);
    std::uint64_t above = 0;
    for (std::size_t i = grid.size() + 1; i-- > 0;) {
      part.total_ += hist[w][i];
      if (i < grid.size()) {
        above += hist[w][i + 1];
        part.exceed_[i] = above;
      }
    }
    result.merge(part);
  }
  return result;
}

Interval wilson_interval(std::uint64_t k, std::uint64_t n, double confidence) {
  require(n > 0, "wilson interval needs n > 0");
  require(k <= n, "wilson interval needs k <= n");
  require(confidence > 0.0 && confidence < 1.0, "confidence must be in (0, 1)");
  const boost::math::normal_distribution<double> normal;
  const double z = boost::math::quantile(normal, 1.0 - 0.5 * (1.0 - confidence));
  const double dn = static_cast<double>(n);
  const double p = static_cast<double>(k) / dn;
  const double z2n = z * z / dn;
  const double center = (p + 0.5 * z2n) / (1.0 + z2n);
  const double half = z / (1.0 + z2n) * std::sqrt(p * (1.0 - p) / dn + 0.25 * z2n / dn);
  Interval out{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (k == 0) out.lo = 0.0;
  if (k == n) out.hi = 1.0;
  out.lo = std::min(out.lo, p);
  out.hi = std::max(out.hi, p);
  return out;
}

CcdfCurve empirical_ccdf(const Tally& tally, double confidence) {
  require(tally.total() > 0, "empty tally");
  CcdfCurve curve{CurveSource::MonteCarlo, {}};
  curve.points.reserve(tally.grid().size());
  for (std::size_t i = 0; i < tally.grid().size(); ++i) {
    const std::uint64_t k = tally.exceed_counts()[i];
    const Interval ci = wilson_interval(k, tally.total(), confidence);
    curve.points.push_back(
        {tally.grid()[i], static_cast<double>(k) / static_cast<double>(tally.total()), ci.lo, ci.hi});
  }
  return curve;
}

std::vector<std::uint64_t> log_grid(std::uint64_t n_min, std::uint64_t n_max, int per_decade) {
  require(n_min <= n_max, "grid needs n_min <= n_max");
  require(per_decade >= 1, "grid needs at least one point per decade");
  std::vector<std::uint64_t> out{n_min};
  const double lo = n_min == 0 ? 0.0 : std::log10(static_cast<double>(n_min));
  const double hi = std::log10(static_cast<double>(n_max));
  for (long j = static_cast<long>(std::floor(lo * per_decade)); j <= static_cast<long>(std::ceil(hi * per_decade));
       ++j) {
    const auto n = static_cast<std::uint64_t>(std::llround(std::pow(10.0, static_cast<double>(j) / per_decade)));
    if (n > out.back() && n <= n_max) out.push_back(n);
  }
  if (out.back() != n_max) out.push_back(n_max);
  return out;
}

double ks_statistic_uniform(std::vector<double> sample) {
  require(!sample.empty(), "empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double u = std::clamp(sample[i], 0.0, 1.0);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - u, u - static_cast<double>(i) / n});
  }
  return d;
}

double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b) {
  require(!a.empty() && !b.empty(), "empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical_95(std::size_t n) { return 1.358 / std::sqrt(static_cast<double>(n)); }

double ks_critical_95(std::size_t n, std::size_t m) {
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  return 1.358 * std::sqrt((dn + dm) / (dn * dm));
}

}  // namespace retx
