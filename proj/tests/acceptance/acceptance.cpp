// Acceptance checks. Each criterion prints one PASS/FAIL line with the
// measured quantity next to its threshold.
//
//   acceptance                 run every criterion
//   acceptance --criterion N   run criterion N only

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "retx/asym.hpp"
#include "retx/cli/config.hpp"
#include "retx/cli/experiment.hpp"
#include "retx/coupled_model.hpp"
#include "retx/gammafn.hpp"
#include "retx/mc.hpp"
#include "retx/oracle.hpp"
#include "retx/random_stream.hpp"

using namespace retx;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

CoupledModel exp_pair(double doc_rate, double channel_rate, double bound) {
  return make_parametric(DistSpec::exponential(channel_rate), DistSpec::exponential(doc_rate), bound,
                         doc_rate / channel_rate, SlowVary::one());
}

std::vector<std::uint64_t> counts_in(std::uint64_t lo, std::uint64_t hi) { return log_grid(lo, hi, 24); }

// 1. Finite sum for integer α against the quadrature, n = 1..1000.
Outcome c1() {
  double worst = 0.0;
  std::string where;
  std::vector<std::uint64_t> grid;
  for (std::uint64_t n = 1; n <= 1000; ++n) grid.push_back(n);
  for (double alpha : {1.0, 2.0, 3.0}) {
    for (double b : {1.0, 2.0, 4.0}) {
      const auto m = exp_pair(alpha, 1.0, b);
      const auto p = approx_params(m);
      const auto oracle = ccdf_exact_curve(m, grid);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double exact = std::exp(log_exact_integer_ccdf(p, static_cast<double>(grid[i])));
        // Compared in log space where the values underflow.
        const double err = exact > 0.0 && oracle[i].value > 0.0
                               ? std::fabs(oracle[i].value / exact - 1.0)
                               : std::fabs(std::expm1(oracle[i].log_value -
                                                      log_exact_integer_ccdf(p, static_cast<double>(grid[i]))));
        if (err > worst) {
          worst = err;
          where = fmt("alpha=%g b=%g n=%llu", alpha, b, static_cast<unsigned long long>(grid[i]));
        }
      }
    }
  }
  return {worst <= 1e-8, fmt("max rel err %.3g (limit 1e-8) at %s", worst, where.c_str())};
}

// 2. Monte Carlo coverage of the oracle, example1a at 1e7 samples, 99% Wilson.
Outcome c2() {
  auto cfg = cli::preset("example1a");
  cfg.samples = 10'000'000;
  cfg.confidence = 0.99;
  cfg.curves = {CurveSource::MonteCarlo, CurveSource::Oracle};
  const auto result = cli::run_experiment(cfg);
  double hits = 0.0;
  std::size_t points = 0;
  std::string per_bound;
  for (const auto& run : result.runs) {
    const auto& r = run.report;
    hits += r.coverage.value_or(0.0) * static_cast<double>(r.coverage_points);
    points += r.coverage_points;
    per_bound += fmt(" b=%g:%.3f/%zu", r.bound, r.coverage.value_or(0.0), r.coverage_points);
  }
  const double frac = points ? hits / static_cast<double>(points) : 0.0;
  return {points > 0 && frac >= 0.97, fmt("coverage %.4f over %zu points (limit 0.97);%s", frac, points,
                                          per_bound.c_str())};
}

// 3. Uniform approximation against the oracle on the preset grids.
Outcome c3() {
  bool pass = true;
  std::string detail;
  for (const auto& [name, limit] : {std::pair{"example1a", 0.10}, {"example1b", 0.10}, {"example4", 0.15}}) {
    auto cfg = cli::preset(name);
    cfg.curves = {CurveSource::Oracle, CurveSource::UniformApprox};
    const auto result = cli::run_experiment(cfg);
    for (const auto& run : result.runs) {
      const double err = run.report.max_rel_err.at(CurveSource::UniformApprox);
      pass &= err <= limit;
      detail += fmt(" %s b=%g:%.3f(<=%.2f)", name, run.report.bound, err, limit);
    }
  }
  return {pass, "max rel err for n>=10, oracle>=1e-6:" + detail};
}

// 4. Power-law limit with n Ḡ(b) held at 0.01, α = 2.
Outcome c4() {
  std::vector<double> dev;
  for (double n : {1e2, 1e3, 1e4, 1e5}) {
    const double b = std::log(100.0 * n);  // Ḡ(b) = e^-b = 0.01/n on a rate-1 channel
    const auto m = exp_pair(2.0, 1.0, b);
    const auto r = ccdf_exact(m, static_cast<std::uint64_t>(n));
    dev.push_back(std::fabs(r.value * n * n - 2.0) / 2.0);
  }
  const bool decreasing = std::is_sorted(dev.rbegin(), dev.rend()) &&
                          std::adjacent_find(dev.begin(), dev.end()) == dev.end();
  return {decreasing && dev.back() <= 0.05,
          fmt("deviation %.4g %.4g %.4g %.4g (decreasing, last <= 0.05)", dev[0], dev[1], dev[2], dev[3])};
}

// 5. Geometric tail beyond twice the heuristic onset; heuristic in closed form.
Outcome c5() {
  bool pass = true;
  std::string detail;
  for (double b : {1.0, 2.0, 4.0}) {
    const auto m = exp_pair(2.0, 1.0, b);
    const auto p = approx_params(m);
    const auto t = transition_point(p);
    const bool exact = t.n_heuristic == 2.0 * std::exp(b);
    const auto start = static_cast<std::uint64_t>(std::ceil(2.0 * t.n_heuristic));
    const auto stop = static_cast<std::uint64_t>(std::ceil(10.0 * t.n_fixed_point));
    const auto grid = counts_in(start, std::max(stop, start));
    const auto oracle = ccdf_exact_curve(m, grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double lt = log_exp_tail_asymptote(p, static_cast<double>(grid[i]));
      worst = std::max(worst, std::fabs(std::expm1(lt - oracle[i].log_value)));
    }
    pass &= exact && worst <= 0.20;
    detail += fmt(" b=%g: n_heur=%.10g%s err %.3f over n in [%llu,%llu];", b, t.n_heuristic,
                  exact ? "(=2e^b)" : "(!=2e^b)", worst, static_cast<unsigned long long>(start),
                  static_cast<unsigned long long>(grid.back()));
  }
  return {pass, "limit 0.20;" + detail};
}

double log_body_deviation(double b) {
  const auto m = exp_pair(2.0, 1.0, b);
  const auto p = approx_params(m);
  const auto grid = counts_in(100, 10000);
  const auto oracle = ccdf_exact_curve(m, grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    worst = std::max(worst, std::fabs(oracle[i].log_value / log_body(p, static_cast<double>(grid[i])) - 1.0));
  }
  return worst;
}

// 6. Log-scale ratio to the body-plus-tail shape on n in [1e2, 1e4].
Outcome c6() {
  const double d2 = log_body_deviation(2.0);
  const double d4 = log_body_deviation(4.0);
  return {d4 <= 0.15 && d4 < d2,
          fmt("max |ratio-1|: b=4 %.4f (limit 0.15), b=2 %.4f (b=4 must be smaller)", d4, d2)};
}

// 7. Upper bound with eps = 0.2 from an empirical n0 <= 1000 up to 1e4.
Outcome c7() {
  bool pass = true;
  std::string detail;
  for (double b : {1.0, 2.0, 4.0}) {
    const auto m = exp_pair(2.0, 1.0, b);
    const auto p = approx_params(m);
    const auto grid = counts_in(2, 10000);
    const auto oracle = ccdf_exact_curve(m, grid);
    std::uint64_t n0 = grid.front();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (oracle[i].log_value > log_upper_bound(p, static_cast<double>(grid[i]), 0.2)) n0 = grid[i] + 1;
    }
    pass &= n0 <= 1000;
    detail += fmt(" b=%g n0=%llu", b, static_cast<unsigned long long>(n0));
  }
  return {pass, "n0 <= 1000:" + detail};
}

// 8. Incomplete Gamma suite.
Outcome c8() {
  using namespace gammafn;
  double closed = 0.0, recur = 0.0, asym = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double x = 0.01 * std::pow(5000.0, i / 199.0);
    closed = std::max(closed, std::fabs(upper_incomplete_gamma(x, 1.0) / std::exp(-x) - 1.0));
    closed = std::max(closed, std::fabs(upper_incomplete_gamma(x, 2.0) / ((1.0 + x) * std::exp(-x)) - 1.0));
    for (double a : {0.5, 1.0, 2.5}) {
      const double rhs = a * upper_incomplete_gamma(x, a) + std::pow(x, a) * std::exp(-x);
      recur = std::max(recur, std::fabs(upper_incomplete_gamma(x, a + 1.0) / rhs - 1.0));
    }
  }
  for (double x : {20.0, 25.0, 30.0, 40.0, 60.0, 100.0}) {
    for (double a : {0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0}) {
      const double approx = incomplete_gamma_asymptotic(x, a, static_cast<int>(x));
      asym = std::max(asym, std::fabs(approx / upper_incomplete_gamma(x, a) - 1.0));
    }
  }
  return {closed <= 1e-12 && recur <= 1e-9 && asym <= 1e-3,
          fmt("closed forms %.2g (1e-12), recurrence %.2g (1e-9), expansion %.2g (1e-3)", closed, recur, asym)};
}

// 9. F(L) against Uniform(0,1) for each parametric family.
Outcome c9() {
  constexpr std::size_t kN = 1'000'000;
  const double band = ks_critical_95(kN);
  bool pass = true;
  std::string detail;
  std::uint64_t seed = 9001;
  for (const auto& d : {DistSpec::exponential(2.0), DistSpec::weibull(0.5, 16.0), DistSpec::weibull(2.0, 2.0),
                        DistSpec::gamma(2.0, 2.0)}) {
    RandomStream rng(seed++);
    std::vector<double> u(kN);
    for (auto& v : u) v = d.cdf(d.sample(rng));
    const double ks = ks_statistic_uniform(std::move(u));
    pass &= ks < band;
    detail += fmt(" %s:%.5f", d.family_name().c_str(), ks);
  }
  return {pass, fmt("KS vs band %.5f:", band) + detail};
}

// 10. Geometric fast path against the literal loop, example1a b = 1.
Outcome c10() {
  constexpr std::size_t kN = 100'000;
  const auto m = exp_pair(2.0, 1.0, 1.0);
  RandomStream fast_rng(10, 0), naive_rng(10, 1);
  std::vector<double> fast(kN), naive(kN);
  std::size_t capped = 0;
  for (std::size_t i = 0; i < kN; ++i) {
    fast[i] = static_cast<double>(sample_N(m, fast_rng));
    const auto d = sample_N_naive(m, naive_rng, std::uint64_t{1} << 40);
    capped += d.capped;
    naive[i] = static_cast<double>(d.count);
  }
  const double band = ks_critical_95(kN, kN);
  const double ks = ks_statistic_two_sample(std::move(fast), std::move(naive));
  return {ks < band && capped == 0, fmt("KS %.5f vs band %.5f, capped draws %zu", ks, band, capped)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10};
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::fprintf(stderr, "criterion must be in 1..%zu\n", criteria.size());
    return 2;
  }
  int failed = 0;
  for (int c = 1; c <= static_cast<int>(criteria.size()); ++c) {
    if (only && c != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = criteria[c - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("C%-2d %s  %s  [%.1fs]\n", c, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
