#include <doctest.h>

#include <cmath>

#include "retx/asym.hpp"
#include "retx/coupled_model.hpp"
#include "retx/error.hpp"
#include "retx/mc.hpp"
#include "retx/oracle.hpp"

using namespace retx;

namespace {

double rel(double a, double b) { return std::fabs(a / b - 1.0); }

CoupledModel exp_pair(double doc_rate, double channel_rate, double bound) {
  return make_parametric(DistSpec::exponential(channel_rate), DistSpec::exponential(doc_rate), bound,
                         doc_rate / channel_rate, SlowVary::one());
}

CoupledModel example4(double bound) {
  return make_parametric(DistSpec::exponential(2.0), DistSpec::gamma(2.0, 2.0), bound, 1.0,
                         SlowVary::gamma_doc_exact(2.0, 2.0, 2.0));
}

}  // namespace

TEST_CASE("n = 0 is exactly one") {
  for (double b : {1.0, 4.0, kUnbounded}) {
    const auto r = ccdf_exact(exp_pair(2.0, 1.0, b), 0);
    CHECK(r.value == 1.0);
    CHECK(r.log_value == 0.0);
  }
}

TEST_CASE("identity coupling gives 1/(n+1)") {
  const auto m = derive_doc_law(DistSpec::exponential(1.0), 1.0, SlowVary::one(), kUnbounded);
  for (std::uint64_t n : {1, 2, 3, 9, 100, 10000}) CHECK(rel(ccdf_exact(m, n).value, 1.0 / (n + 1.0)) < 1e-12);
  const auto curve = ccdf_exact_curve(m, {0, 1, 2});
  CHECK(curve[0].value == 1.0);
  CHECK(rel(curve[1].value, 0.5) < 1e-12);
  CHECK(rel(curve[2].value, 1.0 / 3.0) < 1e-12);
}

TEST_CASE("reference values") {
  // 40-digit references.
  CHECK(rel(ccdf_exact(exp_pair(2.0, 1.0, 2.0), 10).value, 0.00775853600817825545) < 1e-10);
  CHECK(rel(ccdf_exact(exp_pair(2.0, 1.0, 1.0), 10).value, 0.0005693936700146194248) < 1e-10);

  const auto m4 = example4(3.0);
  CHECK(rel(ccdf_exact(m4, 1).value, 0.74560590934861607911) < 1e-10);
  CHECK(rel(ccdf_exact(m4, 10).value, 0.26192603403957989294) < 1e-10);
  CHECK(rel(ccdf_exact(m4, 100).value, 0.036588612740729265) < 1e-10);
  CHECK(rel(ccdf_exact(m4, 1000).value, 0.0004828065693695222535) < 1e-10);

  struct Case {
    double k, scale, at10, at1000;
  };
  for (const Case& c : {Case{0.5, 16.0, 3.423385397457375029e-5, 2.302547219747772854e-299},
                        Case{1.0, 4.0, 8.894569792998476530e-4, 6.150688719467949482e-69},
                        Case{2.0, 2.0, 1.0 / 1001.0, 2.376155164063833488e-11}}) {
    const auto m = make_parametric(DistSpec::weibull(c.k, c.scale), DistSpec::weibull(c.k, 1.0), 8.0, 4.0,
                                   SlowVary::one());
    CHECK(rel(ccdf_exact(m, 10).value, c.at10) < 1e-10);
    const auto deep = ccdf_exact(m, 1000);
    CHECK(rel(deep.value, c.at1000) < 1e-10);
    CHECK(std::fabs(deep.log_value - std::log(c.at1000)) < 1e-9);
  }
}

TEST_CASE("deep tail stays finite in log space") {
  const auto m = exp_pair(2.0, 1.0, 1.0);
  const auto r = ccdf_exact(m, 100000);
  CHECK(r.value == 0.0);
  CHECK(std::isfinite(r.log_value));
  const auto p = approx_params(m);
  CHECK(std::fabs(r.log_value / log_exact_integer_ccdf(p, 100000) - 1.0) < 1e-12);
}

TEST_CASE("error estimate contract") {
  for (double b : {1.0, 2.0, 4.0}) {
    for (std::uint64_t n : {1, 10, 100, 1000, 10000}) {
      const auto r = ccdf_exact(exp_pair(2.0, 1.0, b), n);
      CHECK(r.value >= 0.0);
      CHECK(r.value <= 1.0);
      CHECK(r.est_abs_err <= 1e-12 * std::max(r.value, 1e-300));
      CHECK(r.subdivisions >= 1);
    }
  }
}

TEST_CASE("curve is monotone and each ratio sits below 1 - Gbar(b)") {
  const auto m = exp_pair(2.0, 1.0, 1.0);
  std::vector<std::uint64_t> grid;
  for (std::uint64_t n = 1; n <= 100; ++n) grid.push_back(n);
  const auto curve = ccdf_exact_curve(m, grid, 2);
  const double cap = 1.0 - m.gbar_b();
  for (std::size_t i = 1; i < curve.size(); ++i) {
    CHECK(curve[i].value < curve[i - 1].value);
    const double ratio = curve[i].value / curve[i - 1].value;
    CHECK(ratio > 0.0);
    CHECK(ratio <= cap + 1e-12);
  }
}

TEST_CASE("example 4 curve on a log grid") {
  const auto curve = ccdf_exact_curve(example4(3.0), log_grid(1, 10000, 12));
  for (std::size_t i = 0; i < curve.size(); ++i) {
    CHECK(std::isfinite(curve[i].value));
    CHECK(curve[i].value > 0.0);
    if (i) CHECK(curve[i].value < curve[i - 1].value);
  }
}

TEST_CASE("the finite sum matches the quadrature") {
  for (double alpha : {1.0, 2.0, 3.0}) {
    for (double b : {1.0, 2.0, 4.0}) {
      const auto m = exp_pair(alpha, 1.0, b);
      const auto p = approx_params(m);
      for (std::uint64_t n : {1, 2, 5, 10, 31, 100, 316, 1000}) {
        CHECK(rel(ccdf_exact(m, n).value, exact_integer_ccdf(p, static_cast<double>(n))) < 1e-8);
      }
    }
  }
}

TEST_CASE("grid must be strictly increasing") {
  CHECK_THROWS_AS(ccdf_exact_curve(exp_pair(2.0, 1.0, 1.0), {1, 3, 3}), Error);
}

TEST_CASE("oracle agrees with simulation") {
  const auto m = exp_pair(2.0, 1.0, 1.0);
  const std::vector<std::uint64_t> grid = log_grid(1, 40, 12);
  constexpr std::uint64_t kN = 1'000'000;
  const Tally t = run_tally(m, grid, kN, 2024, 2);
  const auto oracle = ccdf_exact_curve(m, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double p = oracle[i].value;
    if (p < 10.0 / kN) continue;
    const double emp = static_cast<double>(t.exceed_counts()[i]) / kN;
    CHECK(std::fabs(emp - p) <= 4.0 * std::sqrt(p * (1 - p) / kN));
  }
}
