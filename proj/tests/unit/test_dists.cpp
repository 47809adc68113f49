#include <doctest.h>

#include <cmath>
#include <vector>

#include "retx/coupled_model.hpp"
#include "retx/dists.hpp"
#include "retx/doc_law.hpp"
#include "retx/error.hpp"
#include "retx/gammafn.hpp"
#include "retx/mc.hpp"
#include "retx/random_stream.hpp"
#include "retx/slow_vary.hpp"

using namespace retx;

namespace {

double rel(double a, double b) { return std::fabs(a / b - 1.0); }

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::IoFailure;
}

std::vector<DistSpec> families() {
  return {DistSpec::exponential(2.0), DistSpec::weibull(0.5, 16.0), DistSpec::weibull(2.0, 2.0),
          DistSpec::gamma(2.0, 2.0),  DistSpec::gamma(1.0, 0.4),    DistSpec::gamma(3.0, 9.0)};
}

}  // namespace

TEST_CASE("ccdf reference values") {
  const auto e = DistSpec::exponential(2.0);
  CHECK(e.ccdf(0.0) == 1.0);
  CHECK(rel(e.ccdf(1.0), std::exp(-2.0)) < 1e-15);
  CHECK(rel(DistSpec::weibull(0.5, 16.0).ccdf(8.0), 0.49306869139523978785) < 1e-14);
  CHECK(rel(DistSpec::gamma(2.0, 2.0).ccdf(1.0), 3.0 * std::exp(-2.0)) < 1e-14);
}

TEST_CASE("ccdf is positive and nonincreasing") {
  for (const auto& d : families()) {
    double prev = 1.0;
    CHECK(d.ccdf(0.0) == 1.0);
    for (int i = 1; i <= 200; ++i) {
      const double x = 0.05 * i;
      const double v = d.ccdf(x);
      CHECK(v > 0.0);
      CHECK(v <= prev);
      prev = v;
    }
  }
}

TEST_CASE("quantile round trip") {
  for (const auto& d : families()) {
    for (double u : {1e-12 * 1.01, 1e-9, 1e-4, 0.01, 0.3, 0.5, 0.77, 0.99, 1.0 - 1e-9, 1.0 - 1e-12 * 1.01}) {
      const double x = d.quantile_cdf(1.0 - u);
      CHECK(std::fabs(d.ccdf(x) - u) <= 1e-9);
      CHECK(std::fabs(d.ccdf(d.quantile_ccdf(u)) - u) <= 1e-9);
    }
    CHECK(d.quantile_ccdf(1.0) == 0.0);
  }
  CHECK(std::fabs(DistSpec::exponential(2.0).quantile_ccdf(std::exp(-2.0)) - 1.0) < 1e-14);
  // Median of Gamma(rate 2, shape 2), 40-digit reference.
  CHECK(rel(DistSpec::gamma(2.0, 2.0).quantile_ccdf(0.5), 0.83917349500833032671) < 1e-12);
}

TEST_CASE("invalid parameters") {
  CHECK(code_of([] { DistSpec::exponential(0.0); }) == Errc::InvalidArgument);
  CHECK(code_of([] { DistSpec::weibull(-1.0, 1.0); }) == Errc::InvalidArgument);
  CHECK(code_of([] { DistSpec::gamma(1.0, 200.0); }) == Errc::InvalidArgument);
  CHECK(code_of([] { DistSpec::exponential(1.0).quantile_ccdf(0.0); }) == Errc::InvalidArgument);
}

TEST_CASE("sampling is deterministic per seed") {
  const auto d = DistSpec::exponential(1.0);
  RandomStream a(12345);
  RandomStream b(12345);
  for (int i = 0; i < 100; ++i) CHECK(d.sample(a) == d.sample(b));
}

TEST_CASE("exponential sample mean") {
  const auto d = DistSpec::exponential(2.0);
  RandomStream rng(7);
  double sum = 0.0;
  constexpr int kN = 1'000'000;
  for (int i = 0; i < kN; ++i) sum += d.sample(rng);
  CHECK(std::fabs(sum / kN - 0.5) < 0.002);
}

TEST_CASE("weibull sample passes KS against its cdf") {
  const auto d = DistSpec::weibull(2.0, 2.0);
  RandomStream rng(11);
  std::vector<double> u;
  constexpr int kN = 1'000'000;
  for (int i = 0; i < kN; ++i) u.push_back(d.cdf(d.sample(rng)));
  CHECK(ks_statistic_uniform(u) < 1.95 / std::sqrt(kN));
}

TEST_CASE("F(L) is uniform for every family") {
  std::uint64_t seed = 100;
  for (const auto& d : families()) {
    RandomStream rng(seed++);
    std::vector<double> u;
    constexpr int kN = 200'000;
    for (int i = 0; i < kN; ++i) u.push_back(d.cdf(d.sample(rng)));
    CHECK(ks_statistic_uniform(u) < 1.95 / std::sqrt(kN));
  }
}

TEST_CASE("bounded document") {
  const BoundedDoc doc(DocLaw(DistSpec::exponential(2.0)), 1.0);
  CHECK(doc.ccdf(0.0) == 1.0);
  CHECK(doc.ccdf(1.0) == 0.0);
  CHECK(rel(doc.ccdf(0.5), 0.26894142136999512075) < 1e-14);

  for (int i = 0; i <= 50; ++i) {
    const double x = i / 50.0;
    CHECK(std::fabs(doc.cdf(x) * doc.mass() - DistSpec::exponential(2.0).cdf(x)) < 1e-12);
  }

  RandomStream rng(3);
  constexpr int kN = 1'000'000;
  int above = 0;
  for (int i = 0; i < kN; ++i) {
    const double x = doc.sample(rng);
    REQUIRE(x >= 0.0);
    REQUIRE(x <= 1.0);
    above += x > 0.5;
  }
  const double p = 0.26894142136999512075;
  CHECK(std::fabs(static_cast<double>(above) / kN - p) < 3.0 * std::sqrt(p * (1 - p) / kN));
}

TEST_CASE("unbounded sentinel reproduces the base sampler") {
  const auto base = DistSpec::exponential(1.0);
  const BoundedDoc doc(DocLaw(base), kUnbounded);
  CHECK(doc.unbounded());
  CHECK(doc.mass() == 1.0);
  RandomStream a(99);
  RandomStream b(99);
  for (int i = 0; i < 1000; ++i) CHECK(doc.sample(a) == base.sample(b));
}

TEST_CASE("degenerate truncation") {
  CHECK(code_of([] { BoundedDoc(DocLaw(DistSpec::gamma(1.0, 150.0)), 1e-6); }) == Errc::DegenerateTruncation);
}

TEST_CASE("slowly varying functions") {
  const auto one = SlowVary::one();
  CHECK(one(123.0) == 1.0);
  CHECK(one.log_index(50.0) == 0.0);

  const auto lp = SlowVary::log_power(2.0, 0.5);
  CHECK(rel(lp(std::exp(4.0)), 4.0) < 1e-14);
  CHECK(lp(1.0) == lp(std::exp(1.0)));  // clamped below x_min

  // Gamma document on an exponential channel, k = 2: ℓ(y) = 1/(1 + (λ/μ) log y).
  const auto g = SlowVary::gamma_doc_exact(2.0, 2.0, 2.0);
  for (double y : {1.0, 3.0, 100.0, 1e8}) CHECK(rel(g(y), 1.0 / (1.0 + std::log(y))) < 1e-13);
  const auto g2 = SlowVary::gamma_doc_exact(3.0, 2.0, 1.5);
  CHECK(rel(g2(50.0), 1.0 / (1.0 + 2.0 * std::log(50.0))) < 1e-13);

  for (const auto& l : {one, lp, g, SlowVary::log_power(1.0, -1.0)}) {
    CHECK(l(10.0) > 0.0);
    CHECK(l(1e12) > 0.0);
  }
}

TEST_CASE("slow variation along a geometric grid") {
  // |ℓ(λx)/ℓ(x) - 1| must fall monotonically over x = 1e2..1e12.
  auto drift = [](const SlowVary& l, double lambda, double x) { return std::fabs(l(lambda * x) / l(x) - 1.0); };
  const std::vector<SlowVary> kinds = {SlowVary::one(), SlowVary::log_power(1.0, 0.5), SlowVary::log_power(3.0, -0.5),
                                       SlowVary::log_power(1.0, -1.0), SlowVary::gamma_doc_exact(2.0, 2.0, 2.0)};
  for (const auto& l : kinds) {
    for (double lambda : {2.0, 10.0}) {
      double prev = drift(l, lambda, 1e2);
      for (int e = 3; e <= 12; ++e) {
        const double d = drift(l, lambda, std::pow(10.0, e));
        CHECK(d <= prev + 1e-15);
        prev = d;
      }
      if (lambda == 2.0) CHECK(prev < 0.05);
    }
  }
  // λ = 10: the |β| = 1/2 kinds are below 0.05 at 1e12; β = -1 is not, and
  // its drift there is log 10 / (log 1e13) exactly.
  CHECK(drift(SlowVary::log_power(1.0, 0.5), 10.0, 1e12) < 0.05);
  CHECK(drift(SlowVary::log_power(3.0, -0.5), 10.0, 1e12) < 0.05);
  const double beta_minus_one = std::log(10.0) / std::log(1e13);
  CHECK(rel(drift(SlowVary::log_power(1.0, -1.0), 10.0, 1e12), beta_minus_one) < 1e-12);
  CHECK(rel(drift(SlowVary::gamma_doc_exact(2.0, 2.0, 2.0), 10.0, 1e12),
            std::log(10.0) / (1.0 + std::log(1e13))) < 1e-12);
}

TEST_CASE("derived document laws") {
  SUBCASE("alpha 2 on an exponential channel is Exponential(2)") {
    const auto m = derive_doc_law(DistSpec::exponential(1.0), 2.0, SlowVary::one(), 4.0);
    CHECK(m.mode() == CouplingMode::Derived);
    for (int i = 0; i <= 40; ++i) {
      const double x = 0.1 * i;
      CHECK(std::fabs(m.doc().base().ccdf(x) - std::exp(-2.0 * x)) < 1e-15);
    }
  }
  SUBCASE("alpha 1, ell 1 reproduces the channel law") {
    for (const auto& a : families()) {
      const auto m = derive_doc_law(a, 1.0, SlowVary::one(), kUnbounded);
      for (int i = 0; i <= 60; ++i) {
        const double x = 0.1 * i;
        CHECK(std::fabs(m.doc().base().ccdf(x) - a.ccdf(x)) < 1e-12);
      }
    }
  }
  SUBCASE("Gamma document from an exponential channel") {
    const auto m = derive_doc_law(DistSpec::exponential(2.0), 1.0, SlowVary::gamma_doc_exact(2.0, 2.0, 2.0), 3.0);
    const auto gamma_doc = DistSpec::gamma(2.0, 2.0);
    for (int i = 0; i <= 40; ++i) {
      const double x = 1.0 + 0.05 * i;
      CHECK(rel(m.doc().base().ccdf(x), gamma_doc.ccdf(x)) < 0.05);
      CHECK(rel(m.doc().base().ccdf(x), gamma_doc.ccdf(x)) < 1e-12);
    }
  }
  SUBCASE("inverse and density") {
    const auto m = derive_doc_law(DistSpec::weibull(1.5, 2.0), 3.0, SlowVary::log_power(1.0, 0.5), 5.0);
    const auto& law = m.doc().base();
    for (double q : {0.9, 0.5, 0.1, 1e-3, 1e-8}) CHECK(rel(law.ccdf(law.quantile_ccdf(q)), q) < 1e-10);
    // density integrates back to the cdf
    double mass = 0.0;
    const int steps = 4000;
    for (int i = 0; i < steps; ++i) mass += law.pdf((i + 0.5) * 3.0 / steps) * 3.0 / steps;
    CHECK(std::fabs(mass - law.cdf(3.0)) < 1e-4);
  }
  SUBCASE("a non-monotone ccdf is rejected") {
    // With ℓ = (log y)^-5 and α = 0.05, log F̄ = α s + 5 log(-s) rises as s = log Ḡ falls.
    CHECK(code_of([] {
            derive_doc_law(DistSpec::exponential(1.0), 0.05, SlowVary::log_power(1.0, -5.0), 20.0);
          }) == Errc::NotMonotone);
  }
}

TEST_CASE("coupling validation") {
  const auto ex1a = make_parametric(DistSpec::exponential(1.0), DistSpec::exponential(2.0), 2.0, 2.0, SlowVary::one());
  CHECK(validate_coupling(ex1a).max_residual < 1e-14);
  CHECK(validate_coupling(ex1a).grid.size() == 64);
  for (const auto& pt : validate_coupling(ex1a).grid) CHECK(pt.gbar <= 0.9 + 1e-15);

  const auto ex3 = make_parametric(DistSpec::weibull(2.0, 2.0), DistSpec::weibull(2.0, 1.0), 8.0, 4.0, SlowVary::one());
  CHECK(validate_coupling(ex3).max_residual < 1e-12);

  const auto ex4 = make_parametric(DistSpec::exponential(2.0), DistSpec::gamma(2.0, 2.0), 3.0, 1.0,
                                   SlowVary::gamma_doc_exact(2.0, 2.0, 2.0));
  CHECK(validate_coupling(ex4).max_residual < 0.05);
  CHECK(validate_coupling(ex4).max_residual < 1e-12);

  const auto wrong = make_parametric(DistSpec::exponential(1.0), DistSpec::exponential(2.0), 2.0, 3.0, SlowVary::one());
  CHECK(validate_coupling(wrong).max_residual > kCouplingTolerance);

  const auto derived = derive_doc_law(DistSpec::exponential(1.0), 2.0, SlowVary::one(), 2.0);
  CHECK(code_of([&] { validate_coupling(derived); }) == Errc::InvalidArgument);
}

TEST_CASE("alpha inference") {
  CHECK(*infer_alpha(DistSpec::exponential(1.0), DistSpec::exponential(2.0)) == 2.0);
  CHECK(*infer_alpha(DistSpec::exponential(2.0), DistSpec::exponential(1.0)) == 0.5);
  CHECK(*infer_alpha(DistSpec::weibull(0.5, 16.0), DistSpec::weibull(0.5, 1.0)) == doctest::Approx(4.0));
  CHECK(*infer_alpha(DistSpec::weibull(2.0, 2.0), DistSpec::weibull(2.0, 1.0)) == doctest::Approx(4.0));
  CHECK(*infer_alpha(DistSpec::exponential(2.0), DistSpec::gamma(2.0, 2.0)) == 1.0);
  CHECK_FALSE(infer_alpha(DistSpec::weibull(2.0, 2.0), DistSpec::weibull(1.0, 1.0)));
}
