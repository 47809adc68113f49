#include "retx/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "retx/error.hpp"
#include "retx/quadrature.hpp"

namespace retx {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// log(1e-300): lower end of the level range for unbounded documents.
constexpr double kLogLevelFloor = -690.7755278982137;
constexpr int kProbePoints = 512;
constexpr int kPanels = 32;

double log1mexp(double v) {
  if (v == 0.0) return -kInf;
  if (v > -0.6931471805599453) return std::log(-std::expm1(v));
  return std::log1p(-std::exp(v));
}

}  // namespace

OracleResult ccdf_exact(const CoupledModel& model, std::uint64_t n) {
  OracleResult r;
  r.n = n;
  if (n == 0) return r;

  // With t = log P[L > x], dF(x) = e^t dt, so
  //   P[N_b > n] = (1/F(b)) ∫_{log F̄(b)}^0 e^t (1 - Ḡ(x(t)))^n dt.
  const double t_lo = model.doc().unbounded() ? kLogLevelFloor : model.doc().log_tail_at_bound();
  const double dn = static_cast<double>(n);
  auto log_integrand = [&](double t) {
    const double s = model.log_gbar_at_doc_log_ccdf(std::min(t, 0.0));
    return t + dn * log1mexp(s);
  };

  // Locate the peak so the integrand can be scaled to O(1).
  double best_t = t_lo;
  double peak = -kInf;
  for (int i = 0; i < kProbePoints; ++i) {
    const double t = t_lo + (0.0 - t_lo) * i / (kProbePoints - 1);
    const double h = log_integrand(t);
    if (h > peak) {
      peak = h;
      best_t = t;
    }
  }
  {
    const double step = -t_lo / (kProbePoints - 1);
    double a = std::max(t_lo, best_t - step);
    double b = std::min(0.0, best_t + step);
    constexpr double kInvPhi = 0.6180339887498949;
    for (int it = 0; it < 80 && b - a > 1e-14 * std::max(1.0, std::fabs(a)); ++it) {
      const double c = b - kInvPhi * (b - a);
      const double d = a + kInvPhi * (b - a);
      if (log_integrand(c) >= log_integrand(d)) {
        b = d;
      } else {
        a = c;
      }
    }
    const double t = 0.5 * (a + b);
    const double h = log_integrand(t);
    if (h > peak) {
      peak = h;
      best_t = t;
    }
  }
  if (!std::isfinite(peak)) fail(Errc::QuadratureFailure, "integrand vanishes on the whole support");

  auto f = [&](double t) { return std::exp(log_integrand(t) - peak); };
  const QuadResult q = integrate_gk15(f, t_lo, 0.0, kOracleRelTol, kOracleMaxSubdivisions, kPanels, {best_t});
  if (!q.converged || !(q.value > 0.0)) {
    fail(Errc::QuadratureFailure, "tolerance not met at n = " + std::to_string(n) + " after " +
                                      std::to_string(q.subdivisions) + " subdivisions");
  }

  const double log_mass = std::log(model.doc_mass());
  r.log_value = std::min(0.0, peak + std::log(q.value) - log_mass);
  r.value = std::exp(r.log_value);
  r.est_abs_err = r.value * (q.abs_err / q.value);
  r.subdivisions = q.subdivisions;
  return r;
}

std::vector<OracleResult> ccdf_exact_curve(const CoupledModel& model, const std::vector<std::uint64_t>& grid,
                                           unsigned threads) {
  for (std::size_t i = 1; i < grid.size(); ++i) {
    require(grid[i] > grid[i - 1], "oracle grid must be strictly increasing");
  }
  std::vector<OracleResult> out(grid.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max<std::size_t>(1, grid.size()));

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      try {
        out[i] = ccdf_exact(model, grid[i]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = grid.size();
      }
    }
  };
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  for (std::size_t i = 1; i < out.size(); ++i) {
    // Compared in log space, where 1e-11 is a relative tolerance.
    if (out[i].log_value > out[i - 1].log_value + 1e-11) {
      fail(Errc::QuadratureFailure, "oracle values increase between n = " + std::to_string(out[i - 1].n) +
                                        " and n = " + std::to_string(out[i].n));
    }
  }
  return out;
}

}  // namespace retx
