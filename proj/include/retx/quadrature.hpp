#pragma once

#include <functional>
#include <vector>

namespace retx {

struct QuadResult {
  double value = 0.0;
  double abs_err = 0.0;
  long subdivisions = 0;
  bool converged = false;
};

/// Globally adaptive 15-point Gauss-Kronrod on [a, b]. The interval with
/// the largest error estimate is bisected until the summed estimate drops to
/// rel_tol * |value| or max_subdivisions is reached. `breaks` (interior
/// points, any order) seed the initial partition together with
/// `initial_panels` uniform panels.
QuadResult integrate_gk15(const std::function<double(double)>& f, double a, double b, double rel_tol,
                          long max_subdivisions, int initial_panels = 1, const std::vector<double>& breaks = {});

}  // namespace retx
