#pragma once

#include <functional>
#include <span>

namespace minclique::numerics {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  int intervals = 0;
};

struct QuadratureOptions {
  double rel_tol = 1e-12;
  double abs_tol = 0.0;
  int max_depth = 40;           // bisections below any breakpoint panel
  int max_intervals = 200000;
};

/// Globally adaptive Gauss–Legendre integration of f over the panels
/// [breakpoints[i], breakpoints[i+1]].
///
/// Each interval is scored with a 20-point rule and its error estimated
/// against the 10-point rule; the worst interval is bisected until the summed
/// error is below max(abs_tol, rel_tol * |integral|). Throws QuadratureError
/// (carrying the best estimate) when an interval would exceed max_depth.
QuadratureResult integrate(const std::function<double(double)>& f,
                           std::span<const double> breakpoints,
                           const QuadratureOptions& opts = {});

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

}  // namespace minclique::numerics
