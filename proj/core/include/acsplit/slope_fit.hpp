#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace acsplit {

struct ConvergencePoint {
  double dt = 0.0;
  double error = 0.0;
  bool completed = true;
};

/// Which points enter a log-log fit.
///
/// Points that did not complete, or have non-positive or non-finite error,
/// never enter. Of the rest, the default drops the largest dt of the sweep,
/// anything with error below floor_factor * floor (saturated by spatial or
/// round-off error), and then keeps the `max_points` smallest dt values.
struct SlopeWindow {
  bool exclude_largest = true;
  double floor_factor = 10.0;
  /// Error floor. Unset means the smallest completed error among the points
  /// handed to fit_slope; studies pass the floor over all schemes.
  std::optional<double> floor;
  /// 0 keeps every admissible point.
  std::size_t max_points = 3;
  std::optional<double> dt_min;
  std::optional<double> dt_max;
};

struct SlopeFit {
  /// False when fewer than three points survive the window.
  bool valid = false;
  double slope = 0.0;
  double intercept = 0.0;
  /// Root mean square of the log-error residuals, natural-log units.
  double residual = 0.0;
  /// Errors strictly decrease as dt decreases over the fitted points.
  bool monotone = false;
  std::size_t points = 0;
  double dt_lo = 0.0;
  double dt_hi = 0.0;
  /// Indices into the input of the fitted points, by decreasing dt.
  std::vector<std::size_t> used;
  std::string note;
};

/// Least squares of ln(error) on ln(dt) over the window.
SlopeFit fit_slope(std::span<const ConvergencePoint> points, const SlopeWindow& window = {});

}  // namespace acsplit
