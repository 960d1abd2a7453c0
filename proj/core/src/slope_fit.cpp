#include "acsplit/slope_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace acsplit {

namespace {

bool usable(const ConvergencePoint& p) {
  return p.completed && std::isfinite(p.error) && p.error > 0.0 && std::isfinite(p.dt) && p.dt > 0.0;
}

}  // namespace

SlopeFit fit_slope(std::span<const ConvergencePoint> points, const SlopeWindow& window) {
  SlopeFit fit;

  double largest_dt = 0.0;
  double floor = std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    largest_dt = std::max(largest_dt, p.dt);
    if (usable(p)) floor = std::min(floor, p.error);
  }
  if (window.floor) floor = *window.floor;

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!usable(p)) continue;
    if (window.exclude_largest && p.dt == largest_dt) continue;
    if (std::isfinite(floor) && p.error < window.floor_factor * floor) continue;
    if (window.dt_min && p.dt < *window.dt_min) continue;
    if (window.dt_max && p.dt > *window.dt_max) continue;
    keep.push_back(i);
  }
  std::sort(keep.begin(), keep.end(), [&](std::size_t i, std::size_t j) { return points[i].dt > points[j].dt; });
  if (window.max_points > 0 && keep.size() > window.max_points) {
    keep.erase(keep.begin(), keep.end() - static_cast<std::ptrdiff_t>(window.max_points));
  }

  fit.used = keep;
  fit.points = keep.size();
  if (keep.size() < 3) {
    fit.note = "fewer than 3 points in the fit window";
    return fit;
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(keep.size());
  for (std::size_t i : keep) {
    const double x = std::log(points[i].dt);
    const double y = std::log(points[i].error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0)) {
    fit.note = "fit window has a single distinct dt";
    return fit;
  }
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;

  double ss = 0;
  for (std::size_t i : keep) {
    const double r = std::log(points[i].error) - (fit.intercept + fit.slope * std::log(points[i].dt));
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);

  fit.monotone = true;
  for (std::size_t k = 1; k < keep.size(); ++k) {
    if (!(points[keep[k]].error < points[keep[k - 1]].error)) fit.monotone = false;
  }
  fit.dt_hi = points[keep.front()].dt;
  fit.dt_lo = points[keep.back()].dt;
  fit.valid = true;
  return fit;
}

}  // namespace acsplit
