#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace acsplit {

/// Uniform cell-centered tensor grid on [0, L_1] x ... x [0, L_d], d in {1,2,3}.
///
/// Cell l along axis i has its center at (L_i / M_i)(l + 1/2). Linear layout
/// everywhere in the library (fields, coefficients, files) is row-major with
/// axis 0 slowest.
class GridSpec {
 public:
  static constexpr int kMaxDims = 3;

  /// Throws InvalidArgument unless 1 <= dims <= 3, every M_i >= 2 and every L_i > 0.
  GridSpec(std::span<const std::size_t> cells, std::span<const double> lengths);

  static GridSpec line(std::size_t cells, double length);
  static GridSpec cube(std::size_t cells_per_axis, double length);

  int dims() const noexcept { return dims_; }
  std::size_t cells(int axis) const { return cells_.at(static_cast<std::size_t>(axis)); }
  double length(int axis) const { return lengths_.at(static_cast<std::size_t>(axis)); }
  double spacing(int axis) const { return length(axis) / static_cast<double>(cells(axis)); }
  double cell_center(int axis, std::size_t l) const {
    return spacing(axis) * (static_cast<double>(l) + 0.5);
  }

  std::size_t total_cells() const noexcept { return total_; }
  /// Product of the spacings, i.e. the volume of one cell.
  double cell_volume() const noexcept;
  double volume() const noexcept;

  /// Splits a linear index into per-axis indices (unused trailing axes are 0).
  std::array<std::size_t, kMaxDims> unravel(std::size_t index) const noexcept;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  int dims_ = 1;
  std::array<std::size_t, kMaxDims> cells_{1, 1, 1};
  std::array<double, kMaxDims> lengths_{1.0, 1.0, 1.0};
  std::size_t total_ = 1;
};

namespace detail {

// Shared storage for Field and SpectralField; the two stay distinct types so
// physical and cosine-space data cannot be mixed up.
class GridData {
 public:
  explicit GridData(GridSpec grid) : grid_(grid), values_(grid.total_cells(), 0.0) {}
  GridData(GridSpec grid, std::vector<double> values);

  const GridSpec& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  bool all_finite() const noexcept;

 protected:
  GridSpec grid_;
  std::vector<double> values_;
};

}  // namespace detail

/// Real state phi sampled at cell centers.
class Field : public detail::GridData {
 public:
  using GridData::GridData;

  static Field constant(const GridSpec& grid, double value);

  double min() const noexcept;
  double max() const noexcept;
  double max_abs() const noexcept;
  double mean() const noexcept;

  friend bool operator==(const Field& a, const Field& b) {
    return a.grid_ == b.grid_ && a.values_ == b.values_;
  }
};

/// Orthonormal cosine coefficients, one per multi-index k with 0 <= k_i < M_i.
class SpectralField : public detail::GridData {
 public:
  using GridData::GridData;

  friend bool operator==(const SpectralField& a, const SpectralField& b) {
    return a.grid_ == b.grid_ && a.values_ == b.values_;
  }
};

/// Discrete l2 norm sqrt(sum v_i^2), without cell-volume weighting.
double l2_norm(std::span<const double> values) noexcept;

}  // namespace acsplit
