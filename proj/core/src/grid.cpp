#include "acsplit/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "acsplit/errors.hpp"

namespace acsplit {

const char* to_string(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::InvalidArgument: return "invalid-argument";
    case ErrorCategory::InvalidOmega: return "invalid-omega";
    case ErrorCategory::Divergence: return "divergence";
    case ErrorCategory::ConvergenceFailure: return "convergence-failure";
    case ErrorCategory::ZeroReference: return "zero-reference";
    case ErrorCategory::FieldFormat: return "field-format";
    case ErrorCategory::Io: return "io";
  }
  return "unknown";
}

namespace {

std::string omega_message(double omega, const std::string& where) {
  std::ostringstream os;
  os.precision(17);
  os << "invalid omega " << omega << " (" << where << ")";
  return os.str();
}

}  // namespace

InvalidOmega::InvalidOmega(double omega, std::string singular_point)
    : Error(ErrorCategory::InvalidOmega, omega_message(omega, singular_point)),
      omega_(omega),
      singular_point_(std::move(singular_point)) {}

GridSpec::GridSpec(std::span<const std::size_t> cells, std::span<const double> lengths) {
  if (cells.empty() || cells.size() > kMaxDims) {
    throw InvalidArgument("grid must have 1 to 3 dimensions");
  }
  if (cells.size() != lengths.size()) {
    throw InvalidArgument("grid cells and lengths must have the same number of axes");
  }
  dims_ = static_cast<int>(cells.size());
  total_ = 1;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] < 2) throw InvalidArgument("every grid axis needs at least 2 cells");
    if (!(lengths[i] > 0.0) || !std::isfinite(lengths[i])) {
      throw InvalidArgument("every grid length must be positive and finite");
    }
    cells_[i] = cells[i];
    lengths_[i] = lengths[i];
    total_ *= cells[i];
  }
}

GridSpec GridSpec::line(std::size_t cells, double length) {
  const std::array<std::size_t, 1> m{cells};
  const std::array<double, 1> l{length};
  return GridSpec(m, l);
}

GridSpec GridSpec::cube(std::size_t cells_per_axis, double length) {
  const std::array<std::size_t, 3> m{cells_per_axis, cells_per_axis, cells_per_axis};
  const std::array<double, 3> l{length, length, length};
  return GridSpec(m, l);
}

double GridSpec::cell_volume() const noexcept {
  double v = 1.0;
  for (int i = 0; i < dims_; ++i) v *= lengths_[i] / static_cast<double>(cells_[i]);
  return v;
}

double GridSpec::volume() const noexcept {
  double v = 1.0;
  for (int i = 0; i < dims_; ++i) v *= lengths_[i];
  return v;
}

std::array<std::size_t, GridSpec::kMaxDims> GridSpec::unravel(std::size_t index) const noexcept {
  std::array<std::size_t, kMaxDims> out{0, 0, 0};
  for (int axis = dims_ - 1; axis >= 0; --axis) {
    out[axis] = index % cells_[axis];
    index /= cells_[axis];
  }
  return out;
}

namespace detail {

GridData::GridData(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.total_cells()) {
    throw InvalidArgument("value count does not match grid cell count");
  }
}

bool GridData::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace detail

Field Field::constant(const GridSpec& grid, double value) {
  return Field(grid, std::vector<double>(grid.total_cells(), value));
}

double Field::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }

double Field::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

double Field::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double Field::mean() const noexcept {
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

double l2_norm(std::span<const double> values) noexcept {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

}  // namespace acsplit
