#include "acsplit/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "acsplit/errors.hpp"

namespace acsplit {

namespace {

// FFTW planning is not thread-safe, execution is. Plans are created once per
// shape and live for the rest of the process.
class PlanRegistry {
 public:
  struct Pair {
    fftw_plan forward = nullptr;  // REDFT10 on every axis
    fftw_plan inverse = nullptr;  // REDFT01 on every axis
  };

  static PlanRegistry& instance() {
    static PlanRegistry registry;
    return registry;
  }

  Pair get(const std::vector<int>& shape) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(shape);
    if (it != plans_.end()) return it->second;

    std::size_t total = 1;
    for (int n : shape) total *= static_cast<std::size_t>(n);
    std::vector<double> scratch(total, 0.0);
    const int rank = static_cast<int>(shape.size());
    std::vector<fftw_r2r_kind> fwd(shape.size(), FFTW_REDFT10);
    std::vector<fftw_r2r_kind> inv(shape.size(), FFTW_REDFT01);
    // ESTIMATE keeps the chosen algorithm, and thus the rounding, identical run to run.
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    Pair pair;
    pair.forward = fftw_plan_r2r(rank, shape.data(), scratch.data(), scratch.data(), fwd.data(), flags);
    pair.inverse = fftw_plan_r2r(rank, shape.data(), scratch.data(), scratch.data(), inv.data(), flags);
    if (pair.forward == nullptr || pair.inverse == nullptr) {
      throw InvalidArgument("FFTW could not plan a cosine transform for this grid");
    }
    plans_.emplace(shape, pair);
    return pair;
  }

  ~PlanRegistry() {
    for (auto& [shape, pair] : plans_) {
      fftw_destroy_plan(pair.forward);
      fftw_destroy_plan(pair.inverse);
    }
  }

 private:
  PlanRegistry() = default;
  std::mutex mutex_;
  std::map<std::vector<int>, Pair> plans_;
};

// Per-axis factors turning FFTW's unnormalized REDFT10/REDFT01 into the
// orthonormal pair. REDFT10 yields 2 * sum_l f_l cos(.), REDFT01 expects
// x_0 + 2 * sum_{k>=1} x_k cos(.).
std::vector<double> axis_forward_scale(std::size_t m) {
  const double md = static_cast<double>(m);
  std::vector<double> s(m, std::sqrt(2.0 / md) / 2.0);
  s[0] = std::sqrt(1.0 / md) / 2.0;
  return s;
}

std::vector<double> axis_inverse_scale(std::size_t m) {
  const double md = static_cast<double>(m);
  std::vector<double> s(m, std::sqrt(2.0 / md) / 2.0);
  s[0] = std::sqrt(1.0 / md);
  return s;
}

std::vector<double> tensor_table(const GridSpec& grid,
                                 std::vector<double> (*axis_table)(std::size_t)) {
  std::array<std::vector<double>, GridSpec::kMaxDims> axes;
  for (int a = 0; a < grid.dims(); ++a) axes[a] = axis_table(grid.cells(a));
  std::vector<double> table(grid.total_cells());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto k = grid.unravel(i);
    double v = 1.0;
    for (int a = 0; a < grid.dims(); ++a) v *= axes[a][k[a]];
    table[i] = v;
  }
  return table;
}

void check_size(std::span<const double> data, const GridSpec& grid) {
  if (data.size() != grid.total_cells()) {
    throw InvalidArgument("buffer size does not match the transform grid");
  }
}

}  // namespace

struct CosineTransform::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  std::vector<double> forward_scale;
  std::vector<double> inverse_scale;
};

CosineTransform::CosineTransform(const GridSpec& grid) : grid_(grid) {
  std::vector<int> shape;
  for (int a = 0; a < grid.dims(); ++a) shape.push_back(static_cast<int>(grid.cells(a)));
  const auto pair = PlanRegistry::instance().get(shape);
  auto plans = std::make_shared<Plans>();
  plans->forward = pair.forward;
  plans->inverse = pair.inverse;
  plans->forward_scale = tensor_table(grid, axis_forward_scale);
  plans->inverse_scale = tensor_table(grid, axis_inverse_scale);
  plans_ = std::move(plans);
}

void CosineTransform::forward(std::span<const double> in, std::span<double> out) const {
  check_size(in, grid_);
  check_size(out, grid_);
  if (in.data() != out.data()) std::copy(in.begin(), in.end(), out.begin());
  fftw_execute_r2r(plans_->forward, out.data(), out.data());
  const auto& scale = plans_->forward_scale;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= scale[i];
}

void CosineTransform::inverse(std::span<const double> in, std::span<double> out) const {
  check_size(in, grid_);
  check_size(out, grid_);
  const auto& scale = plans_->inverse_scale;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = in[i] * scale[i];
  fftw_execute_r2r(plans_->inverse, out.data(), out.data());
}

SpectralField dct_forward(const Field& f) {
  if (!f.all_finite()) throw InvalidArgument("dct_forward: field contains non-finite values");
  SpectralField s(f.grid());
  CosineTransform(f.grid()).forward(f.values(), s.values());
  return s;
}

Field dct_inverse(const SpectralField& s) {
  Field f(s.grid());
  CosineTransform(s.grid()).inverse(s.values(), f.values());
  return f;
}

SpectralField laplacian_eigenvalues(const GridSpec& grid) {
  std::array<std::vector<double>, GridSpec::kMaxDims> axes;
  for (int a = 0; a < grid.dims(); ++a) {
    axes[a].resize(grid.cells(a));
    for (std::size_t k = 0; k < grid.cells(a); ++k) {
      const double wave = std::numbers::pi * static_cast<double>(k) / grid.length(a);
      axes[a][k] = wave * wave;
    }
  }
  SpectralField eig(grid);
  for (std::size_t i = 0; i < eig.size(); ++i) {
    const auto k = grid.unravel(i);
    double sum = 0.0;
    for (int a = 0; a < grid.dims(); ++a) sum += axes[a][k[a]];
    eig[i] = sum == 0.0 ? 0.0 : -sum;
  }
  return eig;
}

}  // namespace acsplit
