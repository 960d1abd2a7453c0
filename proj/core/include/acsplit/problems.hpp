#pragma once

#include <cstdint>
#include <numbers>

#include "acsplit/grid.hpp"

namespace acsplit {

/// 1D traveling front phi(x, t) = (1 - tanh((x - x0 - s t) / (2 sqrt(2) eps))) / 2
/// moving right at s = 3 / (sqrt(2) eps), on [0, length].
struct TravelingWaveSpec {
  double epsilon = 0.03 * std::numbers::sqrt2;
  double length = 4.0;
  double offset = 0.5;

  double speed() const noexcept { return 3.0 / (std::numbers::sqrt2 * epsilon); }
  /// 1/s, the time at which the front has moved one unit.
  double final_time() const noexcept { return 1.0 / speed(); }
};

double traveling_wave(double x, double t, const TravelingWaveSpec& spec);

/// Samples the front at cell centers. Throws InvalidArgument unless the grid is 1D.
Field traveling_wave_field(const GridSpec& grid, double t, const TravelingWaveSpec& spec);

/// Spinodal-decomposition start: amplitude * u with u i.i.d. uniform on [-1, 1).
///
/// u_i = 2 * (x_i >> 11) * 2^-53 - 1, where x_i is the i-th output of
/// std::mt19937_64 seeded with `seed` and i runs over cells in layout order.
/// The mapping is done by hand because std::uniform_real_distribution is not
/// bit-reproducible across standard libraries.
struct SpinodalSpec {
  double epsilon = 0.015;
  double amplitude = 0.005;
  std::uint64_t seed = 20150101;
  std::size_t cells = 64;
  double length = 1.0;

  GridSpec grid() const { return GridSpec::cube(cells, length); }
};

Field spinodal_initial(const SpinodalSpec& spec);

/// Uniform [-1, 1) white noise on an arbitrary grid, same generator as above.
Field uniform_noise(const GridSpec& grid, std::uint64_t seed, double amplitude = 1.0);

}  // namespace acsplit
