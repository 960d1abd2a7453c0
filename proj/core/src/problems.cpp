#include "acsplit/problems.hpp"

#include <cmath>
#include <random>

#include "acsplit/errors.hpp"

namespace acsplit {

double traveling_wave(double x, double t, const TravelingWaveSpec& spec) {
  const double width = 2.0 * std::numbers::sqrt2 * spec.epsilon;
  return 0.5 * (1.0 - std::tanh((x - spec.offset - spec.speed() * t) / width));
}

Field traveling_wave_field(const GridSpec& grid, double t, const TravelingWaveSpec& spec) {
  if (grid.dims() != 1) throw InvalidArgument("the traveling wave is defined on 1D grids only");
  Field f(grid);
  for (std::size_t l = 0; l < f.size(); ++l) f[l] = traveling_wave(grid.cell_center(0, l), t, spec);
  return f;
}

Field uniform_noise(const GridSpec& grid, std::uint64_t seed, double amplitude) {
  std::mt19937_64 engine(seed);
  constexpr double kUnit = 1.0 / 9007199254740992.0;  // 2^-53
  Field f(grid);
  for (auto& v : f.values()) {
    const double u = static_cast<double>(engine() >> 11) * kUnit;
    v = amplitude * (2.0 * u - 1.0);
  }
  return f;
}

Field spinodal_initial(const SpinodalSpec& spec) {
  if (!(spec.amplitude > 0.0)) throw InvalidArgument("spinodal amplitude must be positive");
  // The start must sit inside the spinodal interval (-1/sqrt(3), 1/sqrt(3)).
  if (!(spec.amplitude < 1.0 / std::sqrt(3.0))) {
    throw InvalidArgument("spinodal amplitude must be below 1/sqrt(3)");
  }
  return uniform_noise(spec.grid(), spec.seed, spec.amplitude);
}

}  // namespace acsplit
