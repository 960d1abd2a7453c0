#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "acsplit/errors.hpp"
#include "acsplit/problems.hpp"
#include "acsplit/spectral.hpp"
#include "oracles.hpp"

using namespace acsplit;

namespace {

double max_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<GridSpec> shapes() {
  std::vector<GridSpec> out{GridSpec::line(2, 1.0), GridSpec::line(7, 2.0), GridSpec::line(64, 4.0)};
  const std::size_t c2[] = {6, 5};
  const double l2[] = {1.0, 3.0};
  out.emplace_back(c2, l2);
  const std::size_t c3[] = {4, 3, 5};
  const double l3[] = {1.0, 0.5, 2.0};
  out.emplace_back(c3, l3);
  return out;
}

}  // namespace

TEST(Spectral, ForwardMatchesBruteForceDct) {
  for (const auto& g : shapes()) {
    const Field f = uniform_noise(g, 7);
    const SpectralField s = dct_forward(f);
    EXPECT_LT(max_diff(s.values(), oracle::dct(f)), 1e-13) << g.cells(0);
  }
}

TEST(Spectral, InverseMatchesBruteForceDct) {
  for (const auto& g : shapes()) {
    const Field c = uniform_noise(g, 11);
    const Field f = dct_inverse(SpectralField(g, std::vector<double>(c.values().begin(), c.values().end())));
    EXPECT_LT(max_diff(f.values(), oracle::dct(c, true)), 1e-13);
  }
}

TEST(Spectral, RoundTripAndParseval) {
  for (const auto& g : shapes()) {
    const Field f = uniform_noise(g, 3);
    const SpectralField s = dct_forward(f);
    EXPECT_LT(max_diff(dct_inverse(s).values(), f.values()), 1e-14);
    EXPECT_NEAR(l2_norm(s.values()), l2_norm(f.values()), 1e-13);
  }
}

TEST(Spectral, ConstantFieldHasOnlyTheMeanMode) {
  const GridSpec g = GridSpec::cube(8, 1.0);
  const SpectralField s = dct_forward(Field::constant(g, 0.5));
  EXPECT_NEAR(s[0], 0.5 * std::sqrt(512.0), 1e-13);
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_NEAR(s[i], 0.0, 1e-13);
}

TEST(Spectral, CosineModeMapsToOneCoefficient) {
  const std::size_t m = 32;
  const GridSpec g = GridSpec::line(m, 2.0);
  Field f(g);
  for (std::size_t l = 0; l < m; ++l) f[l] = std::cos(3 * std::numbers::pi * g.cell_center(0, l) / 2.0);
  const SpectralField s = dct_forward(f);
  for (std::size_t k = 0; k < m; ++k) EXPECT_NEAR(s[k], k == 3 ? std::sqrt(m / 2.0) : 0.0, 1e-12);
}

TEST(Spectral, LaplacianEigenvalues) {
  const std::size_t c[] = {4, 6};
  const double l[] = {2.0, 3.0};
  const GridSpec g(c, l);
  const SpectralField a = laplacian_eigenvalues(g);
  EXPECT_EQ(a[0], 0.0);
  EXPECT_FALSE(std::signbit(a[0]));
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto k = g.unravel(i);
    const double kx = std::numbers::pi * k[0] / 2.0;
    const double ky = std::numbers::pi * k[1] / 3.0;
    EXPECT_DOUBLE_EQ(a[i], i == 0 ? 0.0 : -(kx * kx + ky * ky));
    EXPECT_LE(a[i], 0.0);
  }
}

TEST(Spectral, RejectsNonFiniteInput) {
  Field f(GridSpec::line(8, 1.0));
  f[3] = std::nan("");
  EXPECT_THROW(dct_forward(f), InvalidArgument);
}

TEST(Spectral, TransformAliasingIsAllowed) {
  const GridSpec g = GridSpec::cube(6, 1.0);
  const Field f = uniform_noise(g, 5);
  std::vector<double> buf(f.values().begin(), f.values().end());
  const CosineTransform t(g);
  t.forward(buf, buf);
  EXPECT_LT(max_diff(buf, dct_forward(f).values()), 1e-15);
  t.inverse(buf, buf);
  EXPECT_LT(max_diff(buf, f.values()), 1e-14);
}
