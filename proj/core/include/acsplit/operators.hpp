#pragma once

#include <limits>
#include <span>
#include <vector>

#include "acsplit/grid.hpp"
#include "acsplit/spectral.hpp"

namespace acsplit {

/// Allen-Cahn model constants. F(phi) = (phi^2 - 1)^2 / 4, F'(phi) = phi^3 - phi.
class ModelParams {
 public:
  /// Throws InvalidArgument unless epsilon > 0 and finite.
  explicit ModelParams(double epsilon);

  double epsilon() const noexcept { return epsilon_; }
  double epsilon_sq() const noexcept { return epsilon_sq_; }

 private:
  double epsilon_;
  double epsilon_sq_;
};

double double_well(double phi) noexcept;

/// Clamp on the heat multiplier: the spectral factor is min(exp(A_k tau), k_tol).
/// Use around the accuracy you need; 1e4 and 1e9 are the usual choices.
class CutoffPolicy {
 public:
  static constexpr double kDefaultTolerance = 1e9;

  /// Throws InvalidArgument for k_tol < 1 or NaN. +infinity disables the clamp.
  explicit CutoffPolicy(double k_tol = kDefaultTolerance);

  static CutoffPolicy unbounded() { return CutoffPolicy(std::numeric_limits<double>::infinity()); }

  double k_tol() const noexcept { return k_tol_; }
  bool is_bounded() const noexcept { return k_tol_ < std::numeric_limits<double>::infinity(); }

 private:
  double k_tol_;
};

/// Radicands at or below this value are treated as finite-time blow-up.
inline constexpr double kRadicandFloor = 1e-14;

/// Exact flow of d(phi)/dt = (phi - phi^3) / eps^2 over a signed time tau:
///
///   phi / sqrt(phi^2 + (1 - phi^2) exp(-2 tau / eps^2)).
///
/// Backward steps (tau < 0) blow up for |phi| > 1; a radicand <= kRadicandFloor
/// throws DivergenceError carrying the first offending cell.
Field free_energy_evolve(const Field& f, double tau, const ModelParams& model);

/// In-place form used by the stepping loop.
void free_energy_evolve_inplace(std::span<double> values, double tau, const ModelParams& model);

/// Exact spectral flow of d(phi)/dt = Laplacian(phi) with zero-Neumann
/// boundaries, with the cut-off applied for every sign of tau. A finite
/// k_tol keeps the output finite; with an unbounded policy a long backward
/// step can overflow.
Field heat_evolve(const Field& f, double tau, const CutoffPolicy& policy);

/// Reusable heat operator for one grid. Multiplier tables are memoized per
/// (tau, k_tol) pair, so repeated substeps of a fixed schedule cost two
/// transforms and one multiply. Not thread-safe; use one per thread.
class HeatPropagator {
 public:
  explicit HeatPropagator(const GridSpec& grid);

  const GridSpec& grid() const noexcept { return transform_.grid(); }

  void apply(std::span<double> values, double tau, const CutoffPolicy& policy);

 private:
  struct Entry {
    double tau;
    double k_tol;
    std::vector<double> multiplier;
  };

  const std::vector<double>& multiplier(double tau, const CutoffPolicy& policy);

  CosineTransform transform_;
  SpectralField eigenvalues_;
  std::vector<double> scratch_;
  std::vector<Entry> cache_;
};

/// Monitoring diagnostic: h^d sum F(phi)/eps^2 + (1/2) |grad phi|^2, with the
/// gradient term evaluated spectrally as h^d sum_k (-A_k) c_k^2.
double energy(const Field& f, const ModelParams& model);

}  // namespace acsplit
