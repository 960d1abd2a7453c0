#pragma once

#include <memory>
#include <span>
#include <vector>

#include "acsplit/grid.hpp"

namespace acsplit {

/// Orthonormal cell-centered cosine transform (DCT-II forward, DCT-III inverse),
/// applied along every axis of a GridSpec.
///
/// Along one axis with M cells,
///
///   c_k = alpha_k * sum_l f_l cos(pi k (l + 1/2) / M),
///   alpha_0 = sqrt(1/M), alpha_k = sqrt(2/M) for k >= 1,
///
/// so the transform is an isometry of the discrete l2 norm. Any M >= 2 is
/// accepted. Instances are cheap to copy and safe to use from several threads.
class CosineTransform {
 public:
  explicit CosineTransform(const GridSpec& grid);

  const GridSpec& grid() const noexcept { return grid_; }

  /// `in` and `out` must both hold grid().total_cells() values; they may alias.
  void forward(std::span<const double> in, std::span<double> out) const;
  void inverse(std::span<const double> in, std::span<double> out) const;

 private:
  struct Plans;
  GridSpec grid_;
  std::shared_ptr<const Plans> plans_;
};

/// Cosine coefficients of `f`. Throws InvalidArgument for non-finite input.
SpectralField dct_forward(const Field& f);

/// Exact inverse of dct_forward up to rounding.
Field dct_inverse(const SpectralField& s);

/// Eigenvalues of the zero-Neumann Laplacian on the cosine modes,
/// A_k = -sum_i (pi k_i / L_i)^2, in coefficient layout.
SpectralField laplacian_eigenvalues(const GridSpec& grid);

}  // namespace acsplit
