#include "acsplit/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "acsplit/errors.hpp"

namespace acsplit {

ModelParams::ModelParams(double epsilon) : epsilon_(epsilon), epsilon_sq_(epsilon * epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgument("epsilon must be positive and finite");
  }
}

double double_well(double phi) noexcept {
  const double q = phi * phi - 1.0;
  return 0.25 * q * q;
}

CutoffPolicy::CutoffPolicy(double k_tol) : k_tol_(k_tol) {
  // K_tol < 1 would clamp forward (decaying) modes too.
  if (!(k_tol >= 1.0)) throw InvalidArgument("cut-off tolerance K_tol must be >= 1");
}

namespace {

[[noreturn]] void throw_blow_up(std::size_t cell, double phi, double tau) {
  std::ostringstream os;
  os.precision(17);
  os << "free-energy flow blows up at cell " << cell << " (phi = " << phi << ", tau = " << tau
     << ")";
  throw DivergenceError(cell, os.str());
}

}  // namespace

void free_energy_evolve_inplace(std::span<double> values, double tau, const ModelParams& model) {
  if (tau == 0.0) return;
  const double decay = std::exp(-2.0 * tau / model.epsilon_sq());
  const bool overflow = std::isinf(decay);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double phi = values[i];
    if (!std::isfinite(phi)) throw_blow_up(i, phi, tau);
    if (phi == 0.0) continue;
    const double phi_sq = phi * phi;
    const double q = 1.0 - phi_sq;
    if (overflow) {
      // Very long backward step: |phi| < 1 collapses to 0, |phi| = 1 is fixed.
      if (q > 0.0) {
        values[i] = 0.0;
        continue;
      }
      if (q == 0.0) continue;
      throw_blow_up(i, phi, tau);
    }
    const double radicand = phi_sq + q * decay;
    if (radicand <= kRadicandFloor) throw_blow_up(i, phi, tau);
    values[i] = phi / std::sqrt(radicand);
  }
}

Field free_energy_evolve(const Field& f, double tau, const ModelParams& model) {
  Field out = f;
  free_energy_evolve_inplace(out.values(), tau, model);
  return out;
}

HeatPropagator::HeatPropagator(const GridSpec& grid)
    : transform_(grid), eigenvalues_(laplacian_eigenvalues(grid)), scratch_(grid.total_cells()) {}

const std::vector<double>& HeatPropagator::multiplier(double tau, const CutoffPolicy& policy) {
  for (const auto& e : cache_) {
    if (e.tau == tau && e.k_tol == policy.k_tol()) return e.multiplier;
  }
  constexpr std::size_t kMaxEntries = 32;
  if (cache_.size() >= kMaxEntries) cache_.erase(cache_.begin());

  Entry entry{tau, policy.k_tol(), std::vector<double>(eigenvalues_.size())};
  const auto eig = eigenvalues_.values();
  for (std::size_t k = 0; k < eig.size(); ++k) {
    entry.multiplier[k] = std::min(std::exp(eig[k] * tau), policy.k_tol());
  }
  cache_.push_back(std::move(entry));
  return cache_.back().multiplier;
}

void HeatPropagator::apply(std::span<double> values, double tau, const CutoffPolicy& policy) {
  if (tau == 0.0) return;
  const auto& mult = multiplier(tau, policy);
  transform_.forward(values, scratch_);
  for (std::size_t k = 0; k < scratch_.size(); ++k) scratch_[k] *= mult[k];
  transform_.inverse(scratch_, values);
}

Field heat_evolve(const Field& f, double tau, const CutoffPolicy& policy) {
  if (!f.all_finite()) throw InvalidArgument("heat_evolve: field contains non-finite values");
  Field out = f;
  HeatPropagator(f.grid()).apply(out.values(), tau, policy);
  return out;
}

double energy(const Field& f, const ModelParams& model) {
  const SpectralField coeffs = dct_forward(f);
  const SpectralField eig = laplacian_eigenvalues(f.grid());
  double bulk = 0.0;
  for (double phi : f.values()) bulk += double_well(phi);
  double gradient = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) gradient -= eig[k] * coeffs[k] * coeffs[k];
  const double h = f.grid().cell_volume();
  return h * (bulk / model.epsilon_sq() + 0.5 * gradient);
}

}  // namespace acsplit
