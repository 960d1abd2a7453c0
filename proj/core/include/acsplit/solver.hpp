#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "acsplit/coeffs.hpp"
#include "acsplit/grid.hpp"
#include "acsplit/operators.hpp"

namespace acsplit {

/// Which sub-flow plays the role of A (applied first within each stage).
/// The default matches F^{b_j dt} H^{a_j dt}: heat is A, free energy is B.
enum class OperatorRoles { HeatFirst, FreeEnergyFirst };

struct RunConfig {
  SplitCoefficients scheme;
  double dt = 0.0;
  double t_final = 0.0;
  ModelParams model{1.0};
  CutoffPolicy cutoff{};
  /// Requested snapshot times; each snapshot is taken at the nearest completed step.
  std::vector<double> snapshot_times;
  /// Divergence guard on max|phi| after every substep.
  double phi_max = 10.0;
  OperatorRoles roles = OperatorRoles::HeatFirst;
  /// Record per-step energy (costs one extra transform per step).
  bool track_energy = true;

  /// Throws InvalidArgument unless dt > 0, t_final >= dt, phi_max > 1 and the
  /// scheme passes validate().
  void validate() const;
};

struct StepDiagnostics {
  double time = 0.0;
  double min = 0.0;
  double max = 0.0;
  double energy = 0.0;
};

struct Snapshot {
  double requested_time = 0.0;
  double time = 0.0;
  Field field;
};

enum class RunStatus { Completed, Diverged };

struct Trajectory {
  explicit Trajectory(Field initial) : final_field(std::move(initial)) {}

  RunStatus status = RunStatus::Completed;
  /// 1-based step index and cell of the divergence, when status == Diverged.
  std::size_t diverged_step = 0;
  std::size_t diverged_cell = 0;
  std::size_t steps_taken = 0;
  /// True if t_final was not a multiple of dt and a shortened last step ran.
  bool shortened_final_step = false;
  /// Initial entry at t = 0 followed by one entry per completed step.
  std::vector<StepDiagnostics> diagnostics;
  std::vector<Snapshot> snapshots;
  /// Last successfully completed state.
  Field final_field;

  bool completed() const noexcept { return status == RunStatus::Completed; }
};

/// Reusable stepping engine for one grid and schedule. Not thread-safe.
class Stepper {
 public:
  Stepper(const GridSpec& grid, SplitCoefficients scheme, ModelParams model, CutoffPolicy cutoff,
          double phi_max = 10.0, OperatorRoles roles = OperatorRoles::HeatFirst);

  /// Advances `values` in place by one step of size dt. Zero fractions are
  /// skipped. Throws DivergenceError on blow-up or |phi| > phi_max.
  void step(std::span<double> values, double dt);

 private:
  void heat(std::span<double> values, double tau);
  void free_energy(std::span<double> values, double tau);
  void guard(std::span<const double> values) const;

  SplitCoefficients scheme_;
  ModelParams model_;
  CutoffPolicy cutoff_;
  double phi_max_;
  OperatorRoles roles_;
  HeatPropagator heat_;
};

/// One step of the composed scheme.
Field step(const Field& f, const SplitCoefficients& c, double dt, const ModelParams& model,
           const CutoffPolicy& cutoff);

/// Marches f0 to cfg.t_final. Runs round(t_final/dt) steps when t_final is a
/// multiple of dt to 1e-12 relative, else floor(t_final/dt) steps plus one
/// shortened step. Divergence is recorded in the trajectory, never thrown.
Trajectory run(const Field& f0, const RunConfig& cfg);

/// |f - g|_2 / |g|_2 with g the reference. Throws ZeroReference, or
/// InvalidArgument for mismatched grids.
double relative_l2_error(const Field& f, const Field& g);

}  // namespace acsplit
