#include "acsplit/solver.hpp"

#include <cmath>
#include <sstream>

#include "acsplit/errors.hpp"

namespace acsplit {

void RunConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive and finite");
  if (!(t_final >= dt) || !std::isfinite(t_final)) throw InvalidArgument("t_final must be >= dt");
  if (!(phi_max > 1.0)) throw InvalidArgument("divergence guard phi_max must exceed 1");
  acsplit::validate(scheme);
}

Stepper::Stepper(const GridSpec& grid, SplitCoefficients scheme, ModelParams model,
                 CutoffPolicy cutoff, double phi_max, OperatorRoles roles)
    : scheme_(std::move(scheme)),
      model_(model),
      cutoff_(cutoff),
      phi_max_(phi_max),
      roles_(roles),
      heat_(grid) {
  if (scheme_.a.size() != scheme_.b.size() || scheme_.a.empty()) {
    throw InvalidArgument("split coefficients need p >= 1 entries in both a and b");
  }
}

void Stepper::heat(std::span<double> values, double tau) {
  if (tau == 0.0) return;
  heat_.apply(values, tau, cutoff_);
  guard(values);
}

void Stepper::free_energy(std::span<double> values, double tau) {
  if (tau == 0.0) return;
  free_energy_evolve_inplace(values, tau, model_);
  guard(values);
}

void Stepper::guard(std::span<const double> values) const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!std::isfinite(v) || std::abs(v) > phi_max_) {
      std::ostringstream os;
      os << "|phi| exceeded the divergence guard " << phi_max_ << " at cell " << i
         << " (phi = " << v << ")";
      throw DivergenceError(i, os.str());
    }
  }
}

void Stepper::step(std::span<double> values, double dt) {
  for (std::size_t j = 0; j < scheme_.a.size(); ++j) {
    const double first = scheme_.a[j] * dt;
    const double second = scheme_.b[j] * dt;
    if (roles_ == OperatorRoles::HeatFirst) {
      heat(values, first);
      free_energy(values, second);
    } else {
      free_energy(values, first);
      heat(values, second);
    }
  }
}

Field step(const Field& f, const SplitCoefficients& c, double dt, const ModelParams& model,
           const CutoffPolicy& cutoff) {
  if (!f.all_finite()) throw InvalidArgument("step: field contains non-finite values");
  Field out = f;
  Stepper(f.grid(), c, model, cutoff).step(out.values(), dt);
  return out;
}

namespace {

StepDiagnostics diagnose(const Field& f, double t, const RunConfig& cfg) {
  return StepDiagnostics{t, f.min(), f.max(), cfg.track_energy ? energy(f, cfg.model) : 0.0};
}

}  // namespace

Trajectory run(const Field& f0, const RunConfig& cfg) {
  cfg.validate();
  if (!f0.all_finite()) throw InvalidArgument("run: initial field contains non-finite values");

  std::size_t full_steps = static_cast<std::size_t>(std::llround(cfg.t_final / cfg.dt));
  double last_dt = cfg.dt;
  bool shortened = false;
  if (std::abs(static_cast<double>(full_steps) * cfg.dt - cfg.t_final) > 1e-12 * cfg.t_final) {
    full_steps = static_cast<std::size_t>(std::floor(cfg.t_final / cfg.dt));
    last_dt = cfg.t_final - static_cast<double>(full_steps) * cfg.dt;
    shortened = last_dt > 0.0;
  }
  const std::size_t total_steps = full_steps + (shortened ? 1 : 0);
  auto time_of = [&](std::size_t i) {
    if (shortened && i == total_steps) return cfg.t_final;
    return static_cast<double>(i) * cfg.dt;
  };

  // Snapshot i is taken after step snapshot_step[i] (0 = initial state).
  std::vector<std::size_t> snapshot_step;
  for (double want : cfg.snapshot_times) {
    std::size_t best = 0;
    for (std::size_t i = 1; i <= total_steps; ++i) {
      if (std::abs(time_of(i) - want) < std::abs(time_of(best) - want)) best = i;
    }
    snapshot_step.push_back(best);
  }

  Trajectory traj(f0);
  traj.shortened_final_step = shortened;
  traj.diagnostics.reserve(total_steps + 1);

  Field state = f0;
  auto take_snapshots = [&](std::size_t i) {
    for (std::size_t s = 0; s < snapshot_step.size(); ++s) {
      if (snapshot_step[s] == i) traj.snapshots.push_back({cfg.snapshot_times[s], time_of(i), state});
    }
  };
  traj.diagnostics.push_back(diagnose(state, 0.0, cfg));
  take_snapshots(0);

  Stepper stepper(f0.grid(), cfg.scheme, cfg.model, cfg.cutoff, cfg.phi_max, cfg.roles);
  Field work = state;
  for (std::size_t i = 1; i <= total_steps; ++i) {
    const double h = (shortened && i == total_steps) ? last_dt : cfg.dt;
    try {
      stepper.step(work.values(), h);
    } catch (const DivergenceError& e) {
      traj.status = RunStatus::Diverged;
      traj.diverged_step = i;
      traj.diverged_cell = e.cell();
      break;
    }
    state = work;
    traj.steps_taken = i;
    traj.diagnostics.push_back(diagnose(state, time_of(i), cfg));
    take_snapshots(i);
  }
  traj.final_field = std::move(state);
  return traj;
}

double relative_l2_error(const Field& f, const Field& g) {
  if (!(f.grid() == g.grid())) throw InvalidArgument("relative_l2_error: grids differ");
  const double ref = l2_norm(g.values());
  if (ref == 0.0) throw ZeroReference();
  double diff = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = f[i] - g[i];
    diff += d * d;
  }
  return std::sqrt(diff) / ref;
}

}  // namespace acsplit
