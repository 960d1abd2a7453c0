#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "acsplit/coeffs.hpp"
#include "acsplit/config.hpp"
#include "acsplit/slope_fit.hpp"
#include "acsplit/solver.hpp"

namespace acsplit {

// ---------------------------------------------------------------------------
// Coefficient tables

struct CoeffRow {
  double omega = 0.0;
  Branch branch = Branch::Positive;
  /// Empty inside a singular exclusion or where D(omega) < 0.
  std::optional<BranchSolution> solution;
  std::string error;
  /// All six coefficients lie in [-1, 1].
  bool bounded = false;
};

std::vector<CoeffRow> coeffs_sweep(Branch branch, std::span<const double> omegas);

/// omega,branch,a1,b1,a2,b2,a3,b3,D,min,max,bounded,status. Excluded rows
/// carry the error marker in `status` and empty numeric cells.
void write_coeffs_sweep_csv(std::ostream& out, std::span<const CoeffRow> rows);

/// Single row: label,order,stages,omega,D,min,max,bounded,a1,b1,...,ap,bp.
/// omega and D are empty for schemes outside the third-order family.
void write_scheme_csv(std::ostream& out, const SchemeId& id);

// ---------------------------------------------------------------------------
// Error studies

enum class RowStatus { Completed, Diverged, Excluded };
const char* to_string(RowStatus status) noexcept;

struct ReportMetadata {
  ProblemKind problem = ProblemKind::TravelingWave;
  double epsilon = 0.0;
  std::string cells;  // "128" or "32x32x32"
  double length = 0.0;
  std::uint64_t seed = 0;
  double t_final = 0.0;
  /// "analytic" or "<scheme>@<dt>".
  std::string reference;
  std::string version;
};

struct ErrorRow {
  std::string scheme;
  /// Third-order family sweeps only; NaN otherwise.
  double omega = 0.0;
  double k_tol = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
  /// Relative l2 error at t_final; NaN unless completed.
  double error = 0.0;
  RowStatus status = RowStatus::Completed;
  std::size_t diverged_step = 0;
  bool shortened = false;
  std::string note;
};

struct SchemeFit {
  std::string scheme;
  double k_tol = 0.0;
  SlopeFit fit;
};

struct ErrorReport {
  ReportMetadata metadata;
  /// Sorted by (scheme order of the request, k_tol, omega, dt descending).
  std::vector<ErrorRow> rows;
  std::vector<SchemeFit> fits;
  /// Smallest completed error over all rows.
  double floor = 0.0;
};

/// Runs every (scheme, k_tol, dt) of the config and compares at t_final
/// against the analytic solution, or against a reference run of
/// cfg.reference_scheme at (smallest dt) / cfg.reference_factor.
ErrorReport converge(const ExperimentConfig& cfg);

/// Error against the analytic traveling wave over cfg.omega_values() on
/// cfg.branch for every K_tol in cfg.sweep_k_tols, at cfg.resolved_dt().
ErrorReport sweep_omega(const ExperimentConfig& cfg);

void write_report_csv(std::ostream& out, const ErrorReport& report);
void write_fits_csv(std::ostream& out, const ErrorReport& report);
/// Matplotlib script that plots error against dt (or omega) from `csv_name`.
void write_plot_script(std::ostream& out, const std::string& csv_name, bool omega_axis);

// ---------------------------------------------------------------------------
// Single runs

struct RunOutputs {
  Trajectory trajectory;
  std::vector<std::filesystem::path> snapshot_files;
  std::filesystem::path diagnostics_file;
  std::filesystem::path final_file;
  std::filesystem::path config_file;
};

/// Runs cfg.scheme at cfg.resolved_dt() and writes into cfg.output_dir:
///   <prefix>_snap<i>.acf       one per requested snapshot
///   <prefix>_final.acf         last completed state
///   <prefix>_diagnostics.csv   step,t,min,max,energy
///   <prefix>_config.json       resolved configuration
RunOutputs run_experiment(const ExperimentConfig& cfg);

void write_diagnostics_csv(std::ostream& out, const Trajectory& traj);

}  // namespace acsplit
