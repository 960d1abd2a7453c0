#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "acsplit/coeffs.hpp"
#include "acsplit/grid.hpp"
#include "acsplit/operators.hpp"
#include "acsplit/problems.hpp"
#include "acsplit/slope_fit.hpp"
#include "acsplit/solver.hpp"

namespace acsplit {

enum class ProblemKind { TravelingWave, Spinodal };

const char* to_string(ProblemKind kind) noexcept;
ProblemKind parse_problem(const std::string& text);

/// One archivable experiment description. Unset optionals fall back to the
/// problem defaults (see the README for the JSON schema):
///
///   traveling-wave: epsilon 0.03*sqrt(2), length 4, cells 128, t_final 1/s,
///                   dt = (1/s) / 2^k for k in [2, 10]
///   spinodal:       epsilon 0.015, length 1, cells 64 per axis, t_final 0.01,
///                   dt = 1e-3 / 2^k for k in [1, 7]
struct ExperimentConfig {
  ProblemKind problem = ProblemKind::TravelingWave;

  std::string scheme = "S2";
  /// Schemes of a convergence study; empty means {scheme}.
  std::vector<std::string> schemes;

  /// Single-run step; unset means the coarsest dt of the sweep.
  std::optional<double> dt;
  /// Explicit sweep; overrides dt_base and levels when non-empty.
  std::vector<double> dt_list;
  std::optional<double> dt_base;
  std::optional<int> level_min;
  std::optional<int> level_max;

  std::optional<double> t_final;
  std::optional<double> epsilon;
  std::optional<double> length;
  std::optional<std::size_t> cells;
  std::optional<double> amplitude;
  std::uint64_t seed = 20150101;

  /// +infinity disables the cut-off.
  double k_tol = 1e9;
  /// Convergence studies repeat the sweep for each value; empty means {k_tol}.
  std::vector<double> k_tols;
  double phi_max = 10.0;
  OperatorRoles roles = OperatorRoles::HeatFirst;
  std::vector<double> snapshots;

  std::filesystem::path output_dir = ".";
  std::string prefix = "acsplit";
  bool plot_script = false;

  SlopeWindow fit;

  /// Self-convergence reference: scheme run at (smallest dt) / factor.
  std::string reference_scheme = "S4V";
  double reference_factor = 2.0;

  /// omega sweep of the third-order family.
  Branch branch = Branch::Positive;
  double omega_min = 0.2505;
  double omega_max = 1.2;
  double omega_step = 0.001;
  std::vector<double> sweep_k_tols{1e4, 1e9};

  /// Worker threads for independent runs; 0 picks hardware concurrency.
  unsigned threads = 0;

  /// Throws InvalidArgument on inconsistent settings.
  void validate() const;

  double resolved_epsilon() const;
  double resolved_length() const;
  std::size_t resolved_cells() const;
  double resolved_t_final() const;
  std::vector<std::string> resolved_schemes() const;
  /// Sweep values, largest first.
  std::vector<double> dt_values() const;
  double resolved_dt() const;
  std::vector<double> omega_values() const;

  TravelingWaveSpec wave_spec() const;
  SpinodalSpec spinodal_spec() const;
  GridSpec grid() const;
  Field initial_field() const;
  /// Analytic solution at t when the problem has one.
  std::optional<Field> exact_solution(double t) const;
  ModelParams model() const;
  CutoffPolicy cutoff() const;
  RunConfig run_config(const SplitCoefficients& scheme, double dt) const;
};

/// Strict parse: unknown keys and wrong types throw InvalidArgument.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Fully resolved JSON (defaults filled in) that parse_config reads back to
/// the same experiment.
std::string to_json(const ExperimentConfig& cfg, int indent = 2);

/// "inf" / "infinity" or a number.
double parse_k_tol(const std::string& text);
std::string format_k_tol(double k_tol);

}  // namespace acsplit
