// acsplit: coefficient tables, single runs, convergence studies and omega
// sweeps for the split-step Allen-Cahn integrators.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "acsplit/coeffs.hpp"
#include "acsplit/config.hpp"
#include "acsplit/csv.hpp"
#include "acsplit/errors.hpp"
#include "acsplit/experiments.hpp"
#include "acsplit/version.hpp"

namespace {

using namespace acsplit;

// Raw CLI values; anything left unset keeps the config file value.
struct Overrides {
  std::string config;
  std::optional<std::string> problem, scheme, k_tol, out_dir, prefix, roles;
  std::vector<std::string> schemes, k_tols;
  std::optional<double> dt, t_final, epsilon, length, amplitude, phi_max, dt_base, reference_factor;
  std::optional<std::size_t> cells, fit_points;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::vector<double> dt_list, snapshots;
  std::vector<int> levels;
  std::optional<std::string> reference;
  bool plot_script = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--problem", o.problem, "traveling-wave | spinodal");
  cmd->add_option("--t-final", o.t_final, "final time");
  cmd->add_option("--epsilon", o.epsilon, "interface parameter");
  cmd->add_option("--length", o.length, "domain edge length");
  cmd->add_option("--cells", o.cells, "cells per axis");
  cmd->add_option("--amplitude", o.amplitude, "spinodal noise amplitude");
  cmd->add_option("--seed", o.seed, "spinodal noise seed");
  cmd->add_option("--k-tol", o.k_tol, "heat multiplier cut-off (number or inf)");
  cmd->add_option("--phi-max", o.phi_max, "divergence guard on |phi|");
  cmd->add_option("--roles", o.roles, "heat-first | free-energy-first");
  cmd->add_option("-o,--out-dir", o.out_dir, "output directory");
  cmd->add_option("--prefix", o.prefix, "output file prefix");
  cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
}

void add_sweep(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--dt-list", o.dt_list, "explicit time steps");
  cmd->add_option("--dt-base", o.dt_base, "dt_k = dt_base / 2^k");
  cmd->add_option("--levels", o.levels, "k_min k_max")->expected(2);
}

ExperimentConfig resolve(const Overrides& o) {
  ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  if (o.problem) cfg.problem = parse_problem(*o.problem);
  if (o.scheme) cfg.scheme = *o.scheme;
  if (!o.schemes.empty()) cfg.schemes = o.schemes;
  if (o.dt) cfg.dt = *o.dt;
  if (!o.dt_list.empty()) cfg.dt_list = o.dt_list;
  if (o.dt_base) cfg.dt_base = *o.dt_base;
  if (!o.levels.empty()) {
    cfg.level_min = o.levels.at(0);
    cfg.level_max = o.levels.at(1);
  }
  if (o.t_final) cfg.t_final = *o.t_final;
  if (o.epsilon) cfg.epsilon = *o.epsilon;
  if (o.length) cfg.length = *o.length;
  if (o.cells) cfg.cells = *o.cells;
  if (o.amplitude) cfg.amplitude = *o.amplitude;
  if (o.seed) cfg.seed = *o.seed;
  if (o.k_tol) cfg.k_tol = parse_k_tol(*o.k_tol);
  if (!o.k_tols.empty()) {
    cfg.k_tols.clear();
    for (const auto& k : o.k_tols) cfg.k_tols.push_back(parse_k_tol(k));
  }
  if (o.phi_max) cfg.phi_max = *o.phi_max;
  if (o.roles) {
    if (*o.roles == "heat-first") {
      cfg.roles = OperatorRoles::HeatFirst;
    } else if (*o.roles == "free-energy-first") {
      cfg.roles = OperatorRoles::FreeEnergyFirst;
    } else {
      throw InvalidArgument("--roles must be heat-first or free-energy-first");
    }
  }
  if (!o.snapshots.empty()) cfg.snapshots = o.snapshots;
  if (o.out_dir) cfg.output_dir = *o.out_dir;
  if (o.prefix) cfg.prefix = *o.prefix;
  if (o.threads) cfg.threads = *o.threads;
  if (o.fit_points) cfg.fit.max_points = *o.fit_points;
  if (o.reference) cfg.reference_scheme = *o.reference;
  if (o.reference_factor) cfg.reference_factor = *o.reference_factor;
  if (o.plot_script) cfg.plot_script = true;
  cfg.validate();
  return cfg;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void write_report(const ExperimentConfig& cfg, const ErrorReport& report, bool omega_axis) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError("cannot create '" + cfg.output_dir.string() + "': " + ec.message());

  const std::string errors_name = cfg.prefix + "_errors.csv";
  {
    auto out = open_out(cfg.output_dir / errors_name);
    write_report_csv(out, report);
  }
  if (!report.fits.empty()) {
    auto out = open_out(cfg.output_dir / (cfg.prefix + "_fits.csv"));
    write_fits_csv(out, report);
  }
  {
    auto out = open_out(cfg.output_dir / (cfg.prefix + "_config.json"));
    out << to_json(cfg) << '\n';
  }
  if (cfg.plot_script) {
    auto out = open_out(cfg.output_dir / (cfg.prefix + "_plot.py"));
    write_plot_script(out, errors_name, omega_axis);
  }
  std::cerr << "wrote " << (cfg.output_dir / errors_name).string() << '\n';
}

int cmd_coeffs(const std::optional<std::string>& scheme, const std::string& family, const std::string& branch,
               double omega_min, double omega_max, double omega_step, const std::string& output) {
  std::ofstream file;
  if (!output.empty()) file = open_out(output);
  std::ostream& out = output.empty() ? std::cout : file;

  if (scheme) {
    write_scheme_csv(out, SchemeId::parse(*scheme));
    return 0;
  }
  if (family != "S3") throw InvalidArgument("--family must be S3 (use --scheme for single schemes)");
  if (!(omega_step > 0.0) || omega_max < omega_min) throw InvalidArgument("bad omega range");
  std::vector<double> omegas;
  const auto n = static_cast<long>(std::floor((omega_max - omega_min) / omega_step + 1e-9));
  for (long i = 0; i <= n; ++i) omegas.push_back(omega_min + static_cast<double>(i) * omega_step);

  std::vector<CoeffRow> rows;
  for (const std::string b : {"+", "-"}) {
    if (branch != "both" && branch != b) continue;
    auto part = coeffs_sweep(b == "+" ? Branch::Positive : Branch::Negative, omegas);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  if (rows.empty()) throw InvalidArgument("--branch must be +, - or both");
  write_coeffs_sweep_csv(out, rows);
  return 0;
}

int cmd_run(const Overrides& o) {
  const ExperimentConfig cfg = resolve(o);
  const RunOutputs res = run_experiment(cfg);
  const Trajectory& t = res.trajectory;
  for (const auto& p : res.snapshot_files) std::cout << "snapshot " << p.string() << '\n';
  std::cout << "diagnostics " << res.diagnostics_file.string() << '\n'
            << "final " << res.final_file.string() << '\n'
            << "steps " << t.steps_taken << (t.shortened_final_step ? " (last step shortened)" : "") << '\n';
  if (!t.completed()) {
    std::cerr << "run diverged at step " << t.diverged_step << ", cell " << t.diverged_cell << '\n';
    return exit_code(ErrorCategory::Divergence);
  }
  return 0;
}

int cmd_converge(const Overrides& o) {
  const ExperimentConfig cfg = resolve(o);
  const ErrorReport report = converge(cfg);
  write_report(cfg, report, false);
  std::cout << "scheme,k_tol,slope,residual,points,monotone\n";
  for (const auto& f : report.fits) {
    std::cout << f.scheme << ',' << format_k_tol(f.k_tol) << ','
              << (f.fit.valid ? format_double(f.fit.slope) : std::string("n/a")) << ','
              << (f.fit.valid ? format_double(f.fit.residual) : std::string("n/a")) << ',' << f.fit.points << ','
              << (f.fit.monotone ? 1 : 0) << '\n';
  }
  return 0;
}

int cmd_sweep(Overrides o, const std::optional<std::string>& branch, std::optional<double> wmin,
              std::optional<double> wmax, std::optional<double> wstep, const std::vector<std::string>& ks) {
  ExperimentConfig cfg = resolve(o);
  if (branch) {
    if (*branch == "+") {
      cfg.branch = Branch::Positive;
    } else if (*branch == "-") {
      cfg.branch = Branch::Negative;
    } else {
      throw InvalidArgument("--branch must be + or -");
    }
  }
  if (wmin) cfg.omega_min = *wmin;
  if (wmax) cfg.omega_max = *wmax;
  if (wstep) cfg.omega_step = *wstep;
  if (!ks.empty()) {
    cfg.sweep_k_tols.clear();
    for (const auto& k : ks) cfg.sweep_k_tols.push_back(parse_k_tol(k));
  }
  if (!cfg.dt && cfg.problem == ProblemKind::TravelingWave) cfg.dt = std::ldexp(cfg.wave_spec().final_time(), -4);
  cfg.validate();
  const ErrorReport report = sweep_omega(cfg);
  write_report(cfg, report, true);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Split-step cosine-spectral Allen-Cahn integrators"};
  app.set_version_flag("--version", std::string(acsplit::kVersion));
  app.require_subcommand(1);

  std::optional<std::string> coeff_scheme;
  std::string family = "S3", branch = "both", coeff_out;
  double wmin = 0.2505, wmax = 1.2, wstep = 0.001;
  auto* coeffs = app.add_subcommand("coeffs", "coefficient tables as CSV");
  coeffs->add_option("--scheme", coeff_scheme, "named scheme: S1, S2(w), S3X, S3Y, S3Z, S3(w,+/-), S4U, S4V");
  coeffs->add_option("--family", family, "family to sweep (S3)");
  coeffs->add_option("--branch", branch, "+, - or both");
  coeffs->add_option("--omega-min", wmin);
  coeffs->add_option("--omega-max", wmax);
  coeffs->add_option("--omega-step", wstep);
  coeffs->add_option("-o,--output", coeff_out, "CSV file (default stdout)");

  Overrides run_o;
  auto* run = app.add_subcommand("run", "single run with snapshots and diagnostics");
  add_common(run, run_o);
  run->add_option("--scheme", run_o.scheme, "scheme id");
  run->add_option("--dt", run_o.dt, "time step");
  run->add_option("--snapshot", run_o.snapshots, "snapshot times");

  Overrides conv_o;
  auto* conv = app.add_subcommand("converge", "error against dt for several schemes");
  add_common(conv, conv_o);
  add_sweep(conv, conv_o);
  conv->add_option("--schemes", conv_o.schemes, "scheme ids");
  conv->add_option("--k-tols", conv_o.k_tols, "repeat the study for each cut-off");
  conv->add_option("--reference", conv_o.reference, "reference scheme for self-convergence");
  conv->add_option("--reference-factor", conv_o.reference_factor, "reference dt = smallest dt / factor");
  conv->add_option("--fit-points", conv_o.fit_points, "max points per slope fit (0 = all)");
  conv->add_flag("--plot-script", conv_o.plot_script, "also write a matplotlib script");

  Overrides sweep_o;
  std::optional<std::string> sweep_branch;
  std::optional<double> swmin, swmax, swstep;
  std::vector<std::string> sweep_ks;
  auto* sweep = app.add_subcommand("sweep-omega", "error against omega for the third-order family");
  add_common(sweep, sweep_o);
  sweep->add_option("--dt", sweep_o.dt, "time step (default 2^-4 / s)");
  sweep->add_option("--branch", sweep_branch, "+ or -");
  sweep->add_option("--omega-min", swmin);
  sweep->add_option("--omega-max", swmax);
  sweep->add_option("--omega-step", swstep);
  sweep->add_option("--sweep-k-tols", sweep_ks, "cut-off values (default 1e4 1e9)");
  sweep->add_flag("--plot-script", sweep_o.plot_script, "also write a matplotlib script");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : acsplit::exit_code(acsplit::ErrorCategory::InvalidArgument);
  }

  try {
    if (*coeffs) return cmd_coeffs(coeff_scheme, family, branch, wmin, wmax, wstep, coeff_out);
    if (*run) return cmd_run(run_o);
    if (*conv) return cmd_converge(conv_o);
    if (*sweep) return cmd_sweep(sweep_o, sweep_branch, swmin, swmax, swstep, sweep_ks);
  } catch (const acsplit::Error& e) {
    std::cerr << "acsplit: " << acsplit::to_string(e.category()) << ": " << e.what() << '\n';
    return acsplit::exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "acsplit: internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
