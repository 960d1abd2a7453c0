#include "acsplit/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "acsplit/csv.hpp"
#include "acsplit/errors.hpp"
#include "acsplit/field_io.hpp"
#include "acsplit/version.hpp"

namespace acsplit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) { return format_double(v); }

std::string num_or_empty(double v) { return std::isnan(v) ? std::string() : format_double(v); }

// Runs fn(0..n-1) on up to `threads` workers and rethrows the first failure.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::string cells_label(const GridSpec& g) {
  std::string s;
  for (int a = 0; a < g.dims(); ++a) {
    if (a) s += 'x';
    s += std::to_string(g.cells(a));
  }
  return s;
}

ReportMetadata metadata_for(const ExperimentConfig& cfg) {
  ReportMetadata m;
  m.problem = cfg.problem;
  m.epsilon = cfg.resolved_epsilon();
  m.cells = cells_label(cfg.grid());
  m.length = cfg.resolved_length();
  m.seed = cfg.seed;
  m.t_final = cfg.resolved_t_final();
  m.version = kVersion;
  return m;
}

ErrorRow measure(const ExperimentConfig& cfg, const Field& f0, const SplitCoefficients& scheme,
                 double dt, double k_tol, const Field& reference) {
  ExperimentConfig local = cfg;
  local.k_tol = k_tol;
  RunConfig rc = local.run_config(scheme, dt);
  rc.snapshot_times.clear();
  rc.track_energy = false;
  const Trajectory traj = run(f0, rc);

  ErrorRow row;
  row.scheme = scheme.label;
  row.omega = kNaN;
  row.k_tol = k_tol;
  row.dt = dt;
  row.steps = traj.steps_taken;
  row.shortened = traj.shortened_final_step;
  if (traj.completed()) {
    row.status = RowStatus::Completed;
    row.error = relative_l2_error(traj.final_field, reference);
  } else {
    row.status = RowStatus::Diverged;
    row.error = kNaN;
    row.diverged_step = traj.diverged_step;
  }
  return row;
}

void finish_report(ErrorReport& report, const std::vector<std::string>& order, const SlopeWindow& window,
                   bool fit_slopes) {
  std::map<std::string, std::size_t> rank;
  for (std::size_t i = 0; i < order.size(); ++i) rank.emplace(order[i], i);
  auto key = [&](const ErrorRow& r) {
    const auto it = rank.find(r.scheme);
    const std::size_t rk = it == rank.end() ? order.size() : it->second;
    const double om = std::isnan(r.omega) ? 0.0 : r.omega;
    return std::make_tuple(rk, r.scheme, r.k_tol, om, -r.dt);
  };
  std::sort(report.rows.begin(), report.rows.end(),
            [&](const ErrorRow& x, const ErrorRow& y) { return key(x) < key(y); });

  double floor = std::numeric_limits<double>::infinity();
  for (const auto& r : report.rows) {
    if (r.status == RowStatus::Completed && r.error > 0.0) floor = std::min(floor, r.error);
  }
  report.floor = std::isfinite(floor) ? floor : kNaN;
  if (!fit_slopes) return;

  SlopeWindow w = window;
  if (!w.floor && std::isfinite(floor)) w.floor = floor;
  std::size_t i = 0;
  while (i < report.rows.size()) {
    std::size_t j = i;
    std::vector<ConvergencePoint> pts;
    while (j < report.rows.size() && report.rows[j].scheme == report.rows[i].scheme &&
           report.rows[j].k_tol == report.rows[i].k_tol) {
      const auto& r = report.rows[j];
      pts.push_back({r.dt, r.error, r.status == RowStatus::Completed});
      ++j;
    }
    report.fits.push_back({report.rows[i].scheme, report.rows[i].k_tol, fit_slope(pts, w)});
    i = j;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Coefficient tables

std::vector<CoeffRow> coeffs_sweep(Branch branch, std::span<const double> omegas) {
  std::vector<CoeffRow> rows;
  rows.reserve(omegas.size());
  for (double w : omegas) {
    CoeffRow row;
    row.omega = w;
    row.branch = branch;
    try {
      row.solution = third_order_family(w, branch);
      const auto& c = row.solution->coefficients;
      row.bounded = c.max_abs_coefficient() <= 1.0;
    } catch (const InvalidOmega& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_coeffs_sweep_csv(std::ostream& out, std::span<const CoeffRow> rows) {
  CsvWriter csv(out, {"omega", "branch", "a1", "b1", "a2", "b2", "a3", "b3", "D", "min", "max", "bounded",
                      "status"});
  for (const auto& r : rows) {
    std::vector<std::string> cells{num(r.omega), to_string(r.branch)};
    if (r.solution) {
      const auto& c = r.solution->coefficients;
      for (std::size_t j = 0; j < 3; ++j) {
        cells.push_back(num(c.a[j]));
        cells.push_back(num(c.b[j]));
      }
      cells.push_back(num(r.solution->discriminant));
      cells.push_back(num(c.min_coefficient()));
      cells.push_back(num(c.max_coefficient()));
      cells.push_back(r.bounded ? "1" : "0");
      cells.push_back("ok");
    } else {
      cells.resize(12);
      cells.push_back("error: " + r.error);
    }
    csv.row(cells);
  }
}

void write_scheme_csv(std::ostream& out, const SchemeId& id) {
  const SplitCoefficients c = named_scheme(id);
  std::vector<std::string> header{"label", "order", "stages", "omega", "D", "min", "max", "bounded"};
  for (std::size_t j = 1; j <= c.stages(); ++j) {
    header.push_back("a" + std::to_string(j));
    header.push_back("b" + std::to_string(j));
  }
  double omega = kNaN;
  double disc = kNaN;
  switch (id.kind) {
    case SchemeId::Kind::S3X: omega = special_omegas().x.omega; break;
    case SchemeId::Kind::S3Y: omega = special_omegas().y.omega; break;
    case SchemeId::Kind::S3Z: omega = special_omegas().z.omega; break;
    case SchemeId::Kind::S3: omega = id.omega; break;
    case SchemeId::Kind::S2: omega = id.omega; break;
    case SchemeId::Kind::S4U: omega = omega_u(); break;
    case SchemeId::Kind::S4V: omega = omega_v(); break;
    default: break;
  }
  if (id.order() == 3) disc = discriminant(omega);

  CsvWriter csv(out, header);
  std::vector<std::string> row{c.label, std::to_string(c.claimed_order), std::to_string(c.stages()),
                               num_or_empty(omega), num_or_empty(disc), num(c.min_coefficient()),
                               num(c.max_coefficient()), c.max_abs_coefficient() <= 1.0 ? "1" : "0"};
  for (std::size_t j = 0; j < c.stages(); ++j) {
    row.push_back(num(c.a[j]));
    row.push_back(num(c.b[j]));
  }
  csv.row(row);
}

// ---------------------------------------------------------------------------
// Error studies

const char* to_string(RowStatus status) noexcept {
  switch (status) {
    case RowStatus::Completed: return "completed";
    case RowStatus::Diverged: return "diverged";
    case RowStatus::Excluded: return "excluded";
  }
  return "?";
}

ErrorReport converge(const ExperimentConfig& cfg) {
  cfg.validate();
  ErrorReport report;
  report.metadata = metadata_for(cfg);

  const auto names = cfg.resolved_schemes();
  std::vector<SplitCoefficients> schemes;
  std::vector<std::string> order;
  for (const auto& n : names) {
    schemes.push_back(named_scheme(SchemeId::parse(n)));
    order.push_back(schemes.back().label);
  }
  const auto dts = cfg.dt_values();
  const std::vector<double> ks = cfg.k_tols.empty() ? std::vector<double>{cfg.k_tol} : cfg.k_tols;
  const Field f0 = cfg.initial_field();
  const double t_final = cfg.resolved_t_final();

  Field reference = f0;
  if (auto exact = cfg.exact_solution(t_final)) {
    reference = std::move(*exact);
    report.metadata.reference = "analytic";
  } else {
    const double ref_dt = dts.back() / cfg.reference_factor;
    const SplitCoefficients ref_scheme = named_scheme(SchemeId::parse(cfg.reference_scheme));
    RunConfig rc = cfg.run_config(ref_scheme, ref_dt);
    rc.snapshot_times.clear();
    rc.track_energy = false;
    const Trajectory traj = run(f0, rc);
    if (!traj.completed()) {
      throw ConvergenceFailure("reference run " + ref_scheme.label + " at dt=" + num(ref_dt) + " diverged");
    }
    reference = traj.final_field;
    report.metadata.reference = ref_scheme.label + "@" + num(ref_dt);
  }

  struct Task {
    std::size_t scheme;
    double k_tol;
    double dt;
  };
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < schemes.size(); ++s) {
    for (double k : ks) {
      for (double dt : dts) tasks.push_back({s, k, dt});
    }
  }
  report.rows.resize(tasks.size());
  parallel_for(tasks.size(), cfg.threads, [&](std::size_t i) {
    const Task& t = tasks[i];
    report.rows[i] = measure(cfg, f0, schemes[t.scheme], t.dt, t.k_tol, reference);
  });
  finish_report(report, order, cfg.fit, true);
  return report;
}

ErrorReport sweep_omega(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.problem != ProblemKind::TravelingWave) {
    throw InvalidArgument("sweep-omega needs the traveling-wave problem (analytic reference)");
  }
  ErrorReport report;
  report.metadata = metadata_for(cfg);
  report.metadata.reference = "analytic";

  const Field f0 = cfg.initial_field();
  const Field exact = *cfg.exact_solution(cfg.resolved_t_final());
  const double dt = cfg.resolved_dt();
  const auto omegas = cfg.omega_values();
  const std::string label = std::string("S3(") + to_string(cfg.branch) + ")";

  struct Task {
    double omega;
    double k_tol;
  };
  std::vector<Task> tasks;
  for (double k : cfg.sweep_k_tols) {
    for (double w : omegas) tasks.push_back({w, k});
  }
  report.rows.resize(tasks.size());
  parallel_for(tasks.size(), cfg.threads, [&](std::size_t i) {
    const Task& t = tasks[i];
    ErrorRow row;
    try {
      SplitCoefficients c = third_order_family(t.omega, cfg.branch).coefficients;
      c.label = label;
      row = measure(cfg, f0, c, dt, t.k_tol, exact);
    } catch (const InvalidOmega& e) {
      row.scheme = label;
      row.k_tol = t.k_tol;
      row.dt = dt;
      row.error = kNaN;
      row.status = RowStatus::Excluded;
      row.note = e.what();
    }
    row.omega = t.omega;
    report.rows[i] = std::move(row);
  });
  finish_report(report, {label}, cfg.fit, false);
  return report;
}

void write_report_csv(std::ostream& out, const ErrorReport& report) {
  const ReportMetadata& m = report.metadata;
  CsvWriter csv(out, {"problem", "scheme", "omega", "k_tol", "dt", "steps", "error", "status", "diverged_step",
                      "shortened", "note", "epsilon", "cells", "length", "seed", "t_final", "reference",
                      "version"});
  for (const auto& r : report.rows) {
    csv.row({to_string(m.problem), r.scheme, num_or_empty(r.omega), format_k_tol(r.k_tol), num(r.dt),
             std::to_string(r.steps), num_or_empty(r.error), to_string(r.status),
             r.status == RowStatus::Diverged ? std::to_string(r.diverged_step) : std::string(),
             r.shortened ? "1" : "0", r.note, num(m.epsilon), m.cells, num(m.length), std::to_string(m.seed),
             num(m.t_final), m.reference, m.version});
  }
}

void write_fits_csv(std::ostream& out, const ErrorReport& report) {
  const ReportMetadata& m = report.metadata;
  CsvWriter csv(out, {"problem", "scheme", "k_tol", "valid", "slope", "intercept", "residual", "points", "dt_lo",
                      "dt_hi", "monotone", "note", "floor", "epsilon", "cells", "length", "seed", "t_final",
                      "reference", "version"});
  for (const auto& sf : report.fits) {
    const SlopeFit& f = sf.fit;
    csv.row({to_string(m.problem), sf.scheme, format_k_tol(sf.k_tol), f.valid ? "1" : "0",
             f.valid ? num(f.slope) : "", f.valid ? num(f.intercept) : "", f.valid ? num(f.residual) : "",
             std::to_string(f.points), f.valid ? num(f.dt_lo) : "", f.valid ? num(f.dt_hi) : "",
             f.monotone ? "1" : "0", f.note, num_or_empty(report.floor), num(m.epsilon), m.cells, num(m.length),
             std::to_string(m.seed), num(m.t_final), m.reference, m.version});
  }
}

void write_plot_script(std::ostream& out, const std::string& csv_name, bool omega_axis) {
  const char* x = omega_axis ? "omega" : "dt";
  out << "# Plots the error table next to this script. Needs pandas and matplotlib.\n"
         "import pathlib\n"
         "import matplotlib.pyplot as plt\n"
         "import pandas as pd\n\n"
         "here = pathlib.Path(__file__).resolve().parent\n"
         "df = pd.read_csv(here / \""
      << csv_name
      << "\")\n"
         "df = df[df.status == \"completed\"]\n"
         "fig, ax = plt.subplots()\n"
         "for (scheme, k_tol), g in df.groupby([\"scheme\", \"k_tol\"]):\n"
         "    ax.plot(g[\""
      << x
      << "\"], g[\"error\"], marker=\"o\", label=f\"{scheme} K={k_tol}\")\n"
         "ax.set_yscale(\"log\")\n"
      << (omega_axis ? "" : "ax.set_xscale(\"log\")\n") << "ax.set_xlabel(\"" << x
      << "\")\n"
         "ax.set_ylabel(\"relative l2 error\")\n"
         "ax.legend()\n"
         "fig.savefig(here / \""
      << csv_name << ".png\", dpi=150)\n";
}

// ---------------------------------------------------------------------------
// Single runs

void write_diagnostics_csv(std::ostream& out, const Trajectory& traj) {
  CsvWriter csv(out, {"step", "t", "min", "max", "energy"});
  for (std::size_t i = 0; i < traj.diagnostics.size(); ++i) {
    const auto& d = traj.diagnostics[i];
    csv.row({std::to_string(i), num(d.time), num(d.min), num(d.max), num(d.energy)});
  }
}

RunOutputs run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const SplitCoefficients scheme = named_scheme(SchemeId::parse(cfg.scheme));
  const RunConfig rc = cfg.run_config(scheme, cfg.resolved_dt());

  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + cfg.output_dir.string() + "': " + ec.message());

  RunOutputs outputs{run(cfg.initial_field(), rc), {}, {}, {}, {}};
  const auto base = [&](const std::string& suffix) { return cfg.output_dir / (cfg.prefix + suffix); };

  for (std::size_t i = 0; i < outputs.trajectory.snapshots.size(); ++i) {
    const auto path = base("_snap" + std::to_string(i) + ".acf");
    save_field(path, outputs.trajectory.snapshots[i].field);
    outputs.snapshot_files.push_back(path);
  }
  outputs.final_file = base("_final.acf");
  save_field(outputs.final_file, outputs.trajectory.final_field);

  outputs.diagnostics_file = base("_diagnostics.csv");
  {
    std::ofstream out(outputs.diagnostics_file);
    if (!out) throw IoError("cannot open '" + outputs.diagnostics_file.string() + "' for writing");
    write_diagnostics_csv(out, outputs.trajectory);
  }
  outputs.config_file = base("_config.json");
  {
    std::ofstream out(outputs.config_file);
    if (!out) throw IoError("cannot open '" + outputs.config_file.string() + "' for writing");
    out << to_json(cfg) << '\n';
  }
  return outputs;
}

}  // namespace acsplit
