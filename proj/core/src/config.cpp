#include "acsplit/config.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "acsplit/errors.hpp"

namespace acsplit {

using nlohmann::json;

const char* to_string(ProblemKind kind) noexcept {
  return kind == ProblemKind::TravelingWave ? "traveling-wave" : "spinodal";
}

ProblemKind parse_problem(const std::string& text) {
  if (text == "traveling-wave" || text == "wave") return ProblemKind::TravelingWave;
  if (text == "spinodal") return ProblemKind::Spinodal;
  throw InvalidArgument("unknown problem '" + text + "' (expected traveling-wave or spinodal)");
}

double parse_k_tol(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "+inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw InvalidArgument("k_tol must be a number or 'inf', got '" + text + "'");
}

std::string format_k_tol(double k_tol) {
  if (std::isinf(k_tol)) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << k_tol;
  return os.str();
}

// ---------------------------------------------------------------------------
// Resolution of problem defaults

double ExperimentConfig::resolved_epsilon() const {
  if (epsilon) return *epsilon;
  return problem == ProblemKind::TravelingWave ? TravelingWaveSpec{}.epsilon : SpinodalSpec{}.epsilon;
}

double ExperimentConfig::resolved_length() const {
  if (length) return *length;
  return problem == ProblemKind::TravelingWave ? TravelingWaveSpec{}.length : SpinodalSpec{}.length;
}

std::size_t ExperimentConfig::resolved_cells() const {
  if (cells) return *cells;
  return problem == ProblemKind::TravelingWave ? 128 : SpinodalSpec{}.cells;
}

TravelingWaveSpec ExperimentConfig::wave_spec() const {
  TravelingWaveSpec spec;
  spec.epsilon = resolved_epsilon();
  spec.length = resolved_length();
  return spec;
}

SpinodalSpec ExperimentConfig::spinodal_spec() const {
  SpinodalSpec spec;
  spec.epsilon = resolved_epsilon();
  spec.length = resolved_length();
  spec.cells = resolved_cells();
  spec.seed = seed;
  if (amplitude) spec.amplitude = *amplitude;
  return spec;
}

double ExperimentConfig::resolved_t_final() const {
  if (t_final) return *t_final;
  return problem == ProblemKind::TravelingWave ? wave_spec().final_time() : 0.01;
}

std::vector<std::string> ExperimentConfig::resolved_schemes() const {
  return schemes.empty() ? std::vector<std::string>{scheme} : schemes;
}

std::vector<double> ExperimentConfig::dt_values() const {
  std::vector<double> out = dt_list;
  if (out.empty()) {
    const bool wave = problem == ProblemKind::TravelingWave;
    const double base = dt_base.value_or(wave ? wave_spec().final_time() : 1e-3);
    const int lo = level_min.value_or(wave ? 2 : 1);
    const int hi = level_max.value_or(wave ? 10 : 7);
    for (int k = lo; k <= hi; ++k) out.push_back(std::ldexp(base, -k));
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double ExperimentConfig::resolved_dt() const {
  if (dt) return *dt;
  const auto all = dt_values();
  if (all.empty()) throw InvalidArgument("no dt given and the dt sweep is empty");
  return all.front();
}

std::vector<double> ExperimentConfig::omega_values() const {
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((omega_max - omega_min) / omega_step + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(omega_min + static_cast<double>(i) * omega_step);
  return out;
}

GridSpec ExperimentConfig::grid() const {
  if (problem == ProblemKind::TravelingWave) return GridSpec::line(resolved_cells(), resolved_length());
  return spinodal_spec().grid();
}

Field ExperimentConfig::initial_field() const {
  if (problem == ProblemKind::TravelingWave) return traveling_wave_field(grid(), 0.0, wave_spec());
  return spinodal_initial(spinodal_spec());
}

std::optional<Field> ExperimentConfig::exact_solution(double t) const {
  if (problem == ProblemKind::TravelingWave) return traveling_wave_field(grid(), t, wave_spec());
  return std::nullopt;
}

ModelParams ExperimentConfig::model() const { return ModelParams(resolved_epsilon()); }

CutoffPolicy ExperimentConfig::cutoff() const { return CutoffPolicy(k_tol); }

RunConfig ExperimentConfig::run_config(const SplitCoefficients& c, double step) const {
  RunConfig rc;
  rc.scheme = c;
  rc.dt = step;
  rc.t_final = resolved_t_final();
  rc.model = model();
  rc.cutoff = cutoff();
  rc.snapshot_times = snapshots;
  rc.phi_max = phi_max;
  rc.roles = roles;
  return rc;
}

void ExperimentConfig::validate() const {
  for (const auto& s : resolved_schemes()) SchemeId::parse(s);
  SchemeId::parse(reference_scheme);
  (void)model();
  (void)cutoff();
  for (double k : sweep_k_tols) (void)CutoffPolicy(k);
  for (double k : k_tols) (void)CutoffPolicy(k);
  (void)grid();
  if (!(resolved_t_final() > 0.0)) throw InvalidArgument("t_final must be positive");
  if (dt && !(*dt > 0.0)) throw InvalidArgument("dt must be positive");
  for (double d : dt_values()) {
    if (!(d > 0.0) || !std::isfinite(d)) throw InvalidArgument("every dt in the sweep must be positive");
  }
  if (!(phi_max > 1.0)) throw InvalidArgument("phi_max must exceed 1");
  if (!(reference_factor >= 2.0)) {
    throw InvalidArgument("reference_factor must be >= 2 so the reference is at least 2x finer in dt");
  }
  if (!(omega_step > 0.0) || !(omega_max >= omega_min)) throw InvalidArgument("bad omega grid");
  if (!(fit.floor_factor >= 0.0)) throw InvalidArgument("fit floor_factor must be >= 0");
  for (double s : snapshots) {
    if (!(s >= 0.0)) throw InvalidArgument("snapshot times must be >= 0");
  }
  if (problem == ProblemKind::TravelingWave && cells && *cells < 2) throw InvalidArgument("cells must be >= 2");
  if (problem == ProblemKind::Spinodal) (void)initial_field();
}

// ---------------------------------------------------------------------------
// JSON

namespace {

double number_or_inf(const json& v, const char* key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_k_tol(v.get<std::string>());
  throw InvalidArgument(std::string("'") + key + "' must be a number or \"inf\"");
}

json k_tol_json(double k) { return std::isinf(k) ? json("inf") : json(k); }

template <class T>
T get_as(const json& v, const char* key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument(std::string("config key '") + key + "' has the wrong type");
  }
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.count(key)) throw InvalidArgument("unknown config key '" + where + key + "'");
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidArgument("config must be a JSON object");
  reject_unknown(doc,
                 {"problem", "scheme", "schemes", "dt", "dt_list", "dt_base", "levels", "t_final",
                  "epsilon", "length", "cells", "amplitude", "seed", "k_tol", "k_tols", "phi_max", "roles",
                  "snapshots", "outputs", "fit", "reference", "sweep", "threads", "version"},
                 "");

  ExperimentConfig cfg;
  if (doc.contains("problem")) cfg.problem = parse_problem(get_as<std::string>(doc["problem"], "problem"));
  if (doc.contains("scheme")) cfg.scheme = get_as<std::string>(doc["scheme"], "scheme");
  if (doc.contains("schemes")) cfg.schemes = get_as<std::vector<std::string>>(doc["schemes"], "schemes");
  if (doc.contains("dt") && !doc["dt"].is_null()) cfg.dt = get_as<double>(doc["dt"], "dt");
  if (doc.contains("dt_list")) cfg.dt_list = get_as<std::vector<double>>(doc["dt_list"], "dt_list");
  if (doc.contains("dt_base") && !doc["dt_base"].is_null()) cfg.dt_base = get_as<double>(doc["dt_base"], "dt_base");
  if (doc.contains("levels")) {
    const auto lv = get_as<std::vector<int>>(doc["levels"], "levels");
    if (lv.size() != 2 || lv[0] > lv[1]) throw InvalidArgument("'levels' must be [k_min, k_max] with k_min <= k_max");
    cfg.level_min = lv[0];
    cfg.level_max = lv[1];
  }
  if (doc.contains("t_final") && !doc["t_final"].is_null()) cfg.t_final = get_as<double>(doc["t_final"], "t_final");
  if (doc.contains("epsilon") && !doc["epsilon"].is_null()) cfg.epsilon = get_as<double>(doc["epsilon"], "epsilon");
  if (doc.contains("length") && !doc["length"].is_null()) cfg.length = get_as<double>(doc["length"], "length");
  if (doc.contains("cells") && !doc["cells"].is_null()) cfg.cells = get_as<std::size_t>(doc["cells"], "cells");
  if (doc.contains("amplitude") && !doc["amplitude"].is_null()) {
    cfg.amplitude = get_as<double>(doc["amplitude"], "amplitude");
  }
  if (doc.contains("seed")) cfg.seed = get_as<std::uint64_t>(doc["seed"], "seed");
  if (doc.contains("k_tol")) cfg.k_tol = number_or_inf(doc["k_tol"], "k_tol");
  if (doc.contains("k_tols")) {
    if (!doc["k_tols"].is_array()) throw InvalidArgument("'k_tols' must be an array");
    for (const auto& k : doc["k_tols"]) cfg.k_tols.push_back(number_or_inf(k, "k_tols"));
  }
  if (doc.contains("phi_max")) cfg.phi_max = get_as<double>(doc["phi_max"], "phi_max");
  if (doc.contains("roles")) {
    const auto r = get_as<std::string>(doc["roles"], "roles");
    if (r == "heat-first") {
      cfg.roles = OperatorRoles::HeatFirst;
    } else if (r == "free-energy-first") {
      cfg.roles = OperatorRoles::FreeEnergyFirst;
    } else {
      throw InvalidArgument("'roles' must be heat-first or free-energy-first");
    }
  }
  if (doc.contains("snapshots")) cfg.snapshots = get_as<std::vector<double>>(doc["snapshots"], "snapshots");
  if (doc.contains("threads")) cfg.threads = get_as<unsigned>(doc["threads"], "threads");

  if (doc.contains("outputs")) {
    const json& o = doc["outputs"];
    if (!o.is_object()) throw InvalidArgument("'outputs' must be an object");
    reject_unknown(o, {"dir", "prefix", "plot_script"}, "outputs.");
    if (o.contains("dir")) cfg.output_dir = get_as<std::string>(o["dir"], "outputs.dir");
    if (o.contains("prefix")) cfg.prefix = get_as<std::string>(o["prefix"], "outputs.prefix");
    if (o.contains("plot_script")) cfg.plot_script = get_as<bool>(o["plot_script"], "outputs.plot_script");
  }
  if (doc.contains("fit")) {
    const json& f = doc["fit"];
    if (!f.is_object()) throw InvalidArgument("'fit' must be an object");
    reject_unknown(f, {"exclude_largest", "floor_factor", "floor", "max_points", "dt_min", "dt_max"}, "fit.");
    if (f.contains("exclude_largest")) cfg.fit.exclude_largest = get_as<bool>(f["exclude_largest"], "fit.exclude_largest");
    if (f.contains("floor_factor")) cfg.fit.floor_factor = get_as<double>(f["floor_factor"], "fit.floor_factor");
    if (f.contains("floor") && !f["floor"].is_null()) cfg.fit.floor = get_as<double>(f["floor"], "fit.floor");
    if (f.contains("max_points")) cfg.fit.max_points = get_as<std::size_t>(f["max_points"], "fit.max_points");
    if (f.contains("dt_min") && !f["dt_min"].is_null()) cfg.fit.dt_min = get_as<double>(f["dt_min"], "fit.dt_min");
    if (f.contains("dt_max") && !f["dt_max"].is_null()) cfg.fit.dt_max = get_as<double>(f["dt_max"], "fit.dt_max");
  }
  if (doc.contains("reference")) {
    const json& r = doc["reference"];
    if (!r.is_object()) throw InvalidArgument("'reference' must be an object");
    reject_unknown(r, {"scheme", "factor"}, "reference.");
    if (r.contains("scheme")) cfg.reference_scheme = get_as<std::string>(r["scheme"], "reference.scheme");
    if (r.contains("factor")) cfg.reference_factor = get_as<double>(r["factor"], "reference.factor");
  }
  if (doc.contains("sweep")) {
    const json& s = doc["sweep"];
    if (!s.is_object()) throw InvalidArgument("'sweep' must be an object");
    reject_unknown(s, {"branch", "omega_min", "omega_max", "omega_step", "k_tols"}, "sweep.");
    if (s.contains("branch")) {
      const auto b = get_as<std::string>(s["branch"], "sweep.branch");
      if (b == "+" || b == "positive") {
        cfg.branch = Branch::Positive;
      } else if (b == "-" || b == "negative") {
        cfg.branch = Branch::Negative;
      } else {
        throw InvalidArgument("'sweep.branch' must be + or -");
      }
    }
    if (s.contains("omega_min")) cfg.omega_min = get_as<double>(s["omega_min"], "sweep.omega_min");
    if (s.contains("omega_max")) cfg.omega_max = get_as<double>(s["omega_max"], "sweep.omega_max");
    if (s.contains("omega_step")) cfg.omega_step = get_as<double>(s["omega_step"], "sweep.omega_step");
    if (s.contains("k_tols")) {
      if (!s["k_tols"].is_array()) throw InvalidArgument("'sweep.k_tols' must be an array");
      cfg.sweep_k_tols.clear();
      for (const auto& k : s["k_tols"]) cfg.sweep_k_tols.push_back(number_or_inf(k, "sweep.k_tols"));
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

std::string to_json(const ExperimentConfig& cfg, int indent) {
  json doc;
  doc["problem"] = to_string(cfg.problem);
  doc["scheme"] = cfg.scheme;
  doc["schemes"] = cfg.resolved_schemes();
  if (cfg.dt) doc["dt"] = *cfg.dt;
  doc["dt_list"] = cfg.dt_values();
  doc["t_final"] = cfg.resolved_t_final();
  doc["epsilon"] = cfg.resolved_epsilon();
  doc["length"] = cfg.resolved_length();
  doc["cells"] = cfg.resolved_cells();
  if (cfg.problem == ProblemKind::Spinodal) doc["amplitude"] = cfg.spinodal_spec().amplitude;
  doc["seed"] = cfg.seed;
  doc["k_tol"] = k_tol_json(cfg.k_tol);
  json converge_ks = json::array();
  for (double k : cfg.k_tols) converge_ks.push_back(k_tol_json(k));
  doc["k_tols"] = converge_ks;
  doc["phi_max"] = cfg.phi_max;
  doc["roles"] = cfg.roles == OperatorRoles::HeatFirst ? "heat-first" : "free-energy-first";
  doc["snapshots"] = cfg.snapshots;
  doc["threads"] = cfg.threads;
  doc["outputs"] = {{"dir", cfg.output_dir.string()}, {"prefix", cfg.prefix}, {"plot_script", cfg.plot_script}};
  json fit = {{"exclude_largest", cfg.fit.exclude_largest},
              {"floor_factor", cfg.fit.floor_factor},
              {"max_points", cfg.fit.max_points}};
  if (cfg.fit.floor) fit["floor"] = *cfg.fit.floor;
  if (cfg.fit.dt_min) fit["dt_min"] = *cfg.fit.dt_min;
  if (cfg.fit.dt_max) fit["dt_max"] = *cfg.fit.dt_max;
  doc["fit"] = fit;
  doc["reference"] = {{"scheme", cfg.reference_scheme}, {"factor", cfg.reference_factor}};
  json ks = json::array();
  for (double k : cfg.sweep_k_tols) ks.push_back(k_tol_json(k));
  doc["sweep"] = {{"branch", to_string(cfg.branch)},
                  {"omega_min", cfg.omega_min},
                  {"omega_max", cfg.omega_max},
                  {"omega_step", cfg.omega_step},
                  {"k_tols", ks}};
  return doc.dump(indent);
}

}  // namespace acsplit
