#include "pinchsec/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "pinchsec/errors.hpp"

namespace pinchsec {

namespace {

const std::set<std::string> kScenarioKeys = {
    "region_side_m",   "waveguide_height_m", "carrier_freq_ghz", "carrier_freq_hz", "eff_refractive_index",
    "min_spacing_m",   "max_power_dbm",      "max_power_w",      "noise_bob_dbm",   "noise_bob_w",
    "noise_eve_dbm",   "noise_eve_w",        "num_pas",          "bob_pos_m",       "eve_pos_m",
    "waveguide_sep_m", "waveguides"};

const std::set<std::string> kSweepKeys = {"variable", "values", "methods", "trials", "seed"};

const std::set<std::string> kOptimizerKeys = {
    "pso_swarm_size", "pso_max_iters",   "pso_inertia_max", "pso_inertia_min",          "pso_c1",
    "pso_c2",         "penalty",         "sca_tol",         "wm_outer_tol",             "wm_max_outer",
    "past_max_multiplier", "past_phase_tolerance_rad",      "random_realizations"};

void check_keys(const YAML::Node& node, const std::set<std::string>& allowed, const std::string& where) {
  if (!node) return;
  if (!node.IsMap()) throw ConfigError("'" + where + "' must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in '" + where + "'");
  }
}

template <typename T>
T get(const YAML::Node& node, const std::string& key, T fallback) {
  const YAML::Node v = node[key];
  if (!v) return fallback;
  try {
    return v.as<T>();
  } catch (const YAML::Exception& e) {
    throw ConfigError("bad value for '" + key + "': " + e.what());
  }
}

// Either `<base><metric_suffix>` scaled by `metric_to_si`, or the SI key.
double get_scaled(const YAML::Node& node, const std::string& base, const std::string& alt_suffix,
                  double (*convert)(double), const std::string& si_suffix, double fallback) {
  const bool has_alt = static_cast<bool>(node[base + alt_suffix]);
  const bool has_si = static_cast<bool>(node[base + si_suffix]);
  if (has_alt && has_si) throw ConfigError("give only one of " + base + alt_suffix + " and " + base + si_suffix);
  if (has_alt) return convert(get<double>(node, base + alt_suffix, 0.0));
  if (has_si) return get<double>(node, base + si_suffix, 0.0);
  return fallback;
}

double ghz_to_hz(double ghz) { return ghz * 1e9; }

Point3 get_position(const YAML::Node& node, const std::string& key) {
  const YAML::Node v = node[key];
  if (!v) return {};
  if (!v.IsSequence() || v.size() != 2) throw ConfigError("'" + key + "' must be [x, y]");
  return {v[0].as<double>(), v[1].as<double>(), 0.0};
}

struct ParsedScenario {
  Scenario scn;
  double separation = 0.5;
  int waveguides = 1;
  bool has_waveguides = false;
};

ParsedScenario parse_scenario(const YAML::Node& node) {
  check_keys(node, kScenarioKeys, "scenario");
  ParsedScenario out;
  Scenario& s = out.scn;
  s = Scenario::defaults();
  if (!node) return out;
  s.region_side = get(node, "region_side_m", s.region_side);
  s.waveguide_height = get(node, "waveguide_height_m", s.waveguide_height);
  s.carrier_freq = get_scaled(node, "carrier_freq", "_ghz", ghz_to_hz, "_hz", s.carrier_freq);
  s.eff_refractive_index = get(node, "eff_refractive_index", s.eff_refractive_index);
  s.min_spacing = get(node, "min_spacing_m", 0.5 * s.wavelength());
  s.max_power = get_scaled(node, "max_power", "_dbm", dbm_to_watts, "_w", s.max_power);
  s.noise_bob = get_scaled(node, "noise_bob", "_dbm", dbm_to_watts, "_w", s.noise_bob);
  s.noise_eve = get_scaled(node, "noise_eve", "_dbm", dbm_to_watts, "_w", s.noise_eve);
  s.num_pas_per_waveguide = get(node, "num_pas", s.num_pas_per_waveguide);
  s.bob_pos = get_position(node, "bob_pos_m");
  s.eve_pos = get_position(node, "eve_pos_m");
  out.separation = get(node, "waveguide_sep_m", out.separation);
  out.has_waveguides = static_cast<bool>(node["waveguides"]);
  out.waveguides = get(node, "waveguides", 1);
  if (out.waveguides != 1 && out.waveguides != 2) throw ConfigError("'waveguides' must be 1 or 2");
  if (!(out.separation >= 0.0)) throw ConfigError("'waveguide_sep_m' must be non-negative");
  return out;
}

YAML::Node parse_text(const std::string& text) {
  try {
    return YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("YAML parse error: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

const char* to_string(SweepVar v) {
  switch (v) {
    case SweepVar::num_pas: return "num_pas";
    case SweepVar::area_side: return "area_side";
    case SweepVar::waveguide_sep: return "waveguide_sep";
  }
  return "?";
}

SweepVar parse_sweep_var(const std::string& s) {
  if (s == "num_pas") return SweepVar::num_pas;
  if (s == "area_side") return SweepVar::area_side;
  if (s == "waveguide_sep") return SweepVar::waveguide_sep;
  throw ConfigError("unknown sweep variable '" + s + "'");
}

const std::vector<std::string>& known_methods() {
  static const std::vector<std::string> methods = {"past", "pso-single", "random",  "conventional", "wd",
                                                   "wm",   "wm-no-an",   "fdb-an", "fdb-no-an"};
  return methods;
}

bool is_dual_waveguide_method(const std::string& method) {
  return method == "wd" || method == "wm" || method == "wm-no-an" || method == "fdb-an" || method == "fdb-no-an";
}

void SweepSpec::validate() const {
  if (values.empty()) throw ConfigError("sweep values must not be empty");
  if (!std::is_sorted(values.begin(), values.end()) ||
      std::adjacent_find(values.begin(), values.end()) != values.end()) {
    throw ConfigError("sweep values must be strictly increasing");
  }
  if (methods.empty()) throw ConfigError("at least one method is required");
  for (const auto& m : methods) {
    const auto& known = known_methods();
    if (std::find(known.begin(), known.end(), m) == known.end()) throw ConfigError("unknown method '" + m + "'");
  }
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (settings.random_realizations < 1) throw ConfigError("random_realizations must be >= 1");
  if (settings.wm_max_outer < 1) throw ConfigError("wm_max_outer must be >= 1");
  if (!(settings.penalty > 0.0)) throw ConfigError("penalty must be positive");
  if (!(settings.sca_tol > 0.0) || !(settings.wm_outer_tol > 0.0)) throw ConfigError("tolerances must be positive");
  for (double v : values) {
    switch (sweep_var) {
      case SweepVar::num_pas:
        if (v < 1.0 || v != std::floor(v)) throw ConfigError("num_pas values must be positive integers");
        break;
      case SweepVar::area_side:
        if (!(v > 0.0)) throw ConfigError("area_side values must be positive");
        break;
      case SweepVar::waveguide_sep:
        if (!(v >= 0.0)) throw ConfigError("waveguide_sep values must be non-negative");
        break;
    }
  }
  try {
    fixed.validate();
    PsoHyper h = PsoHyper::box(1, 0.0, 1.0);
    h.swarm_size = settings.pso.swarm_size;
    h.max_iters = settings.pso.max_iters;
    h.inertia_max = settings.pso.inertia_max;
    h.inertia_min = settings.pso.inertia_min;
    h.c1 = settings.pso.c1;
    h.c2 = settings.pso.c2;
    h.validate();
    if (settings.fine.max_multiplier_search < 1 || !(settings.fine.phase_tolerance > 0.0)) {
      throw InvalidArgument("PAST parameters out of range");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

Scenario scenario_from_yaml_text(const std::string& text) {
  const YAML::Node root = parse_text(text);
  if (!root.IsMap()) throw ConfigError("top level must be a mapping");
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (key != "scenario") throw ConfigError("unknown top-level key '" + key + "'");
  }
  ParsedScenario p = parse_scenario(root["scenario"]);
  Scenario scn = p.waveguides == 2 ? dual_waveguide(p.scn, p.separation) : single_waveguide(p.scn);
  try {
    scn.validate();
  } catch (const InvalidScenario& e) {
    throw ConfigError(std::string("invalid scenario: ") + e.what());
  }
  return scn;
}

SweepSpec sweep_from_yaml_text(const std::string& text) {
  const YAML::Node root = parse_text(text);
  if (!root.IsMap()) throw ConfigError("top level must be a mapping");
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (key != "sweep" && key != "scenario" && key != "optimizer") {
      throw ConfigError("unknown top-level key '" + key + "'");
    }
  }
  const YAML::Node sweep = root["sweep"];
  if (!sweep) throw ConfigError("missing 'sweep' block");
  check_keys(sweep, kSweepKeys, "sweep");

  SweepSpec spec;
  spec.sweep_var = parse_sweep_var(get<std::string>(sweep, "variable", ""));
  spec.values = get<std::vector<double>>(sweep, "values", {});
  spec.methods = get<std::vector<std::string>>(sweep, "methods", {});
  spec.trials = get(sweep, "trials", spec.trials);
  spec.seed = get<std::uint64_t>(sweep, "seed", spec.seed);

  const ParsedScenario p = parse_scenario(root["scenario"]);
  if (p.has_waveguides) throw ConfigError("'waveguides' is set per method in sweeps; remove it");
  spec.fixed = p.scn;
  spec.waveguide_sep = p.separation;

  const YAML::Node opt = root["optimizer"];
  check_keys(opt, kOptimizerKeys, "optimizer");
  if (opt) {
    MethodSettings& m = spec.settings;
    m.pso.swarm_size = get(opt, "pso_swarm_size", m.pso.swarm_size);
    m.pso.max_iters = get(opt, "pso_max_iters", m.pso.max_iters);
    m.pso.inertia_max = get(opt, "pso_inertia_max", m.pso.inertia_max);
    m.pso.inertia_min = get(opt, "pso_inertia_min", m.pso.inertia_min);
    m.pso.c1 = get(opt, "pso_c1", m.pso.c1);
    m.pso.c2 = get(opt, "pso_c2", m.pso.c2);
    m.penalty = get(opt, "penalty", m.penalty);
    m.sca_tol = get(opt, "sca_tol", m.sca_tol);
    m.wm_outer_tol = get(opt, "wm_outer_tol", m.wm_outer_tol);
    m.wm_max_outer = get(opt, "wm_max_outer", m.wm_max_outer);
    m.fine.max_multiplier_search = get(opt, "past_max_multiplier", m.fine.max_multiplier_search);
    m.fine.phase_tolerance = get(opt, "past_phase_tolerance_rad", m.fine.phase_tolerance);
    m.random_realizations = get(opt, "random_realizations", m.random_realizations);
  }
  spec.validate();
  return spec;
}

Scenario load_scenario(const std::string& path) { return scenario_from_yaml_text(read_file(path)); }

SweepSpec load_sweep(const std::string& path) { return sweep_from_yaml_text(read_file(path)); }

std::string sweep_to_yaml(const SweepSpec& spec) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "variable" << YAML::Value << to_string(spec.sweep_var);
  out << YAML::Key << "values" << YAML::Value << YAML::Flow << spec.values;
  out << YAML::Key << "methods" << YAML::Value << YAML::Flow << spec.methods;
  out << YAML::Key << "trials" << YAML::Value << spec.trials;
  out << YAML::Key << "seed" << YAML::Value << spec.seed;
  out << YAML::EndMap;

  const Scenario& s = spec.fixed;
  out << YAML::Key << "scenario" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "region_side_m" << YAML::Value << s.region_side;
  out << YAML::Key << "waveguide_height_m" << YAML::Value << s.waveguide_height;
  out << YAML::Key << "waveguide_sep_m" << YAML::Value << spec.waveguide_sep;
  out << YAML::Key << "carrier_freq_ghz" << YAML::Value << s.carrier_freq / 1e9;
  out << YAML::Key << "eff_refractive_index" << YAML::Value << s.eff_refractive_index;
  out << YAML::Key << "min_spacing_m" << YAML::Value << s.min_spacing;
  out << YAML::Key << "max_power_dbm" << YAML::Value << watts_to_dbm(s.max_power);
  out << YAML::Key << "noise_bob_dbm" << YAML::Value << watts_to_dbm(s.noise_bob);
  out << YAML::Key << "noise_eve_dbm" << YAML::Value << watts_to_dbm(s.noise_eve);
  out << YAML::Key << "num_pas" << YAML::Value << s.num_pas_per_waveguide;
  out << YAML::EndMap;

  const MethodSettings& m = spec.settings;
  out << YAML::Key << "optimizer" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "pso_swarm_size" << YAML::Value << m.pso.swarm_size;
  out << YAML::Key << "pso_max_iters" << YAML::Value << m.pso.max_iters;
  out << YAML::Key << "pso_inertia_max" << YAML::Value << m.pso.inertia_max;
  out << YAML::Key << "pso_inertia_min" << YAML::Value << m.pso.inertia_min;
  out << YAML::Key << "pso_c1" << YAML::Value << m.pso.c1;
  out << YAML::Key << "pso_c2" << YAML::Value << m.pso.c2;
  out << YAML::Key << "penalty" << YAML::Value << m.penalty;
  out << YAML::Key << "sca_tol" << YAML::Value << m.sca_tol;
  out << YAML::Key << "wm_outer_tol" << YAML::Value << m.wm_outer_tol;
  out << YAML::Key << "wm_max_outer" << YAML::Value << m.wm_max_outer;
  out << YAML::Key << "past_max_multiplier" << YAML::Value << m.fine.max_multiplier_search;
  out << YAML::Key << "past_phase_tolerance_rad" << YAML::Value << m.fine.phase_tolerance;
  out << YAML::Key << "random_realizations" << YAML::Value << m.random_realizations;
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace pinchsec
