#pragma once

// YAML configuration for scenarios and sweeps. Units live in the key names
// (`_m`, `_ghz`, `_dbm`, ...); internally everything is SI.

#include <cstdint>
#include <string>
#include <vector>

#include "pinchsec/model.hpp"
#include "pinchsec/past.hpp"
#include "pinchsec/pso.hpp"

namespace pinchsec {

enum class SweepVar { num_pas, area_side, waveguide_sep };

const char* to_string(SweepVar v);
SweepVar parse_sweep_var(const std::string& s);

/// Closed set of method tags accepted by run_sweep.
const std::vector<std::string>& known_methods();
bool is_dual_waveguide_method(const std::string& method);

struct MethodSettings {
  FineTuneParams fine;
  PsoHyper pso;             // dims and bounds are set per method
  double penalty = 100.0;   // xi
  double sca_tol = 1e-3;    // epsilon_0 / epsilon_2
  double wm_outer_tol = 1e-3;  // epsilon_1
  int wm_max_outer = 20;
  int random_realizations = 500;
};

struct SweepSpec {
  SweepVar sweep_var = SweepVar::num_pas;
  std::vector<double> values;
  std::vector<std::string> methods;
  int trials = 100;
  std::uint64_t seed = 1;
  Scenario fixed = Scenario::defaults();  // one waveguide; dual methods add the second
  double waveguide_sep = 0.5;             // m, total separation D
  MethodSettings settings;

  /// Throws ConfigError on an empty/unsorted value list, unknown method,
  /// non-positive trial count, or an invalid template.
  void validate() const;
};

/// Scenario keys only (the `scenario:` block). Positions default to the
/// origin when absent.
Scenario scenario_from_yaml_text(const std::string& text);
SweepSpec sweep_from_yaml_text(const std::string& text);

Scenario load_scenario(const std::string& path);
SweepSpec load_sweep(const std::string& path);

/// Canonical YAML form (GHz, dBm, meters); parses back to the same spec up
/// to unit-conversion rounding.
std::string sweep_to_yaml(const SweepSpec& spec);

}  // namespace pinchsec
