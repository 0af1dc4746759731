#pragma once

// Monte-Carlo sweeps: paired scenario draws, per-method dispatch, and the
// CSV/JSON artifacts consumed by the plotting side.
//
// results.csv (schema 1):
//   method,sweep_var,sweep_value,trial,seed,feasible,sr,rate_bob,rate_eve
// summary.csv:
//   method,sweep_var,sweep_value,count,feasible_count,median,mean,p10,p90
// timings.csv:
//   method,sweep_value,trial,runtime_ms,status
// Floats use 9 significant digits; a blank field means "not available".

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pinchsec/config.hpp"
#include "pinchsec/model.hpp"
#include "pinchsec/rng.hpp"

namespace pinchsec {

inline constexpr int kCsvSchemaVersion = 1;

struct ResultRow {
  std::string method;
  SweepVar sweep_var = SweepVar::num_pas;
  double sweep_value = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;  // method sub-seed
  bool feasible = false;
  std::optional<double> sr;
  std::optional<double> rate_bob;  // blank for averaged baselines
  std::optional<double> rate_eve;
  double runtime_ms = 0.0;  // timings.csv only
  std::string status = "ok";
};

/// Bob and Eve uniform over the L x L square centered at the origin, drawn
/// as unit-square coordinates scaled by L. Exact collisions are redrawn.
Scenario draw_scenario(const Scenario& tmpl, Rng& rng);

/// Sub-seed shared by every method and sweep value of one trial.
std::uint64_t trial_seed(std::uint64_t seed, int trial);
/// Sub-seed for one method within a trial (FNV-1a of the tag mixed in).
/// wm-no-an uses the wm stream.
std::uint64_t method_seed(std::uint64_t trial_seed, std::string_view method);

/// Single-waveguide scenario for (value, trial) before method-specific
/// waveguide setup; identical for all methods.
Scenario trial_scenario(const SweepSpec& spec, double value, int trial);

/// Runs one method on one trial scenario. Failures come back as rows with
/// feasible = false and a status tag; nothing is thrown for solver errors.
ResultRow run_method(const std::string& method, const Scenario& scn, double waveguide_sep,
                     const MethodSettings& settings, std::uint64_t seed);

/// Rows ordered by (value, method as listed, trial), independent of `jobs`.
std::vector<ResultRow> run_sweep(const SweepSpec& spec, int jobs = 1);

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
/// Throws ConfigError on a header mismatch or malformed line.
std::vector<ResultRow> read_results_csv(std::istream& in);
void write_timings_csv(std::ostream& out, const std::vector<ResultRow>& rows);

struct SummaryRow {
  std::string method;
  std::string sweep_var;
  double sweep_value = 0.0;
  int count = 0;
  int feasible_count = 0;
  std::optional<double> median;
  std::optional<double> mean;
  std::optional<double> p10;
  std::optional<double> p90;
};

/// Type-7 (linear interpolation) sample quantile of sorted data.
double quantile_sorted(const std::vector<double>& sorted, double p);

/// Aggregates over feasible rows with an SR; cells in first-appearance order.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

/// Deterministic run manifest (no timestamps or timings).
std::string run_manifest_json(const SweepSpec& spec, const std::vector<ResultRow>& rows);

/// Writes results.csv, summary.csv, timings.csv and run.json into `dir`.
/// summary.csv is computed from the CSV-rounded results.
void write_run_outputs(const std::string& dir, const SweepSpec& spec, const std::vector<ResultRow>& rows);

}  // namespace pinchsec
