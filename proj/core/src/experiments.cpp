#include "pinchsec/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <utility>

#include <nlohmann/json.hpp>

#include "pinchsec/baselines.hpp"
#include "pinchsec/errors.hpp"
#include "pinchsec/past.hpp"
#include "pinchsec/wd.hpp"
#include "pinchsec/wm.hpp"

namespace pinchsec {

namespace {

constexpr const char* kResultsHeader = "method,sweep_var,sweep_value,trial,seed,feasible,sr,rate_bob,rate_eve";
constexpr const char* kSummaryHeader = "method,sweep_var,sweep_value,count,feasible_count,median,mean,p10,p90";
constexpr const char* kTimingsHeader = "method,sweep_value,trial,runtime_ms,status";

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, int line_no) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ConfigError("line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
  return v;
}

std::optional<double> parse_optional(const std::string& s, int line_no) {
  if (s.empty()) return std::nullopt;
  return parse_double(s, line_no);
}

void fill_report(ResultRow& row, const SecrecyReport& r) {
  row.sr = r.secrecy_rate;
  row.rate_bob = r.rate_bob;
  row.rate_eve = r.rate_eve;
}

}  // namespace

Scenario draw_scenario(const Scenario& tmpl, Rng& rng) {
  Scenario scn = tmpl;
  const double side = tmpl.region_side;
  do {
    scn.bob_pos = {(rng.uniform() - 0.5) * side, (rng.uniform() - 0.5) * side, 0.0};
    scn.eve_pos = {(rng.uniform() - 0.5) * side, (rng.uniform() - 0.5) * side, 0.0};
  } while (scn.bob_pos == scn.eve_pos);
  return scn;
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  return mix_seed(seed, static_cast<std::uint64_t>(trial));
}

std::uint64_t method_seed(std::uint64_t trial_seed_value, std::string_view method) {
  // The AN-free WM variant shares the WM stream so the pair differs only in AN.
  if (method == "wm-no-an") method = "wm";
  return mix_seed(trial_seed_value, fnv1a(method));
}

Scenario trial_scenario(const SweepSpec& spec, double value, int trial) {
  Scenario tmpl = single_waveguide(spec.fixed);
  switch (spec.sweep_var) {
    case SweepVar::num_pas:
      tmpl.num_pas_per_waveguide = static_cast<int>(value);
      break;
    case SweepVar::area_side:
      tmpl.region_side = value;
      break;
    case SweepVar::waveguide_sep:
      break;
  }
  Rng rng(trial_seed(spec.seed, trial));
  return draw_scenario(tmpl, rng);
}

ResultRow run_method(const std::string& method, const Scenario& scn, double waveguide_sep,
                     const MethodSettings& settings, std::uint64_t seed) {
  ResultRow row;
  row.method = method;
  row.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Scenario one = single_waveguide(scn);
    const Scenario two = dual_waveguide(scn, waveguide_sep);
    if (method == "past") {
      fill_report(row, past_optimize({User::bob, User::eve, 0}, settings.fine, one).report);
      row.feasible = true;
    } else if (method == "pso-single") {
      const PsoSingleResult r = pso_single(one, settings.pso, settings.penalty, seed);
      row.feasible = r.feasible;
      if (r.feasible) {
        fill_report(row, r.report);
      } else {
        row.status = "infeasible";
      }
    } else if (method == "random") {
      const RandomBaselineResult r = random_position_baseline(one, settings.random_realizations, seed);
      row.sr = r.mean_secrecy_rate;
      row.feasible = true;
    } else if (method == "conventional") {
      fill_report(row, conventional_analog_baseline(one, settings.pso, seed).report);
      row.feasible = true;
    } else if (method == "wd") {
      fill_report(row, optimize_wd(two, WdParams{settings.fine, settings.sca_tol}).report);
      row.feasible = true;
    } else if (method == "wm" || method == "wm-no-an") {
      WmParams p;
      p.pso = settings.pso;
      p.penalty = settings.penalty;
      p.sca_tol = settings.sca_tol;
      p.outer_tol = settings.wm_outer_tol;
      p.max_outer = settings.wm_max_outer;
      p.with_an = method == "wm";
      const WmSolution s = optimize_wm(two, p, seed);
      row.feasible = s.feasible;
      if (s.feasible) {
        fill_report(row, s.report);
      } else {
        row.status = "infeasible";
      }
    } else if (method == "fdb-an" || method == "fdb-no-an") {
      fill_report(row, fdb_baseline(two, method == "fdb-an", settings.sca_tol).report);
      row.feasible = true;
    } else {
      throw InvalidArgument("unknown method '" + method + "'");
    }
  } catch (const InfeasibleLayout&) {
    row.status = "infeasible";
  } catch (const GeometryError&) {
    row.status = "geometry";
  } catch (const NumericalError&) {
    row.status = "numerical";
  } catch (const Error&) {
    row.status = "error";
  }
  if (!row.feasible) {
    row.sr.reset();
    row.rate_bob.reset();
    row.rate_eve.reset();
  }
  row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec, int jobs) {
  spec.validate();
  struct Task {
    std::size_t value_idx;
    std::size_t method_idx;
    int trial;
  };
  std::vector<Task> tasks;
  for (std::size_t v = 0; v < spec.values.size(); ++v) {
    for (std::size_t m = 0; m < spec.methods.size(); ++m) {
      for (int t = 0; t < spec.trials; ++t) tasks.push_back({v, m, t});
    }
  }

  std::vector<ResultRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
      const Task& task = tasks[i];
      const double value = spec.values[task.value_idx];
      const std::string& method = spec.methods[task.method_idx];
      const Scenario scn = trial_scenario(spec, value, task.trial);
      const double sep = spec.sweep_var == SweepVar::waveguide_sep ? value : spec.waveguide_sep;
      ResultRow row =
          run_method(method, scn, sep, spec.settings, method_seed(trial_seed(spec.seed, task.trial), method));
      row.sweep_var = spec.sweep_var;
      row.sweep_value = value;
      row.trial = task.trial;
      rows[i] = std::move(row);
    }
  };

  const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return rows;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultsHeader << '\n';
  for (const auto& r : rows) {
    out << r.method << ',' << to_string(r.sweep_var) << ',' << fmt(r.sweep_value) << ',' << r.trial << ','
        << r.seed << ',' << (r.feasible ? 1 : 0) << ',' << fmt(r.sr) << ',' << fmt(r.rate_bob) << ','
        << fmt(r.rate_eve) << '\n';
  }
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty results file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultsHeader) throw ConfigError("unexpected results header: " + line);
  std::vector<ResultRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv(line);
    if (f.size() != 9) throw ConfigError("line " + std::to_string(line_no) + ": expected 9 fields");
    ResultRow r;
    r.method = f[0];
    r.sweep_var = parse_sweep_var(f[1]);
    r.sweep_value = parse_double(f[2], line_no);
    try {
      r.trial = std::stoi(f[3]);
      r.seed = std::stoull(f[4]);
    } catch (const std::exception&) {
      throw ConfigError("line " + std::to_string(line_no) + ": bad trial or seed");
    }
    if (f[5] != "0" && f[5] != "1") throw ConfigError("line " + std::to_string(line_no) + ": bad feasible flag");
    r.feasible = f[5] == "1";
    r.sr = parse_optional(f[6], line_no);
    r.rate_bob = parse_optional(f[7], line_no);
    r.rate_eve = parse_optional(f[8], line_no);
    r.status = r.feasible ? "ok" : "infeasible";
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_timings_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kTimingsHeader << '\n';
  for (const auto& r : rows) {
    out << r.method << ',' << fmt(r.sweep_value) << ',' << r.trial << ',' << fmt(r.runtime_ms) << ',' << r.status
        << '\n';
  }
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw InvalidArgument("quantile of empty data");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("quantile level must be in [0, 1]");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  if (rows.empty()) throw InvalidArgument("nothing to summarize");
  std::vector<SummaryRow> out;
  std::vector<std::vector<double>> samples;
  std::map<std::tuple<std::string, std::string, double>, std::size_t> index;
  for (const auto& r : rows) {
    const std::string var = to_string(r.sweep_var);
    const auto key = std::make_tuple(r.method, var, r.sweep_value);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.size()).first;
      SummaryRow s;
      s.method = r.method;
      s.sweep_var = var;
      s.sweep_value = r.sweep_value;
      out.push_back(s);
      samples.emplace_back();
    }
    SummaryRow& s = out[it->second];
    ++s.count;
    if (r.feasible && r.sr) {
      ++s.feasible_count;
      samples[it->second].push_back(*r.sr);
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::vector<double>& v = samples[i];
    if (v.empty()) continue;
    std::sort(v.begin(), v.end());
    double sum = 0.0;
    for (double x : v) sum += x;
    out[i].mean = sum / static_cast<double>(v.size());
    out[i].median = quantile_sorted(v, 0.5);
    out[i].p10 = quantile_sorted(v, 0.1);
    out[i].p90 = quantile_sorted(v, 0.9);
  }
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSummaryHeader << '\n';
  for (const auto& s : rows) {
    out << s.method << ',' << s.sweep_var << ',' << fmt(s.sweep_value) << ',' << s.count << ','
        << s.feasible_count << ',' << fmt(s.median) << ',' << fmt(s.mean) << ',' << fmt(s.p10) << ','
        << fmt(s.p90) << '\n';
  }
}

std::string run_manifest_json(const SweepSpec& spec, const std::vector<ResultRow>& rows) {
  using nlohmann::ordered_json;
  const Scenario& s = spec.fixed;
  const MethodSettings& m = spec.settings;
  ordered_json j;
  j["csv_schema_version"] = kCsvSchemaVersion;
  j["sweep"] = {{"variable", to_string(spec.sweep_var)},
                {"values", spec.values},
                {"methods", spec.methods},
                {"trials", spec.trials},
                {"seed", spec.seed}};
  j["scenario"] = {{"region_side_m", s.region_side},
                   {"waveguide_height_m", s.waveguide_height},
                   {"waveguide_sep_m", spec.waveguide_sep},
                   {"carrier_freq_hz", s.carrier_freq},
                   {"eff_refractive_index", s.eff_refractive_index},
                   {"min_spacing_m", s.min_spacing},
                   {"max_power_w", s.max_power},
                   {"noise_bob_w", s.noise_bob},
                   {"noise_eve_w", s.noise_eve},
                   {"num_pas", s.num_pas_per_waveguide}};
  j["optimizer"] = {{"pso_swarm_size", m.pso.swarm_size},
                    {"pso_max_iters", m.pso.max_iters},
                    {"pso_inertia_max", m.pso.inertia_max},
                    {"pso_inertia_min", m.pso.inertia_min},
                    {"pso_c1", m.pso.c1},
                    {"pso_c2", m.pso.c2},
                    {"penalty", m.penalty},
                    {"sca_tol", m.sca_tol},
                    {"wm_outer_tol", m.wm_outer_tol},
                    {"wm_max_outer", m.wm_max_outer},
                    {"past_max_multiplier", m.fine.max_multiplier_search},
                    {"past_phase_tolerance_rad", m.fine.phase_tolerance},
                    {"random_realizations", m.random_realizations}};
  std::size_t feasible = 0;
  ordered_json status_counts = ordered_json::object();
  for (const auto& r : rows) {
    if (r.feasible) ++feasible;
    const std::string key = r.status;
    status_counts[key] = status_counts.value(key, 0) + 1;
  }
  j["rows"] = rows.size();
  j["feasible_rows"] = feasible;
  j["status_counts"] = status_counts;
  j["outputs"] = {"results.csv", "summary.csv", "timings.csv"};
  return j.dump(2) + "\n";
}

void write_run_outputs(const std::string& dir, const SweepSpec& spec, const std::vector<ResultRow>& rows) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create " + dir + ": " + ec.message());
  auto open = [&](const char* name) {
    std::ofstream f(fs::path(dir) / name, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + (fs::path(dir) / name).string());
    return f;
  };
  std::ostringstream csv;
  write_results_csv(csv, rows);
  {
    auto f = open("results.csv");
    f << csv.str();
  }
  {
    // Summaries come from the rounded CSV values so `summarize` reproduces them.
    std::istringstream back(csv.str());
    auto f = open("summary.csv");
    write_summary_csv(f, summarize(read_results_csv(back)));
  }
  {
    auto f = open("timings.csv");
    write_timings_csv(f, rows);
  }
  {
    auto f = open("run.json");
    f << run_manifest_json(spec, rows);
  }
}

}  // namespace pinchsec
