// pinchsec: run secrecy-rate sweeps, summarize result CSVs, check configs.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "pinchsec/config.hpp"
#include "pinchsec/errors.hpp"
#include "pinchsec/experiments.hpp"
#include "pinchsec/model.hpp"

namespace {

int cmd_run(const std::string& sweep_path, const std::string& out_dir, std::uint64_t seed, int trials,
            int jobs) {
  pinchsec::SweepSpec spec = pinchsec::load_sweep(sweep_path);
  spec.seed = seed;
  if (trials > 0) spec.trials = trials;
  spec.validate();
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  std::fprintf(stderr, "sweep %s over %zu values x %zu methods x %d trials, %d jobs\n",
               pinchsec::to_string(spec.sweep_var), spec.values.size(), spec.methods.size(), spec.trials, jobs);
  const auto rows = pinchsec::run_sweep(spec, jobs);
  pinchsec::write_run_outputs(out_dir, spec, rows);

  int failed = 0;
  for (const auto& r : rows) failed += r.feasible ? 0 : 1;
  std::fprintf(stderr, "wrote %zu rows to %s (%d infeasible or failed)\n", rows.size(), out_dir.c_str(), failed);
  return 0;
}

int cmd_summarize(const std::string& in_path, const std::string& out_path) {
  std::ifstream in(in_path, std::ios::binary);
  if (!in) throw pinchsec::ConfigError("cannot open " + in_path);
  const auto rows = pinchsec::read_results_csv(in);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw pinchsec::ConfigError("cannot write " + out_path);
  pinchsec::write_summary_csv(out, pinchsec::summarize(rows));
  return 0;
}

// Accepts either a sweep file or a standalone scenario file.
int cmd_check(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw pinchsec::ConfigError("cannot open " + path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (text.rfind("sweep:", 0) == 0 || text.find("\nsweep:") != std::string::npos) {
    const auto spec = pinchsec::sweep_from_yaml_text(text);
    std::printf("ok: sweep over %s, %zu values, %zu methods, %d trials\n", pinchsec::to_string(spec.sweep_var),
                spec.values.size(), spec.methods.size(), spec.trials);
  } else {
    const auto scn = pinchsec::scenario_from_yaml_text(text);
    std::printf("ok: scenario L=%g m, N=%d, %zu waveguide(s), lambda=%.6g m\n", scn.region_side,
                scn.num_pas_per_waveguide, scn.num_waveguides(), scn.wavelength());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pinching-antenna secure downlink simulator"};
  app.require_subcommand(1);

  std::string sweep_path;
  std::string out_dir;
  std::uint64_t seed = 1;
  int trials = 0;
  int jobs = 1;
  auto* run = app.add_subcommand("run", "Run a Monte-Carlo sweep");
  run->add_option("--sweep", sweep_path, "Sweep YAML file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--seed", seed, "Master seed")->required();
  run->add_option("--trials", trials, "Override the trial count");
  run->add_option("--jobs", jobs, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

  std::string in_csv;
  std::string out_csv;
  auto* summarize = app.add_subcommand("summarize", "Aggregate a results.csv");
  summarize->add_option("--in", in_csv, "results.csv")->required()->check(CLI::ExistingFile);
  summarize->add_option("--out", out_csv, "summary CSV to write")->required();

  std::string check_path;
  auto* scenario = app.add_subcommand("scenario", "Validate a scenario or sweep file");
  scenario->add_option("--check", check_path, "YAML file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(sweep_path, out_dir, seed, trials, jobs);
    if (*summarize) return cmd_summarize(in_csv, out_csv);
    if (*scenario) return cmd_check(check_path);
  } catch (const pinchsec::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
