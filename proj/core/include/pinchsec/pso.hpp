#pragma once

// Bounded-box particle swarm optimizer (maximization) with linearly
// decreasing inertia and position clamping.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "pinchsec/rng.hpp"

namespace pinchsec {

struct PsoHyper {
  int swarm_size = 50;  // I
  int dims = 0;
  int max_iters = 300;  // L_max
  double inertia_max = 0.9;
  double inertia_min = 0.1;
  double c1 = 1.5;
  double c2 = 1.5;
  std::vector<double> bounds_lo;
  std::vector<double> bounds_hi;
  /// Test hook: when set, both random coefficients take this value.
  std::optional<double> fixed_beta;

  /// Same [lo, hi] on every dimension.
  static PsoHyper box(int dims, double lo, double hi);
  void validate() const;
};

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Fitness = std::function<double(std::span<const double>)>;

struct SwarmState {
  RowMatrix positions;   // I x dims
  RowMatrix velocities;  // I x dims
  RowMatrix personal_best;
  Eigen::VectorXd personal_fitness;
  Eigen::VectorXd global_best;
  double global_fitness = 0.0;
  int iter = 0;
  int nonfinite_evals = 0;  // fitness values replaced by -inf
  Rng rng;
};

/// Positions uniform in the box, velocities uniform in +-(hi-lo)/2.
/// Fitness fields stay at -inf until evaluate_swarm runs.
SwarmState init_swarm(const PsoHyper& hyper, std::uint64_t seed);

/// Scores the current positions as personal bests and picks the global best.
void evaluate_swarm(SwarmState& state, const Fitness& fitness);

/// One velocity/position update followed by best-tracking on strict improvement.
void pso_step(SwarmState& state, const Fitness& fitness, const PsoHyper& hyper);

struct PsoResult {
  std::vector<double> best_x;
  double best_fitness = 0.0;
  std::vector<double> trace;  // global-best fitness after each step
  int nonfinite_evals = 0;
};

/// Runs max_iters steps. A warm start competes for the initial global best.
PsoResult pso_optimize(const Fitness& fitness, const PsoHyper& hyper, std::uint64_t seed,
                       std::optional<std::span<const double>> warm_start = std::nullopt);

}  // namespace pinchsec
