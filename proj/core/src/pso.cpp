#include "pinchsec/pso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pinchsec/errors.hpp"

namespace pinchsec {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double score(SwarmState& state, const Fitness& fitness, std::span<const double> x) {
  const double f = fitness(x);
  if (std::isfinite(f)) return f;
  ++state.nonfinite_evals;
  return kNegInf;
}

std::span<const double> row(const RowMatrix& m, Eigen::Index i) {
  return {m.row(i).data(), static_cast<std::size_t>(m.cols())};
}

}  // namespace

PsoHyper PsoHyper::box(int dims, double lo, double hi) {
  PsoHyper h;
  h.dims = dims;
  h.bounds_lo.assign(static_cast<std::size_t>(std::max(dims, 0)), lo);
  h.bounds_hi.assign(static_cast<std::size_t>(std::max(dims, 0)), hi);
  return h;
}

void PsoHyper::validate() const {
  if (dims < 1) throw InvalidArgument("PSO needs at least one dimension");
  if (swarm_size < 1) throw InvalidArgument("swarm_size must be >= 1");
  if (max_iters < 0) throw InvalidArgument("max_iters must be >= 0");
  if (!(inertia_min > 0.0) || !(inertia_max >= inertia_min)) {
    throw InvalidArgument("need inertia_max >= inertia_min > 0");
  }
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw InvalidArgument("learning factors must be positive");
  if (bounds_lo.size() != static_cast<std::size_t>(dims) || bounds_hi.size() != static_cast<std::size_t>(dims)) {
    throw InvalidArgument("bounds must have one entry per dimension");
  }
  for (std::size_t d = 0; d < bounds_lo.size(); ++d) {
    if (!(bounds_lo[d] < bounds_hi[d])) {
      throw InvalidArgument("empty bounds on dimension " + std::to_string(d));
    }
  }
}

SwarmState init_swarm(const PsoHyper& hyper, std::uint64_t seed) {
  hyper.validate();
  SwarmState s;
  s.rng = Rng(seed);
  const Eigen::Index n = hyper.swarm_size;
  const Eigen::Index dims = hyper.dims;
  s.positions.resize(n, dims);
  s.velocities.resize(n, dims);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index d = 0; d < dims; ++d) {
      const double lo = hyper.bounds_lo[static_cast<std::size_t>(d)];
      const double hi = hyper.bounds_hi[static_cast<std::size_t>(d)];
      const double half_width = 0.5 * (hi - lo);
      s.positions(i, d) = s.rng.uniform(lo, hi);
      s.velocities(i, d) = s.rng.uniform(-half_width, half_width);
    }
  }
  s.personal_best = s.positions;
  s.personal_fitness = Eigen::VectorXd::Constant(n, kNegInf);
  s.global_best = s.positions.row(0).transpose();
  s.global_fitness = kNegInf;
  return s;
}

void evaluate_swarm(SwarmState& state, const Fitness& fitness) {
  for (Eigen::Index i = 0; i < state.positions.rows(); ++i) {
    state.personal_best.row(i) = state.positions.row(i);
    state.personal_fitness[i] = score(state, fitness, row(state.positions, i));
    if (state.personal_fitness[i] > state.global_fitness) {
      state.global_fitness = state.personal_fitness[i];
      state.global_best = state.positions.row(i).transpose();
    }
  }
}

void pso_step(SwarmState& state, const Fitness& fitness, const PsoHyper& hyper) {
  if (state.iter >= hyper.max_iters) throw InvalidArgument("PSO iteration budget exhausted");
  const double alpha = hyper.inertia_max - (hyper.inertia_max - hyper.inertia_min) *
                                               static_cast<double>(state.iter) / hyper.max_iters;
  const Eigen::Index dims = state.positions.cols();
  for (Eigen::Index i = 0; i < state.positions.rows(); ++i) {
    const double b1 = hyper.fixed_beta ? *hyper.fixed_beta : state.rng.uniform();
    const double b2 = hyper.fixed_beta ? *hyper.fixed_beta : state.rng.uniform();
    for (Eigen::Index d = 0; d < dims; ++d) {
      const double x = state.positions(i, d);
      double& u = state.velocities(i, d);
      u = alpha * u + hyper.c1 * b1 * (state.personal_best(i, d) - x) + hyper.c2 * b2 * (state.global_best[d] - x);
      state.positions(i, d) = std::clamp(x + u, hyper.bounds_lo[static_cast<std::size_t>(d)],
                                         hyper.bounds_hi[static_cast<std::size_t>(d)]);
    }
    const double f = score(state, fitness, row(state.positions, i));
    if (f > state.personal_fitness[i]) {
      state.personal_fitness[i] = f;
      state.personal_best.row(i) = state.positions.row(i);
    }
    if (f > state.global_fitness) {
      state.global_fitness = f;
      state.global_best = state.positions.row(i).transpose();
    }
  }
  ++state.iter;
}

PsoResult pso_optimize(const Fitness& fitness, const PsoHyper& hyper, std::uint64_t seed,
                       std::optional<std::span<const double>> warm_start) {
  SwarmState state = init_swarm(hyper, seed);
  if (warm_start) {
    if (warm_start->size() != static_cast<std::size_t>(hyper.dims)) {
      throw InvalidArgument("warm start has the wrong dimension");
    }
    state.global_best = Eigen::Map<const Eigen::VectorXd>(warm_start->data(), hyper.dims);
    state.global_fitness = score(state, fitness, *warm_start);
  }
  evaluate_swarm(state, fitness);

  PsoResult out;
  out.trace.reserve(static_cast<std::size_t>(hyper.max_iters));
  for (int l = 0; l < hyper.max_iters; ++l) {
    pso_step(state, fitness, hyper);
    out.trace.push_back(state.global_fitness);
  }
  out.best_x.assign(state.global_best.data(), state.global_best.data() + state.global_best.size());
  out.best_fitness = state.global_fitness;
  out.nonfinite_evals = state.nonfinite_evals;
  return out;
}

}  // namespace pinchsec
