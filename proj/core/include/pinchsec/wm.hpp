#pragma once

// Waveguide multiplexing: alternating PSO over all 2N PA positions and
// SCA over the relaxed beamforming matrices (W, V).

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "pinchsec/convex.hpp"
#include "pinchsec/model.hpp"
#include "pinchsec/pso.hpp"

namespace pinchsec {

struct WmParams {
  PsoHyper pso;            // dims and bounds are filled in by optimize_wm
  double penalty = 100.0;  // xi
  double sca_tol = 1e-3;
  double outer_tol = 1e-3;  // epsilon_1
  int max_outer = 20;
  bool with_an = true;  // false keeps the AN beamformer at zero
};

/// Secrecy rate of the layouts encoded in x = [x_1; x_2] minus penalty times
/// the number of adjacent pairs closer than min_spacing. Raw order, no sorting.
double pa_fitness(std::span<const double> x, const CVector& w, const CVector& v, const Scenario& scn,
                  double penalty);

/// Number of adjacent pairs in x = [x_1; x_2] with gap below min_spacing.
int spacing_violations(std::span<const double> x, const Scenario& scn);

struct WmSolution {
  std::array<PinchLayout, 2> layouts;
  CVector w;
  CVector v;
  SecrecyReport report;
  std::vector<double> outer_trace;  // entry 0 is the initialization
  std::array<double, 2> rank_ratios{0.0, 0.0};
  bool feasible = true;
  int outer_iters = 0;
};

/// Requires a two-waveguide scenario. Deterministic in `seed`.
WmSolution optimize_wm(const Scenario& scn, const WmParams& params, std::uint64_t seed);

}  // namespace pinchsec
