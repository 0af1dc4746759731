#pragma once

// Comparison schemes evaluated at the same power budget as the PASS designs.

#include <cstdint>

#include "pinchsec/model.hpp"
#include "pinchsec/pso.hpp"

namespace pinchsec {

struct RandomBaselineResult {
  double mean_secrecy_rate = 0.0;
  double mean_rate_bob = 0.0;
  double mean_rate_eve = 0.0;
  int realizations = 0;
};

/// Mean over `realizations` layouts on waveguide 0, each drawn as N sorted
/// uniform positions and redrawn until every gap is at least min_spacing.
/// Throws InfeasibleLayout when the spacing cannot be met.
RandomBaselineResult random_position_baseline(const Scenario& scn, int realizations, std::uint64_t seed);

/// Element positions of a lambda/2 uniform linear array starting at the
/// corner [-L/2, 0, H].
std::vector<Point3> conventional_array(int elements, const Scenario& scn);

/// Per-element line-of-sight channel sqrt(eta) exp(-j 2 pi d / lambda) / d.
CVector array_channel(const std::vector<Point3>& elements, const Point3& user, const Scenario& scn);

struct ConventionalResult {
  SecrecyReport report;
  std::vector<double> phases;  // rad, one per element
};

/// N-element analog array, one RF chain, unit-modulus weights with power
/// P_max / N per element; phases chosen by PSO to maximize the secrecy rate.
ConventionalResult conventional_analog_baseline(const Scenario& scn, const PsoHyper& pso, std::uint64_t seed);

struct FdbResult {
  SecrecyReport report;
  CVector w;
  CVector v;
};

/// 2N-element fully digital array at lambda/2 spacing with SCA beamforming.
/// with_an = false keeps V at zero; with_an = true starts from that solution.
FdbResult fdb_baseline(const Scenario& scn, bool with_an, double sca_tol = 1e-3);

struct PsoSingleResult {
  PinchLayout layout;
  SecrecyReport report;
  bool feasible = false;
};

/// PSO over the N PA positions of waveguide 0 with the spacing penalty.
PsoSingleResult pso_single(const Scenario& scn, const PsoHyper& pso, double penalty, std::uint64_t seed);

}  // namespace pinchsec
