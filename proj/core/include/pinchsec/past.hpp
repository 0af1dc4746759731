#pragma once

// PA-wise successive tuning (PAST) on one waveguide: symmetric coarse
// placement around the enhanced user followed by per-PA fine steps that
// keep adjacent phases aligned at one user and anti-aligned at the other.

#include <cstddef>
#include <string>
#include <utility>

#include "pinchsec/errors.hpp"
#include "pinchsec/model.hpp"

namespace pinchsec {

struct AlignmentTarget {
  User enhance_user = User::bob;   // constructive alignment
  User suppress_user = User::eve;  // destructive alignment
  std::size_t waveguide_index = 0;
};

struct FineTuneParams {
  int max_multiplier_search = 50;  // half-integer multiples scanned per step
  double phase_tolerance = 0.1;    // rad, exact-phase acceptance threshold
};

/// Raised by past_optimize when no admissible layout exists; carries the
/// PAs placed so far.
class PastError : public InfeasibleLayout {
 public:
  PastError(const std::string& what, PinchLayout partial)
      : InfeasibleLayout(what), partial_(std::move(partial)) {}
  const PinchLayout& partial() const noexcept { return partial_; }

 private:
  PinchLayout partial_;
};

/// N PAs at spacing `spacing`, symmetric about `center_x`, shifted as a block
/// to fit inside [-L/2, L/2]. Throws InfeasibleLayout if the span exceeds L.
PinchLayout coarse_uniform_placement(int n, double center_x, double spacing, std::size_t waveguide,
                                     const Scenario& scn);

/// Offset dx >= min_spacing placing the next PA at x_prev + dx.
///
/// Candidates come from the half-integer multiplier scan with the guided-
/// wavelength correction, with bearings refined as secants over the step;
/// the smallest one whose exact phase residuals are within `phase_tolerance`
/// and which stays on the waveguide is returned.
/// Throws DegenerateGeometry when both users share a bearing at x_prev and
/// SearchExhausted when no candidate qualifies.
double fine_step_right(double x_prev, const AlignmentTarget& target, const FineTuneParams& params,
                       const Scenario& scn);

/// Mirror of fine_step_right: the new PA goes to x_next - dx.
double fine_step_left(double x_next, const AlignmentTarget& target, const FineTuneParams& params,
                      const Scenario& scn);

/// Exact adjacent-pair residuals (rad): wrapped theta difference at the
/// enhanced user and wrapped (phi difference - pi) at the suppressed user.
struct PairResidual {
  double enhance = 0.0;
  double suppress = 0.0;
};
PairResidual pair_residual(double x_a, double x_b, const AlignmentTarget& target, const Scenario& scn);

struct PastResult {
  PinchLayout layout;
  SecrecyReport report;  // phase_diag: wrapped theta_n - theta_r at the enhanced user
  int fine_steps = 0;    // fine_step_* invocations, including retries
  int fallbacks = 0;     // PAs placed at the minimum spacing instead of a fine step
  int relaxed_steps = 0; // steps accepted only after widening the tolerance
};

/// Algorithm-1 layout for `target` with N = scn.num_pas_per_waveguide.
///
/// The reference PA is r = floor((N+1)/2) (1-based); steps alternate right
/// and left. A side that cannot fit another PA is closed and its remaining
/// PAs move to the other side; once both close, leftovers are packed at the
/// minimum spacing. Throws PastError when even that does not fit.
PastResult past_optimize(const AlignmentTarget& target, const FineTuneParams& params, const Scenario& scn);

}  // namespace pinchsec
