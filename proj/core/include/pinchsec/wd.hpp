#pragma once

// Waveguide division: PAST layouts for the signal and AN waveguides, then an
// SCA power split between them.

#include "pinchsec/convex.hpp"
#include "pinchsec/model.hpp"
#include "pinchsec/past.hpp"

namespace pinchsec {

struct WdParams {
  FineTuneParams fine;
  double sca_tol = 1e-3;  // bits/s/Hz
};

struct WdSolution {
  PinchLayout layout_signal;  // waveguide 0, Bob enhanced
  PinchLayout layout_an;      // waveguide 1, Eve enhanced
  PowerSplit split;
  SecrecyReport report;
  ScaTrace sca_trace;
  int fine_steps = 0;
};

/// Requires a two-waveguide scenario. Stage errors are rethrown with the
/// stage named in the message.
WdSolution optimize_wd(const Scenario& scn, const WdParams& params = {});

}  // namespace pinchsec
