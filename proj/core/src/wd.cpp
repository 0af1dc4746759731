#include "pinchsec/wd.hpp"

#include <array>
#include <cmath>
#include <string>

#include "pinchsec/errors.hpp"

namespace pinchsec {

namespace {

PastResult run_past(const AlignmentTarget& target, const FineTuneParams& fine, const Scenario& scn,
                    const char* stage) {
  try {
    return past_optimize(target, fine, scn);
  } catch (const PastError& e) {
    throw PastError(std::string(stage) + ": " + e.what(), e.partial());
  }
}

}  // namespace

WdSolution optimize_wd(const Scenario& scn, const WdParams& params) {
  scn.validate();
  if (scn.num_waveguides() != 2) throw InvalidArgument("waveguide division needs two waveguides");

  const PastResult sig = run_past({User::bob, User::eve, 0}, params.fine, scn, "signal waveguide");
  const PastResult an = run_past({User::eve, User::bob, 1}, params.fine, scn, "AN waveguide");

  WdSolution sol;
  sol.layout_signal = sig.layout;
  sol.layout_an = an.layout;
  sol.fine_steps = sig.fine_steps + an.fine_steps;

  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(scn.num_pas_per_waveguide));
  const cplx h_b1 = composite_channel(sol.layout_signal, scn.bob_pos, scn) * inv_sqrt_n;
  const cplx h_b2 = composite_channel(sol.layout_an, scn.bob_pos, scn) * inv_sqrt_n;
  const cplx h_e1 = composite_channel(sol.layout_signal, scn.eve_pos, scn) * inv_sqrt_n;
  const cplx h_e2 = composite_channel(sol.layout_an, scn.eve_pos, scn) * inv_sqrt_n;

  const PowerSplit init =
      wd_initial_split(h_b1, h_b2, h_e1, h_e2, scn.max_power, scn.noise_bob, scn.noise_eve);
  WdScaResult sca;
  try {
    sca = wd_power_sca(h_b1, h_b2, h_e1, h_e2, scn.max_power, scn.noise_bob, scn.noise_eve, params.sca_tol,
                       init);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("power allocation: ") + e.what());
  }
  sol.split = sca.split;
  sol.sca_trace = std::move(sca.trace);

  const std::array<PinchLayout, 2> layouts{sol.layout_signal, sol.layout_an};
  sol.report = secrecy_rate(rate_wd(sol.split, layouts, scn.bob_pos, scn.noise_bob, scn),
                            rate_wd(sol.split, layouts, scn.eve_pos, scn.noise_eve, scn));
  return sol;
}

}  // namespace pinchsec
