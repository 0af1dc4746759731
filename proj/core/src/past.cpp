#include "pinchsec/past.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace pinchsec {

namespace {

constexpr double kDegenerateSlope = 1e-12;
constexpr int kSecantPasses = 3;

double distance_to(const Point3& a, const Point3& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z));
}

// d/dx of the distance from a PA at x to `user`.
double bearing(double x, const Point3& user, double y_wg, double height) {
  const double dx = x - user.x;
  const double dy = user.y - y_wg;
  const double lateral2 = dy * dy + height * height;
  return dx / std::sqrt(dx * dx + lateral2);
}

void check_params(const FineTuneParams& params) {
  if (params.max_multiplier_search < 1) throw InvalidArgument("max_multiplier_search must be >= 1");
  if (!(params.phase_tolerance > 0.0)) throw InvalidArgument("phase_tolerance must be positive");
}

// dir = +1 places the new PA at anchor + dx, dir = -1 at anchor - dx.
double fine_step(double anchor, int dir, const AlignmentTarget& target, const FineTuneParams& params,
                 const Scenario& scn) {
  check_params(params);
  const Point3& enh = scn.position(target.enhance_user);
  const Point3& sup = scn.position(target.suppress_user);
  const double y_wg = pa_position(anchor, target.waveguide_index, scn).y;
  const double fb = bearing(anchor, enh, y_wg, scn.waveguide_height);
  const double fe = bearing(anchor, sup, y_wg, scn.waveguide_height);
  const double denom = fb - fe;
  if (std::abs(denom) <= kDegenerateSlope) {
    throw DegenerateGeometry("users share a bearing at x = " + std::to_string(anchor));
  }

  const double lam = scn.wavelength();
  const double lam_g = scn.guided_wavelength();
  const double half = scn.half_side();
  std::vector<double> candidates;
  candidates.reserve(static_cast<std::size_t>(params.max_multiplier_search));
  const Point3 pa = pa_position(anchor, target.waveguide_index, scn);
  const double d_enh = distance_to(pa, enh);
  const double d_sup = distance_to(pa, sup);
  for (int j = 0; j < params.max_multiplier_search; ++j) {
    const double m = std::copysign(j + 0.5, denom);
    double sb = fb;
    double se = fe;
    double base = lam * m / denom;
    // Refine the bearings as secants over the step itself.
    for (int it = 0; it < kSecantPasses; ++it) {
      const Point3 q = pa_position(anchor + dir * base, target.waveguide_index, scn);
      sb = dir * (distance_to(q, enh) - d_enh) / base;
      se = dir * (distance_to(q, sup) - d_sup) / base;
      if (std::abs(sb - se) <= kDegenerateSlope) break;
      base = lam * m / (sb - se);
    }
    if (!(base > 0.0)) continue;
    const double k = base * (sb / lam + 1.0 / lam_g);
    const double dk = k - std::round(k);
    const double dx = base - lam_g * dk;
    if (dx < scn.min_spacing || dx > scn.region_side) continue;
    const double x_new = anchor + dir * dx;
    if (x_new < -half || x_new > half) continue;
    candidates.push_back(dx);
  }
  std::sort(candidates.begin(), candidates.end());

  for (double dx : candidates) {
    const double x_new = anchor + dir * dx;
    const PairResidual r = dir > 0 ? pair_residual(anchor, x_new, target, scn)
                                   : pair_residual(x_new, anchor, target, scn);
    if (std::abs(r.enhance) <= params.phase_tolerance && std::abs(r.suppress) <= params.phase_tolerance) {
      return dx;
    }
  }
  throw SearchExhausted("no admissible step within " + std::to_string(params.max_multiplier_search) +
                        " multipliers");
}

}  // namespace

PinchLayout coarse_uniform_placement(int n, double center_x, double spacing, std::size_t waveguide,
                                     const Scenario& scn) {
  if (n < 1) throw InvalidArgument("need at least one PA");
  if (!(spacing > 0.0)) throw InvalidArgument("spacing must be positive");
  const double half = scn.half_side();
  const double span = (n - 1) * spacing;
  if (span > scn.region_side) {
    throw InfeasibleLayout(std::to_string(n) + " PAs at spacing " + std::to_string(spacing) +
                           " do not fit on the waveguide");
  }
  double lo = center_x - 0.5 * span;
  if (lo < -half) lo = -half;
  if (lo + span > half) lo = half - span;

  PinchLayout layout;
  layout.waveguide_index = waveguide;
  layout.xs.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) layout.xs[static_cast<std::size_t>(i)] = lo + i * spacing;
  return layout;
}

PairResidual pair_residual(double x_a, double x_b, const AlignmentTarget& target, const Scenario& scn) {
  const std::size_t m = target.waveguide_index;
  const Point3& enh = scn.position(target.enhance_user);
  const Point3& sup = scn.position(target.suppress_user);
  PairResidual r;
  r.enhance = wrap_phase(propagation_phase(x_b, m, enh, scn) - propagation_phase(x_a, m, enh, scn));
  r.suppress = wrap_phase(propagation_phase(x_b, m, sup, scn) - propagation_phase(x_a, m, sup, scn) - kPi);
  return r;
}

double fine_step_right(double x_prev, const AlignmentTarget& target, const FineTuneParams& params,
                       const Scenario& scn) {
  return fine_step(x_prev, +1, target, params, scn);
}

double fine_step_left(double x_next, const AlignmentTarget& target, const FineTuneParams& params,
                      const Scenario& scn) {
  return fine_step(x_next, -1, target, params, scn);
}

PastResult past_optimize(const AlignmentTarget& target, const FineTuneParams& params, const Scenario& scn) {
  if (target.enhance_user == target.suppress_user) {
    throw InvalidArgument("enhance and suppress users must differ");
  }
  check_params(params);
  scn.validate();
  const int n = scn.num_pas_per_waveguide;
  const Point3& enh = scn.position(target.enhance_user);

  PastResult out;
  const PinchLayout coarse =
      coarse_uniform_placement(n, enh.x, scn.min_spacing, target.waveguide_index, scn);
  const int ref = (n + 1) / 2 - 1;  // 0-based
  const double x_ref = coarse.xs[static_cast<std::size_t>(ref)];

  std::vector<double> right{x_ref};  // increasing
  std::vector<double> left;          // decreasing, excludes x_ref
  int need_right = n - 1 - ref;
  int need_left = ref;
  bool right_open = true;
  bool left_open = true;
  const double half = scn.half_side();

  // One step on one side; returns false and closes the side if no PA fits.
  auto advance = [&](int dir) -> bool {
    const double anchor = dir > 0 ? right.back() : (left.empty() ? x_ref : left.back());
    FineTuneParams p = params;
    for (;;) {
      ++out.fine_steps;
      try {
        const double dx = fine_step(anchor, dir, target, p, scn);
        if (p.phase_tolerance > params.phase_tolerance) ++out.relaxed_steps;
        (dir > 0 ? right : left).push_back(anchor + dir * dx);
        return true;
      } catch (const DegenerateGeometry&) {
        const double x = anchor + dir * scn.min_spacing;
        if (x < -half || x > half) return false;
        ++out.fallbacks;
        (dir > 0 ? right : left).push_back(x);
        return true;
      } catch (const SearchExhausted&) {
        if (p.phase_tolerance >= kPi) return false;
        p.phase_tolerance = std::min(2.0 * p.phase_tolerance, kPi);
      }
    }
  };

  bool turn_right = true;
  while (need_right + need_left > 0 && (right_open || left_open)) {
    const int dir = turn_right ? +1 : -1;
    int& need = turn_right ? need_right : need_left;
    int& other_need = turn_right ? need_left : need_right;
    bool& open = turn_right ? right_open : left_open;
    turn_right = !turn_right;
    if (need == 0 || !open) continue;
    if (advance(dir)) {
      --need;
    } else {
      open = false;
      other_need += need;
      need = 0;
    }
  }

  // Both sides closed: pack what is left at the minimum spacing.
  for (int dir : {+1, -1}) {
    std::vector<double>& side = dir > 0 ? right : left;
    while (need_right + need_left > 0) {
      const double anchor = side.empty() ? x_ref : side.back();
      const double x = anchor + dir * scn.min_spacing;
      if (x < -half || x > half) break;
      side.push_back(x);
      ++out.fallbacks;
      (need_right > 0 ? need_right : need_left) -= 1;
    }
  }

  PinchLayout layout;
  layout.waveguide_index = target.waveguide_index;
  layout.xs.assign(left.rbegin(), left.rend());
  layout.xs.insert(layout.xs.end(), right.begin(), right.end());
  if (need_right + need_left > 0) {
    throw PastError("PAST placed " + std::to_string(layout.size()) + " of " + std::to_string(n) +
                        " PAs before both sides closed",
                    layout);
  }

  const Point3& bob = scn.bob_pos;
  const Point3& eve = scn.eve_pos;
  out.report = secrecy_rate(rate_single(scn.max_power, layout, bob, scn.noise_bob, scn),
                            rate_single(scn.max_power, layout, eve, scn.noise_eve, scn));
  const double theta_ref = propagation_phase(x_ref, target.waveguide_index, enh, scn);
  out.report.phase_diag.reserve(layout.size());
  for (double x : layout.xs) {
    out.report.phase_diag.push_back(
        wrap_phase(propagation_phase(x, target.waveguide_index, enh, scn) - theta_ref));
  }
  out.layout = std::move(layout);
  return out;
}

}  // namespace pinchsec
