#include "pinchsec/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pinchsec/errors.hpp"

namespace pinchsec {

namespace {

constexpr double kSpacingSlack = 1e-12;  // m

double distance(const Point3& a, const Point3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double checked_distance(const Point3& user, const Point3& pa) {
  const double d = distance(user, pa);
  if (!(d > 0.0)) {
    throw GeometryError("PA coincides with user position");
  }
  return d;
}

double waveguide_offset(std::size_t waveguide, const Scenario& scn) {
  if (waveguide >= scn.num_waveguides()) {
    throw InvalidArgument("waveguide index " + std::to_string(waveguide) + " out of range");
  }
  return scn.waveguide_y_offsets[waveguide];
}

bool inside_square(const Point3& p, double half) {
  constexpr double slack = 1e-12;
  return std::abs(p.x) <= half + slack && std::abs(p.y) <= half + slack && p.z == 0.0;
}

}  // namespace

const char* to_string(User u) { return u == User::bob ? "bob" : "eve"; }

Scenario Scenario::defaults() {
  Scenario scn;
  scn.min_spacing = 0.5 * scn.wavelength();
  return scn;
}

void Scenario::validate() const {
  auto fail = [](const std::string& what) { throw InvalidScenario(what); };
  if (!(region_side > 0.0)) fail("region_side must be positive");
  if (!(waveguide_height > 0.0)) fail("waveguide_height must be positive");
  if (!(carrier_freq > 0.0)) fail("carrier_freq must be positive");
  if (!(eff_refractive_index >= 1.0)) fail("eff_refractive_index must be >= 1");
  if (!(min_spacing > 0.0)) fail("min_spacing must be positive");
  if (!(max_power > 0.0)) fail("max_power must be positive");
  if (!(noise_bob > 0.0) || !(noise_eve > 0.0)) fail("noise powers must be positive");
  if (num_pas_per_waveguide < 1) fail("num_pas_per_waveguide must be >= 1");
  if (waveguide_y_offsets.empty() || waveguide_y_offsets.size() > 2) {
    fail("waveguide count must be 1 or 2");
  }
  if (!inside_square(bob_pos, half_side())) fail("bob_pos outside the region or off the ground plane");
  if (!inside_square(eve_pos, half_side())) fail("eve_pos outside the region or off the ground plane");
}

Scenario single_waveguide(Scenario scn) {
  scn.waveguide_y_offsets = {0.0};
  return scn;
}

Scenario dual_waveguide(Scenario scn, double separation) {
  if (!(separation >= 0.0)) throw InvalidArgument("waveguide separation must be >= 0");
  scn.waveguide_y_offsets = {0.5 * separation, -0.5 * separation};
  return scn;
}

double PinchLayout::min_gap() const {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n < xs.size(); ++n) gap = std::min(gap, xs[n] - xs[n - 1]);
  return gap;
}

bool PinchLayout::is_strictly_increasing() const {
  return std::adjacent_find(xs.begin(), xs.end(), std::greater_equal<>()) == xs.end();
}

bool PinchLayout::is_valid(const Scenario& scn) const {
  if (xs.empty() || waveguide_index >= scn.num_waveguides()) return false;
  const double half = scn.half_side();
  for (double x : xs) {
    if (!(x >= -half && x <= half)) return false;
  }
  return is_strictly_increasing() && min_gap() >= scn.min_spacing - kSpacingSlack;
}

Point3 pa_position(double x, std::size_t waveguide, const Scenario& scn) {
  return {x, waveguide_offset(waveguide, scn), scn.waveguide_height};
}

double propagation_phase(double x, std::size_t waveguide, const Point3& user, const Scenario& scn) {
  const double d = checked_distance(user, pa_position(x, waveguide, scn));
  return kTwoPi * d / scn.wavelength() + kTwoPi * (x + scn.half_side()) / scn.guided_wavelength();
}

double wrap_phase(double radians) {
  double r = std::remainder(radians, kTwoPi);  // [-pi, pi]
  if (r <= -kPi) r += kTwoPi;
  return r;
}

CVector free_space_channel(const PinchLayout& layout, const Point3& user, const Scenario& scn) {
  const double k0 = kTwoPi / scn.wavelength();
  const double amp = scn.sqrt_eta();
  CVector h(static_cast<Eigen::Index>(layout.size()));
  for (std::size_t n = 0; n < layout.size(); ++n) {
    const double d = checked_distance(user, pa_position(layout.xs[n], layout.waveguide_index, scn));
    h[static_cast<Eigen::Index>(n)] = std::polar(amp / d, -k0 * d);
  }
  return h;
}

CVector inwaveguide_phase(const PinchLayout& layout, const Scenario& scn) {
  const double kg = kTwoPi / scn.guided_wavelength();
  CVector e(static_cast<Eigen::Index>(layout.size()));
  for (std::size_t n = 0; n < layout.size(); ++n) {
    e[static_cast<Eigen::Index>(n)] = std::polar(1.0, -kg * (layout.xs[n] + scn.half_side()));
  }
  return e;
}

cplx composite_channel(std::span<const double> xs, std::size_t waveguide, const Point3& user,
                       const Scenario& scn) {
  const double k0 = kTwoPi / scn.wavelength();
  const double kg = kTwoPi / scn.guided_wavelength();
  const double half = scn.half_side();
  const double y = waveguide_offset(waveguide, scn);
  const double dy = user.y - y;
  const double dz = user.z - scn.waveguide_height;
  const double lateral2 = dy * dy + dz * dz;
  cplx sum{0.0, 0.0};
  for (double x : xs) {
    const double dx = user.x - x;
    const double d = std::sqrt(dx * dx + lateral2);
    if (!(d > 0.0)) throw GeometryError("PA coincides with user position");
    sum += std::polar(1.0 / d, -(k0 * d + kg * (x + half)));
  }
  return scn.sqrt_eta() * sum;
}

cplx composite_channel(const PinchLayout& layout, const Point3& user, const Scenario& scn) {
  return composite_channel(std::span<const double>(layout.xs), layout.waveguide_index, user, scn);
}

CVector channel_vector(std::span<const PinchLayout> layouts, const Point3& user, const Scenario& scn) {
  if (layouts.size() != scn.num_waveguides()) {
    throw InvalidArgument("expected one layout per waveguide (" + std::to_string(scn.num_waveguides()) +
                          "), got " + std::to_string(layouts.size()));
  }
  CVector h(static_cast<Eigen::Index>(layouts.size()));
  for (std::size_t m = 0; m < layouts.size(); ++m) {
    h[static_cast<Eigen::Index>(m)] = composite_channel(layouts[m], user, scn);
  }
  return h;
}

double rate_single(double power, const PinchLayout& layout, const Point3& user, double noise,
                   const Scenario& scn) {
  if (!(power >= 0.0)) throw InvalidArgument("power must be non-negative");
  if (!(noise > 0.0)) throw InvalidArgument("noise must be positive");
  if (layout.xs.empty()) throw InvalidArgument("layout has no PAs");
  const double per_pa = power / static_cast<double>(layout.size());
  return std::log2(1.0 + per_pa * std::norm(composite_channel(layout, user, scn)) / noise);
}

double rate_wd(const PowerSplit& split, std::span<const PinchLayout> layouts, const Point3& user,
               double noise, const Scenario& scn) {
  if (!(split.p_signal >= 0.0) || !(split.p_an >= 0.0)) {
    throw InvalidArgument("power split must be non-negative");
  }
  if (layouts.size() != 2) throw InvalidArgument("waveguide division needs exactly two layouts");
  if (!(noise > 0.0)) throw InvalidArgument("noise must be positive");
  const double n = static_cast<double>(layouts[0].size());
  const double signal = split.p_signal / n * std::norm(composite_channel(layouts[0], user, scn));
  const double jam = split.p_an / n * std::norm(composite_channel(layouts[1], user, scn));
  return std::log2(1.0 + signal / (jam + noise));
}

CVector wm_effective_channel(std::span<const PinchLayout> layouts, const Point3& user,
                             const Scenario& scn) {
  CVector h = channel_vector(layouts, user, scn);
  return h / std::sqrt(static_cast<double>(layouts.front().size()));
}

double beamformed_rate(const CVector& h, const CVector& w, const CVector& v, double noise) {
  if (w.size() != h.size() || v.size() != h.size()) {
    throw InvalidArgument("beamformer dimension does not match channel");
  }
  if (!(noise > 0.0)) throw InvalidArgument("noise must be positive");
  const double signal = std::norm(h.dot(w));
  const double jam = std::norm(h.dot(v));
  return std::log2(1.0 + signal / (jam + noise));
}

double rate_wm(const CVector& w, const CVector& v, std::span<const PinchLayout> layouts,
               const Point3& user, double noise, const Scenario& scn) {
  if (w.size() != static_cast<Eigen::Index>(layouts.size()) ||
      v.size() != static_cast<Eigen::Index>(layouts.size())) {
    throw InvalidArgument("beamformer length must equal the number of waveguides");
  }
  return beamformed_rate(wm_effective_channel(layouts, user, scn), w, v, noise);
}

SecrecyReport secrecy_rate(double rate_bob, double rate_eve) {
  if (!(rate_bob >= 0.0) || !(rate_eve >= 0.0)) throw InvalidArgument("rates must be non-negative");
  SecrecyReport r;
  r.rate_bob = rate_bob;
  r.rate_eve = rate_eve;
  r.secrecy_rate = std::max(rate_bob - rate_eve, 0.0);
  return r;
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

}  // namespace pinchsec
