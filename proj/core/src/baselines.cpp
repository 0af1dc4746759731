#include "pinchsec/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pinchsec/convex.hpp"
#include "pinchsec/errors.hpp"
#include "pinchsec/rng.hpp"

namespace pinchsec {

namespace {

constexpr int kMaxRejections = 100000;

double sr_single(std::span<const double> xs, const Scenario& scn) {
  const double per_pa = scn.max_power / static_cast<double>(xs.size());
  const double gb = std::norm(composite_channel(xs, 0, scn.bob_pos, scn)) * per_pa / scn.noise_bob;
  const double ge = std::norm(composite_channel(xs, 0, scn.eve_pos, scn)) * per_pa / scn.noise_eve;
  return std::max(std::log2(1.0 + gb) - std::log2(1.0 + ge), 0.0);
}

int gap_violations(std::span<const double> xs, double spacing) {
  int count = 0;
  for (std::size_t k = 1; k < xs.size(); ++k) {
    if (xs[k] - xs[k - 1] < spacing - 1e-12) ++count;
  }
  return count;
}

double analog_rate(const CVector& h, std::span<const double> phases, double per_element, double noise) {
  cplx sum{0.0, 0.0};
  for (std::size_t n = 0; n < phases.size(); ++n) sum += h[static_cast<Eigen::Index>(n)] * std::polar(1.0, phases[n]);
  return std::log2(1.0 + per_element * std::norm(sum) / noise);
}

}  // namespace

RandomBaselineResult random_position_baseline(const Scenario& scn, int realizations, std::uint64_t seed) {
  scn.validate();
  if (realizations < 1) throw InvalidArgument("realizations must be >= 1");
  const int n = scn.num_pas_per_waveguide;
  if ((n - 1) * scn.min_spacing > scn.region_side) {
    throw InfeasibleLayout("N PAs cannot satisfy the spacing on this waveguide");
  }
  Rng rng(seed);
  const double half = scn.half_side();
  PinchLayout layout;
  layout.xs.resize(static_cast<std::size_t>(n));
  RandomBaselineResult out;
  for (int r = 0; r < realizations; ++r) {
    int attempts = 0;
    do {
      if (++attempts > kMaxRejections) {
        throw InfeasibleLayout("random placement stalled after " + std::to_string(kMaxRejections) + " draws");
      }
      for (double& x : layout.xs) x = rng.uniform(-half, half);
      std::sort(layout.xs.begin(), layout.xs.end());
    } while (gap_violations(layout.xs, scn.min_spacing) > 0);
    const double rb = rate_single(scn.max_power, layout, scn.bob_pos, scn.noise_bob, scn);
    const double re = rate_single(scn.max_power, layout, scn.eve_pos, scn.noise_eve, scn);
    out.mean_rate_bob += rb;
    out.mean_rate_eve += re;
    out.mean_secrecy_rate += std::max(rb - re, 0.0);
  }
  out.realizations = realizations;
  out.mean_rate_bob /= realizations;
  out.mean_rate_eve /= realizations;
  out.mean_secrecy_rate /= realizations;
  return out;
}

std::vector<Point3> conventional_array(int elements, const Scenario& scn) {
  std::vector<Point3> pos;
  pos.reserve(static_cast<std::size_t>(elements));
  const double step = 0.5 * scn.wavelength();
  for (int n = 0; n < elements; ++n) pos.push_back({-scn.half_side() + n * step, 0.0, scn.waveguide_height});
  return pos;
}

CVector array_channel(const std::vector<Point3>& elements, const Point3& user, const Scenario& scn) {
  const double k0 = kTwoPi / scn.wavelength();
  CVector h(static_cast<Eigen::Index>(elements.size()));
  for (std::size_t n = 0; n < elements.size(); ++n) {
    const double dx = user.x - elements[n].x;
    const double dy = user.y - elements[n].y;
    const double dz = user.z - elements[n].z;
    const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
    if (!(d > 0.0)) throw GeometryError("antenna coincides with user position");
    h[static_cast<Eigen::Index>(n)] = std::polar(scn.sqrt_eta() / d, -k0 * d);
  }
  return h;
}

ConventionalResult conventional_analog_baseline(const Scenario& scn, const PsoHyper& pso, std::uint64_t seed) {
  scn.validate();
  const int n = scn.num_pas_per_waveguide;
  const auto elements = conventional_array(n, scn);
  const CVector hb = array_channel(elements, scn.bob_pos, scn);
  const CVector he = array_channel(elements, scn.eve_pos, scn);
  const double per_element = scn.max_power / n;
  auto sr = [&](std::span<const double> ph) {
    return std::max(analog_rate(hb, ph, per_element, scn.noise_bob) - analog_rate(he, ph, per_element, scn.noise_eve),
                    0.0);
  };

  PsoHyper hyper = pso;
  hyper.dims = n;
  hyper.bounds_lo.assign(static_cast<std::size_t>(n), 0.0);
  hyper.bounds_hi.assign(static_cast<std::size_t>(n), kTwoPi);
  const PsoResult best = pso_optimize(sr, hyper, seed);

  ConventionalResult out;
  out.phases = best.best_x;
  out.report = secrecy_rate(analog_rate(hb, out.phases, per_element, scn.noise_bob),
                            analog_rate(he, out.phases, per_element, scn.noise_eve));
  return out;
}

FdbResult fdb_baseline(const Scenario& scn, bool with_an, double sca_tol) {
  scn.validate();
  const int m = 2 * scn.num_pas_per_waveguide;
  const auto elements = conventional_array(m, scn);
  const CVector hb = array_channel(elements, scn.bob_pos, scn);
  const CVector he = array_channel(elements, scn.eve_pos, scn);
  const double p = scn.max_power;
  auto sr = [&](const CVector& w, const CVector& v) {
    return secrecy_rate(beamformed_rate(hb, w, v, scn.noise_bob), beamformed_rate(he, w, v, scn.noise_eve));
  };

  const CVector dir = hb / hb.norm();
  const CMatrix zero = CMatrix::Zero(m, m);
  WmScaOptions frozen;
  frozen.freeze_an = true;
  const WmScaResult plain =
      wm_beamform_sca(hb, he, p, scn.noise_bob, scn.noise_eve, sca_tol, p * dir * dir.adjoint(), zero, frozen);
  FdbResult out;
  out.w = extract_rank_one(plain.w).w;
  out.v = CVector::Zero(m);
  out.report = sr(out.w, out.v);
  if (!with_an) return out;

  const WmScaResult an = wm_beamform_sca(hb, he, p, scn.noise_bob, scn.noise_eve, sca_tol, plain.w, zero);
  const CVector w = extract_rank_one(an.w).w;
  const CVector v = extract_rank_one(an.v).w;
  const SecrecyReport rep = sr(w, v);
  if (rep.secrecy_rate >= out.report.secrecy_rate) {
    out.w = w;
    out.v = v;
    out.report = rep;
  }
  return out;
}

PsoSingleResult pso_single(const Scenario& scn, const PsoHyper& pso, double penalty, std::uint64_t seed) {
  scn.validate();
  const int n = scn.num_pas_per_waveguide;
  PsoHyper hyper = pso;
  hyper.dims = n;
  hyper.bounds_lo.assign(static_cast<std::size_t>(n), -scn.half_side());
  hyper.bounds_hi.assign(static_cast<std::size_t>(n), scn.half_side());
  std::vector<double> sorted(static_cast<std::size_t>(n));
  const Fitness fit = [&](std::span<const double> x) {
    sorted.assign(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    return sr_single(sorted, scn) - penalty * gap_violations(sorted, scn.min_spacing);
  };
  const PsoResult best = pso_optimize(fit, hyper, seed);

  PsoSingleResult out;
  out.layout.waveguide_index = 0;
  out.layout.xs = best.best_x;
  std::sort(out.layout.xs.begin(), out.layout.xs.end());
  out.feasible = out.layout.is_valid(scn);
  out.report = secrecy_rate(rate_single(scn.max_power, out.layout, scn.bob_pos, scn.noise_bob, scn),
                            rate_single(scn.max_power, out.layout, scn.eve_pos, scn.noise_eve, scn));
  return out;
}

}  // namespace pinchsec
