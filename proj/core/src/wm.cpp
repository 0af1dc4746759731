#include "pinchsec/wm.hpp"

#include <algorithm>
#include <cmath>

#include "pinchsec/errors.hpp"
#include "pinchsec/past.hpp"
#include "pinchsec/rng.hpp"

namespace pinchsec {

namespace {

constexpr double kGapSlack = 1e-12;  // m, matches PinchLayout::is_valid
constexpr double kSnapWindow = 1e-6;  // m
constexpr double kTieMargin = 1e-9;   // bits/s/Hz

struct Channels {
  CVector b;
  CVector e;
};

Channels effective_channels(std::span<const double> x, const Scenario& scn) {
  const std::size_t n = x.size() / 2;
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  Channels c{CVector(2), CVector(2)};
  for (std::size_t m = 0; m < 2; ++m) {
    const auto xs = x.subspan(m * n, n);
    c.b[static_cast<Eigen::Index>(m)] = composite_channel(xs, m, scn.bob_pos, scn) * inv_sqrt_n;
    c.e[static_cast<Eigen::Index>(m)] = composite_channel(xs, m, scn.eve_pos, scn) * inv_sqrt_n;
  }
  return c;
}

double sr_at(const Channels& c, const CVector& w, const CVector& v, const Scenario& scn) {
  return std::max(beamformed_rate(c.b, w, v, scn.noise_bob) - beamformed_rate(c.e, w, v, scn.noise_eve), 0.0);
}

// Closes gaps that fall short of min_spacing by less than the snap window.
void snap(std::vector<double>& x, std::size_t n, const Scenario& scn) {
  for (std::size_t m = 0; m < 2; ++m) {
    for (std::size_t k = m * n + 1; k < (m + 1) * n; ++k) {
      const double deficit = scn.min_spacing - (x[k] - x[k - 1]);
      if (deficit > 0.0 && deficit < kSnapWindow) x[k] = x[k - 1] + scn.min_spacing;
    }
  }
}

std::array<PinchLayout, 2> to_layouts(std::span<const double> x) {
  const std::size_t n = x.size() / 2;
  std::array<PinchLayout, 2> out;
  for (std::size_t m = 0; m < 2; ++m) {
    out[m].waveguide_index = m;
    out[m].xs.assign(x.begin() + static_cast<std::ptrdiff_t>(m * n),
                     x.begin() + static_cast<std::ptrdiff_t>((m + 1) * n));
  }
  return out;
}

}  // namespace

int spacing_violations(std::span<const double> x, const Scenario& scn) {
  if (x.size() % 2 != 0) throw InvalidArgument("position vector must hold two equal halves");
  const std::size_t n = x.size() / 2;
  int count = 0;
  for (std::size_t m = 0; m < 2; ++m) {
    for (std::size_t k = m * n + 1; k < (m + 1) * n; ++k) {
      if (x[k] - x[k - 1] < scn.min_spacing - kGapSlack) ++count;
    }
  }
  return count;
}

double pa_fitness(std::span<const double> x, const CVector& w, const CVector& v, const Scenario& scn,
                  double penalty) {
  const int violations = spacing_violations(x, scn);
  return sr_at(effective_channels(x, scn), w, v, scn) - penalty * violations;
}

WmSolution optimize_wm(const Scenario& scn, const WmParams& params, std::uint64_t seed) {
  scn.validate();
  if (scn.num_waveguides() != 2) throw InvalidArgument("waveguide multiplexing needs two waveguides");
  const int n = scn.num_pas_per_waveguide;
  const double p = scn.max_power;

  PsoHyper hyper = params.pso;
  hyper.dims = 2 * n;
  hyper.bounds_lo.assign(static_cast<std::size_t>(2 * n), -scn.half_side());
  hyper.bounds_hi.assign(static_cast<std::size_t>(2 * n), scn.half_side());
  hyper.validate();

  std::vector<double> x_hat;
  for (std::size_t m = 0; m < 2; ++m) {
    const PinchLayout c = coarse_uniform_placement(n, scn.bob_pos.x, scn.min_spacing, m, scn);
    x_hat.insert(x_hat.end(), c.xs.begin(), c.xs.end());
  }

  // Full-power matched filter to Bob, AN off; the SCA stage decides whether
  // to spend power on AN.
  Channels ch = effective_channels(x_hat, scn);
  CVector w = CVector::Zero(2);
  CVector v = CVector::Zero(2);
  const double hb_norm = ch.b.norm();
  if (hb_norm > 0.0) {
    w = std::sqrt(p) * ch.b / hb_norm;
  } else {
    w[0] = std::sqrt(p);
  }

  WmSolution sol;
  double sr = sr_at(ch, w, v, scn);
  sol.outer_trace.push_back(sr);

  for (int t = 0; t < params.max_outer; ++t) {
    // (a) positions at fixed beamformers
    const Fitness fit = [&](std::span<const double> x) { return pa_fitness(x, w, v, scn, params.penalty); };
    const PsoResult pso = pso_optimize(fit, hyper, mix_seed(seed, static_cast<std::uint64_t>(t)),
                                       std::span<const double>(x_hat));
    std::vector<double> cand = pso.best_x;
    snap(cand, static_cast<std::size_t>(n), scn);
    if (spacing_violations(cand, scn) == 0) {
      const double cand_sr = sr_at(effective_channels(cand, scn), w, v, scn);
      if (cand_sr >= sr) {
        x_hat = std::move(cand);
        sr = cand_sr;
      }
    }

    // (b) beamformers at fixed positions
    ch = effective_channels(x_hat, scn);
    const CMatrix w0 = w * w.adjoint();
    const CMatrix v0 = v * v.adjoint();
    WmScaOptions frozen;
    frozen.freeze_an = true;
    const WmScaResult plain =
        wm_beamform_sca(ch.b, ch.e, p, scn.noise_bob, scn.noise_eve, params.sca_tol, w0, v0, frozen);
    RankOne rw = extract_rank_one(plain.w);
    RankOne rv{CVector::Zero(2), 0.0};
    double bf_sr = sr_at(ch, rw.w, rv.w, scn);
    if (params.with_an) {
      // Second start with AN enabled; kept only when it beats the AN-free optimum.
      const WmScaResult full =
          wm_beamform_sca(ch.b, ch.e, p, scn.noise_bob, scn.noise_eve, params.sca_tol, w0, v0);
      const RankOne fw = extract_rank_one(full.w);
      const RankOne fv = extract_rank_one(full.v);
      const double full_sr = sr_at(ch, fw.w, fv.w, scn);
      if (full_sr > bf_sr + kTieMargin) {
        rw = fw;
        rv = fv;
        bf_sr = full_sr;
      }
    }
    sol.rank_ratios = {rw.rank_ratio, rv.rank_ratio};
    if (bf_sr >= sr) {
      w = rw.w;
      v = rv.w;
      sr = bf_sr;
    }

    ++sol.outer_iters;
    const double gain = sr - sol.outer_trace.back();
    sol.outer_trace.push_back(sr);
    if (gain < params.outer_tol) break;
  }

  sol.layouts = to_layouts(x_hat);
  sol.feasible = sol.layouts[0].is_valid(scn) && sol.layouts[1].is_valid(scn);
  sol.w = w;
  sol.v = v;
  sol.report = secrecy_rate(rate_wm(w, v, sol.layouts, scn.bob_pos, scn.noise_bob, scn),
                            rate_wm(w, v, sol.layouts, scn.eve_pos, scn.noise_eve, scn));
  return sol;
}

}  // namespace pinchsec
