#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pinchsec/convex.hpp"
#include "pinchsec/errors.hpp"

using namespace pinchsec;

namespace {

CVector random_vector(int m, std::mt19937_64& gen, double scale) {
  std::normal_distribution<double> nd(0.0, scale);
  CVector h(m);
  for (int i = 0; i < m; ++i) h[i] = cplx(nd(gen), nd(gen));
  return h;
}

// Independent capped-simplex projection: bisection on the shift.
Eigen::VectorXd simplex_by_bisection(const Eigen::VectorXd& x, double budget) {
  const Eigen::VectorXd clipped = x.cwiseMax(0.0);
  if (clipped.sum() <= budget) return clipped;
  double lo = 0.0;
  double hi = x.maxCoeff();
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((x.array() - mid).cwiseMax(0.0).sum() > budget ? lo : hi) = mid;
  }
  return (x.array() - 0.5 * (lo + hi)).cwiseMax(0.0);
}

}  // namespace

TEST_SUITE("convex") {
  TEST_CASE("Jacobi eigenvalues agree with Eigen") {
    std::mt19937_64 gen(11);
    for (int n = 1; n <= 8; ++n) {
      for (int t = 0; t < 10; ++t) {
        const CMatrix a = oracle::random_hermitian(n, gen);
        const HermitianEig e = hermitian_eig(a);
        const Eigen::VectorXd ref = oracle::hermitian_eigenvalues(a);
        CHECK((e.values - ref).cwiseAbs().maxCoeff() < 1e-10 * (1.0 + ref.cwiseAbs().maxCoeff()));
        for (Eigen::Index k = 1; k < e.values.size(); ++k) CHECK(e.values[k] <= e.values[k - 1]);
        const CMatrix u = e.vectors;
        CHECK((u.adjoint() * u - CMatrix::Identity(n, n)).norm() < 1e-10);
        CHECK((u * e.values.cast<cplx>().asDiagonal() * u.adjoint() - a).norm() < 1e-10 * (1.0 + a.norm()));
      }
    }
  }

  TEST_CASE("non-Hermitian input is rejected") {
    CMatrix a = CMatrix::Identity(2, 2);
    a(0, 1) = cplx(1.0, 0.0);
    CHECK_THROWS_AS(hermitian_eig(a), InvalidArgument);
  }

  TEST_CASE("PSD projection") {
    std::mt19937_64 gen(3);
    for (int t = 0; t < 20; ++t) {
      const CMatrix a = oracle::random_hermitian(4, gen);
      const CMatrix p = project_psd(a);
      CHECK(oracle::hermitian_eigenvalues(p).minCoeff() >= -1e-12);
      CHECK((project_psd(p) - p).norm() < 1e-10);
      const CMatrix psd = oracle::random_psd(4, gen);
      CHECK((project_psd(psd) - psd).norm() < 1e-10 * psd.norm());
    }
  }

  TEST_CASE("capped simplex projection") {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
      Eigen::VectorXd x(1 + t % 6);
      for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = nd(gen);
      const double budget = 0.1 + std::abs(nd(gen));
      const Eigen::VectorXd p = project_capped_simplex(x, budget);
      const Eigen::VectorXd ref = simplex_by_bisection(x, budget);
      CHECK((p - ref).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(p.minCoeff() >= 0.0);
      CHECK(p.sum() <= budget + 1e-12);
    }
  }

  TEST_CASE("joint trace-budget projection") {
    std::mt19937_64 gen(8);
    for (int t = 0; t < 20; ++t) {
      CMatrix w = oracle::random_hermitian(3, gen);
      CMatrix v = oracle::random_hermitian(3, gen);
      project_trace_budget(w, v, 0.7);
      CHECK(oracle::hermitian_eigenvalues(w).minCoeff() >= -1e-12);
      CHECK(oracle::hermitian_eigenvalues(v).minCoeff() >= -1e-12);
      CHECK(w.trace().real() + v.trace().real() <= 0.7 + 1e-12);
      CMatrix w2 = w;
      CMatrix v2 = v;
      project_trace_budget(w2, v2, 0.7);
      CHECK((w2 - w).norm() + (v2 - v).norm() < 1e-10);
    }
  }

  TEST_CASE("rank-one extraction") {
    std::mt19937_64 gen(2);
    const CVector u = random_vector(3, gen, 1.0);
    const RankOne r = extract_rank_one(u * u.adjoint());
    CHECK(r.rank_ratio < 1e-10);
    CHECK((r.w * r.w.adjoint() - u * u.adjoint()).norm() < 1e-10);
    const RankOne z = extract_rank_one(CMatrix::Zero(3, 3));
    CHECK(z.w.norm() == 0.0);
    const RankOne id = extract_rank_one(CMatrix::Identity(2, 2));
    CHECK(id.rank_ratio == doctest::Approx(1.0));
  }

  TEST_CASE("WD surrogate is a tight lower bound") {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_real_distribution<double> lg(-2.0, 3.0);
    for (int t = 0; t < 200; ++t) {
      const WdGains g{std::pow(10.0, lg(gen)), std::pow(10.0, lg(gen)), std::pow(10.0, lg(gen)),
                      std::pow(10.0, lg(gen))};
      const double s0 = u(gen);
      const PowerSplit at{s0, u(gen) * (1.0 - s0)};
      CHECK(wd_surrogate(g, at, at) == doctest::Approx(wd_objective(g, at)).epsilon(1e-12));
      for (int k = 0; k < 5; ++k) {
        const double s = u(gen);
        const PowerSplit p{s, u(gen) * (1.0 - s)};
        CHECK(wd_surrogate(g, p, at) <= wd_objective(g, p) + 1e-12);
      }
    }
  }

  TEST_CASE("WD surrogate gradient matches finite differences") {
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(0.1, 0.9);
    const WdGains g{120.0, 3.0, 40.0, 90.0};
    for (int t = 0; t < 50; ++t) {
      const PowerSplit at{u(gen) * 0.5, u(gen) * 0.5};
      const PowerSplit p{u(gen) * 0.5, u(gen) * 0.5};
      const auto grad = wd_surrogate_gradient(g, p, at);
      const double h = 1e-6;
      const double ds = (wd_surrogate(g, {p.p_signal + h, p.p_an}, at) - wd_surrogate(g, {p.p_signal - h, p.p_an}, at)) / (2 * h);
      const double da = (wd_surrogate(g, {p.p_signal, p.p_an + h}, at) - wd_surrogate(g, {p.p_signal, p.p_an - h}, at)) / (2 * h);
      CHECK(std::abs(grad[0] - ds) <= 1e-5 * std::max(1.0, std::abs(ds)));
      CHECK(std::abs(grad[1] - da) <= 1e-5 * std::max(1.0, std::abs(da)));
    }
  }

  TEST_CASE("WD SCA is monotone and feasible") {
    std::mt19937_64 gen(13);
    for (int t = 0; t < 50; ++t) {
      const cplx hb1 = random_vector(1, gen, 1e-4)[0];
      const cplx hb2 = random_vector(1, gen, 1e-4)[0];
      const cplx he1 = random_vector(1, gen, 1e-4)[0];
      const cplx he2 = random_vector(1, gen, 1e-4)[0];
      const WdScaResult r = wd_power_sca(hb1, hb2, he1, he2, 1e-3, 1e-12, 1e-12, 1e-6, {5e-4, 5e-4});
      const auto& tr = r.trace.objective_per_iter;
      for (std::size_t i = 1; i < tr.size(); ++i) CHECK(tr[i] >= tr[i - 1] - 1e-9);
      CHECK(r.split.total() <= 1e-3 * (1.0 + 1e-12));
      CHECK(r.split.p_signal >= 0.0);
      CHECK(r.split.p_an >= 0.0);
      CHECK(r.secrecy_rate == doctest::Approx(std::max(0.0, tr.back())));
    }
  }

  TEST_CASE("WD SCA puts all power on the signal when AN cannot help") {
    // Eve hears no AN and Bob hears AN strongly: full signal power is optimal.
    const WdScaResult r = wd_power_sca(cplx(1e-4), cplx(1e-4), cplx(1e-5), cplx(0.0), 1e-3, 1e-12, 1e-12, 1e-6,
                                       {5e-4, 5e-4});
    CHECK(r.split.p_an < 1e-9);
    CHECK(r.split.p_signal == doctest::Approx(1e-3).epsilon(1e-6));
    CHECK_THROWS_AS(wd_power_sca(cplx(1.0), cplx(1.0), cplx(1.0), cplx(1.0), 1.0, 1.0, 1.0, 1e-3, {0.8, 0.8}),
                    InvalidArgument);
  }

  TEST_CASE("WD initial split") {
    // Strong AN at both users flattens everything around the equal split.
    const double k = 1e-9;
    const cplx b1(std::sqrt(24.6 * k)), b2(std::sqrt(9650.0 * k)), e1(std::sqrt(0.17 * k)), e2(std::sqrt(6350.0 * k));
    const PowerSplit init = wd_initial_split(b1, b2, e1, e2, 1e-3, 1e-12, 1e-12);
    CHECK(init.p_an == 0.0);
    CHECK(init.p_signal == doctest::Approx(1e-3));
    const double from_scan = wd_power_sca(b1, b2, e1, e2, 1e-3, 1e-12, 1e-12, 1e-3, init).secrecy_rate;
    CHECK(from_scan == doctest::Approx(std::log2(1.0 + 24.6) - std::log2(1.17)).epsilon(1e-9));
    const double from_equal = wd_power_sca(b1, b2, e1, e2, 1e-3, 1e-12, 1e-12, 1e-3, {5e-4, 5e-4}).secrecy_rate;
    CHECK(from_equal < 0.1);

    std::mt19937_64 gen(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
      const cplx h1(u(gen) * 1e-4), h2(u(gen) * 1e-4), h3(u(gen) * 1e-4), h4(u(gen) * 1e-4);
      const PowerSplit p = wd_initial_split(h1, h2, h3, h4, 1e-3, 1e-12, 1e-12);
      const WdGains g = WdGains::from_channels(h1, h2, h3, h4, 1e-12, 1e-12);
      CHECK(p.total() <= 1e-3 * (1.0 + 1e-12));
      CHECK(wd_objective(g, p) >= wd_objective(g, {5e-4, 5e-4}));
    }
    CHECK_THROWS_AS(wd_initial_split(b1, b2, e1, e2, 1e-3, 1e-12, 1e-12, 0), InvalidArgument);
  }

  TEST_CASE("WM surrogate tangency, lower bound and gradient") {
    std::mt19937_64 gen(17);
    for (int t = 0; t < 50; ++t) {
      const int m = 2 + t % 3;
      const WmProblem p{random_vector(m, gen, 3.0), random_vector(m, gen, 3.0), 1.0, 1.0};
      const CMatrix w0 = oracle::random_psd(m, gen, 0.3);
      const CMatrix v0 = oracle::random_psd(m, gen, 0.3);
      CHECK(wm_surrogate(p, w0, v0, w0, v0) == doctest::Approx(wm_objective(p, w0, v0)).epsilon(1e-12));
      const CMatrix w = oracle::random_psd(m, gen, 0.3);
      const CMatrix v = oracle::random_psd(m, gen, 0.3);
      CHECK(wm_surrogate(p, w, v, w0, v0) <= wm_objective(p, w, v) + 1e-12);

      const auto [gw, gv] = wm_surrogate_gradient(p, w, v, w0, v0);
      const CMatrix dw = oracle::random_hermitian(m, gen);
      const CMatrix dv = oracle::random_hermitian(m, gen);
      const double h = 1e-6;
      const double fd = (wm_surrogate(p, w + h * dw, v + h * dv, w0, v0) - wm_surrogate(p, w - h * dw, v - h * dv, w0, v0)) / (2 * h);
      const double an = (gw * dw).trace().real() + (gv * dv).trace().real();
      CHECK(std::abs(an - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }

  TEST_CASE("WM SCA is monotone and stays in the budget") {
    std::mt19937_64 gen(23);
    for (int t = 0; t < 30; ++t) {
      const int m = 2 + t % 3;
      const CVector hb = random_vector(m, gen, 1e-5);
      const CVector he = random_vector(m, gen, 1e-5);
      const CMatrix w0 = 0.5e-3 * hb * hb.adjoint() / hb.squaredNorm();
      const CMatrix v0 = CMatrix::Identity(m, m) * (0.5e-3 / m);
      for (bool freeze : {false, true}) {
        WmScaOptions opts;
        opts.freeze_an = freeze;
        const WmScaResult r = wm_beamform_sca(hb, he, 1e-3, 1e-12, 1e-12, 1e-6, w0, v0, opts);
        const auto& tr = r.trace.objective_per_iter;
        for (std::size_t i = 1; i < tr.size(); ++i) CHECK(tr[i] >= tr[i - 1] - 1e-9);
        CHECK(r.w.trace().real() + r.v.trace().real() <= 1e-3 * (1.0 + 1e-9));
        CHECK(oracle::hermitian_eigenvalues(r.w).minCoeff() >= -1e-12);
        if (freeze) CHECK(r.v.norm() == 0.0);
      }
    }
  }

  TEST_CASE("WM SCA reaches the rank-one optimum on M = 2") {
    // A short final inner solve once left a rounding-level step that stalled
    // the next surrogate; these draws hit that case.
    std::mt19937_64 gen(77);
    for (int t = 0; t < 8; ++t) {
      const CVector hb = random_vector(2, gen, std::sqrt(2000.0 * 1e-9));
      const CVector he = random_vector(2, gen, std::sqrt(400.0 * 1e-9));
      const CVector hat = hb / hb.norm();
      WmScaOptions opts;
      opts.max_outer = 5000;
      const WmScaResult r = wm_beamform_sca(hb, he, 1e-3, 1e-12, 1e-12, 1e-6, 1e-3 * hat * hat.adjoint(),
                                            CMatrix::Zero(2, 2), opts);
      const oracle::WmPoint o = oracle::wm_rank_one_oracle({hb[0], hb[1]}, {he[0], he[1]}, 1e-3, 1e-12, 1e-12);
      CHECK(std::abs(r.secrecy_rate - std::max(0.0, o.sr)) <= 1e-2);
    }
  }

  TEST_CASE("WM SCA rejects bad inputs") {
    const CVector h = CVector::Ones(2);
    const CMatrix z = CMatrix::Zero(2, 2);
    CHECK_THROWS_AS(wm_beamform_sca(h, CVector::Ones(3), 1.0, 1.0, 1.0, 1e-3, z, z), InvalidArgument);
    CHECK_THROWS_AS(wm_beamform_sca(h, h, 1.0, 1.0, 1.0, 1e-3, 2.0 * CMatrix::Identity(2, 2), z), InvalidArgument);
    CHECK_THROWS_AS(wm_beamform_sca(h, h, 1.0, 0.0, 1.0, 1e-3, z, z), InvalidArgument);
  }
}
