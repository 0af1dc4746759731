#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pinchsec/errors.hpp"
#include "pinchsec/model.hpp"

using namespace pinchsec;

namespace {

Scenario canonical() {
  Scenario scn = Scenario::defaults();
  scn.num_pas_per_waveguide = 1;
  scn.bob_pos = {0.0, 0.0, 0.0};
  scn.eve_pos = {2.0, 2.0, 0.0};
  return scn;
}

oracle::Geometry geometry(const Scenario& scn) {
  return {scn.carrier_freq, scn.eff_refractive_index, scn.waveguide_height, scn.region_side};
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("defaults match the simulation setup") {
    const Scenario scn = Scenario::defaults();
    CHECK(scn.waveguide_height == 2.0);
    CHECK(scn.carrier_freq == 28e9);
    CHECK(scn.max_power == doctest::Approx(1e-3));
    CHECK(scn.noise_bob == doctest::Approx(1e-12));
    CHECK(scn.min_spacing == doctest::Approx(0.5 * 299792458.0 / 28e9));
    CHECK(scn.guided_wavelength() == doctest::Approx(scn.wavelength() / 1.4));
    CHECK_NOTHROW(scn.validate());
  }

  TEST_CASE("canonical single-PA rate") {
    Scenario scn = canonical();
    PinchLayout layout{0, {0.0}};
    const double r = rate_single(scn.max_power, layout, scn.bob_pos, scn.noise_bob, scn);
    const double ref = oracle::single_rate(1e-3, 1, oracle::pinched_channel({0.0}, 0.0, 0.0, 0.0, geometry(scn)), 1e-12);
    CHECK(r == doctest::Approx(ref).epsilon(1e-12));
    CHECK(std::abs(r - 7.51) <= 0.01);
  }

  TEST_CASE("composite channel matches the direct sum") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    Scenario scn = dual_waveguide(Scenario::defaults(), 0.5);
    for (int t = 0; t < 50; ++t) {
      std::vector<double> xs(1 + t % 5);
      for (double& x : xs) x = u(gen);
      const Point3 user{u(gen), u(gen), 0.0};
      for (std::size_t m = 0; m < 2; ++m) {
        const cplx h = composite_channel(PinchLayout{m, xs}, user, scn);
        const cplx ref = oracle::pinched_channel(xs, scn.waveguide_y_offsets[m], user.x, user.y, geometry(scn));
        // Phases reach ~1e4 rad, so agreement is limited to ~1e-12 of the term sizes.
        double scale = 0.0;
        for (double x : xs) scale += std::abs(oracle::pinched_channel({x}, scn.waveguide_y_offsets[m], user.x, user.y, geometry(scn)));
        CHECK(std::abs(h - ref) <= 1e-10 * scale);
        CHECK(composite_channel(std::span<const double>(xs), m, user, scn) == h);
      }
    }
  }

  TEST_CASE("free-space and in-waveguide factors compose the channel") {
    Scenario scn = Scenario::defaults();
    PinchLayout layout{0, {-0.3, 0.1, 0.9}};
    const Point3 user{0.4, -1.1, 0.0};
    const CVector fs = free_space_channel(layout, user, scn);
    const CVector ph = inwaveguide_phase(layout, scn);
    CHECK(std::abs(fs.cwiseProduct(ph).sum() - composite_channel(layout, user, scn)) < 1e-15);
    for (Eigen::Index i = 0; i < ph.size(); ++i) CHECK(std::abs(ph[i]) == doctest::Approx(1.0));
  }

  TEST_CASE("propagation phase is the channel phase") {
    Scenario scn = Scenario::defaults();
    const Point3 user{1.0, 0.5, 0.0};
    const double th = propagation_phase(0.3, 0, user, scn);
    const cplx h = composite_channel(PinchLayout{0, {0.3}}, user, scn);
    CHECK(std::abs(wrap_phase(-std::arg(h) - th)) < 1e-9);
  }

  TEST_CASE("wrap_phase range") {
    CHECK(wrap_phase(kPi) == doctest::Approx(kPi));
    CHECK(wrap_phase(-kPi) == doctest::Approx(kPi));
    CHECK(wrap_phase(3.0 * kTwoPi + 0.25) == doctest::Approx(0.25));
    CHECK(wrap_phase(-0.25) == doctest::Approx(-0.25));
    for (double x = -50.0; x < 50.0; x += 0.37) {
      const double w = wrap_phase(x);
      CHECK(w > -kPi);
      CHECK(w <= kPi);
      CHECK(std::abs(std::remainder(x - w, kTwoPi)) < 1e-9);
    }
  }

  TEST_CASE("secrecy rate clamps at zero") {
    CHECK(secrecy_rate(3.0, 1.0).secrecy_rate == 2.0);
    const SecrecyReport r = secrecy_rate(1.0, 3.0);
    CHECK(r.secrecy_rate == 0.0);
    CHECK(r.rate_bob == 1.0);
    CHECK(r.rate_eve == 3.0);
  }

  TEST_CASE("dBm conversions") {
    CHECK(dbm_to_watts(0.0) == doctest::Approx(1e-3));
    CHECK(dbm_to_watts(-90.0) == doctest::Approx(1e-12));
    CHECK(watts_to_dbm(1e-3) == doctest::Approx(0.0));
    CHECK(watts_to_dbm(dbm_to_watts(-37.5)) == doctest::Approx(-37.5));
  }

  TEST_CASE("waveguide setups") {
    const Scenario two = dual_waveguide(Scenario::defaults(), 0.8);
    REQUIRE(two.num_waveguides() == 2);
    CHECK(two.waveguide_y_offsets[0] == doctest::Approx(0.4));
    CHECK(two.waveguide_y_offsets[1] == doctest::Approx(-0.4));
    CHECK(single_waveguide(two).num_waveguides() == 1);
    CHECK(pa_position(0.2, 1, two) == Point3{0.2, -0.4, 2.0});
  }

  TEST_CASE("validate rejects broken scenarios") {
    Scenario scn = Scenario::defaults();
    scn.region_side = 0.0;
    CHECK_THROWS_AS(scn.validate(), InvalidScenario);
    scn = Scenario::defaults();
    scn.eff_refractive_index = 0.5;
    CHECK_THROWS_AS(scn.validate(), InvalidScenario);
    scn = Scenario::defaults();
    scn.num_pas_per_waveguide = 0;
    CHECK_THROWS_AS(scn.validate(), InvalidScenario);
    scn = Scenario::defaults();
    scn.noise_eve = -1.0;
    CHECK_THROWS_AS(scn.validate(), InvalidScenario);
    scn = Scenario::defaults();
    scn.bob_pos = {10.0, 0.0, 0.0};
    CHECK_THROWS_AS(scn.validate(), InvalidScenario);
  }

  TEST_CASE("layout predicates") {
    Scenario scn = Scenario::defaults();
    const double d = scn.min_spacing;
    PinchLayout ok{0, {-1.0, -1.0 + d, 0.5}};
    CHECK(ok.is_valid(scn));
    CHECK(ok.min_gap() == doctest::Approx(d));
    PinchLayout tight{0, {0.0, 0.5 * d}};
    CHECK_FALSE(tight.is_valid(scn));
    PinchLayout reversed{0, {1.0, 0.0}};
    CHECK_FALSE(reversed.is_strictly_increasing());
    CHECK_FALSE(reversed.is_valid(scn));
    PinchLayout outside{0, {-3.0, 0.0}};
    CHECK_FALSE(outside.is_valid(scn));
    CHECK(std::isinf(PinchLayout{0, {0.0}}.min_gap()));
  }

  TEST_CASE("rate_wd without AN reduces to rate_single") {
    Scenario scn = dual_waveguide(Scenario::defaults(), 0.5);
    scn.bob_pos = {0.3, 1.0, 0.0};
    const std::array<PinchLayout, 2> layouts{PinchLayout{0, {0.0, 0.1}}, PinchLayout{1, {1.0, 1.1}}};
    const double a = rate_wd({scn.max_power, 0.0}, layouts, scn.bob_pos, scn.noise_bob, scn);
    const double b = rate_single(scn.max_power, layouts[0], scn.bob_pos, scn.noise_bob, scn);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
    CHECK(rate_wd({0.5e-3, 0.5e-3}, layouts, scn.bob_pos, scn.noise_bob, scn) <
          rate_wd({0.5e-3, 0.0}, layouts, scn.bob_pos, scn.noise_bob, scn));
    CHECK_THROWS(rate_wd({1e-3, 0.0}, std::span<const PinchLayout>(layouts.data(), 1), scn.bob_pos, 1e-12, scn));
  }

  TEST_CASE("rate_wm on one feed equals the single-waveguide rate") {
    Scenario scn = dual_waveguide(Scenario::defaults(), 0.5);
    scn.num_pas_per_waveguide = 2;
    const std::array<PinchLayout, 2> layouts{PinchLayout{0, {0.0, 0.1}}, PinchLayout{1, {1.0, 1.1}}};
    CVector w = CVector::Zero(2);
    w[0] = std::sqrt(scn.max_power);
    const CVector v = CVector::Zero(2);
    const double a = rate_wm(w, v, layouts, scn.eve_pos, scn.noise_eve, scn);
    const double b = rate_single(scn.max_power, layouts[0], scn.eve_pos, scn.noise_eve, scn);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
    const CVector h = wm_effective_channel(layouts, scn.eve_pos, scn);
    CHECK(std::abs(h[0] - composite_channel(layouts[0], scn.eve_pos, scn) / std::sqrt(2.0)) < 1e-15);
  }

  TEST_CASE("beamformed rate") {
    CVector h(2);
    h << cplx(1.0, 0.0), cplx(0.0, 1.0);
    CVector w(2);
    w << cplx(1.0, 0.0), cplx(0.0, 1.0);
    const CVector zero = CVector::Zero(2);
    CHECK(beamformed_rate(h, w, zero, 1.0) == doctest::Approx(std::log2(5.0)));
    CHECK(beamformed_rate(h, w, w, 1.0) == doctest::Approx(std::log2(1.0 + 4.0 / 5.0)));
  }
}
