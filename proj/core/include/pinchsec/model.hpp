#pragma once

// Geometry, channel, rate, and secrecy-rate computations shared by every
// optimizer and baseline. Everything here is a pure function of its inputs.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace pinchsec {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Point3&) const = default;
};

enum class User { bob, eve };

constexpr User other(User u) { return u == User::bob ? User::eve : User::bob; }
const char* to_string(User u);

/// Full problem instance: user geometry, waveguides, RF constants, budgets.
///
/// Powers are in watts, lengths in meters, frequency in Hz. Waveguide m runs
/// parallel to the x-axis at height `waveguide_height` and lateral offset
/// `waveguide_y_offsets[m]`, with its feed point at x = -region_side/2.
struct Scenario {
  Point3 bob_pos;
  Point3 eve_pos;
  double region_side = 5.0;
  double waveguide_height = 2.0;
  std::vector<double> waveguide_y_offsets{0.0};
  double carrier_freq = 28e9;
  double eff_refractive_index = 1.4;
  double min_spacing = 0.0;  // defaults() sets lambda/2
  double max_power = 1e-3;
  double noise_bob = 1e-12;
  double noise_eve = 1e-12;
  int num_pas_per_waveguide = 2;

  /// Simulation defaults: H = 2 m, 28 GHz, 1 mW, -90 dBm noise, n_eff = 1.4,
  /// spacing lambda/2, one waveguide on the x-axis.
  static Scenario defaults();

  double wavelength() const { return kSpeedOfLight / carrier_freq; }
  double guided_wavelength() const { return wavelength() / eff_refractive_index; }
  /// Free-space path-loss amplitude c / (4 pi f_c).
  double sqrt_eta() const { return kSpeedOfLight / (4.0 * kPi * carrier_freq); }
  double eta() const { return sqrt_eta() * sqrt_eta(); }
  std::size_t num_waveguides() const { return waveguide_y_offsets.size(); }
  double half_side() const { return 0.5 * region_side; }

  const Point3& position(User u) const { return u == User::bob ? bob_pos : eve_pos; }
  double noise(User u) const { return u == User::bob ? noise_bob : noise_eve; }

  /// Throws InvalidScenario when an invariant is broken.
  void validate() const;
};

/// Same scenario with a single waveguide on the x-axis.
Scenario single_waveguide(Scenario scn);
/// Same scenario with two waveguides at y = +separation/2 and -separation/2.
Scenario dual_waveguide(Scenario scn, double separation);

/// Ordered PA x-coordinates on one waveguide.
///
/// Optimizer intermediates may be unordered or too tightly packed; the
/// channel functions accept them and `is_valid` reports the violation.
struct PinchLayout {
  std::size_t waveguide_index = 0;
  std::vector<double> xs;

  std::size_t size() const { return xs.size(); }
  /// Smallest adjacent gap (+inf for fewer than two PAs).
  double min_gap() const;
  bool is_strictly_increasing() const;
  /// Ordering, box, and spacing constraints (spacing to within 1e-12 m).
  bool is_valid(const Scenario& scn) const;
};

/// 3-D position [x, y_m, H] of a PA at `x` on waveguide `m`.
Point3 pa_position(double x, std::size_t waveguide, const Scenario& scn);

struct PowerSplit {
  double p_signal = 0.0;  // waveguide 1, legitimate stream
  double p_an = 0.0;      // waveguide 2, artificial noise

  double total() const { return p_signal + p_an; }
};

struct SecrecyReport {
  double rate_bob = 0.0;
  double rate_eve = 0.0;
  double secrecy_rate = 0.0;
  std::vector<double> phase_diag;  // optional per-PA residuals, radians
};

/// Total propagation phase (free space + in-waveguide) from the feed of
/// waveguide `m` through a PA at `x` to `user`, in raw (unwrapped) radians.
double propagation_phase(double x, std::size_t waveguide, const Point3& user, const Scenario& scn);

/// Wraps an angle into (-pi, pi].
double wrap_phase(double radians);

CVector free_space_channel(const PinchLayout& layout, const Point3& user, const Scenario& scn);
CVector inwaveguide_phase(const PinchLayout& layout, const Scenario& scn);

/// sum_n sqrt(eta) exp(-j(2pi d_n / lambda + 2pi (x_n + L/2) / lambda_g)) / d_n
cplx composite_channel(const PinchLayout& layout, const Point3& user, const Scenario& scn);
/// Raw-span form used in fitness loops; identical arithmetic.
cplx composite_channel(std::span<const double> xs, std::size_t waveguide, const Point3& user,
                       const Scenario& scn);

/// One composite channel per waveguide; layouts.size() must match the scenario.
CVector channel_vector(std::span<const PinchLayout> layouts, const Point3& user, const Scenario& scn);

/// log2(1 + (P/N)|h|^2 / noise) for a single waveguide fed with `power`.
double rate_single(double power, const PinchLayout& layout, const Point3& user, double noise,
                   const Scenario& scn);

/// Waveguide division: layouts[0] carries the signal, layouts[1] the AN.
double rate_wd(const PowerSplit& split, std::span<const PinchLayout> layouts, const Point3& user,
               double noise, const Scenario& scn);

/// Waveguide multiplexing with baseband beamformers w (signal) and v (AN).
///
/// Each waveguide's feed power is shared uniformly by its N PAs, so the
/// effective channel is channel_vector / sqrt(N).
double rate_wm(const CVector& w, const CVector& v, std::span<const PinchLayout> layouts,
               const Point3& user, double noise, const Scenario& scn);

/// Effective WM channel channel_vector / sqrt(N).
CVector wm_effective_channel(std::span<const PinchLayout> layouts, const Point3& user,
                             const Scenario& scn);

/// log2(1 + |h^H w|^2 / (|h^H v|^2 + noise)) on an already-effective channel.
double beamformed_rate(const CVector& h, const CVector& w, const CVector& v, double noise);

/// [rate_bob - rate_eve]^+.
SecrecyReport secrecy_rate(double rate_bob, double rate_eve);

/// Conversions used at the configuration boundary.
double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

}  // namespace pinchsec
