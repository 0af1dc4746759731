#pragma once

// Reference computations written from first principles, sharing no code with
// the library beyond plain data types. Slow on purpose.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cd = std::complex<double>;

inline constexpr double c0 = 299792458.0;
inline constexpr double pi = 3.141592653589793;

struct Geometry {
  double fc = 28e9;
  double neff = 1.4;
  double height = 2.0;
  double side = 5.0;
};

inline double lambda(const Geometry& g) { return c0 / g.fc; }

/// sum_n sqrt(eta) e^{-j(k0 d_n + kg (x_n + L/2))} / d_n for PAs at (x_n, y_wg, H).
inline cd pinched_channel(const std::vector<double>& xs, double y_wg, double ux, double uy, const Geometry& g) {
  const double lam = lambda(g);
  const double lam_g = lam / g.neff;
  const double amp = c0 / (4.0 * pi * g.fc);
  cd h = 0.0;
  for (double x : xs) {
    const double d = std::sqrt((x - ux) * (x - ux) + (y_wg - uy) * (y_wg - uy) + g.height * g.height);
    const double phase = 2.0 * pi * d / lam + 2.0 * pi * (x + 0.5 * g.side) / lam_g;
    h += amp * std::polar(1.0, -phase) / d;
  }
  return h;
}

/// Single-waveguide rate with per-PA power P/N.
inline double single_rate(double power, std::size_t n, cd h, double noise) {
  return std::log2(1.0 + power / static_cast<double>(n) * std::norm(h) / noise);
}

// ---------------------------------------------------------------------------
// Lemma 1: exhaustive grid for max sum 1/sqrt((x_n - x_b)^2 + Db^2) subject to
// gaps >= delta, on the lattice x_b + k * step, |k| <= half_steps.

struct LatticeOptimum {
  std::vector<double> xs;
  double value = -1.0;
};

inline LatticeOptimum lemma1_grid(int n, double xb, double db, double delta, int steps_per_delta, int half_steps) {
  const double step = delta / steps_per_delta;
  const int count = 2 * half_steps + 1;
  std::vector<double> f(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double dx = (k - half_steps) * step;
    f[static_cast<std::size_t>(k)] = 1.0 / std::sqrt(dx * dx + db * db);
  }
  auto at = [&](int k) { return xb + (k - half_steps) * step; };
  const int gap = steps_per_delta;
  LatticeOptimum best;
  if (n == 2) {
    for (int i = 0; i < count; ++i) {
      for (int j = i + gap; j < count; ++j) {
        const double v = f[i] + f[j];
        if (v > best.value) best = {{at(i), at(j)}, v};
      }
    }
  } else if (n == 3) {
    // Suffix argmax over the third index keeps the search exhaustive.
    std::vector<int> suffix(static_cast<std::size_t>(count));
    suffix[count - 1] = count - 1;
    for (int k = count - 2; k >= 0; --k) suffix[k] = f[k] >= f[suffix[k + 1]] ? k : suffix[k + 1];
    for (int i = 0; i < count; ++i) {
      for (int j = i + gap; j + gap < count; ++j) {
        const int k = suffix[j + gap];
        const double v = f[i] + f[j] + f[k];
        if (v > best.value) best = {{at(i), at(j), at(k)}, v};
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// WD power split: exhaustive grid on {S, A >= 0, S + A <= 1} in units of P_max.
// Gains are SNR per P_max. Comparing the rate ratio avoids one log per point.

inline double wd_sr_bits(double b1, double b2, double e1, double e2, double s, double a) {
  return std::log2(1.0 + b1 * s / (1.0 + b2 * a)) - std::log2(1.0 + e1 * s / (1.0 + e2 * a));
}

struct WdGridOptimum {
  double s = 0.0;
  double a = 0.0;
  double sr = 0.0;  // not clamped
};

inline WdGridOptimum wd_grid(double b1, double b2, double e1, double e2, int steps) {
  WdGridOptimum best{0.0, 0.0, -std::numeric_limits<double>::infinity()};
  double best_ratio = -1.0;
  const double h = 1.0 / steps;
  for (int i = 0; i <= steps; ++i) {
    const double s = i * h;
    for (int j = 0; i + j <= steps; ++j) {
      const double a = j * h;
      const double nb = 1.0 + b2 * a;
      const double ne = 1.0 + e2 * a;
      const double ratio = (nb + b1 * s) * ne / (nb * (ne + e1 * s));
      if (ratio > best_ratio) {
        best_ratio = ratio;
        best.s = s;
        best.a = a;
      }
    }
  }
  best.sr = wd_sr_bits(b1, b2, e1, e2, best.s, best.a);
  return best;
}

// ---------------------------------------------------------------------------
// WM, M = 2, rank one: w = sqrt(t s P)(cos a, sin a e^{jb}), v = sqrt(t (1-s) P)
// (cos c, sin c e^{jd}) with t, s in [0, 1]. Global phases do not affect the
// rates. The (t, s) form keeps every constraint a box.

struct WmPoint {
  std::array<double, 6> p{};  // t, s, a, b, c, d
  double sr = -std::numeric_limits<double>::infinity();
};

inline double wm_sr_bits(const std::array<cd, 2>& hb, const std::array<cd, 2>& he, double power, double nb,
                         double ne, const std::array<double, 6>& p) {
  const double t = std::clamp(p[0], 0.0, 1.0);
  const double share = std::clamp(p[1], 0.0, 1.0);
  const double fw = t * share;
  const double fv = t * (1.0 - share);
  const double sw = std::sqrt(fw * power);
  const double sv = std::sqrt(fv * power);
  const std::array<cd, 2> w{sw * std::cos(p[2]), sw * std::sin(p[2]) * std::polar(1.0, p[3])};
  const std::array<cd, 2> v{sv * std::cos(p[4]), sv * std::sin(p[4]) * std::polar(1.0, p[5])};
  auto gain = [](const std::array<cd, 2>& h, const std::array<cd, 2>& x) {
    return std::norm(std::conj(h[0]) * x[0] + std::conj(h[1]) * x[1]);
  };
  const double rb = std::log2(1.0 + gain(hb, w) / (gain(hb, v) + nb));
  const double re = std::log2(1.0 + gain(he, w) / (gain(he, v) + ne));
  return rb - re;
}

/// Grid over the six parameters followed by compass search from the best
/// few grid points.
inline WmPoint wm_rank_one_oracle(const std::array<cd, 2>& hb, const std::array<cd, 2>& he, double power, double nb,
                                  double ne, int grid = 9) {
  std::vector<WmPoint> top;
  const int keep = 8;
  const double ang_half = pi / 2.0;
  std::array<double, 6> p{};
  for (int iw = 0; iw <= grid; ++iw) {
    for (int iv = 0; iw + iv <= grid; ++iv) {
      const double fw = static_cast<double>(iw) / grid;
      const double fv = static_cast<double>(iv) / grid;
      if (fw + fv == 0.0) continue;
      p[0] = fw + fv;
      p[1] = fw / (fw + fv);
      const int ang_w = iw == 0 ? 1 : grid;
      const int ang_v = iv == 0 ? 1 : grid;
      for (int a = 0; a < ang_w; ++a) {
        for (int b = 0; b < (iw == 0 ? 1 : grid); ++b) {
          for (int c = 0; c < ang_v; ++c) {
            for (int d = 0; d < (iv == 0 ? 1 : grid); ++d) {
              p[2] = ang_half * a / grid;
              p[3] = 2.0 * pi * b / grid;
              p[4] = ang_half * c / grid;
              p[5] = 2.0 * pi * d / grid;
              const double sr = wm_sr_bits(hb, he, power, nb, ne, p);
              if (static_cast<int>(top.size()) < keep || sr > top.back().sr) {
                top.push_back({p, sr});
                std::sort(top.begin(), top.end(), [](const WmPoint& x, const WmPoint& y) { return x.sr > y.sr; });
                if (static_cast<int>(top.size()) > keep) top.pop_back();
              }
            }
          }
        }
      }
    }
  }
  WmPoint best;
  for (WmPoint cur : top) {
    double step = 0.25;
    while (step > 1e-9) {
      bool moved = false;
      for (int k = 0; k < 6; ++k) {
        for (double sgn : {1.0, -1.0}) {
          std::array<double, 6> q = cur.p;
          q[k] += sgn * step * (k < 2 ? 1.0 : pi);
          if (k < 2) q[k] = std::clamp(q[k], 0.0, 1.0);
          const double sr = wm_sr_bits(hb, he, power, nb, ne, q);
          if (sr > cur.sr) {
            cur = {q, sr};
            moved = true;
          }
        }
      }
      if (!moved) step *= 0.5;
    }
    if (cur.sr > best.sr) best = cur;
  }
  return best;
}

// ---------------------------------------------------------------------------

/// Eigenvalues (descending) from Eigen's self-adjoint solver.
inline Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues();
  std::sort(ev.data(), ev.data() + ev.size(), std::greater<double>());
  return ev;
}

inline Eigen::MatrixXcd random_hermitian(int n, std::mt19937_64& gen, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = cd(nd(gen), nd(gen));
  }
  return 0.5 * (a + a.adjoint());
}

inline Eigen::MatrixXcd random_psd(int n, std::mt19937_64& gen, double scale = 1.0) {
  const Eigen::MatrixXcd a = random_hermitian(n, gen, scale);
  return a * a.adjoint();
}

}  // namespace oracle
