#include "pinchsec/convex.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "pinchsec/errors.hpp"

namespace pinchsec {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kInvPhi = 0.61803398874989484820;  // 1 / golden ratio

double log2p(double x) { return std::log1p(x) / kLn2; }

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NumericalError(std::string(what) + " is not finite");
}

// Maximizer of a concave f on [a, b] to `tol`, compared against both ends.
double golden_max(const std::function<double(double)>& f, double a, double b, double tol) {
  if (b - a <= tol) return a;
  const double lo = a;
  const double hi = b;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  double best = f1 >= f2 ? x1 : x2;
  double fbest = std::max(f1, f2);
  for (double end : {lo, hi}) {
    const double fe = f(end);
    if (fe > fbest) {
      fbest = fe;
      best = end;
    }
  }
  return best;
}

double hermitian_form(const CVector& h, const CMatrix& x) { return (h.adjoint() * x * h)(0, 0).real(); }

double frob_inner(const CMatrix& a, const CMatrix& b) { return (a.adjoint() * b).trace().real(); }

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

// ---------------------------------------------------------------------------
// Linear algebra

HermitianEig hermitian_eig(const CMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("hermitian_eig needs a square matrix");
  const double scale = m.norm();
  if ((m - m.adjoint()).norm() > 1e-12 * (1.0 + scale)) {
    throw InvalidArgument("matrix is not Hermitian");
  }
  const Eigen::Index n = m.rows();
  CMatrix a = hermitian_part(m);
  CMatrix q = CMatrix::Identity(n, n);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index r = p + 1; r < n; ++r) off += std::norm(a(p, r));
    }
    if (std::sqrt(off) <= 1e-15 * scale || off == 0.0) break;

    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index r = p + 1; r < n; ++r) {
        const double mag = std::abs(a(p, r));
        if (mag == 0.0) continue;
        // J = D P: D removes the phase of a(p, r), P is the real Jacobi rotation.
        const cplx phase = std::conj(a(p, r)) / mag;  // e^{-i phi}
        const double theta = (a(r, r).real() - a(p, p).real()) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const cplx j_pp = c;
        const cplx j_pr = s;
        const cplx j_rp = -s * phase;
        const cplx j_rr = c * phase;
        for (Eigen::Index k = 0; k < n; ++k) {  // A <- A J
          const cplx akp = a(k, p);
          const cplx akr = a(k, r);
          a(k, p) = akp * j_pp + akr * j_rp;
          a(k, r) = akp * j_pr + akr * j_rr;
        }
        for (Eigen::Index k = 0; k < n; ++k) {  // A <- J^H A
          const cplx apk = a(p, k);
          const cplx ark = a(r, k);
          a(p, k) = std::conj(j_pp) * apk + std::conj(j_rp) * ark;
          a(r, k) = std::conj(j_pr) * apk + std::conj(j_rr) * ark;
        }
        for (Eigen::Index k = 0; k < n; ++k) {  // Q <- Q J
          const cplx qkp = q(k, p);
          const cplx qkr = q(k, r);
          q(k, p) = qkp * j_pp + qkr * j_rp;
          q(k, r) = qkp * j_pr + qkr * j_rr;
        }
        a(p, r) = 0.0;
        a(r, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(r, r) = a(r, r).real();
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() > a(j, j).real(); });
  HermitianEig out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]).real();
    out.vectors.col(k) = q.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

CMatrix project_psd(const CMatrix& m) {
  const HermitianEig e = hermitian_eig(m);
  const Eigen::VectorXd clipped = e.values.cwiseMax(0.0);
  return hermitian_part(e.vectors * clipped.cast<cplx>().asDiagonal() * e.vectors.adjoint());
}

Eigen::VectorXd project_capped_simplex(const Eigen::VectorXd& x, double budget) {
  if (!(budget >= 0.0)) throw InvalidArgument("budget must be non-negative");
  Eigen::VectorXd y = x.cwiseMax(0.0);
  if (y.sum() <= budget) return y;
  // Shift mu > 0 with sum(max(x - mu, 0)) = budget.
  std::vector<double> s(x.data(), x.data() + x.size());
  std::sort(s.begin(), s.end(), std::greater<>());
  double cum = 0.0;
  double mu = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    cum += s[k];
    const double cand = (cum - budget) / static_cast<double>(k + 1);
    if (k + 1 == s.size() || s[k + 1] <= cand) {
      mu = cand;
      break;
    }
  }
  return (x.array() - mu).cwiseMax(0.0).matrix();
}

void project_trace_budget(CMatrix& w, CMatrix& v, double budget) {
  const HermitianEig ew = hermitian_eig(w);
  const HermitianEig ev = hermitian_eig(v);
  const Eigen::Index nw = ew.values.size();
  Eigen::VectorXd joint(nw + ev.values.size());
  joint << ew.values, ev.values;
  const Eigen::VectorXd p = project_capped_simplex(joint, budget);
  w = hermitian_part(ew.vectors * p.head(nw).cast<cplx>().asDiagonal() * ew.vectors.adjoint());
  v = hermitian_part(ev.vectors * p.tail(ev.values.size()).cast<cplx>().asDiagonal() * ev.vectors.adjoint());
}

RankOne extract_rank_one(const CMatrix& w) {
  const HermitianEig e = hermitian_eig(w);
  RankOne out;
  const Eigen::Index n = e.values.size();
  if (n == 0 || !(e.values[0] > 0.0)) {
    out.w = CVector::Zero(n);
    return out;
  }
  out.w = std::sqrt(e.values[0]) * e.vectors.col(0);
  out.rank_ratio = n > 1 ? std::max(e.values[1], 0.0) / e.values[0] : 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Waveguide division

WdGains WdGains::from_channels(cplx h_b1, cplx h_b2, cplx h_e1, cplx h_e2, double noise_b, double noise_e) {
  if (!(noise_b > 0.0) || !(noise_e > 0.0)) throw InvalidArgument("noise must be positive");
  return {std::norm(h_b1) / noise_b, std::norm(h_b2) / noise_b, std::norm(h_e1) / noise_e,
          std::norm(h_e2) / noise_e};
}

double wd_objective(const WdGains& g, const PowerSplit& p) {
  const double rb = log2p(p.p_signal * g.b1 / (1.0 + p.p_an * g.b2));
  const double re = log2p(p.p_signal * g.e1 / (1.0 + p.p_an * g.e2));
  return rb - re;
}

double wd_surrogate(const WdGains& g, const PowerSplit& p, const PowerSplit& at) {
  const double s = p.p_signal;
  const double a = p.p_an;
  const double nb0 = 1.0 + at.p_an * g.b2;
  const double ne0 = 1.0 + at.p_signal * g.e1 + at.p_an * g.e2;
  const double lin_b = std::log2(nb0) + g.b2 * (a - at.p_an) / (nb0 * kLn2);
  const double lin_e =
      std::log2(ne0) + (g.e1 * (s - at.p_signal) + g.e2 * (a - at.p_an)) / (ne0 * kLn2);
  return log2p(s * g.b1 + a * g.b2) + log2p(a * g.e2) - lin_b - lin_e;
}

std::array<double, 2> wd_surrogate_gradient(const WdGains& g, const PowerSplit& p, const PowerSplit& at) {
  const double db = 1.0 + p.p_signal * g.b1 + p.p_an * g.b2;
  const double de = 1.0 + p.p_an * g.e2;
  const double nb0 = 1.0 + at.p_an * g.b2;
  const double ne0 = 1.0 + at.p_signal * g.e1 + at.p_an * g.e2;
  const double ds = (g.b1 / db - g.e1 / ne0) / kLn2;
  const double da = (g.b2 / db + g.e2 / de - g.b2 / nb0 - g.e2 / ne0) / kLn2;
  return {ds, da};
}

WdScaResult wd_power_sca(cplx h_b1, cplx h_b2, cplx h_e1, cplx h_e2, double p_max, double noise_b,
                         double noise_e, double tol, const PowerSplit& init, int max_iters) {
  if (!(p_max > 0.0)) throw InvalidArgument("p_max must be positive");
  if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
  if (!(init.p_signal >= 0.0) || !(init.p_an >= 0.0) || init.total() > p_max * (1.0 + 1e-12)) {
    throw InvalidArgument("initial power split is infeasible");
  }
  for (cplx h : {h_b1, h_b2, h_e1, h_e2}) require_finite(std::abs(h), "channel");

  // Work in units of p_max.
  WdGains g = WdGains::from_channels(h_b1, h_b2, h_e1, h_e2, noise_b, noise_e);
  g.b1 *= p_max;
  g.b2 *= p_max;
  g.e1 *= p_max;
  g.e2 *= p_max;
  PowerSplit cur{init.p_signal / p_max, init.p_an / p_max};
  const double scale = cur.total();
  if (scale > 1.0) cur = {cur.p_signal / scale, cur.p_an / scale};

  WdScaResult out;
  double obj = wd_objective(g, cur);
  require_finite(obj, "WD objective");
  out.trace.objective_per_iter.push_back(obj);
  constexpr double kSearchTol = 1e-10;

  for (int it = 0; it < max_iters; ++it) {
    const PowerSplit at = cur;
    auto best_an = [&](double ps) {
      return golden_max([&](double pa) { return wd_surrogate(g, {ps, pa}, at); }, 0.0, 1.0 - ps, kSearchTol);
    };
    const double s = golden_max([&](double ps) { return wd_surrogate(g, {ps, best_an(ps)}, at); }, 0.0, 1.0,
                                kSearchTol);
    const PowerSplit next{s, best_an(s)};
    const double next_obj = wd_objective(g, next);
    require_finite(next_obj, "WD objective");
    ++out.trace.iters;
    const double gain = next_obj - obj;
    if (gain > 0.0) {
      cur = next;
      obj = next_obj;
    }
    out.trace.objective_per_iter.push_back(obj);
    if (gain < tol) {
      out.trace.converged = true;
      break;
    }
  }

  out.split = {cur.p_signal * p_max, cur.p_an * p_max};
  out.secrecy_rate = std::max(obj, 0.0);
  return out;
}

PowerSplit wd_initial_split(cplx h_b1, cplx h_b2, cplx h_e1, cplx h_e2, double p_max, double noise_b,
                            double noise_e, int points) {
  if (!(p_max > 0.0)) throw InvalidArgument("p_max must be positive");
  if (points < 1) throw InvalidArgument("points must be >= 1");
  const WdGains g = WdGains::from_channels(h_b1, h_b2, h_e1, h_e2, noise_b, noise_e);
  PowerSplit best{0.5 * p_max, 0.5 * p_max};
  double best_obj = wd_objective(g, best);
  for (int i = 0; i <= points; ++i) {
    const double s = p_max * static_cast<double>(points - i) / points;
    const PowerSplit cand{s, p_max - s};
    const double obj = wd_objective(g, cand);
    if (obj > best_obj) {
      best = cand;
      best_obj = obj;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Waveguide multiplexing

double wm_objective(const WmProblem& p, const CMatrix& w, const CMatrix& v) {
  const double bw = hermitian_form(p.h_b, w) / p.noise_b;
  const double bv = hermitian_form(p.h_b, v) / p.noise_b;
  const double ew = hermitian_form(p.h_e, w) / p.noise_e;
  const double ev = hermitian_form(p.h_e, v) / p.noise_e;
  return log2p(bw + bv) - log2p(bv) - log2p(ew + ev) + log2p(ev);
}

double wm_surrogate(const WmProblem& p, const CMatrix& w, const CMatrix& v, const CMatrix& w0,
                    const CMatrix& v0) {
  const double b_wv = (hermitian_form(p.h_b, w) + hermitian_form(p.h_b, v)) / p.noise_b;
  const double e_v = hermitian_form(p.h_e, v) / p.noise_e;
  const double b_v = hermitian_form(p.h_b, v) / p.noise_b;
  const double e_wv = (hermitian_form(p.h_e, w) + hermitian_form(p.h_e, v)) / p.noise_e;
  const double b_v0 = hermitian_form(p.h_b, v0) / p.noise_b;
  const double e_wv0 = (hermitian_form(p.h_e, w0) + hermitian_form(p.h_e, v0)) / p.noise_e;
  const double lin_b = log2p(b_v0) + (b_v - b_v0) / ((1.0 + b_v0) * kLn2);
  const double lin_e = log2p(e_wv0) + (e_wv - e_wv0) / ((1.0 + e_wv0) * kLn2);
  return log2p(b_wv) + log2p(e_v) - lin_b - lin_e;
}

std::pair<CMatrix, CMatrix> wm_surrogate_gradient(const WmProblem& p, const CMatrix& w, const CMatrix& v,
                                                  const CMatrix& w0, const CMatrix& v0) {
  const CMatrix hb = p.h_b * p.h_b.adjoint() / p.noise_b;
  const CMatrix he = p.h_e * p.h_e.adjoint() / p.noise_e;
  const double b_wv = (hermitian_form(p.h_b, w) + hermitian_form(p.h_b, v)) / p.noise_b;
  const double e_v = hermitian_form(p.h_e, v) / p.noise_e;
  const double b_v0 = hermitian_form(p.h_b, v0) / p.noise_b;
  const double e_wv0 = (hermitian_form(p.h_e, w0) + hermitian_form(p.h_e, v0)) / p.noise_e;
  const CMatrix common = (hb / (1.0 + b_wv) - he / (1.0 + e_wv0)) / kLn2;
  CMatrix gv = common + (he / (1.0 + e_v) - hb / (1.0 + b_v0)) / kLn2;
  return {common, gv};
}

WmScaResult wm_beamform_sca(const CVector& h_b, const CVector& h_e, double p_max, double noise_b,
                            double noise_e, double tol, const CMatrix& w0, const CMatrix& v0,
                            const WmScaOptions& opts) {
  const Eigen::Index m = h_b.size();
  if (m < 1 || h_e.size() != m) throw InvalidArgument("channel dimensions differ");
  if (w0.rows() != m || w0.cols() != m || v0.rows() != m || v0.cols() != m) {
    throw InvalidArgument("initial matrices do not match the channel dimension");
  }
  if (!(p_max > 0.0) || !(noise_b > 0.0) || !(noise_e > 0.0)) {
    throw InvalidArgument("p_max and noise must be positive");
  }
  if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
  require_finite(h_b.norm() + h_e.norm(), "channel");

  const double init_trace = w0.trace().real() + v0.trace().real();
  const double min_eig = std::min(hermitian_eig(w0).values.minCoeff(), hermitian_eig(v0).values.minCoeff());
  if (init_trace > p_max + 1e-9 || min_eig < -1e-9) throw InvalidArgument("initial (W, V) is infeasible");

  // Normalized problem: unit noise, unit budget.
  const WmProblem prob{h_b * std::sqrt(p_max / noise_b), h_e * std::sqrt(p_max / noise_e), 1.0, 1.0};
  CMatrix w = w0 / p_max;
  CMatrix v = opts.freeze_an ? CMatrix(CMatrix::Zero(m, m)) : CMatrix(v0 / p_max);
  project_trace_budget(w, v, 1.0);

  WmScaResult out;
  double obj = wm_objective(prob, w, v);
  require_finite(obj, "WM objective");
  out.trace.objective_per_iter.push_back(obj);

  for (int outer = 0; outer < opts.max_outer; ++outer) {
    // Backtracking can end a solve with a step near rounding level; never
    // carry that into the next surrogate.
    double step = 1.0;
    const CMatrix ew = w;
    const CMatrix ev = v;
    CMatrix xw = w;
    CMatrix xv = v;
    double f = wm_surrogate(prob, xw, xv, ew, ev);
    for (int inner = 0; inner < opts.max_inner; ++inner) {
      auto [gw, gv] = wm_surrogate_gradient(prob, xw, xv, ew, ev);
      if (opts.freeze_an) gv.setZero();
      require_finite(gw.norm() + gv.norm(), "surrogate gradient");
      step = std::min(step * 2.0, 1e8);
      CMatrix nw;
      CMatrix nv;
      double nf = f;
      double moved = 0.0;
      bool accepted = false;
      while (step > 1e-14) {
        nw = xw + step * gw;
        nv = xv + step * gv;
        project_trace_budget(nw, nv, 1.0);
        const CMatrix dw = nw - xw;
        const CMatrix dv = nv - xv;
        moved = std::sqrt(dw.squaredNorm() + dv.squaredNorm());
        nf = wm_surrogate(prob, nw, nv, ew, ev);
        const double model = f + frob_inner(gw, dw) + frob_inner(gv, dv) - moved * moved / (2.0 * step);
        if (nf >= model && nf >= f) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
      xw = std::move(nw);
      xv = std::move(nv);
      const double gain = nf - f;
      f = nf;
      if (moved / step <= 1e-9 || gain <= 1e-14) break;
    }

    const double next_obj = wm_objective(prob, xw, xv);
    require_finite(next_obj, "WM objective");
    ++out.trace.iters;
    const double gain = next_obj - obj;
    if (gain > 0.0) {
      w = xw;
      v = xv;
      obj = next_obj;
    }
    out.trace.objective_per_iter.push_back(obj);
    if (gain < tol) {
      out.trace.converged = true;
      break;
    }
  }

  out.w = w * p_max;
  out.v = v * p_max;
  out.secrecy_rate = std::max(obj, 0.0);
  return out;
}

}  // namespace pinchsec
