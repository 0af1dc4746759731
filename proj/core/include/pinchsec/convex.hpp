#pragma once

// Small concave-maximization kernels: Hermitian eigendecomposition, PSD and
// trace-budget projections, and the two SCA loops (WD power split and WM
// SDP-relaxed beamforming).

#include <array>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "pinchsec/model.hpp"

namespace pinchsec {

struct ScaTrace {
  std::vector<double> objective_per_iter;  // true R_b - R_e (unclamped), entry 0 at the init
  int iters = 0;
  bool converged = false;
};

struct HermitianEig {
  Eigen::VectorXd values;  // descending
  CMatrix vectors;         // unitary, column k pairs with values[k]
};

/// Cyclic complex Jacobi. Throws InvalidArgument if `m` is not Hermitian to
/// 1e-12 relative.
HermitianEig hermitian_eig(const CMatrix& m);

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clipped).
CMatrix project_psd(const CMatrix& m);

/// Euclidean projection onto {x >= 0, sum(x) <= budget}.
Eigen::VectorXd project_capped_simplex(const Eigen::VectorXd& x, double budget);

/// Joint projection of (W, V) onto {W, V PSD, tr W + tr V <= budget}.
void project_trace_budget(CMatrix& w, CMatrix& v, double budget);

struct RankOne {
  CVector w;
  double rank_ratio = 0.0;  // lambda_2 / lambda_1
};

/// Leading eigenpair sqrt(lambda_1) q_1; zero matrix gives a zero vector.
RankOne extract_rank_one(const CMatrix& w);

// ---------------------------------------------------------------------------
// Waveguide division

/// SNR gains per watt, |h|^2 / noise. Channels must already include any
/// per-PA power factor.
struct WdGains {
  double b1 = 0.0;  // signal waveguide -> Bob
  double b2 = 0.0;  // AN waveguide -> Bob
  double e1 = 0.0;
  double e2 = 0.0;

  static WdGains from_channels(cplx h_b1, cplx h_b2, cplx h_e1, cplx h_e2, double noise_b, double noise_e);
};

/// R_b - R_e in bits/s/Hz, not clamped.
double wd_objective(const WdGains& g, const PowerSplit& p);
/// First-order lower bound of wd_objective, expanded at `at`.
double wd_surrogate(const WdGains& g, const PowerSplit& p, const PowerSplit& at);
/// d/dP_S, d/dP_A of wd_surrogate.
std::array<double, 2> wd_surrogate_gradient(const WdGains& g, const PowerSplit& p, const PowerSplit& at);

struct WdScaResult {
  PowerSplit split;
  double secrecy_rate = 0.0;  // clamped
  ScaTrace trace;
};

/// SCA over {P_S, P_A >= 0, P_S + P_A <= p_max}; each surrogate is maximized
/// by nested golden-section search to 1e-10 * p_max.
WdScaResult wd_power_sca(cplx h_b1, cplx h_b2, cplx h_e1, cplx h_e2, double p_max, double noise_b,
                         double noise_e, double tol, const PowerSplit& init, int max_iters = 200);

/// Start point for wd_power_sca: the equal split, replaced by the best point
/// of a `points`-interval scan of the edge P_S + P_A = p_max when that scores
/// strictly higher. The SCA is local and can stall on the flat region where
/// strong AN at Bob saturates both rates.
PowerSplit wd_initial_split(cplx h_b1, cplx h_b2, cplx h_e1, cplx h_e2, double p_max, double noise_b,
                            double noise_e, int points = 20);

// ---------------------------------------------------------------------------
// Waveguide multiplexing

/// Effective channels (length M) and noise powers.
struct WmProblem {
  CVector h_b;
  CVector h_e;
  double noise_b = 1.0;
  double noise_e = 1.0;
};

/// log2(1 + h_b^H W h_b / (h_b^H V h_b + s_b)) - (same at Eve), not clamped.
double wm_objective(const WmProblem& p, const CMatrix& w, const CMatrix& v);
/// First-order lower bound of wm_objective, expanded at (w0, v0).
double wm_surrogate(const WmProblem& p, const CMatrix& w, const CMatrix& v, const CMatrix& w0,
                    const CMatrix& v0);
/// Hermitian gradients (d/dW, d/dV) of wm_surrogate under <A, B> = Re tr(A B).
std::pair<CMatrix, CMatrix> wm_surrogate_gradient(const WmProblem& p, const CMatrix& w, const CMatrix& v,
                                                  const CMatrix& w0, const CMatrix& v0);

struct WmScaOptions {
  bool freeze_an = false;  // keep V at zero
  int max_outer = 200;
  int max_inner = 500;
};

struct WmScaResult {
  CMatrix w;
  CMatrix v;
  double secrecy_rate = 0.0;  // clamped, of the returned (W, V)
  ScaTrace trace;
};

/// SCA over {W, V PSD, tr W + tr V <= p_max}; each surrogate is maximized by
/// projected gradient ascent with backtracking.
WmScaResult wm_beamform_sca(const CVector& h_b, const CVector& h_e, double p_max, double noise_b,
                            double noise_e, double tol, const CMatrix& w0, const CMatrix& v0,
                            const WmScaOptions& opts = {});

}  // namespace pinchsec
