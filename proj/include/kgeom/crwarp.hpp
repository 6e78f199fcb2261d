#pragma once

#include <string>
#include <vector>

#include "kgeom/submanifold.hpp"

// CR-warped-product structure. The tangent bundle splits as D + Dperp with
// D the J-invariant part (eigenvalue ~1 of T^T T) and Dperp totally real
// (eigenvalue ~0); J Dperp sits in the normal bundle and nu is what is left
// of it. On a warped product the connection satisfies
// nabla_X Z = X(log f) Z for X in D, Z in Dperp, which is what the checks
// here extract and compare against the analytic warping data of builtins.

namespace kgeom {

struct DistributionSplit {
    AdaptedFrame frame;
    int p = 0;  // complex dimension of D (so dim D = 2p)
    int q = 0;  // dim Dperp
    std::vector<Vec> d_frame;       // ambient, orthonormal
    std::vector<Vec> dperp_frame;   // ambient, orthonormal
    std::vector<Vec> jdperp_frame;  // normal, J of dperp
    std::vector<Vec> nu_frame;      // rest of the normal bundle
    std::vector<Vec> d_chart;       // chart coefficients of d_frame
    std::vector<Vec> dperp_chart;
    Vec tt_spectrum;
    double j_invariance_residual = 0.0;   // max |F X| over the D frame
    double jdperp_normal_residual = 0.0;  // max |T Z| over the Dperp frame
    bool degenerate = false;              // p == 0 or q == 0
};

// Eigensplit of T^T T; throws (reporting the spectrum) when eigenvalues sit
// away from {0,1} by more than 1e-6.
DistributionSplit split_distributions_at(const Immersion& S, const Vec& u);

struct PQResult {
    Vec p_part;  // tangential part of (nabla_X J)Y
    Vec q_part;  // normal part
    double p_norm = 0.0;
    double q_norm = 0.0;
};
// X, Y ambient tangent vectors.
PQResult pq_tensors_at(const Immersion& S, const Vec& u, const Vec& x, const Vec& y);

struct WarpCheck {
    double max_residual = 0.0;       // |proj_T nabla_X Z  -  X(log f) Z|
    double analytic_residual = 0.0;  // extraction vs analytic d log f (builtins)
    std::vector<double> x_logf;      // per D-frame direction, extraction averaged over Z
    double extraction_spread = 0.0;  // max disagreement between Z choices
    double grad_logf_sq = 0.0;
};
// Requires q >= 1.
WarpCheck warping_check_at(const Immersion& S, const Vec& u);

struct Lemma2Check {
    double identity1 = 0.0;  // omega_JDperp(JX,Z) = J P_Z JX + X(log f) JZ
    double identity2 = 0.0;  // g(P_Z JX, W) = g(Q_Z X, JW)
    double identity3 = 0.0;  // g(w(JX,Z), Jw(X,Z)) - |w_nu(X,Z)|^2 = g(Q_Z X, Jw_nu(X,Z))
    double p_norm = 0.0;     // |P_Z JX|, ~0 on Kaehler ambients
    double q_norm = 0.0;
};
// X in D, Z and W in Dperp (ambient vectors; membership enforced to 1e-6).
Lemma2Check lemma2_check_at(const Immersion& S, const Vec& u, const Vec& x, const Vec& z,
                            const Vec& w);

struct Thm3Result {
    double omega_norm_sq = 0.0;
    double p_norm_sq = 0.0;            // |P_{Dperp} D|^2
    double q_grad_sq = 0.0;            // q |grad_D log f|^2
    double margin = 0.0;
    double hypothesis_residual = 0.0;  // component of P_Z X outside D
};
Thm3Result thm3_margin_at(const Immersion& S, const Vec& u);

struct DistributionScalars {
    double rho_d = 0.0;
    double rho_dperp = 0.0;  // 0 by convention when q = 1
    double rho_mixed = 0.0;  // cross-plane part; rho_d + rho_dperp + rho_mixed = rho_pairs
};
DistributionScalars distribution_scalars_at(const Immersion& S, const Vec& u);

struct Thm4Report {
    int n = 0, p = 0, q = 0;
    bool cond_pq = false;       // (n+1) <= p q
    bool cond_q2 = false;       // 2(n+1) <= q^2
    double rho_min = 0.0, rho_max = 0.0;
    double grad_min = 0.0, grad_max = 0.0;  // |grad_D log f| over the sample
    bool applicable = true;
    std::string note;
};
// Static dimension/sign report over sample points; the global hypotheses
// (compactness, the shape-operator condition) are not checked here and the
// note says so.
Thm4Report thm4_dichotomy_report(const Immersion& S, const std::vector<Vec>& sample);

}  // namespace kgeom
