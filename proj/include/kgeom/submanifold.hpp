#pragma once

#include <map>
#include <string>
#include <vector>

#include "kgeom/immersion.hpp"

// Per-point immersion geometry: adapted frames, the second fundamental form
// and its invariants, the T/F split of J, slant classification, intrinsic
// curvature, and the Gauss/Codazzi residuals that tie the ambient and
// intrinsic computations together.

namespace kgeom {

struct AdaptedFrame {
    Vec u;                           // chart point
    Vec phi;                         // ambient image
    std::vector<Vec> coord_tangent;  // d phi(d/du_a)
    std::vector<Vec> tangent;        // g-orthonormal, Gram-Schmidt in coordinate order
    std::vector<Vec> normal;         // completes the frame; sign: first nonzero component > 0
    Mat frame_coeff;                 // tangent[i] = sum_a frame_coeff(i,a) coord_tangent[a]
    Mat induced;                     // G_ab
    Mat g;                           // ambient metric at phi
    Mat J;
    double orthonormality_residual = 0.0;

    int n() const { return static_cast<int>(tangent.size()); }
    int codim() const { return static_cast<int>(normal.size()); }
    // chart coefficients of an ambient tangent vector
    Vec chart_coeff(const Vec& x_ambient) const;
    Vec push(const Vec& x_chart) const;
    // tangential / normal projections of an ambient vector
    Vec project_tangent(const Vec& v) const;
    Vec project_normal(const Vec& v) const;
    double tangency_residual(const Vec& v) const;
};

MetricMatrix induced_metric_at(const Immersion& S, const Vec& u);
AdaptedFrame adapted_frame_at(const Immersion& S, const Vec& u);

struct ExtrinsicData {
    AdaptedFrame frame;
    std::vector<std::vector<Vec>> omega;  // omega[i][j]: ambient normal vector, frame indices
    std::vector<Mat> shape;               // B_r, r-th normal: (B_r)_ij = g(omega(e_i,e_j), e_r)
    Vec mean_curvature;                   // H ambient components
    double h_norm = 0.0;
    double omega_norm_sq = 0.0;
    Mat t_matrix;  // t_ij = g(J e_i, e_j)
    double t_norm_sq = 0.0;
    std::vector<Vec> f_vectors;  // normal part of J e_i
    // invariant residuals
    double omega_symmetry = 0.0;
    double duality_residual = 0.0;  // g(omega(X,Y),V) vs g(B_V X, Y)
    double t_antisymmetry = 0.0;
};

ExtrinsicData extrinsic_data_at(const Immersion& S, const Vec& u, const AdaptedFrame& frame);
ExtrinsicData extrinsic_data_at(const Immersion& S, const Vec& u);

// omega on coordinate fields: normal part of phi_ab + Gamma(phi_a, phi_b).
std::vector<std::vector<Vec>> coordinate_omega(const Immersion& S, const Vec& u,
                                               const AdaptedFrame& frame);

enum class SubmanifoldClass { Invariant, AntiInvariant, Slant, CR, Generic };
std::string to_string(SubmanifoldClass c);

struct Classification {
    SubmanifoldClass cls = SubmanifoldClass::Generic;
    double theta = 0.0;        // slant angle when cls == Slant (0 / pi/2 for the extremes)
    double theta_spread = 0.0; // stdev of the per-vector angles
    Vec tt_spectrum;           // eigenvalues of T^T T at the last sample point
};

// k random unit tangents per point (k >= 8); thresholds default to 1e-6.
Classification classify(const Immersion& S, const std::vector<Vec>& points, int k,
                        unsigned long long seed, double tol = 1e-6);

struct IntrinsicCurvature {
    Tensor4 riemann;  // chart indices
    Mat ricci;        // chart indices
    double rho_pairs = 0.0;  // sum_{i<j} K(e_i ^ e_j), frame-invariant
};

// Induced Levi-Civita connection from dual-number first derivatives of the
// induced metric; the curvature layer uses central differences on it.
IntrinsicCurvature intrinsic_curvature_at(const Immersion& S, const Vec& u);

// Sectional curvature of the plane spanned by two chart-coefficient vectors.
double intrinsic_sectional(const IntrinsicCurvature& ic, const Mat& induced, const Vec& xc,
                           const Vec& yc);

// |R_bar(X,Y,Z,W) - R(X,Y,Z,W) + g(w(X,W),w(Y,Z)) - g(w(X,Z),w(Y,W))| for
// ambient tangent vectors (tangency checked to 1e-8).
double gauss_residual_at(const Immersion& S, const Vec& u, const Vec& x, const Vec& y, const Vec& z,
                         const Vec& w);

// Codazzi: ||(R_bar(X,Y)Z)^perp - {nabla^perp_X w(Y,Z) - w(nabla_X Y,Z) - w(Y,nabla_X Z)}
//          + {same with X,Y swapped}||; directional derivatives of omega via
// central differences along chart lines.
double codazzi_residual_at(const Immersion& S, const Vec& u, const Vec& x, const Vec& y,
                           const Vec& z);

}  // namespace kgeom
