#pragma once

#include <map>
#include <string>

#include "kgeom/ambient.hpp"

// The L/M tensor pair of a Bochner-flat curvature tensor and the rank-4
// reconstruction built from them:
//
//   L = Ric/(2m+4) - tau*g/(2(2m+2)(2m+4)),   M(Y,Z) = -L(Y,JZ)
//
//   R~(X,Y,Z,W) = L(Y,Z)g(X,W) - L(X,Z)g(Y,W) + L(X,W)g(Y,Z) - L(Y,W)g(X,Z)
//               + M(Y,Z)g(JX,W) - M(X,Z)g(JY,W) + M(X,W)g(JY,Z) - M(Y,W)g(JX,Z)
//               - 2M(X,Y)g(JZ,W) - 2M(Z,W)g(JX,Y)
//
// m is the ambient complex dimension; a denominator override exists so the
// calibration test can show m is the only choice that reproduces the model
// curvatures. The reconstruction pattern is algebraically symmetric (pair
// swap and both antisymmetries hold exactly).

namespace kgeom {

struct BochnerTensors {
    AmbientSpace space;
    Vec point;
    Mat L;   // symmetric, J-invariant
    Mat M;   // antisymmetric, M_ab = -sum_c L_ac J(c,b)
    Mat g;
    Mat J;
    Mat Jg;  // (Jg)_ab = g(J e_a, e_b)

    double l_value(const Vec& x, const Vec& y) const;
    double m_value(const Vec& x, const Vec& y) const;
};

BochnerTensors lm_tensors_at(const AmbientSpace& A, const Vec& p);
// denominator_dim replaces m in the L coefficients (calibration only)
BochnerTensors lm_tensors_at(const AmbientSpace& A, const Vec& p, int denominator_dim);

Tensor4 reconstruct_curvature(const BochnerTensors& t);
Tensor4 reconstruct_curvature(const AmbientSpace& A, const Vec& p);

// max |R - R~| over all index tuples
double bochner_residual(const AmbientSpace& A, const Vec& p);
double bochner_residual(const AmbientSpace& A, const Vec& p, int denominator_dim);

// residuals of L symmetry, L J-invariance, the skew identity
// L(Y,JZ) = -L(JY,Z) and M antisymmetry
std::map<std::string, double> symmetry_audit(const AmbientSpace& A, const Vec& p);

struct W33Result {
    double lhs = 0.0;  // R(X,JX,Z,JZ)
    double rhs = 0.0;  // -2M(X,JX)g(Z,Z) - 2M(Z,JZ)g(X,X)
    double residual = 0.0;
};

// Preconditions: X,Z unit and CR-orthogonal (g(X,Z) = g(X,JZ) = 0 within
// 1e-8); violations throw naming the offending inner product.
W33Result identity_w33(const AmbientSpace& A, const Vec& p, const Vec& x, const Vec& z);

}  // namespace kgeom
