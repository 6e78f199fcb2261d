#pragma once

#include <map>
#include <string>
#include <vector>

#include "kgeom/dual.hpp"
#include "kgeom/linalg.hpp"

// Kaehler model spaces: flat C^m, the Fubini-Study chart of CP^m
// (holomorphic sectional curvature +4) and the Bergman chart of CH^m
// (holomorphic sectional curvature -4). All charts are real 2m-dimensional
// with z_j = x_{2j} + i x_{2j+1} and the constant complex structure
// J e_{2j} = e_{2j+1}.
//
// Curvature sign convention, fixed once for the whole library:
//   R(X,Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y]
//   R(X,Y,Z,W) = g(R(X,Y)Z, W),   K(X,Y) = R(X,Y,Y,X)
// so the round sphere has K = +1. Scalar curvature comes in two flavours:
// tau (full trace, used by the L/M tensors) and rho_half = tau/2 (the
// sum-over-planes convention used by the inequality margins).

namespace kgeom {

enum class AmbientKind { Flat, FubiniStudy, ComplexHyperbolic };

struct AmbientSpace {
    AmbientKind kind = AmbientKind::Flat;
    int m = 2;  // complex dimension
    int c = 0;  // holomorphic curvature sign; sectional curvature of J-planes is 4c

    int dim() const { return 2 * m; }
    std::string chart_domain() const;
};

AmbientSpace make_ambient(AmbientKind kind, int m);
AmbientKind ambient_kind_from_string(const std::string& s);
std::string to_string(AmbientKind k);

template <class T>
struct Ten3 {
    int d = 0;
    std::vector<T> a;
    Ten3() = default;
    explicit Ten3(int dim) : d(dim), a(static_cast<std::size_t>(dim) * dim * dim, T{}) {}
    T& operator()(int k, int i, int j) { return a[(static_cast<std::size_t>(k) * d + i) * d + j]; }
    const T& operator()(int k, int i, int j) const {
        return a[(static_cast<std::size_t>(k) * d + i) * d + j];
    }
};

namespace detail {

template <class T>
void check_domain_value(const AmbientSpace& A, double s) {
    if (A.kind == AmbientKind::ComplexHyperbolic && s >= 1.0)
        throw Error("ambient: point outside the unit ball (|z|^2 = " + std::to_string(s) + ")");
}

// realified Hermitian metric; see header comment for the chart conventions
template <class T>
SqMat<T> metric_tpl(const AmbientSpace& A, const std::vector<T>& p) {
    const int m = A.m;
    SqMat<T> g(2 * m);
    if (A.kind == AmbientKind::Flat) {
        for (int i = 0; i < 2 * m; ++i) g(i, i) = T{1.0};
        return g;
    }
    T s{};
    for (int i = 0; i < 2 * m; ++i) s += p[i] * p[i];
    check_domain_value<T>(A, value(s));
    const double sign = (A.kind == AmbientKind::FubiniStudy) ? 1.0 : -1.0;
    T one_pm = 1.0 + sign * s;              // 1+|z|^2 or 1-|z|^2
    T denom = one_pm * one_pm;
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
            T aj = p[2 * j], bj = p[2 * j + 1];
            T ak = p[2 * k], bk = p[2 * k + 1];
            // conj(z_j) z_k = (a_j a_k + b_j b_k) + i (a_j b_k - b_j a_k)
            T re = aj * ak + bj * bk;
            T im = aj * bk - bj * ak;
            T Ajk = (j == k) ? (one_pm - sign * re) / denom : (T{} - sign * re) / denom;
            T Bjk = (T{} - sign * im) / denom;
            g(2 * j, 2 * k) = Ajk;
            g(2 * j + 1, 2 * k + 1) = Ajk;
            g(2 * j, 2 * k + 1) = Bjk;
            g(2 * j + 1, 2 * k) = T{} - Bjk;
        }
    return g;
}

template <class T>
Ten3<T> christoffel_tpl(const AmbientSpace& A, const std::vector<T>& p) {
    const int d = A.dim();
    Ten3<T> gamma(d);
    if (A.kind == AmbientKind::Flat) return gamma;
    // dg[c](i,j) = d_c g_ij via one dual layer
    std::vector<SqMat<Dual<T>>> dg;
    dg.reserve(d);
    std::vector<Dual<T>> pd(d);
    for (int c = 0; c < d; ++c) {
        for (int i = 0; i < d; ++i) pd[i] = Dual<T>{p[i], T{i == c ? 1.0 : 0.0}};
        dg.push_back(metric_tpl<Dual<T>>(A, pd));
    }
    SqMat<T> ginv = spd_inverse(metric_tpl<T>(A, p));
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
                T s{};
                for (int l = 0; l < d; ++l)
                    s += ginv(k, l) * (dg[i](j, l).d + dg[j](i, l).d - dg[l](i, j).d);
                gamma(k, i, j) = 0.5 * s;
                gamma(k, j, i) = gamma(k, i, j);
            }
    return gamma;
}

}  // namespace detail

Mat metric_at(const AmbientSpace& A, const Vec& p);
Mat complex_structure(const AmbientSpace& A);
Ten3<double> christoffel_at(const AmbientSpace& A, const Vec& p);

struct CurvatureData {
    Tensor4 riemann;  // lowered R(X,Y,Z,W) on coordinate indices
    Mat ricci;
    double tau = 0.0;       // trace scalar curvature
    double rho_half = 0.0;  // tau/2, sum-over-planes convention
    // construction-time residuals
    double antisym_12 = 0.0, antisym_34 = 0.0, pair_swap = 0.0, bianchi = 0.0;
};

// dGamma analytically via nested duals (default) or by central differences
// with step 1e-5*max(1,|x|) (kept as a cross-check).
CurvatureData curvature_at(const AmbientSpace& A, const Vec& p);
CurvatureData curvature_at_fd(const AmbientSpace& A, const Vec& p);

// (Gamma(X,Y))^k = Gamma^k_ij X^i Y^j
Vec christoffel_apply(const Ten3<double>& gamma, const Vec& x, const Vec& y);

double sectional_curvature(const Tensor4& R, const Mat& g, const Vec& x, const Vec& y);

// Max residuals of the Kaehler package over sample points: J^2+I,
// g(J.,J.)-g, nabla J, Riemann symmetries, first Bianchi and the
// J-invariance R(JX,JY,.,.) = R(X,Y,.,.).
std::map<std::string, double> kaehler_audit(const AmbientSpace& A, const std::vector<Vec>& points);

}  // namespace kgeom
