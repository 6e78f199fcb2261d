#include "kgeom/bochner.hpp"

#include <cmath>

namespace kgeom {

namespace {

double bilinear(const Mat& B, const Vec& x, const Vec& y) {
    double s = 0.0;
    for (int i = 0; i < B.n; ++i) {
        if (x[i] == 0.0) continue;
        s += x[i] * kern::dot(&B.a[static_cast<std::size_t>(i) * B.n], y.data(), B.n);
    }
    return s;
}

}  // namespace

double BochnerTensors::l_value(const Vec& x, const Vec& y) const { return bilinear(L, x, y); }
double BochnerTensors::m_value(const Vec& x, const Vec& y) const { return bilinear(M, x, y); }

BochnerTensors lm_tensors_at(const AmbientSpace& A, const Vec& p) {
    return lm_tensors_at(A, p, A.m);
}

BochnerTensors lm_tensors_at(const AmbientSpace& A, const Vec& p, int denominator_dim) {
    const int d = A.dim();
    const double dd = denominator_dim;
    CurvatureData cur = curvature_at(A, p);
    BochnerTensors t;
    t.space = A;
    t.point = p;
    t.g = metric_at(A, p);
    t.J = complex_structure(A);
    t.L = Mat(d);
    const double c1 = 1.0 / (2.0 * dd + 4.0);
    const double c2 = 1.0 / (2.0 * (2.0 * dd + 2.0) * (2.0 * dd + 4.0));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) t.L(a, b) = c1 * cur.ricci(a, b) - c2 * cur.tau * t.g(a, b);
    t.M = Mat(d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            double s = 0.0;
            for (int c = 0; c < d; ++c) s += t.L(a, c) * t.J(c, b);
            t.M(a, b) = -s;
        }
    t.Jg = matmul(transpose(t.J), t.g);
    return t;
}

Tensor4 reconstruct_curvature(const BochnerTensors& t) {
    const int d = t.g.n;
    Tensor4 R(d);
    auto row = [d](const Mat& m, int i) { return &m.a[static_cast<std::size_t>(i) * d]; };
    const std::size_t nd = static_cast<std::size_t>(d);
    for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y)
            for (int z = 0; z < d; ++z) {
                double* out = &R.a[((static_cast<std::size_t>(x) * d + y) * d + z) * d];
                kern::axpy(t.L(y, z), row(t.g, x), out, nd);
                kern::axpy(-t.L(x, z), row(t.g, y), out, nd);
                kern::axpy(t.g(y, z), row(t.L, x), out, nd);
                kern::axpy(-t.g(x, z), row(t.L, y), out, nd);
                kern::axpy(t.M(y, z), row(t.Jg, x), out, nd);
                kern::axpy(-t.M(x, z), row(t.Jg, y), out, nd);
                kern::axpy(t.Jg(y, z), row(t.M, x), out, nd);
                kern::axpy(-t.Jg(x, z), row(t.M, y), out, nd);
                kern::axpy(-2.0 * t.M(x, y), row(t.Jg, z), out, nd);
                kern::axpy(-2.0 * t.Jg(x, y), row(t.M, z), out, nd);
            }
    return R;
}

Tensor4 reconstruct_curvature(const AmbientSpace& A, const Vec& p) {
    return reconstruct_curvature(lm_tensors_at(A, p));
}

double bochner_residual(const AmbientSpace& A, const Vec& p) { return bochner_residual(A, p, A.m); }

double bochner_residual(const AmbientSpace& A, const Vec& p, int denominator_dim) {
    Tensor4 recon = reconstruct_curvature(lm_tensors_at(A, p, denominator_dim));
    return max_abs_diff(curvature_at(A, p).riemann, recon);
}

std::map<std::string, double> symmetry_audit(const AmbientSpace& A, const Vec& p) {
    BochnerTensors t = lm_tensors_at(A, p);
    const int d = t.g.n;
    Mat JtLJ = matmul(matmul(transpose(t.J), t.L), t.J);
    Mat LJ = matmul(t.L, t.J);
    Mat JtL = matmul(transpose(t.J), t.L);
    double sym = 0.0, jinv = 0.0, skew = 0.0, masym = 0.0;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            sym = std::max(sym, std::fabs(t.L(a, b) - t.L(b, a)));
            jinv = std::max(jinv, std::fabs(JtLJ(a, b) - t.L(a, b)));
            skew = std::max(skew, std::fabs(LJ(a, b) + JtL(a, b)));
            masym = std::max(masym, std::fabs(t.M(a, b) + t.M(b, a)));
        }
    return {{"L_symmetry", sym},
            {"L_J_invariance", jinv},
            {"L_skew_identity", skew},
            {"M_antisymmetry", masym}};
}

W33Result identity_w33(const AmbientSpace& A, const Vec& p, const Vec& x, const Vec& z) {
    BochnerTensors t = lm_tensors_at(A, p);
    MetricMatrix g(t.g);
    Vec jx = matvec(t.J, x), jz = matvec(t.J, z);
    auto need = [&](const char* name, double got, double want) {
        if (std::fabs(got - want) > 1e-8)
            throw Error(std::string("identity_w33: precondition ") + name + " violated, value " +
                        std::to_string(got));
    };
    need("g(X,X)=1", g.inner(x, x), 1.0);
    need("g(Z,Z)=1", g.inner(z, z), 1.0);
    need("g(X,Z)=0", g.inner(x, z), 0.0);
    need("g(X,JZ)=0", g.inner(x, jz), 0.0);

    W33Result r;
    r.lhs = curvature_at(A, p).riemann.contract(x, jx, z, jz);
    r.rhs = -2.0 * t.m_value(x, jx) * g.inner(z, z) - 2.0 * t.m_value(z, jz) * g.inner(x, x);
    r.residual = std::fabs(r.lhs - r.rhs);
    return r;
}

}  // namespace kgeom
