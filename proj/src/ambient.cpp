#include "kgeom/ambient.hpp"

#include <cmath>

namespace kgeom {

std::string AmbientSpace::chart_domain() const {
    if (kind == AmbientKind::ComplexHyperbolic) return "open unit ball in R^" + std::to_string(dim());
    return "R^" + std::to_string(dim());
}

AmbientSpace make_ambient(AmbientKind kind, int m) {
    if (m < 2) throw Error("make_ambient: complex dimension must be >= 2, got " + std::to_string(m));
    AmbientSpace A;
    A.kind = kind;
    A.m = m;
    A.c = kind == AmbientKind::Flat ? 0 : (kind == AmbientKind::FubiniStudy ? 1 : -1);
    return A;
}

AmbientKind ambient_kind_from_string(const std::string& s) {
    if (s == "flat") return AmbientKind::Flat;
    if (s == "fubini_study") return AmbientKind::FubiniStudy;
    if (s == "complex_hyperbolic") return AmbientKind::ComplexHyperbolic;
    throw Error("unknown ambient kind '" + s + "'");
}

std::string to_string(AmbientKind k) {
    switch (k) {
        case AmbientKind::Flat: return "flat";
        case AmbientKind::FubiniStudy: return "fubini_study";
        case AmbientKind::ComplexHyperbolic: return "complex_hyperbolic";
    }
    return "?";
}

Mat metric_at(const AmbientSpace& A, const Vec& p) { return detail::metric_tpl<double>(A, p); }

Mat complex_structure(const AmbientSpace& A) {
    Mat J(A.dim());
    for (int j = 0; j < A.m; ++j) {
        J(2 * j, 2 * j + 1) = -1.0;
        J(2 * j + 1, 2 * j) = 1.0;
    }
    return J;
}

Ten3<double> christoffel_at(const AmbientSpace& A, const Vec& p) {
    return detail::christoffel_tpl<double>(A, p);
}

Vec christoffel_apply(const Ten3<double>& gamma, const Vec& x, const Vec& y) {
    const int d = gamma.d;
    Vec out(d, 0.0);
    for (int k = 0; k < d; ++k) {
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
            if (x[i] == 0.0) continue;
            s += x[i] * kern::dot(&gamma.a[(static_cast<std::size_t>(k) * d + i) * d], y.data(),
                                  static_cast<std::size_t>(d));
        }
        out[k] = s;
    }
    return out;
}

namespace {

CurvatureData assemble_curvature(const AmbientSpace& A, const Vec& p, const Ten3<double>& gamma,
                                 const std::vector<Ten3<double>>& dgamma) {
    const int d = A.dim();
    Mat g = metric_at(A, p);
    Mat ginv = spd_inverse(g);

    // R^l_ijk = d_i G^l_jk - d_j G^l_ik + G^l_is G^s_jk - G^l_js G^s_ik
    Ten3<double> upper_l(d);  // reused per l? store full rank-4 lowered directly
    CurvatureData out;
    out.riemann = Tensor4(d);
    std::vector<double> rl(static_cast<std::size_t>(d) * d * d * d, 0.0);
    auto RL = [&](int l, int i, int j, int k) -> double& {
        return rl[((static_cast<std::size_t>(l) * d + i) * d + j) * d + k];
    };
    for (int l = 0; l < d; ++l)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k) {
                    double v = dgamma[i](l, j, k) - dgamma[j](l, i, k);
                    for (int s = 0; s < d; ++s)
                        v += gamma(l, i, s) * gamma(s, j, k) - gamma(l, j, s) * gamma(s, i, k);
                    RL(l, i, j, k) = v;
                }
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int w = 0; w < d; ++w) {
                    double v = 0.0;
                    for (int l = 0; l < d; ++l) v += g(l, w) * RL(l, i, j, k);
                    out.riemann(i, j, k, w) = v;
                }

    out.ricci = Mat(d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
            double v = 0.0;
            for (int i = 0; i < d; ++i)
                for (int l = 0; l < d; ++l) v += ginv(i, l) * out.riemann(i, j, k, l);
            out.ricci(j, k) = v;
        }
    out.tau = 0.0;
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) out.tau += ginv(j, k) * out.ricci(j, k);
    out.rho_half = 0.5 * out.tau;

    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int w = 0; w < d; ++w) {
                    double r = out.riemann(i, j, k, w);
                    out.antisym_12 = std::max(out.antisym_12, std::fabs(r + out.riemann(j, i, k, w)));
                    out.antisym_34 = std::max(out.antisym_34, std::fabs(r + out.riemann(i, j, w, k)));
                    out.pair_swap = std::max(out.pair_swap, std::fabs(r - out.riemann(k, w, i, j)));
                    out.bianchi = std::max(
                        out.bianchi, std::fabs(r + out.riemann(j, k, i, w) + out.riemann(k, i, j, w)));
                }
    return out;
}

}  // namespace

CurvatureData curvature_at(const AmbientSpace& A, const Vec& p) {
    const int d = A.dim();
    Ten3<double> gamma = christoffel_at(A, p);
    std::vector<Ten3<double>> dgamma(d, Ten3<double>(d));
    std::vector<D1> pd(d);
    for (int c = 0; c < d; ++c) {
        for (int i = 0; i < d; ++i) pd[i] = D1{p[i], i == c ? 1.0 : 0.0};
        Ten3<D1> gc = detail::christoffel_tpl<D1>(A, pd);
        for (std::size_t t = 0; t < gc.a.size(); ++t) dgamma[c].a[t] = gc.a[t].d;
    }
    return assemble_curvature(A, p, gamma, dgamma);
}

CurvatureData curvature_at_fd(const AmbientSpace& A, const Vec& p) {
    const int d = A.dim();
    Ten3<double> gamma = christoffel_at(A, p);
    std::vector<Ten3<double>> dgamma(d, Ten3<double>(d));
    for (int c = 0; c < d; ++c) {
        double h = 1e-5 * std::max(1.0, std::fabs(p[c]));
        Vec pp = p, pm = p;
        pp[c] += h;
        pm[c] -= h;
        Ten3<double> gp = christoffel_at(A, pp);
        Ten3<double> gm = christoffel_at(A, pm);
        for (std::size_t t = 0; t < gp.a.size(); ++t) dgamma[c].a[t] = (gp.a[t] - gm.a[t]) / (2.0 * h);
    }
    return assemble_curvature(A, p, gamma, dgamma);
}

double sectional_curvature(const Tensor4& R, const Mat& g, const Vec& x, const Vec& y) {
    MetricMatrix gm(g);
    double gxx = gm.inner(x, x), gyy = gm.inner(y, y), gxy = gm.inner(x, y);
    double gram = gxx * gyy - gxy * gxy;
    if (std::fabs(gram) < 1e-14) throw Error("sectional_curvature: degenerate plane");
    return R.contract(x, y, y, x) / gram;
}

std::map<std::string, double> kaehler_audit(const AmbientSpace& A, const std::vector<Vec>& points) {
    const int d = A.dim();
    Mat J = complex_structure(A);
    std::map<std::string, double> worst = {
        {"J_squared_plus_I", 0.0}, {"metric_J_invariance", 0.0}, {"nabla_J", 0.0},
        {"riemann_antisym", 0.0},  {"riemann_pair_swap", 0.0},   {"first_bianchi", 0.0},
        {"curvature_J_invariance", 0.0}};

    Mat JJ = matmul(J, J);
    for (int i = 0; i < d; ++i) JJ(i, i) += 1.0;
    worst["J_squared_plus_I"] = max_abs(JJ);

    for (const Vec& p : points) {
        Mat g = metric_at(A, p);
        Mat compat = matmul(matmul(transpose(J), g), J);
        for (std::size_t t = 0; t < compat.a.size(); ++t) compat.a[t] -= g.a[t];
        worst["metric_J_invariance"] = std::max(worst["metric_J_invariance"], max_abs(compat));

        Ten3<double> gamma = christoffel_at(A, p);
        double nj = 0.0;
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k)
                for (int j = 0; j < d; ++j) {
                    double v = 0.0;  // (nabla_i J)^k_j, J constant in the chart
                    for (int s = 0; s < d; ++s)
                        v += gamma(k, i, s) * J(s, j) - gamma(s, i, j) * J(k, s);
                    nj = std::max(nj, std::fabs(v));
                }
        worst["nabla_J"] = std::max(worst["nabla_J"], nj);

        CurvatureData cur = curvature_at(A, p);
        worst["riemann_antisym"] =
            std::max({worst["riemann_antisym"], cur.antisym_12, cur.antisym_34});
        worst["riemann_pair_swap"] = std::max(worst["riemann_pair_swap"], cur.pair_swap);
        worst["first_bianchi"] = std::max(worst["first_bianchi"], cur.bianchi);

        double jinv = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k)
                    for (int w = 0; w < d; ++w) {
                        double r2 = 0.0;  // R(Je_i, Je_j, e_k, e_w)
                        for (int a = 0; a < d; ++a) {
                            if (J(a, i) == 0.0) continue;
                            for (int b = 0; b < d; ++b) {
                                if (J(b, j) == 0.0) continue;
                                r2 += J(a, i) * J(b, j) * cur.riemann(a, b, k, w);
                            }
                        }
                        jinv = std::max(jinv, std::fabs(r2 - cur.riemann(i, j, k, w)));
                    }
        worst["curvature_J_invariance"] = std::max(worst["curvature_J_invariance"], jinv);
    }
    return worst;
}

}  // namespace kgeom
