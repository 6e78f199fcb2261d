#include "kgeom/submanifold.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace kgeom {

Vec AdaptedFrame::chart_coeff(const Vec& x_ambient) const {
    const int nn = n();
    Vec rhs(nn, 0.0);
    MetricMatrix gm(g);
    for (int a = 0; a < nn; ++a) rhs[a] = gm.inner(coord_tangent[a], x_ambient);
    return solve_spd(MetricMatrix(induced), rhs);
}

Vec AdaptedFrame::push(const Vec& x_chart) const {
    Vec out(phi.size(), 0.0);
    for (int a = 0; a < n(); ++a) kern::axpy(x_chart[a], coord_tangent[a].data(), out.data(), out.size());
    return out;
}

Vec AdaptedFrame::project_tangent(const Vec& v) const { return push(chart_coeff(v)); }

Vec AdaptedFrame::project_normal(const Vec& v) const {
    Vec t = project_tangent(v);
    Vec out = v;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] -= t[k];
    return out;
}

double AdaptedFrame::tangency_residual(const Vec& v) const {
    Vec nrm = project_normal(v);
    return MetricMatrix(g).norm(nrm);
}

MetricMatrix induced_metric_at(const Immersion& S, const Vec& u) {
    SqMat<double> G = detail::induced_metric_tpl<double>(S, u);
    EigenSym es = eigen_sym(G);
    if (es.values.front() < 1e-16)
        throw Error("induced_metric: rank deficiency (sigma_min " +
                    std::to_string(std::sqrt(std::max(0.0, es.values.front()))) + ")");
    return MetricMatrix(G);
}

AdaptedFrame adapted_frame_at(const Immersion& S, const Vec& u) {
    AdaptedFrame F;
    F.u = u;
    F.phi = map_point(S, u);
    F.coord_tangent = jacobian_at(S, u);
    F.g = metric_at(S.ambient, F.phi);
    F.J = complex_structure(S.ambient);
    MetricMatrix gm(F.g);
    F.tangent = gram_schmidt(F.coord_tangent, gm);
    F.normal = orthonormal_complement(F.tangent, gm);
    for (Vec& nu : F.normal)
        for (double c : nu) {
            if (std::fabs(c) > 1e-9) {
                if (c < 0.0)
                    for (double& x : nu) x = -x;
                break;
            }
        }
    F.induced = detail::induced_metric_tpl<double>(S, u);

    const int n = F.n();
    F.frame_coeff = Mat(n);
    {
        MetricMatrix Gm(F.induced);
        for (int i = 0; i < n; ++i) {
            Vec rhs(n);
            for (int a = 0; a < n; ++a) rhs[a] = gm.inner(F.coord_tangent[a], F.tangent[i]);
            Vec ci = solve_spd(Gm, rhs);
            for (int a = 0; a < n; ++a) F.frame_coeff(i, a) = ci[a];
        }
    }

    std::vector<const Vec*> all;
    for (const Vec& t : F.tangent) all.push_back(&t);
    for (const Vec& nu : F.normal) all.push_back(&nu);
    double worst = 0.0;
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double want = i == j ? 1.0 : 0.0;
            worst = std::max(worst, std::fabs(gm.inner(*all[i], *all[j]) - want));
        }
    F.orthonormality_residual = worst;
    return F;
}

std::vector<std::vector<Vec>> coordinate_omega(const Immersion& S, const Vec& u,
                                               const AdaptedFrame& frame) {
    const int n = S.n;
    auto hess = hessian_at(S, u);
    Ten3<double> gamma = christoffel_at(S.ambient, frame.phi);
    std::vector<std::vector<Vec>> om(n, std::vector<Vec>(n));
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            Vec cov = hess[a][b];
            Vec corr = christoffel_apply(gamma, frame.coord_tangent[a], frame.coord_tangent[b]);
            for (std::size_t k = 0; k < cov.size(); ++k) cov[k] += corr[k];
            om[a][b] = frame.project_normal(cov);
            om[b][a] = om[a][b];
        }
    return om;
}

ExtrinsicData extrinsic_data_at(const Immersion& S, const Vec& u) {
    return extrinsic_data_at(S, u, adapted_frame_at(S, u));
}

ExtrinsicData extrinsic_data_at(const Immersion& S, const Vec& u, const AdaptedFrame& frame) {
    ExtrinsicData X;
    X.frame = frame;
    const int n = frame.n(), codim = frame.codim(), d = static_cast<int>(frame.phi.size());
    MetricMatrix gm(frame.g);

    auto coord_om = coordinate_omega(S, u, frame);
    X.omega.assign(n, std::vector<Vec>(n, Vec(d, 0.0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Vec acc(d, 0.0);
            for (int a = 0; a < n; ++a) {
                double ca = frame.frame_coeff(i, a);
                if (ca == 0.0) continue;
                for (int b = 0; b < n; ++b) {
                    double w = ca * frame.frame_coeff(j, b);
                    if (w == 0.0) continue;
                    kern::axpy(w, coord_om[a][b].data(), acc.data(), acc.size());
                }
            }
            X.omega[i][j] = std::move(acc);
        }

    X.mean_curvature.assign(d, 0.0);
    for (int i = 0; i < n; ++i)
        kern::axpy(1.0 / n, X.omega[i][i].data(), X.mean_curvature.data(), X.mean_curvature.size());
    X.h_norm = gm.norm(X.mean_curvature);

    X.shape.assign(codim, Mat(n));
    for (int r = 0; r < codim; ++r)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) X.shape[r](i, j) = gm.inner(X.omega[i][j], frame.normal[r]);

    X.omega_norm_sq = 0.0;
    for (int r = 0; r < codim; ++r) X.omega_norm_sq += kern::sum_sq(X.shape[r].a.data(), X.shape[r].a.size());

    X.t_matrix = Mat(n);
    X.f_vectors.assign(n, Vec(d, 0.0));
    for (int i = 0; i < n; ++i) {
        Vec je = matvec(frame.J, frame.tangent[i]);
        for (int j = 0; j < n; ++j) X.t_matrix(i, j) = gm.inner(je, frame.tangent[j]);
        X.f_vectors[i] = frame.project_normal(je);
    }
    X.t_norm_sq = kern::sum_sq(X.t_matrix.a.data(), X.t_matrix.a.size());

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Vec diff = X.omega[i][j];
            for (int k = 0; k < d; ++k) diff[k] -= X.omega[j][i][k];
            X.omega_symmetry = std::max(X.omega_symmetry, gm.norm(diff));
            X.t_antisymmetry = std::max(X.t_antisymmetry, std::fabs(X.t_matrix(i, j) + X.t_matrix(j, i)));
            for (int r = 0; r < codim; ++r)
                X.duality_residual =
                    std::max(X.duality_residual,
                             std::fabs(gm.inner(X.omega[i][j], frame.normal[r]) - X.shape[r](i, j)));
        }
    return X;
}

std::string to_string(SubmanifoldClass c) {
    switch (c) {
        case SubmanifoldClass::Invariant: return "invariant";
        case SubmanifoldClass::AntiInvariant: return "anti_invariant";
        case SubmanifoldClass::Slant: return "slant";
        case SubmanifoldClass::CR: return "CR";
        case SubmanifoldClass::Generic: return "generic";
    }
    return "?";
}

Classification classify(const Immersion& S, const std::vector<Vec>& points, int k,
                        unsigned long long seed, double tol) {
    if (k < 8) throw Error("classify: need k >= 8 probe vectors");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n = S.n;

    double max_f = 0.0, max_t = 0.0;
    std::vector<double> thetas;
    Classification out;
    for (const Vec& u : points) {
        ExtrinsicData X = extrinsic_data_at(S, u);
        for (int probe = 0; probe < k; ++probe) {
            Vec x(n);
            double nrm = 0.0;
            for (int i = 0; i < n; ++i) {
                x[i] = gauss(rng);
                nrm += x[i] * x[i];
            }
            nrm = std::sqrt(nrm);
            for (double& c : x) c /= nrm;
            Vec tx(n, 0.0);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) tx[j] += X.t_matrix(i, j) * x[i];
            double tn = std::sqrt(kern::sum_sq(tx.data(), tx.size()));
            tn = std::min(tn, 1.0);
            double fn = std::sqrt(std::max(0.0, 1.0 - tn * tn));
            max_t = std::max(max_t, tn);
            max_f = std::max(max_f, fn);
            thetas.push_back(std::acos(tn));
        }
        // spectrum of T^T T (last point retained in the report)
        Mat ttt = matmul(transpose(X.t_matrix), X.t_matrix);
        out.tt_spectrum = eigen_sym(ttt).values;
    }

    double mean = 0.0;
    for (double t : thetas) mean += t;
    mean /= static_cast<double>(thetas.size());
    double var = 0.0;
    for (double t : thetas) var += (t - mean) * (t - mean);
    out.theta_spread = std::sqrt(var / static_cast<double>(thetas.size()));

    if (max_f <= tol) {
        out.cls = SubmanifoldClass::Invariant;
        out.theta = 0.0;
        return out;
    }
    if (max_t <= tol) {
        out.cls = SubmanifoldClass::AntiInvariant;
        out.theta = std::acos(-1.0) / 2.0;
        return out;
    }
    if (out.theta_spread <= tol) {
        out.cls = SubmanifoldClass::Slant;
        out.theta = mean;
        return out;
    }
    bool clustered = true, has_zero = false, has_one = false;
    for (double ev : out.tt_spectrum) {
        if (std::fabs(ev) <= tol)
            has_zero = true;
        else if (std::fabs(ev - 1.0) <= tol)
            has_one = true;
        else
            clustered = false;
    }
    if (clustered && has_zero && has_one) {
        out.cls = SubmanifoldClass::CR;
        return out;
    }
    out.cls = SubmanifoldClass::Generic;
    return out;
}

IntrinsicCurvature intrinsic_curvature_at(const Immersion& S, const Vec& u) {
    const int n = S.n;
    Ten3<double> gamma = detail::induced_christoffel_tpl<double>(S, u);
    std::vector<Ten3<double>> dgamma(n, Ten3<double>(n));
    for (int c = 0; c < n; ++c) {
        double h = 1e-5 * std::max(1.0, std::fabs(u[c]));
        Vec up = u, um = u;
        up[c] += h;
        um[c] -= h;
        Ten3<double> gp = detail::induced_christoffel_tpl<double>(S, up);
        Ten3<double> gm = detail::induced_christoffel_tpl<double>(S, um);
        for (std::size_t t = 0; t < gp.a.size(); ++t) dgamma[c].a[t] = (gp.a[t] - gm.a[t]) / (2.0 * h);
    }
    Mat G = detail::induced_metric_tpl<double>(S, u);
    Mat Ginv = spd_inverse(G);

    IntrinsicCurvature ic;
    ic.riemann = Tensor4(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                Vec upper(n, 0.0);
                for (int l = 0; l < n; ++l) {
                    double v = dgamma[i](l, j, k) - dgamma[j](l, i, k);
                    for (int s = 0; s < n; ++s)
                        v += gamma(l, i, s) * gamma(s, j, k) - gamma(l, j, s) * gamma(s, i, k);
                    upper[l] = v;
                }
                for (int w = 0; w < n; ++w) {
                    double v = 0.0;
                    for (int l = 0; l < n; ++l) v += G(l, w) * upper[l];
                    ic.riemann(i, j, k, w) = v;
                }
            }
    ic.ricci = Mat(n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            double v = 0.0;
            for (int i = 0; i < n; ++i)
                for (int l = 0; l < n; ++l) v += Ginv(i, l) * ic.riemann(i, j, k, l);
            ic.ricci(j, k) = v;
        }
    double tau = 0.0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) tau += Ginv(j, k) * ic.ricci(j, k);
    ic.rho_pairs = 0.5 * tau;
    return ic;
}

double intrinsic_sectional(const IntrinsicCurvature& ic, const Mat& induced, const Vec& xc,
                           const Vec& yc) {
    MetricMatrix G(induced);
    double gxx = G.inner(xc, xc), gyy = G.inner(yc, yc), gxy = G.inner(xc, yc);
    double gram = gxx * gyy - gxy * gxy;
    if (std::fabs(gram) < 1e-14) throw Error("intrinsic_sectional: degenerate plane");
    return ic.riemann.contract(xc, yc, yc, xc) / gram;
}

double gauss_residual_at(const Immersion& S, const Vec& u, const Vec& x, const Vec& y, const Vec& z,
                         const Vec& w) {
    AdaptedFrame F = adapted_frame_at(S, u);
    for (const Vec* v : {&x, &y, &z, &w})
        if (F.tangency_residual(*v) > 1e-8)
            throw Error("gauss_residual: input vector is not tangent (residual " +
                        std::to_string(F.tangency_residual(*v)) + ")");

    CurvatureData amb = curvature_at(S.ambient, F.phi);
    double rbar = amb.riemann.contract(x, y, z, w);

    IntrinsicCurvature ic = intrinsic_curvature_at(S, u);
    Vec xc = F.chart_coeff(x), yc = F.chart_coeff(y), zc = F.chart_coeff(z), wc = F.chart_coeff(w);
    double rint = ic.riemann.contract(xc, yc, zc, wc);

    auto coord_om = coordinate_omega(S, u, F);
    const int n = F.n(), d = static_cast<int>(F.phi.size());
    auto om = [&](const Vec& ac, const Vec& bc) {
        Vec out(d, 0.0);
        for (int a = 0; a < n; ++a) {
            if (ac[a] == 0.0) continue;
            for (int b = 0; b < n; ++b)
                kern::axpy(ac[a] * bc[b], coord_om[a][b].data(), out.data(), out.size());
        }
        return out;
    };
    MetricMatrix gm(F.g);
    double term1 = gm.inner(om(xc, wc), om(yc, zc));
    double term2 = gm.inner(om(xc, zc), om(yc, wc));
    return std::fabs(rbar - rint + term1 - term2);
}

namespace {

// omega(Y,Z) along the chart line u + s*dir for frozen chart coefficients
Vec omega_field(const Immersion& S, const Vec& u, const Vec& yc, const Vec& zc) {
    AdaptedFrame F = adapted_frame_at(S, u);
    auto coord_om = coordinate_omega(S, u, F);
    const int n = F.n(), d = static_cast<int>(F.phi.size());
    Vec out(d, 0.0);
    for (int a = 0; a < n; ++a) {
        if (yc[a] == 0.0) continue;
        for (int b = 0; b < n; ++b)
            kern::axpy(yc[a] * zc[b], coord_om[a][b].data(), out.data(), out.size());
    }
    return out;
}

}  // namespace

double codazzi_residual_at(const Immersion& S, const Vec& u, const Vec& x, const Vec& y,
                           const Vec& z) {
    AdaptedFrame F = adapted_frame_at(S, u);
    for (const Vec* v : {&x, &y, &z})
        if (F.tangency_residual(*v) > 1e-8) throw Error("codazzi_residual: input vector is not tangent");

    Vec xc = F.chart_coeff(x), yc = F.chart_coeff(y), zc = F.chart_coeff(z);
    const int n = F.n(), d = static_cast<int>(F.phi.size());
    Ten3<double> gamma_int = detail::induced_christoffel_tpl<double>(S, u);
    Ten3<double> gamma_amb = christoffel_at(S.ambient, F.phi);
    CurvatureData amb = curvature_at(S.ambient, F.phi);
    Mat ginv = spd_inverse(F.g);
    MetricMatrix gm(F.g);
    auto coord_om = coordinate_omega(S, u, F);
    auto om_chart = [&](const Vec& ac, const Vec& bc) {
        Vec out(d, 0.0);
        for (int a = 0; a < n; ++a) {
            if (ac[a] == 0.0) continue;
            for (int b = 0; b < n; ++b)
                kern::axpy(ac[a] * bc[b], coord_om[a][b].data(), out.data(), out.size());
        }
        return out;
    };
    // intrinsic nabla_A B for frozen chart coefficients
    auto nabla_chart = [&](const Vec& ac, const Vec& bc) {
        Vec out(n, 0.0);
        for (int c = 0; c < n; ++c) {
            double s = 0.0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) s += ac[a] * bc[b] * gamma_int(c, a, b);
            out[c] = s;
        }
        return out;
    };
    double hstep = 1e-5;
    for (double c : u) hstep = std::max(hstep, 1e-5 * std::fabs(c));
    auto term = [&](const Vec& ac, const Vec& bc) {
        // nabla^perp_A omega(B,Z) - omega(nabla_A B, Z) - omega(B, nabla_A Z)
        Vec up(u), um(u);
        for (int i = 0; i < n; ++i) {
            up[i] += hstep * ac[i];
            um[i] -= hstep * ac[i];
        }
        Vec wp = omega_field(S, up, bc, zc);
        Vec wm = omega_field(S, um, bc, zc);
        Vec dW(d, 0.0);
        for (int k = 0; k < d; ++k) dW[k] = (wp[k] - wm[k]) / (2.0 * hstep);
        Vec w0 = om_chart(bc, zc);
        Vec corr = christoffel_apply(gamma_amb, F.push(ac), w0);
        for (int k = 0; k < d; ++k) dW[k] += corr[k];
        Vec t = F.project_normal(dW);
        Vec o1 = om_chart(nabla_chart(ac, bc), zc);
        Vec o2 = om_chart(bc, nabla_chart(ac, zc));
        for (int k = 0; k < d; ++k) t[k] -= o1[k] + o2[k];
        return t;
    };

    // (R_bar(X,Y)Z)^perp: lower three slots, raise the last
    Vec lowered(d, 0.0);
    for (int w = 0; w < d; ++w) {
        Vec ew(d, 0.0);
        ew[w] = 1.0;
        lowered[w] = amb.riemann.contract(x, y, z, ew);
    }
    Vec rxyz = matvec(ginv, lowered);
    Vec lhs = F.project_normal(rxyz);

    Vec tx = term(xc, yc), ty = term(yc, xc);
    Vec res(d, 0.0);
    for (int k = 0; k < d; ++k) res[k] = lhs[k] - (tx[k] - ty[k]);
    return gm.norm(res);
}

}  // namespace kgeom
