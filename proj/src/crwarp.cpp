#include "kgeom/crwarp.hpp"

#include <algorithm>
#include <cmath>

namespace kgeom {

namespace {

Vec frame_to_chart(const AdaptedFrame& frame, const Vec& coeff_in_frame) {
    const int n = frame.n();
    Vec out(n, 0.0);
    for (int k = 0; k < n; ++k)
        for (int a = 0; a < n; ++a) out[a] += coeff_in_frame[k] * frame.frame_coeff(k, a);
    return out;
}

Vec frame_combination(const AdaptedFrame& frame, const Vec& coeff_in_frame) {
    Vec out(frame.phi.size(), 0.0);
    for (int k = 0; k < frame.n(); ++k)
        kern::axpy(coeff_in_frame[k], frame.tangent[k].data(), out.data(), out.size());
    return out;
}

struct OmegaTable {
    std::vector<std::vector<Vec>> coord;
    const AdaptedFrame* frame;

    Vec eval(const Vec& ac, const Vec& bc) const {
        const int n = frame->n();
        Vec out(frame->phi.size(), 0.0);
        for (int a = 0; a < n; ++a) {
            if (ac[a] == 0.0) continue;
            for (int b = 0; b < n; ++b)
                kern::axpy(ac[a] * bc[b], coord[a][b].data(), out.data(), out.size());
        }
        return out;
    }
};

// ambient covariant derivative of the frozen-coefficient field B along A
Vec ambient_nabla(const AdaptedFrame& frame, const Ten3<double>& gamma_amb,
                  const std::vector<std::vector<Vec>>& hess, const Vec& ac, const Vec& bc) {
    const int n = frame.n(), d = static_cast<int>(frame.phi.size());
    Vec out(d, 0.0);
    for (int a = 0; a < n; ++a) {
        if (ac[a] == 0.0) continue;
        for (int b = 0; b < n; ++b) {
            if (bc[b] == 0.0) continue;
            kern::axpy(ac[a] * bc[b], hess[a][b].data(), out.data(), out.size());
        }
    }
    Vec corr = christoffel_apply(gamma_amb, frame.push(ac), frame.push(bc));
    for (int k = 0; k < d; ++k) out[k] += corr[k];
    return out;
}

double extract_xlogf(const MetricMatrix& induced, const Ten3<double>& gamma_int, const Vec& xc,
                     const Vec& zc) {
    const int n = gamma_int.d;
    Vec nxz(n, 0.0);
    for (int c = 0; c < n; ++c) {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) s += xc[a] * zc[b] * gamma_int(c, a, b);
        nxz[c] = s;
    }
    return induced.inner(nxz, zc) / induced.inner(zc, zc);
}

Vec project_onto(const std::vector<Vec>& frame_vecs, const MetricMatrix& g, const Vec& v) {
    Vec out(v.size(), 0.0);
    for (const Vec& q : frame_vecs) kern::axpy(g.inner(v, q), q.data(), out.data(), out.size());
    return out;
}

}  // namespace

DistributionSplit split_distributions_at(const Immersion& S, const Vec& u) {
    ExtrinsicData X = extrinsic_data_at(S, u);
    DistributionSplit out;
    out.frame = X.frame;
    const int n = X.frame.n();
    MetricMatrix gm(X.frame.g);

    Mat ttt = matmul(transpose(X.t_matrix), X.t_matrix);
    EigenSym es = eigen_sym(ttt);
    out.tt_spectrum = es.values;
    std::vector<int> d_cols, dp_cols;
    for (int k = 0; k < n; ++k) {
        if (std::fabs(es.values[k]) <= 1e-6)
            dp_cols.push_back(k);
        else if (std::fabs(es.values[k] - 1.0) <= 1e-6)
            d_cols.push_back(k);
        else {
            std::string spec;
            for (double ev : es.values) spec += std::to_string(ev) + " ";
            throw Error("split_distributions: tangent space is not CR, T^T T spectrum: " + spec);
        }
    }
    if (d_cols.size() % 2 != 0)
        throw Error("split_distributions: J-invariant eigenspace has odd dimension " +
                    std::to_string(d_cols.size()));
    out.p = static_cast<int>(d_cols.size()) / 2;
    out.q = static_cast<int>(dp_cols.size());
    out.degenerate = out.p == 0 || out.q == 0;

    auto build = [&](const std::vector<int>& cols, std::vector<Vec>& amb, std::vector<Vec>& chart) {
        for (int col : cols) {
            Vec coeff(n, 0.0);
            for (int k = 0; k < n; ++k) coeff[k] = es.vectors(k, col);
            amb.push_back(frame_combination(out.frame, coeff));
            chart.push_back(frame_to_chart(out.frame, coeff));
        }
    };
    build(d_cols, out.d_frame, out.d_chart);
    build(dp_cols, out.dperp_frame, out.dperp_chart);

    for (const Vec& x : out.d_frame) {
        Vec jx = matvec(out.frame.J, x);
        out.j_invariance_residual =
            std::max(out.j_invariance_residual, gm.norm(out.frame.project_normal(jx)));
    }
    for (const Vec& z : out.dperp_frame) {
        Vec jz = matvec(out.frame.J, z);
        out.jdperp_normal_residual =
            std::max(out.jdperp_normal_residual, gm.norm(out.frame.project_tangent(jz)));
        Vec nu = out.frame.project_normal(jz);
        double nrm = gm.norm(nu);
        for (double& c : nu) c /= nrm;
        out.jdperp_frame.push_back(std::move(nu));
    }
    if (!out.jdperp_frame.empty() || out.frame.codim() > 0) {
        std::vector<Vec> span = out.frame.tangent;
        for (const Vec& v : out.jdperp_frame) span.push_back(v);
        out.nu_frame = orthonormal_complement(span, gm);
    }
    return out;
}

PQResult pq_tensors_at(const Immersion& S, const Vec& u, const Vec& x, const Vec& y) {
    AdaptedFrame frame = adapted_frame_at(S, u);
    for (const Vec* v : {&x, &y})
        if (frame.tangency_residual(*v) > 1e-8) throw Error("pq_tensors: input vector is not tangent");
    Vec xc = frame.chart_coeff(x), yc = frame.chart_coeff(y);
    const int n = frame.n(), d = static_cast<int>(frame.phi.size());
    Ten3<double> gamma = christoffel_at(S.ambient, frame.phi);
    const Mat& J = frame.J;

    // (nabla_X J)Y = nabla_X(JY) - J nabla_X Y; the second-derivative terms
    // cancel because J is constant in the chart, leaving the Gamma commutator.
    Vec diff(d, 0.0);
    for (int b = 0; b < n; ++b) {
        if (xc[b] == 0.0) continue;
        for (int a = 0; a < n; ++a) {
            if (yc[a] == 0.0) continue;
            Vec jpa = matvec(J, frame.coord_tangent[a]);
            Vec t1 = christoffel_apply(gamma, frame.coord_tangent[b], jpa);
            Vec t2 = matvec(J, christoffel_apply(gamma, frame.coord_tangent[b], frame.coord_tangent[a]));
            for (int k = 0; k < d; ++k) diff[k] += xc[b] * yc[a] * (t1[k] - t2[k]);
        }
    }
    PQResult r;
    r.p_part = frame.project_tangent(diff);
    r.q_part = diff;
    for (int k = 0; k < d; ++k) r.q_part[k] -= r.p_part[k];
    MetricMatrix gm(frame.g);
    r.p_norm = gm.norm(r.p_part);
    r.q_norm = gm.norm(r.q_part);
    return r;
}

WarpCheck warping_check_at(const Immersion& S, const Vec& u) {
    DistributionSplit split = split_distributions_at(S, u);
    if (split.q == 0) throw Error("warping_check: q = 0, no totally real distribution");
    if (split.p == 0) throw Error("warping_check: p = 0, no holomorphic distribution");
    const AdaptedFrame& frame = split.frame;
    MetricMatrix gm(frame.g);
    MetricMatrix induced(frame.induced);
    Ten3<double> gamma_int = detail::induced_christoffel_tpl<double>(S, u);
    Ten3<double> gamma_amb = christoffel_at(S.ambient, frame.phi);
    auto hess = hessian_at(S, u);

    WarpCheck out;
    const int dim_d = 2 * split.p;
    out.x_logf.assign(dim_d, 0.0);
    for (int i = 0; i < dim_d; ++i) {
        std::vector<double> per_z;
        for (int a = 0; a < split.q; ++a) {
            double xl = extract_xlogf(induced, gamma_int, split.d_chart[i], split.dperp_chart[a]);
            per_z.push_back(xl);
            Vec nabla = ambient_nabla(frame, gamma_amb, hess, split.d_chart[i], split.dperp_chart[a]);
            Vec tang = frame.project_tangent(nabla);
            kern::axpy(-xl, split.dperp_frame[a].data(), tang.data(), tang.size());
            out.max_residual = std::max(out.max_residual, gm.norm(tang));
        }
        double mean = 0.0;
        for (double v : per_z) mean += v;
        mean /= static_cast<double>(per_z.size());
        out.x_logf[i] = mean;
        for (double v : per_z)
            out.extraction_spread = std::max(out.extraction_spread, std::fabs(v - mean));
        out.grad_logf_sq += mean * mean;
    }
    if (S.has_warp()) {
        Vec dlogf = S.warp_dlogf(u);
        for (int i = 0; i < dim_d; ++i) {
            double analytic = kern::dot(split.d_chart[i].data(), dlogf.data(), dlogf.size());
            out.analytic_residual = std::max(out.analytic_residual, std::fabs(out.x_logf[i] - analytic));
        }
    }
    return out;
}

Lemma2Check lemma2_check_at(const Immersion& S, const Vec& u, const Vec& x, const Vec& z,
                            const Vec& w) {
    DistributionSplit split = split_distributions_at(S, u);
    if (split.degenerate) throw Error("lemma2_check: split is degenerate (p or q vanishes)");
    const AdaptedFrame& frame = split.frame;
    MetricMatrix gm(frame.g);
    auto check_member = [&](const char* nm, const Vec& v, const std::vector<Vec>& space) {
        if (std::fabs(gm.inner(v, v) - 1.0) > 1e-6)
            throw Error(std::string("lemma2_check: ") + nm + " is not unit");
        Vec proj = project_onto(space, gm, v);
        Vec resid = v;
        for (std::size_t k = 0; k < resid.size(); ++k) resid[k] -= proj[k];
        if (gm.norm(resid) > 1e-6)
            throw Error(std::string("lemma2_check: ") + nm + " is outside its distribution (residual " +
                        std::to_string(gm.norm(resid)) + ")");
    };
    check_member("X", x, split.d_frame);
    check_member("Z", z, split.dperp_frame);
    check_member("W", w, split.dperp_frame);

    MetricMatrix induced(frame.induced);
    Ten3<double> gamma_int = detail::induced_christoffel_tpl<double>(S, u);
    Vec xc = frame.chart_coeff(x), zc = frame.chart_coeff(z);
    double xlogf = extract_xlogf(induced, gamma_int, xc, zc);

    OmegaTable om{coordinate_omega(S, u, frame), &frame};
    Vec jx = matvec(frame.J, x);
    Vec jz = matvec(frame.J, z);
    Vec jxc = frame.chart_coeff(jx);
    Vec om_jx_z = om.eval(jxc, zc);
    Vec om_x_z = om.eval(xc, zc);

    PQResult p_z_jx = pq_tensors_at(S, u, z, jx);
    PQResult q_z_x = pq_tensors_at(S, u, z, x);

    Lemma2Check out;
    out.p_norm = p_z_jx.p_norm;
    out.q_norm = q_z_x.q_norm;

    // identity 1
    Vec lhs1 = project_onto(split.jdperp_frame, gm, om_jx_z);
    Vec rhs1 = matvec(frame.J, p_z_jx.p_part);
    kern::axpy(xlogf, jz.data(), rhs1.data(), rhs1.size());
    Vec diff1 = lhs1;
    for (std::size_t k = 0; k < diff1.size(); ++k) diff1[k] -= rhs1[k];
    out.identity1 = gm.norm(diff1);

    // identity 2
    Vec jw = matvec(frame.J, w);
    out.identity2 = std::fabs(gm.inner(p_z_jx.p_part, w) - gm.inner(q_z_x.q_part, jw));

    // identity 3
    Vec om_nu = project_onto(split.nu_frame, gm, om_x_z);
    Vec j_om_nu = matvec(frame.J, om_nu);
    double lhs3 = gm.inner(om_jx_z, matvec(frame.J, om_x_z)) - gm.inner(om_nu, om_nu);
    double rhs3 = gm.inner(q_z_x.q_part, j_om_nu);
    out.identity3 = std::fabs(lhs3 - rhs3);
    return out;
}

Thm3Result thm3_margin_at(const Immersion& S, const Vec& u) {
    DistributionSplit split = split_distributions_at(S, u);
    if (split.q == 0) throw Error("thm3_margin: q = 0");
    if (split.p == 0) throw Error("thm3_margin: p = 0");
    const AdaptedFrame& frame = split.frame;
    MetricMatrix gm(frame.g);

    ExtrinsicData X = extrinsic_data_at(S, u, frame);
    WarpCheck warp = warping_check_at(S, u);

    Thm3Result out;
    out.omega_norm_sq = X.omega_norm_sq;
    for (int a = 0; a < split.q; ++a)
        for (int i = 0; i < 2 * split.p; ++i) {
            PQResult pq = pq_tensors_at(S, u, split.dperp_frame[a], split.d_frame[i]);
            out.p_norm_sq += pq.p_norm * pq.p_norm;
            Vec in_d = project_onto(split.d_frame, gm, pq.p_part);
            Vec resid = pq.p_part;
            for (std::size_t k = 0; k < resid.size(); ++k) resid[k] -= in_d[k];
            out.hypothesis_residual = std::max(out.hypothesis_residual, gm.norm(resid));
        }
    out.q_grad_sq = split.q * warp.grad_logf_sq;
    out.margin = out.omega_norm_sq - out.p_norm_sq - out.q_grad_sq;
    return out;
}

DistributionScalars distribution_scalars_at(const Immersion& S, const Vec& u) {
    DistributionSplit split = split_distributions_at(S, u);
    IntrinsicCurvature ic = intrinsic_curvature_at(S, u);
    DistributionScalars out;
    const Mat& G = split.frame.induced;
    auto K = [&](const Vec& a, const Vec& b) { return intrinsic_sectional(ic, G, a, b); };
    for (std::size_t i = 0; i < split.d_chart.size(); ++i)
        for (std::size_t j = i + 1; j < split.d_chart.size(); ++j)
            out.rho_d += K(split.d_chart[i], split.d_chart[j]);
    if (split.q >= 2)
        for (std::size_t a = 0; a < split.dperp_chart.size(); ++a)
            for (std::size_t b = a + 1; b < split.dperp_chart.size(); ++b)
                out.rho_dperp += K(split.dperp_chart[a], split.dperp_chart[b]);
    for (const Vec& dc : split.d_chart)
        for (const Vec& zc : split.dperp_chart) out.rho_mixed += K(dc, zc);
    return out;
}

Thm4Report thm4_dichotomy_report(const Immersion& S, const std::vector<Vec>& sample) {
    Thm4Report out;
    out.n = S.n;
    bool first = true;
    for (const Vec& u : sample) {
        DistributionSplit split = split_distributions_at(S, u);
        if (first) {
            out.p = split.p;
            out.q = split.q;
        } else if (split.p != out.p || split.q != out.q) {
            out.applicable = false;
            out.note = "distribution dimensions vary over the sample";
            return out;
        }
        if (split.degenerate) {
            out.applicable = false;
            out.note = "degenerate split (p or q vanishes); the dichotomy does not apply";
            return out;
        }
        IntrinsicCurvature ic = intrinsic_curvature_at(S, u);
        double grad = std::sqrt(warping_check_at(S, u).grad_logf_sq);
        if (first) {
            out.rho_min = out.rho_max = ic.rho_pairs;
            out.grad_min = out.grad_max = grad;
            first = false;
        } else {
            out.rho_min = std::min(out.rho_min, ic.rho_pairs);
            out.rho_max = std::max(out.rho_max, ic.rho_pairs);
            out.grad_min = std::min(out.grad_min, grad);
            out.grad_max = std::max(out.grad_max, grad);
        }
    }
    out.cond_pq = out.n + 1 <= out.p * out.q;
    out.cond_q2 = 2 * (out.n + 1) <= out.q * out.q;
    out.note =
        "pointwise dimension/sign report only; compactness and the shape-operator "
        "commutation hypothesis are not verified here";
    return out;
}

}  // namespace kgeom
