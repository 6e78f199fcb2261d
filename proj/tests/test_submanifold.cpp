#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kgeom/submanifold.hpp"

using namespace kgeom;

namespace {

AmbientSpace flat2() { return make_ambient(AmbientKind::Flat, 2); }
AmbientSpace fs2() { return make_ambient(AmbientKind::FubiniStudy, 2); }

Immersion sph3(double r) { return make_builtin("SPH3", r); }
Immersion slant(double theta) { return make_builtin("SLANT", theta); }
Immersion lagr2() { return make_builtin("LAGR2", 0.0); }
Immersion crw() { return make_builtin("CRW", 0.0); }

// random orthogonal mix of the tangent frame (and of the normal frame)
AdaptedFrame remixed_frame(const AdaptedFrame& F, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    auto mix = [&](const std::vector<Vec>& vecs) {
        const int k = static_cast<int>(vecs.size());
        if (k == 0) return vecs;
        std::vector<Vec> coef(k, Vec(k));
        for (auto& row : coef)
            for (double& c : row) c = uni(rng);
        MetricMatrix id(Mat::identity(k));
        coef = gram_schmidt(coef, id);
        std::vector<Vec> out(k, Vec(vecs[0].size(), 0.0));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                kern::axpy(coef[i][j], vecs[j].data(), out[i].data(), out[i].size());
        return out;
    };
    AdaptedFrame G = F;
    G.tangent = mix(F.tangent);
    G.normal = mix(F.normal);
    MetricMatrix gm(G.g);
    MetricMatrix ind(G.induced);
    for (int i = 0; i < G.n(); ++i) {
        Vec rhs(G.n());
        for (int a = 0; a < G.n(); ++a) rhs[a] = gm.inner(G.coord_tangent[a], G.tangent[i]);
        Vec ci = solve_spd(ind, rhs);
        for (int a = 0; a < G.n(); ++a) G.frame_coeff(i, a) = ci[a];
    }
    return G;
}

}  // namespace

TEST_CASE("make_immersion: builtins and validation errors") {
    CHECK(slant(0.5).n == 2);
    Immersion s2 = sph3(2.0);
    Vec img = map_point(s2, {1.0, 1.2, 0.7});
    CHECK(std::sqrt(kern::sum_sq(img.data(), img.size())) == doctest::Approx(2.0));

    // component count must match the ambient real dimension
    CHECK_THROWS_WITH_AS(make_expr_immersion(flat2(), {"u", "v"}, {"u", "v"},
                                             Box{{{-1, 1}, {-1, 1}}}),
                         doctest::Contains("components"), Error);
    // rank-deficient Jacobian
    CHECK_THROWS_WITH_AS(make_expr_immersion(flat2(), {"u", "u", "0", "0"}, {"u", "v"},
                                             Box{{{-1, 1}, {-1, 1}}}),
                         doctest::Contains("rank"), Error);
    // invariant complex line from expressions
    Immersion line =
        make_expr_immersion(flat2(), {"u", "v", "0", "0"}, {"u", "v"}, Box{{{-1, 1}, {-1, 1}}});
    CHECK(line.n == 2);
}

TEST_CASE("induced metric oracles") {
    // slant planes have orthonormal spanning vectors
    MetricMatrix g1 = induced_metric_at(slant(0.7), {0.3, -0.9});
    CHECK(g1(0, 0) == doctest::Approx(1.0));
    CHECK(g1(1, 1) == doctest::Approx(1.0));
    CHECK(std::fabs(g1(0, 1)) <= 1e-15);

    // CRW: diag(1,1,|z|^2), so the identity at z = 1
    MetricMatrix g2 = induced_metric_at(crw(), {1.0, 0.0, 0.8});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(g2(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));
    MetricMatrix g3 = induced_metric_at(crw(), {1.2, -0.4, 0.5});
    CHECK(g3(2, 2) == doctest::Approx(1.2 * 1.2 + 0.4 * 0.4));

    // round sphere chart: det = r^6 (sin^2 u sin v)^2
    double r = 2.0, uu = 1.1, vv = 0.8;
    MetricMatrix g4 = induced_metric_at(sph3(r), {uu, vv, 2.0});
    double det = g4(0, 0) * (g4(1, 1) * g4(2, 2) - g4(1, 2) * g4(2, 1)) -
                 g4(0, 1) * (g4(1, 0) * g4(2, 2) - g4(1, 2) * g4(2, 0)) +
                 g4(0, 2) * (g4(1, 0) * g4(2, 1) - g4(1, 1) * g4(2, 0));
    double chart = std::sin(uu) * std::sin(uu) * std::sin(vv);
    CHECK(det == doctest::Approx(std::pow(r, 6.0) * chart * chart).epsilon(1e-10));
}

TEST_CASE("adapted frames") {
    AdaptedFrame f1 = adapted_frame_at(slant(0.7), {0.1, 0.4});
    CHECK(f1.orthonormality_residual <= 1e-12);
    CHECK(f1.tangent[0] == Vec{1, 0, 0, 0});
    CHECK(f1.tangent[1][1] == doctest::Approx(std::cos(0.7)));
    CHECK(f1.tangent[1][2] == doctest::Approx(std::sin(0.7)));
    CHECK(f1.normal.size() == 2);

    // unit sphere: the normal is radial up to sign
    Vec u{1.0, 1.2, 0.7};
    AdaptedFrame f2 = adapted_frame_at(sph3(1.0), u);
    REQUIRE(f2.normal.size() == 1);
    Vec radial = map_point(sph3(1.0), u);
    double dot = kern::dot(f2.normal[0].data(), radial.data(), 4);
    CHECK(std::fabs(dot) == doctest::Approx(1.0).epsilon(1e-10));

    // Lagrangian plane: normals span J(tangent)
    AdaptedFrame f3 = adapted_frame_at(lagr2(), {0.2, 0.5});
    MetricMatrix gm(f3.g);
    for (const Vec& t : f3.tangent) {
        Vec jt = matvec(f3.J, t);
        CHECK(gm.norm(f3.project_tangent(jt)) <= 1e-9);
    }
}

TEST_CASE("extrinsic data: slant planes are totally geodesic with |T|^2 = 2cos^2(theta)") {
    for (double theta : {0.3, 0.7, 1.2}) {
        ExtrinsicData X = extrinsic_data_at(slant(theta), {0.4, -1.1});
        CHECK(X.omega_norm_sq <= 1e-28);
        CHECK(X.h_norm <= 1e-14);
        CHECK(X.t_norm_sq == doctest::Approx(2.0 * std::cos(theta) * std::cos(theta)).epsilon(1e-10));
        CHECK(std::fabs(X.t_matrix(0, 1)) == doctest::Approx(std::cos(theta)));
        CHECK(X.t_matrix(0, 0) == doctest::Approx(0.0));
        CHECK(X.omega_symmetry <= 1e-14);
        CHECK(X.duality_residual <= 1e-14);
        CHECK(X.t_antisymmetry <= 1e-14);
    }
}

TEST_CASE("extrinsic data: round spheres") {
    for (double r : {1.0, 2.0}) {
        ExtrinsicData X = extrinsic_data_at(sph3(r), {1.0, 1.2, 0.7});
        CHECK(X.h_norm == doctest::Approx(1.0 / r).epsilon(1e-6));
        CHECK(X.omega_norm_sq == doctest::Approx(3.0 / (r * r)).epsilon(1e-5));
        // shape operator of the single normal is +-(1/r) I
        REQUIRE(X.shape.size() == 1);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double want = i == j ? 1.0 / r : 0.0;
                CHECK(std::fabs(std::fabs(X.shape[0](i, j)) - want) <= 1e-9);
            }
    }
}

TEST_CASE("extrinsic data: invariant complex line has |T|^2 = 2 and F = 0") {
    Immersion line =
        make_expr_immersion(flat2(), {"u", "v", "0", "0"}, {"u", "v"}, Box{{{-1, 1}, {-1, 1}}});
    ExtrinsicData X = extrinsic_data_at(line, {0.3, 0.4});
    CHECK(X.t_norm_sq == doctest::Approx(2.0));
    MetricMatrix gm(X.frame.g);
    for (const Vec& f : X.f_vectors) CHECK(gm.norm(f) <= 1e-12);
}

TEST_CASE("classification") {
    std::vector<Vec> pts = {{0.2, 0.3}, {-0.5, 0.8}};
    Immersion line =
        make_expr_immersion(flat2(), {"u", "v", "0", "0"}, {"u", "v"}, Box{{{-1, 1}, {-1, 1}}});
    CHECK(classify(line, pts, 16, 1).cls == SubmanifoldClass::Invariant);
    CHECK(classify(lagr2(), pts, 16, 2).cls == SubmanifoldClass::AntiInvariant);

    for (double theta : {0.3, 0.7, 1.2}) {
        Classification c = classify(slant(theta), pts, 16, 3);
        CHECK(c.cls == SubmanifoldClass::Slant);
        CHECK(c.theta == doctest::Approx(theta).epsilon(1e-7));
    }

    Classification cr = classify(crw(), {{1.0, 0.2, 0.6}}, 16, 4);
    CHECK(cr.cls == SubmanifoldClass::CR);
    CHECK_THROWS_AS(classify(crw(), pts, 4, 5), Error);  // k >= 8
}

TEST_CASE("intrinsic curvature oracles") {
    // flat planes
    IntrinsicCurvature flat = intrinsic_curvature_at(slant(0.7), {0.1, 0.2});
    CHECK(kern::max_abs(flat.riemann.a.data(), flat.riemann.a.size()) <= 1e-10);
    CHECK(std::fabs(flat.rho_pairs) <= 1e-10);

    // round sphere: K = 1/r^2 on every plane, rho = 3/r^2
    for (double r : {1.0, 2.0}) {
        Immersion s = sph3(r);
        Vec u{1.0, 1.2, 0.7};
        IntrinsicCurvature ic = intrinsic_curvature_at(s, u);
        AdaptedFrame F = adapted_frame_at(s, u);
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                Vec xc(3, 0.0), yc(3, 0.0);
                for (int a = 0; a < 3; ++a) {
                    xc[a] = F.frame_coeff(i, a);
                    yc[a] = F.frame_coeff(j, a);
                }
                CHECK(intrinsic_sectional(ic, F.induced, xc, yc) ==
                      doctest::Approx(1.0 / (r * r)).epsilon(1e-4));
            }
        CHECK(ic.rho_pairs == doctest::Approx(3.0 / (r * r)).epsilon(1e-3));
    }

    // totally geodesic complex line in FS2 carries the ambient holomorphic curvature
    Immersion cline = make_builtin("CLINE", 0.0, fs2());
    IntrinsicCurvature ic = intrinsic_curvature_at(cline, {0.3, -0.2});
    AdaptedFrame F = adapted_frame_at(cline, {0.3, -0.2});
    Vec xc(2, 0.0), yc(2, 0.0);
    for (int a = 0; a < 2; ++a) {
        xc[a] = F.frame_coeff(0, a);
        yc[a] = F.frame_coeff(1, a);
    }
    CHECK(intrinsic_sectional(ic, F.induced, xc, yc) == doctest::Approx(4.0).epsilon(1e-4));
    CHECK(ic.rho_pairs == doctest::Approx(4.0).epsilon(1e-4));
}

TEST_CASE("gauss residual: totally geodesic planes and the sphere decomposition") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> gauss(0.0, 1.0);
    {
        Immersion s = slant(0.7);
        Vec u{0.4, 0.2};
        AdaptedFrame F = adapted_frame_at(s, u);
        for (int rep = 0; rep < 5; ++rep) {
            auto rnd = [&] {
                Vec v(4, 0.0);
                for (int i = 0; i < 2; ++i)
                    kern::axpy(gauss(rng), F.tangent[i].data(), v.data(), v.size());
                return v;
            };
            CHECK(gauss_residual_at(s, u, rnd(), rnd(), rnd(), rnd()) <= 1e-10);
        }
    }
    {
        // K = R_bar + (omega decomposition): 1 = 0 + 1 on the unit sphere
        Immersion s = sph3(1.0);
        Vec u{1.0, 1.2, 0.7};
        AdaptedFrame F = adapted_frame_at(s, u);
        CHECK(gauss_residual_at(s, u, F.tangent[0], F.tangent[1], F.tangent[1], F.tangent[0]) <=
              1e-4);
        ExtrinsicData X = extrinsic_data_at(s, u, F);
        IntrinsicCurvature ic = intrinsic_curvature_at(s, u);
        Vec xc(3, 0.0), yc(3, 0.0);
        for (int a = 0; a < 3; ++a) {
            xc[a] = F.frame_coeff(0, a);
            yc[a] = F.frame_coeff(1, a);
        }
        double k = intrinsic_sectional(ic, F.induced, xc, yc);
        MetricMatrix gm(F.g);
        double om_term =
            gm.inner(X.omega[0][0], X.omega[1][1]) - gm.inner(X.omega[0][1], X.omega[0][1]);
        CHECK(k == doctest::Approx(1.0).epsilon(1e-4));
        CHECK(om_term == doctest::Approx(1.0).epsilon(1e-10));  // 1 = 0 + 1
    }
    // non-tangent input is rejected
    Immersion s = sph3(1.0);
    Vec u{1.0, 1.2, 0.7};
    Vec radial = map_point(s, u);
    CHECK_THROWS_WITH_AS(gauss_residual_at(s, u, radial, radial, radial, radial),
                         doctest::Contains("not tangent"), Error);
}

TEST_CASE("gauss and codazzi residuals across the fixture suite") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> gauss(0.0, 1.0);
    struct Case {
        Immersion s;
        Vec u;
        double gauss_tol;
        double codazzi_tol;
    };
    std::vector<Case> cases;
    cases.push_back({sph3(1.0), {1.0, 1.2, 0.7}, 1e-4, 1e-3});
    cases.push_back({slant(0.7), {0.3, -0.4}, 1e-10, 1e-10});
    cases.push_back({lagr2(), {0.5, 0.2}, 1e-10, 1e-10});
    cases.push_back({crw(), {1.0, 0.2, 0.6}, 1e-4, 1e-3});
    cases.push_back({crw(), {1.7, -0.3, 0.9}, 1e-4, 1e-3});
    cases.push_back({make_builtin("CLINE", 0.0, fs2()), {0.3, -0.2}, 1e-4, 1e-3});
    for (const Case& c : cases) {
        AdaptedFrame F = adapted_frame_at(c.s, c.u);
        auto rnd = [&] {
            Vec v(c.s.ambient.dim(), 0.0);
            for (int i = 0; i < F.n(); ++i)
                kern::axpy(gauss(rng), F.tangent[i].data(), v.data(), v.size());
            return v;
        };
        for (int rep = 0; rep < 5; ++rep) {
            INFO(c.s.name);
            CHECK(gauss_residual_at(c.s, c.u, rnd(), rnd(), rnd(), rnd()) <= c.gauss_tol);
            CHECK(codazzi_residual_at(c.s, c.u, rnd(), rnd(), rnd()) <= c.codazzi_tol);
        }
    }
}

TEST_CASE("frame independence of the reported invariants") {
    struct Case {
        Immersion s;
        Vec u;
    };
    std::vector<Case> cases;
    cases.push_back({sph3(1.0), {1.0, 1.2, 0.7}});
    cases.push_back({crw(), {1.1, 0.3, 0.8}});
    cases.push_back({slant(0.9), {0.2, 0.2}});
    for (const Case& c : cases) {
        AdaptedFrame F = adapted_frame_at(c.s, c.u);
        ExtrinsicData base = extrinsic_data_at(c.s, c.u, F);
        for (unsigned long long seed : {101ULL, 202ULL}) {
            ExtrinsicData mixed = extrinsic_data_at(c.s, c.u, remixed_frame(F, seed));
            INFO(c.s.name);
            CHECK(std::fabs(mixed.h_norm - base.h_norm) <= 1e-7);
            CHECK(std::fabs(mixed.omega_norm_sq - base.omega_norm_sq) <= 1e-7);
            CHECK(std::fabs(mixed.t_norm_sq - base.t_norm_sq) <= 1e-7);
        }
    }
}

TEST_CASE("extrinsic invariants hold at sampled points of every builtin") {
    struct Case {
        Immersion s;
        std::vector<Vec> pts;
    };
    std::vector<Case> cases;
    cases.push_back({sph3(1.5), {{0.8, 1.0, 0.5}, {1.4, 2.0, 3.0}}});
    cases.push_back({slant(0.4), {{0.0, 0.0}, {1.5, -1.5}}});
    cases.push_back({lagr2(), {{0.3, 0.9}}});
    cases.push_back({crw(), {{0.7, 0.2, 0.4}, {2.0, -0.4, 1.0}}});
    cases.push_back({make_builtin("CLINE", 0.0, fs2()), {{0.1, 0.6}, {-0.4, 0.3}}});
    for (const Case& c : cases) {
        for (const Vec& u : c.pts) {
            ExtrinsicData X = extrinsic_data_at(c.s, u);
            INFO(c.s.name);
            CHECK(X.omega_symmetry <= 1e-8);
            CHECK(X.duality_residual <= 1e-9);
            CHECK(X.t_antisymmetry <= 1e-9);
            CHECK(X.t_norm_sq >= -1e-8);
            CHECK(X.t_norm_sq <= c.s.n + 1e-8);
            CHECK(X.frame.orthonormality_residual <= 1e-8);
        }
    }
}

TEST_CASE("CRW intrinsic scalar curvature matches the curvature decomposition") {
    Immersion s = crw();
    Vec u{1.0, 0.0, 0.6};  // z = 1
    IntrinsicCurvature ic = intrinsic_curvature_at(s, u);
    AdaptedFrame F = adapted_frame_at(s, u);
    ExtrinsicData X = extrinsic_data_at(s, u, F);
    MetricMatrix gm(F.g);
    // flat ambient: rho = sum_{i<j} [ g(w_ii,w_jj) - |w_ij|^2 ]
    double rho_gauss = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            rho_gauss +=
                gm.inner(X.omega[i][i], X.omega[j][j]) - gm.inner(X.omega[i][j], X.omega[i][j]);
    CHECK(ic.rho_pairs == doctest::Approx(rho_gauss).epsilon(1e-4));
    CHECK(rho_gauss == doctest::Approx(-1.0).epsilon(1e-10));  // closed form at z = 1
}
