#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kgeom/bochner.hpp"

using namespace kgeom;

namespace {

AmbientSpace flat2() { return make_ambient(AmbientKind::Flat, 2); }
AmbientSpace fs2() { return make_ambient(AmbientKind::FubiniStudy, 2); }
AmbientSpace ch2() { return make_ambient(AmbientKind::ComplexHyperbolic, 2); }

std::vector<Vec> ball_points(int d, double rmax, int count, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uni(0.05, 1.0);
    std::vector<Vec> pts;
    for (int t = 0; t < count; ++t) {
        Vec p(d);
        double nrm = 0.0;
        for (double& c : p) {
            c = gauss(rng);
            nrm += c * c;
        }
        nrm = std::sqrt(nrm);
        double r = rmax * uni(rng);
        for (double& c : p) c *= r / nrm;
        pts.push_back(std::move(p));
    }
    return pts;
}

double sample_rmax(const AmbientSpace& A) {
    return A.kind == AmbientKind::ComplexHyperbolic ? 0.8 : 2.0;
}

// unit X, then unit Z orthogonal to both X and JX
std::pair<Vec, Vec> cr_orthogonal_pair(const AmbientSpace& A, const Vec& p, std::mt19937_64& rng) {
    MetricMatrix gm(metric_at(A, p));
    Mat J = complex_structure(A);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec x(A.dim()), z(A.dim());
    for (double& c : x) c = gauss(rng);
    double xn = gm.norm(x);
    for (double& c : x) c /= xn;
    Vec jx = matvec(J, x);
    for (double& c : z) c = gauss(rng);
    kern::axpy(-gm.inner(z, x), x.data(), z.data(), z.size());
    kern::axpy(-gm.inner(z, jx), jx.data(), z.data(), z.size());
    double zn = gm.norm(z);
    for (double& c : z) c /= zn;
    return {x, z};
}

}  // namespace

TEST_CASE("L and M vanish on the flat space") {
    BochnerTensors t = lm_tensors_at(flat2(), {0.5, 1.0, -2.0, 0.0});
    CHECK(max_abs(t.L) == 0.0);
    CHECK(max_abs(t.M) == 0.0);
}

TEST_CASE("FS2: L = g/2 and M(X,JX) = 1/2 (substitution oracle)") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (const Vec& p : ball_points(4, 1.5, 6, 5)) {
        BochnerTensors t = lm_tensors_at(fs2(), p);
        Mat g = metric_at(fs2(), p);
        Mat diff = t.L;
        for (std::size_t k = 0; k < diff.a.size(); ++k) diff.a[k] -= 0.5 * g.a[k];
        CHECK(max_abs(diff) <= 1e-8);

        MetricMatrix gm(g);
        Vec x(4);
        for (double& c : x) c = gauss(rng);
        double xn = gm.norm(x);
        for (double& c : x) c /= xn;
        Vec jx = matvec(t.J, x);
        CHECK(t.m_value(x, jx) == doctest::Approx(0.5).epsilon(1e-6));
    }
    // CH2 analog: L = -g/2
    for (const Vec& p : ball_points(4, 0.7, 4, 7)) {
        BochnerTensors t = lm_tensors_at(ch2(), p);
        Mat g = metric_at(ch2(), p);
        Mat diff = t.L;
        for (std::size_t k = 0; k < diff.a.size(); ++k) diff.a[k] += 0.5 * g.a[k];
        CHECK(max_abs(diff) <= 1e-8);
    }
}

TEST_CASE("reconstruction values on FS2 (substitution oracle)") {
    std::mt19937_64 rng(11);
    for (const Vec& p : ball_points(4, 1.5, 5, 13)) {
        BochnerTensors t = lm_tensors_at(fs2(), p);
        Tensor4 R = reconstruct_curvature(t);
        auto [x, z] = cr_orthogonal_pair(fs2(), p, rng);
        Vec jx = matvec(t.J, x), jz = matvec(t.J, z);
        CHECK(R.contract(x, jx, jx, x) == doctest::Approx(4.0).epsilon(1e-6));
        CHECK(R.contract(x, jx, z, jz) == doctest::Approx(-2.0).epsilon(1e-6));
    }

    Tensor4 zero = reconstruct_curvature(flat2(), {1.0, 0.0, 0.0, 2.0});
    CHECK(kern::max_abs(zero.a.data(), zero.a.size()) == 0.0);
}

TEST_CASE("reconstruction is algebraically symmetric") {
    for (AmbientSpace A : {fs2(), ch2()}) {
        for (const Vec& p : ball_points(4, sample_rmax(A) * 0.9, 4, 17)) {
            Tensor4 R = reconstruct_curvature(A, p);
            const int d = 4;
            double a12 = 0.0, a34 = 0.0, swap = 0.0, bianchi = 0.0;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    for (int k = 0; k < d; ++k)
                        for (int l = 0; l < d; ++l) {
                            a12 = std::max(a12, std::fabs(R(i, j, k, l) + R(j, i, k, l)));
                            a34 = std::max(a34, std::fabs(R(i, j, k, l) + R(i, j, l, k)));
                            swap = std::max(swap, std::fabs(R(i, j, k, l) - R(k, l, i, j)));
                            bianchi = std::max(
                                bianchi, std::fabs(R(i, j, k, l) + R(j, k, i, l) + R(k, i, j, l)));
                        }
            CHECK(a12 <= 1e-9);
            CHECK(a34 <= 1e-9);
            CHECK(swap <= 1e-9);
            CHECK(bianchi <= 1e-9);
        }
    }
}

TEST_CASE("reconstruction residual on all five model spaces") {
    CHECK(bochner_residual(flat2(), {0.1, 0.2, 0.3, 0.4}) <= 1e-12);
    for (AmbientSpace A : {fs2(), ch2(), make_ambient(AmbientKind::FubiniStudy, 3),
                           make_ambient(AmbientKind::ComplexHyperbolic, 3)}) {
        for (const Vec& p : ball_points(A.dim(), sample_rmax(A), 20, 19)) {
            CHECK(bochner_residual(A, p) <= 1e-5);
        }
    }
}

TEST_CASE("denominator calibration: only the ambient complex dimension works") {
    // candidates: a submanifold-style dimension, m itself, the real dimension
    for (AmbientSpace A : {fs2(), make_ambient(AmbientKind::FubiniStudy, 3)}) {
        Vec p = ball_points(A.dim(), 1.0, 1, 23)[0];
        for (int cand : {3, A.m, 2 * A.m}) {
            double res = bochner_residual(A, p, cand);
            INFO("candidate dimension ", cand);
            if (cand == A.m)
                CHECK(res <= 1e-5);
            else
                CHECK(res > 1e-2);
        }
    }
}

TEST_CASE("symmetry audit residuals") {
    {
        auto res = symmetry_audit(flat2(), {0.3, 0.1, -0.2, 0.5});
        for (const auto& [k, v] : res) {
            INFO(k);
            CHECK(v == 0.0);
        }
    }
    for (AmbientSpace A : {fs2(), ch2()}) {
        for (const Vec& p : ball_points(4, sample_rmax(A), 10, 29)) {
            auto res = symmetry_audit(A, p);
            for (const auto& [k, v] : res) {
                INFO(k);
                CHECK(v <= 1e-9);
            }
        }
    }
}

TEST_CASE("curvature identity for CR-orthogonal pairs") {
    std::mt19937_64 rng(31);
    {
        auto [x, z] = cr_orthogonal_pair(flat2(), {0, 0, 0, 0}, rng);
        W33Result w = identity_w33(flat2(), {0.0, 0.0, 0.0, 0.0}, x, z);
        CHECK(w.lhs == 0.0);
        CHECK(w.rhs == 0.0);
    }
    for (const Vec& p : ball_points(4, 1.5, 6, 37)) {
        auto [x, z] = cr_orthogonal_pair(fs2(), p, rng);
        W33Result w = identity_w33(fs2(), p, x, z);
        CHECK(w.lhs == doctest::Approx(-2.0).epsilon(1e-4));
        CHECK(w.residual <= 1e-5);
    }
    for (const Vec& p : ball_points(4, 0.7, 6, 41)) {
        auto [x, z] = cr_orthogonal_pair(ch2(), p, rng);
        W33Result w = identity_w33(ch2(), p, x, z);
        CHECK(w.lhs == doctest::Approx(2.0).epsilon(1e-4));
        CHECK(w.residual <= 1e-5);
    }
}

TEST_CASE("w33 precondition violations are reported") {
    std::mt19937_64 rng(43);
    Vec p{0.2, 0.0, 0.1, 0.0};
    auto [x, z] = cr_orthogonal_pair(fs2(), p, rng);
    Vec bad = x;
    for (double& c : bad) c *= 2.0;  // not unit
    CHECK_THROWS_WITH_AS(identity_w33(fs2(), p, bad, z), doctest::Contains("g(X,X)=1"), Error);
    CHECK_THROWS_WITH_AS(identity_w33(fs2(), p, x, x), doctest::Contains("g(X,Z)=0"), Error);
}

TEST_CASE("BochnerTensors invariants at sampled points") {
    for (AmbientSpace A : {fs2(), ch2()}) {
        for (const Vec& p : ball_points(4, sample_rmax(A), 6, 47)) {
            BochnerTensors t = lm_tensors_at(A, p);
            const int d = 4;
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) {
                    CHECK(std::fabs(t.L(a, b) - t.L(b, a)) <= 1e-9);
                    CHECK(std::fabs(t.M(a, b) + t.M(b, a)) <= 1e-9);
                    // M(Y,Z) = -L(Y,JZ) by construction
                    double lm = 0.0;
                    for (int c = 0; c < d; ++c) lm += t.L(a, c) * t.J(c, b);
                    CHECK(t.M(a, b) == doctest::Approx(-lm).epsilon(1e-12));
                }
        }
    }
}
