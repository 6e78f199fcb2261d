#pragma once

#include <array>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "kgeom/ambient.hpp"
#include "kgeom/expr.hpp"

// Immersions of an n-dimensional chart box into an ambient chart: built-in
// fixtures (closed-form maps, differentiated exactly through dual numbers)
// or user expression lists. All evaluation is templated on the scalar, so
// Jacobians and Hessians come from one code path.

namespace kgeom {

struct Box {
    std::vector<std::array<double, 2>> ranges;
    int dim() const { return static_cast<int>(ranges.size()); }
    Vec center() const;
};

std::vector<Vec> sample_grid(const Box& box, const std::vector<int>& dims);
std::vector<Vec> sample_random(const Box& box, int count, unsigned long long seed);

// (u,v,w) -> r*(cos u, sin u cos v, sin u sin v cos w, sin u sin v sin w)
struct SphereMap {
    double r;
};
// (s,t) -> (s, t cos theta, t sin theta, 0)
struct SlantMap {
    double theta;
};
// (u,v,t) -> (u cos t, v cos t, u sin t, v sin t); CR-warped, f = |z|
struct CrwMap {};
// (u,v) -> (u, v, 0, ..., 0)
struct ComplexLineMap {};
struct ExprMap {
    std::vector<expr::Expr> components;
    std::vector<std::string> vars;
};

struct Immersion {
    AmbientSpace ambient;
    int n = 0;
    Box domain;
    std::string name;
    std::variant<SphereMap, SlantMap, CrwMap, ComplexLineMap, ExprMap> map;

    // analytic warping data, set on builtins that are warped products
    std::function<double(const Vec&)> warp_f;          // f(u)
    std::function<Vec(const Vec&)> warp_dlogf;         // d_a log f per chart coordinate
    bool has_warp() const { return static_cast<bool>(warp_f); }
};

// Builtins: SPH3(radius), SLANT(theta), LAGR2, CRW, CLINE (complex line;
// ambient defaults to FLAT2, pass fubini_study/complex_hyperbolic spaces
// for the curved variants).
Immersion make_builtin(const std::string& name, double param);
Immersion make_builtin(const std::string& name, double param, const AmbientSpace& ambient);
Immersion make_expr_immersion(const AmbientSpace& ambient, const std::vector<std::string>& components,
                              const std::vector<std::string>& vars, Box domain);

std::vector<std::string> builtin_names();

namespace detail {

template <class T>
std::vector<T> map_eval(const Immersion& S, const std::vector<T>& u) {
    const int d = S.ambient.dim();
    std::vector<T> out(d, T{});
    if (const auto* sp = std::get_if<SphereMap>(&S.map)) {
        out[0] = sp->r * cos(u[0]);
        out[1] = sp->r * sin(u[0]) * cos(u[1]);
        out[2] = sp->r * sin(u[0]) * sin(u[1]) * cos(u[2]);
        out[3] = sp->r * sin(u[0]) * sin(u[1]) * sin(u[2]);
    } else if (const auto* sl = std::get_if<SlantMap>(&S.map)) {
        out[0] = u[0];
        out[1] = std::cos(sl->theta) * u[1];
        out[2] = std::sin(sl->theta) * u[1];
    } else if (std::get_if<CrwMap>(&S.map)) {
        out[0] = u[0] * cos(u[2]);
        out[1] = u[1] * cos(u[2]);
        out[2] = u[0] * sin(u[2]);
        out[3] = u[1] * sin(u[2]);
    } else if (std::get_if<ComplexLineMap>(&S.map)) {
        out[0] = u[0];
        out[1] = u[1];
    } else {
        const auto& em = std::get<ExprMap>(S.map);
        std::map<std::string, T> env;
        for (std::size_t a = 0; a < em.vars.size(); ++a) env.emplace(em.vars[a], u[a]);
        for (int k = 0; k < d; ++k) out[k] = expr::eval(em.components[k], env);
    }
    return out;
}

// columns a = 0..n-1 of the pushforward: cols[a][k] = d phi^k / d u_a
template <class T>
std::vector<std::vector<T>> jacobian_tpl(const Immersion& S, const std::vector<T>& u) {
    const int n = S.n, d = S.ambient.dim();
    std::vector<std::vector<T>> cols(n, std::vector<T>(d, T{}));
    std::vector<Dual<T>> ud(n);
    for (int a = 0; a < n; ++a) {
        for (int i = 0; i < n; ++i) ud[i] = Dual<T>{u[i], T{i == a ? 1.0 : 0.0}};
        auto phi = map_eval<Dual<T>>(S, ud);
        for (int k = 0; k < d; ++k) cols[a][k] = phi[k].d;
    }
    return cols;
}

template <class T>
SqMat<T> induced_metric_tpl(const Immersion& S, const std::vector<T>& u) {
    const int n = S.n, d = S.ambient.dim();
    auto phi = map_eval<T>(S, u);
    SqMat<T> g = metric_tpl<T>(S.ambient, phi);
    auto jac = jacobian_tpl<T>(S, u);
    SqMat<T> G(n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            T s{};
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) s += g(k, l) * jac[a][k] * jac[b][l];
            G(a, b) = s;
            G(b, a) = s;
        }
    return G;
}

template <class T>
Ten3<T> induced_christoffel_tpl(const Immersion& S, const std::vector<T>& u) {
    const int n = S.n;
    std::vector<SqMat<Dual<T>>> dG;
    dG.reserve(n);
    std::vector<Dual<T>> ud(n);
    for (int c = 0; c < n; ++c) {
        for (int i = 0; i < n; ++i) ud[i] = Dual<T>{u[i], T{i == c ? 1.0 : 0.0}};
        dG.push_back(induced_metric_tpl<Dual<T>>(S, ud));
    }
    SqMat<T> Ginv = spd_inverse(induced_metric_tpl<T>(S, u));
    Ten3<T> gamma(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                T s{};
                for (int l = 0; l < n; ++l)
                    s += Ginv(k, l) * (dG[i](j, l).d + dG[j](i, l).d - dG[l](i, j).d);
                gamma(k, i, j) = 0.5 * s;
                gamma(k, j, i) = gamma(k, i, j);
            }
    return gamma;
}

}  // namespace detail

Vec map_point(const Immersion& S, const Vec& u);
// coordinate tangents d phi(d/du_a)
std::vector<Vec> jacobian_at(const Immersion& S, const Vec& u);
// hess[a][b] = d^2 phi / du_a du_b (ambient components), exact via nested duals
std::vector<std::vector<Vec>> hessian_at(const Immersion& S, const Vec& u);

}  // namespace kgeom
