#include "kgeom/immersion.hpp"

#include <cmath>
#include <random>

namespace kgeom {

Vec Box::center() const {
    Vec c(ranges.size());
    for (std::size_t i = 0; i < ranges.size(); ++i) c[i] = 0.5 * (ranges[i][0] + ranges[i][1]);
    return c;
}

std::vector<Vec> sample_grid(const Box& box, const std::vector<int>& dims) {
    if (static_cast<int>(dims.size()) != box.dim()) throw Error("sample_grid: dims/box mismatch");
    std::vector<Vec> pts;
    std::size_t total = 1;
    for (int d : dims) {
        if (d < 1) throw Error("sample_grid: grid dims must be >= 1");
        total *= static_cast<std::size_t>(d);
    }
    pts.reserve(total);
    std::vector<int> idx(dims.size(), 0);
    for (std::size_t t = 0; t < total; ++t) {
        Vec p(box.dim());
        for (int a = 0; a < box.dim(); ++a) {
            double lo = box.ranges[a][0], hi = box.ranges[a][1];
            p[a] = dims[a] == 1 ? 0.5 * (lo + hi)
                                : lo + (hi - lo) * static_cast<double>(idx[a]) / (dims[a] - 1);
        }
        pts.push_back(std::move(p));
        for (int a = box.dim() - 1; a >= 0; --a) {
            if (++idx[a] < dims[a]) break;
            idx[a] = 0;
        }
    }
    return pts;
}

std::vector<Vec> sample_random(const Box& box, int count, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<Vec> pts;
    pts.reserve(count);
    for (int t = 0; t < count; ++t) {
        Vec p(box.dim());
        for (int a = 0; a < box.dim(); ++a)
            p[a] = box.ranges[a][0] + (box.ranges[a][1] - box.ranges[a][0]) * uni(rng);
        pts.push_back(std::move(p));
    }
    return pts;
}

namespace {

void validate_rank(const Immersion& S) {
    std::vector<Vec> probes = {S.domain.center()};
    for (int a = 0; a < S.n; ++a) {
        Vec p = S.domain.center();
        p[a] = 0.75 * S.domain.ranges[a][0] + 0.25 * S.domain.ranges[a][1];
        probes.push_back(p);
    }
    for (const Vec& u : probes) {
        SqMat<double> G = detail::induced_metric_tpl<double>(S, u);
        EigenSym es = eigen_sym(G);
        if (es.values.front() < 1e-16)
            throw Error("immersion '" + S.name + "': Jacobian rank-deficient at a probe point (sigma_min " +
                        std::to_string(std::sqrt(std::max(0.0, es.values.front()))) + ")");
    }
}

Immersion finish(Immersion S) {
    validate_rank(S);
    return S;
}

}  // namespace

std::vector<std::string> builtin_names() { return {"CLINE", "CRW", "LAGR2", "SLANT", "SPH3"}; }

Immersion make_builtin(const std::string& name, double param) {
    return make_builtin(name, param, make_ambient(AmbientKind::Flat, 2));
}

Immersion make_builtin(const std::string& name, double param, const AmbientSpace& ambient) {
    Immersion S;
    S.ambient = ambient;
    if (name == "SPH3") {
        if (ambient.kind != AmbientKind::Flat || ambient.m != 2)
            throw Error("SPH3 lives in the flat m=2 ambient");
        if (!(param > 0.0)) throw Error("SPH3: radius must be positive");
        S.n = 3;
        S.name = "SPH3";
        S.map = SphereMap{param};
        S.domain.ranges = {{0.4, 2.7}, {0.4, 2.7}, {0.3, 6.0}};
    } else if (name == "SLANT" || name == "LAGR2") {
        if (ambient.kind != AmbientKind::Flat || ambient.m != 2)
            throw Error("SLANT lives in the flat m=2 ambient");
        double theta = name == "LAGR2" ? std::acos(-1.0) / 2.0 : param;
        S.n = 2;
        S.name = name;
        S.map = SlantMap{theta};
        S.domain.ranges = {{-2.0, 2.0}, {-2.0, 2.0}};
    } else if (name == "CRW") {
        if (ambient.kind != AmbientKind::Flat || ambient.m != 2)
            throw Error("CRW lives in the flat m=2 ambient");
        S.n = 3;
        S.name = "CRW";
        S.map = CrwMap{};
        S.domain.ranges = {{0.5, 2.5}, {-0.5, 0.5}, {0.3, 1.1}};
        S.warp_f = [](const Vec& u) { return std::hypot(u[0], u[1]); };
        S.warp_dlogf = [](const Vec& u) {
            double zz = u[0] * u[0] + u[1] * u[1];
            return Vec{u[0] / zz, u[1] / zz, 0.0};
        };
    } else if (name == "CLINE") {
        S.n = 2;
        S.name = "CLINE";
        S.map = ComplexLineMap{};
        double r = ambient.kind == AmbientKind::ComplexHyperbolic ? 0.55 : 0.8;
        if (ambient.kind == AmbientKind::Flat) r = 2.0;
        S.domain.ranges = {{-r, r}, {-r, r}};
    } else {
        throw Error("unknown builtin immersion '" + name + "'");
    }
    return finish(std::move(S));
}

Immersion make_expr_immersion(const AmbientSpace& ambient, const std::vector<std::string>& components,
                              const std::vector<std::string>& vars, Box domain) {
    if (static_cast<int>(components.size()) != ambient.dim())
        throw Error("expression immersion: need " + std::to_string(ambient.dim()) +
                    " components, got " + std::to_string(components.size()));
    if (vars.size() != domain.ranges.size())
        throw Error("expression immersion: variable list and domain box disagree");
    Immersion S;
    S.ambient = ambient;
    S.n = static_cast<int>(vars.size());
    S.name = "expr";
    S.domain = std::move(domain);
    ExprMap em;
    em.vars = vars;
    for (const auto& src : components) em.components.push_back(expr::parse(src));
    S.map = std::move(em);
    return finish(std::move(S));
}

Vec map_point(const Immersion& S, const Vec& u) { return detail::map_eval<double>(S, u); }

std::vector<Vec> jacobian_at(const Immersion& S, const Vec& u) {
    return detail::jacobian_tpl<double>(S, u);
}

std::vector<std::vector<Vec>> hessian_at(const Immersion& S, const Vec& u) {
    const int n = S.n, d = S.ambient.dim();
    std::vector<std::vector<Vec>> H(n, std::vector<Vec>(n, Vec(d, 0.0)));
    std::vector<D2> ud(n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            for (int i = 0; i < n; ++i) {
                double sa = i == a ? 1.0 : 0.0, sb = i == b ? 1.0 : 0.0;
                ud[i] = D2{D1{u[i], sa}, D1{sb, 0.0}};
            }
            auto phi = detail::map_eval<D2>(S, ud);
            for (int k = 0; k < d; ++k) H[a][b][k] = phi[k].d.d;
            H[b][a] = H[a][b];
        }
    return H;
}

}  // namespace kgeom
