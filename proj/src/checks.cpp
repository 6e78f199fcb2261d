#include "kgeom/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "kgeom/crwarp.hpp"
#include "kgeom/kernels.hpp"

namespace kgeom {

namespace {

const std::vector<CheckInfo> kCatalog = {
    {"ambient.kaehler", "complex-structure, metric-compatibility, parallel-J and curvature-symmetry residuals", 1e-6, CheckKind::Residual},
    {"bochner.residual", "max difference between the ambient curvature and its L/M reconstruction", 1e-5, CheckKind::Residual},
    {"bochner.symmetries", "L symmetry, J-invariance, skew identity and M antisymmetry residuals", 1e-9, CheckKind::Residual},
    {"bochner.w33", "R(X,JX,Z,JZ) against -2M(X,JX)g(Z,Z)-2M(Z,JZ)g(X,X) for CR-orthogonal pairs", 1e-5, CheckKind::Residual},
    {"chen.cor1", "Einstein-ambient margin of the plane-curvature bound", 1e-8, CheckKind::Margin},
    {"chen.cor2", "slant Einstein-ambient margin", 1e-8, CheckKind::Margin},
    {"chen.cor3", "invariant-submanifold margin", 1e-8, CheckKind::Margin},
    {"chen.cor4", "anti-invariant-submanifold margin", 1e-8, CheckKind::Margin},
    {"chen.equality_form", "shape operators against the equality-case pattern (diag(a,b,x..x), a+b=x; traceless 2x2 blocks)", 1e-6, CheckKind::Residual},
    {"chen.lemma1", "algebraic lemma on hypothesis-exact instances: 2 x1 x2 >= b with the stated equality case", 1e-12, CheckKind::Residual},
    {"chen.proof_audit", "per-step residuals of the derivation chain under each summation convention", 1e-10, CheckKind::Residual},
    {"chen.thm1", "margin of the plane-curvature lower bound (negative margin = violation)", 1e-8, CheckKind::Margin},
    {"chen.thm2", "slant-form margin, cross-checked against the general bound", 1e-8, CheckKind::Margin},
    {"crwarp.lemma2", "warped-product second-fundamental-form identities (reduced, parallel-J ambient)", 1e-6, CheckKind::Residual},
    {"crwarp.split", "CR distribution split residuals and (p,q)", 1e-8, CheckKind::Residual},
    {"crwarp.thm3", "squared second-fundamental-form margin over |P|^2 + q|grad log f|^2", 1e-8, CheckKind::Margin},
    {"crwarp.thm4_report", "dimension dichotomy and sign statistics (informational)", 0.0, CheckKind::Info},
    {"crwarp.w8", "warping law: tangential nabla_X Z against X(log f) Z", 1e-6, CheckKind::Residual},
    {"submanifold.classify", "invariant/anti-invariant/slant/CR classification (informational; tolerance = angle threshold)", 1e-6, CheckKind::Info},
    {"submanifold.codazzi", "normal-bundle curvature identity residual on random tangent triples", 1e-3, CheckKind::Residual},
    {"submanifold.extrinsic", "second-fundamental-form symmetry, shape-operator duality and T-matrix invariants", 1e-8, CheckKind::Residual},
    {"submanifold.frame", "adapted-frame orthonormality residual", 1e-8, CheckKind::Residual},
    {"submanifold.gauss", "curvature decomposition residual on random tangent 4-tuples", 1e-4, CheckKind::Residual},
};

struct RunContext {
    RunConfig cfg;
    AmbientSpace ambient;
    Immersion immersion;
    std::vector<Vec> points;
    double tol_scale = 1.0;
};

double check_tol(const RunContext& ctx, const CheckInfo& info) {
    auto it = ctx.cfg.tol_overrides.find(info.name);
    double tol = it != ctx.cfg.tol_overrides.end() ? it->second : info.default_tol;
    return tol * ctx.tol_scale;
}

CheckRecord base_record(const RunContext& ctx, const CheckInfo& info, int idx) {
    CheckRecord rec;
    rec.check = info.name;
    rec.point_index = idx;
    rec.point = ctx.points[idx];
    rec.digest = digest_inputs(info.name, rec.point);
    rec.tolerance = check_tol(ctx, info);
    return rec;
}

std::mt19937_64 point_rng(const RunContext& ctx, const CheckInfo& info, int idx) {
    std::uint64_t seed = ctx.cfg.seed * 1000003ULL + static_cast<std::uint64_t>(idx) * 97ULL;
    for (char c : info.name) seed = seed * 131ULL + static_cast<unsigned char>(c);
    return std::mt19937_64(seed);
}

Vec random_unit_tangent(const AdaptedFrame& F, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec v(F.phi.size(), 0.0);
    Vec coef(F.n());
    double nrm = 0.0;
    for (int i = 0; i < F.n(); ++i) {
        coef[i] = gauss(rng);
        nrm += coef[i] * coef[i];
    }
    nrm = std::sqrt(nrm);
    for (int i = 0; i < F.n(); ++i) kern::axpy(coef[i] / nrm, F.tangent[i].data(), v.data(), v.size());
    return v;
}

void eval_margin_record(CheckRecord& rec, double margin) {
    rec.residual = margin;
    rec.pass = margin >= -rec.tolerance;
}

CheckRecord eval_point_check(const RunContext& ctx, const CheckInfo& info, int idx) {
    CheckRecord rec = base_record(ctx, info, idx);
    const Vec& u = ctx.points[idx];
    const Immersion& S = ctx.immersion;
    Vec phi = map_point(S, u);

    if (info.name == "ambient.kaehler") {
        auto res = kaehler_audit(ctx.ambient, {phi});
        double worst = 0.0;
        for (const auto& [k, v] : res) {
            rec.values[k] = v;
            worst = std::max(worst, v);
        }
        rec.residual = worst;
        rec.pass = worst <= rec.tolerance;
    } else if (info.name == "bochner.residual") {
        rec.residual = bochner_residual(ctx.ambient, phi);
        rec.pass = rec.residual <= rec.tolerance;
    } else if (info.name == "bochner.symmetries") {
        auto res = symmetry_audit(ctx.ambient, phi);
        double worst = 0.0;
        for (const auto& [k, v] : res) {
            rec.values[k] = v;
            worst = std::max(worst, v);
        }
        rec.residual = worst;
        rec.pass = worst <= rec.tolerance;
    } else if (info.name == "bochner.w33") {
        auto rng = point_rng(ctx, info, idx);
        MetricMatrix gm(metric_at(ctx.ambient, phi));
        Mat J = complex_structure(ctx.ambient);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const int d = ctx.ambient.dim();
        Vec x(d), z(d);
        for (int i = 0; i < d; ++i) x[i] = gauss(rng);
        double xn = gm.norm(x);
        for (double& c : x) c /= xn;
        for (int i = 0; i < d; ++i) z[i] = gauss(rng);
        Vec jx = matvec(J, x);
        kern::axpy(-gm.inner(z, x), x.data(), z.data(), z.size());
        kern::axpy(-gm.inner(z, jx), jx.data(), z.data(), z.size());
        double zn = gm.norm(z);
        for (double& c : z) c /= zn;
        W33Result w = identity_w33(ctx.ambient, phi, x, z);
        rec.values["lhs"] = w.lhs;
        rec.values["rhs"] = w.rhs;
        rec.residual = w.residual;
        rec.pass = rec.residual <= rec.tolerance;
    } else if (info.name == "submanifold.frame") {
        AdaptedFrame F = adapted_frame_at(S, u);
        rec.residual = F.orthonormality_residual;
        rec.pass = rec.residual <= rec.tolerance;
    } else if (info.name == "submanifold.extrinsic") {
        ExtrinsicData X = extrinsic_data_at(S, u);
        rec.values["omega_symmetry"] = X.omega_symmetry;
        rec.values["duality"] = X.duality_residual;
        rec.values["t_antisymmetry"] = X.t_antisymmetry;
        rec.values["t_norm_sq"] = X.t_norm_sq;
        rec.values["omega_norm_sq"] = X.omega_norm_sq;
        rec.values["h_norm"] = X.h_norm;
        double bound = std::max(0.0, X.t_norm_sq - S.n);  // 0 <= |T|^2 <= n
        rec.residual = std::max({X.omega_symmetry, X.duality_residual, X.t_antisymmetry, bound});
        rec.pass = rec.residual <= rec.tolerance;
    } else if (info.name == "submanifold.gauss" || info.name == "submanifold.codazzi") {
        auto rng = point_rng(ctx, info, idx);
        AdaptedFrame F = adapted_frame_at(S, u);
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            Vec x = random_unit_tangent(F, rng), y = random_unit_tangent(F, rng),
                z = random_unit_tangent(F, rng);
            if (info.name == "submanifold.gauss") {
                Vec w = random_unit_tangent(F, rng);
                worst = std::max(worst, gauss_residual_at(S, u, x, y, z, w));
            } else {
                worst = std::max(worst, codazzi_residual_at(S, u, x, y, z));
            }
        }
        rec.residual = worst;
        rec.pass = worst <= rec.tolerance;
    } else if (info.name == "submanifold.classify") {
        Classification cls = classify(S, {u}, 16, ctx.cfg.seed + idx, rec.tolerance);
        rec.note = to_string(cls.cls);
        rec.values["theta"] = cls.theta;
        rec.values["theta_spread"] = cls.theta_spread;
        rec.pass = true;
    } else if (info.name == "chen.lemma1") {
        auto rng = point_rng(ctx, info, idx);
        std::uniform_real_distribution<double> uni(-2.0, 2.0);
        std::uniform_int_distribution<int> ndist(3, 8);
        int n = ndist(rng);
        Vec x(n);
        for (double& v : x) v = uni(rng);
        double sum = 0.0, sumsq = 0.0;
        for (double v : x) {
            sum += v;
            sumsq += v * v;
        }
        double b = sum * sum / (n - 1) - sumsq;
        LemmaResult lr = chen_lemma(x, b);
        rec.values["slack"] = lr.slack;
        rec.values["equality"] = lr.equality ? 1.0 : 0.0;
        rec.residual = std::max(0.0, -lr.slack);
        rec.pass = lr.holds;
    } else if (info.name == "chen.thm1") {
        ChenTerms t = chen_terms_at(S, u, {0, 1}, ctx.cfg.ric_source);
        rec.values = {{"k_pi", t.k_pi},
                      {"rho", t.rho},
                      {"h_norm_sq", t.h_norm_sq},
                      {"t_norm_sq", t.t_norm_sq},
                      {"ric_term_ambient", t.ric_term_ambient},
                      {"ric_term_intrinsic", t.ric_term_intrinsic},
                      {"coefficient", t.coefficient},
                      {"epsilon", t.epsilon},
                      {"margin", t.margin}};
        if (t.degenerate_n2) rec.note = "degenerate: plane section exhausts the tangent space";
        eval_margin_record(rec, t.margin);
    } else if (info.name == "chen.thm2") {
        Thm2Result t2 = thm2_margin_at(S, u);
        rec.values = {{"margin", t2.margin},
                      {"theta", t2.theta},
                      {"thm1_margin", t2.thm1_margin},
                      {"discrepancy", t2.discrepancy}};
        eval_margin_record(rec, t2.margin);
    } else if (info.name == "chen.proof_audit") {
        ProofAudit pa = proof_audit_at(S, u);
        for (const auto& [k, v] : pa.residuals) rec.values[k] = v;
        rec.note = "best trace-identity denominator: " + pa.best_trace_denom;
        rec.residual = pa.residuals.at("eliminant_identity");
        rec.pass = rec.residual <= rec.tolerance;
    } else if (info.name == "chen.equality_form") {
        EqualityForm ef = equality_form_detect(S, u, rec.tolerance);
        rec.values = {{"alpha", ef.alpha},
                      {"beta", ef.beta},
                      {"xi", ef.xi},
                      {"first_pattern_residual", ef.first_pattern_residual},
                      {"rest_pattern_residual", ef.rest_pattern_residual}};
        rec.residual = ef.residual;
        rec.pass = ef.pass;
    } else if (info.name == "chen.cor1" || info.name == "chen.cor2" || info.name == "chen.cor3" ||
               info.name == "chen.cor4") {
        Corollary which = Corollary::Einstein;
        if (info.name == "chen.cor2") which = Corollary::SlantEinstein;
        if (info.name == "chen.cor3") which = Corollary::Invariant;
        if (info.name == "chen.cor4") which = Corollary::AntiInvariant;
        CorollaryResult cr = corollary_margin_at(S, u, {0, 1}, which, ctx.cfg.einstein_source);
        rec.values["margin"] = cr.margin;
        if (cr.has_lambda) {
            rec.values["lambda"] = cr.lambda;
            rec.values["einstein_residual"] = cr.einstein_residual;
        }
        eval_margin_record(rec, cr.margin);
    } else if (info.name == "crwarp.split") {
        DistributionSplit sp = split_distributions_at(S, u);
        rec.values["p"] = sp.p;
        rec.values["q"] = sp.q;
        rec.values["j_invariance"] = sp.j_invariance_residual;
        rec.values["jdperp_normal"] = sp.jdperp_normal_residual;
        rec.residual = std::max(sp.j_invariance_residual, sp.jdperp_normal_residual);
        rec.pass = rec.residual <= rec.tolerance;
        if (sp.degenerate) rec.note = "degenerate split (p or q vanishes)";
    } else if (info.name == "crwarp.w8") {
        WarpCheck wc = warping_check_at(S, u);
        rec.values["max_residual"] = wc.max_residual;
        rec.values["analytic_residual"] = wc.analytic_residual;
        rec.values["grad_logf_sq"] = wc.grad_logf_sq;
        rec.residual = std::max(wc.max_residual, wc.analytic_residual);
        rec.pass = rec.residual <= rec.tolerance;
    } else if (info.name == "crwarp.lemma2") {
        DistributionSplit sp = split_distributions_at(S, u);
        if (sp.degenerate) throw Error("lemma2: degenerate split");
        double worst = 0.0;
        for (const Vec& x : sp.d_frame)
            for (const Vec& z : sp.dperp_frame) {
                Lemma2Check lc = lemma2_check_at(S, u, x, z, sp.dperp_frame.back());
                worst = std::max({worst, lc.identity1, lc.identity2, lc.identity3});
            }
        rec.residual = worst;
        rec.pass = worst <= rec.tolerance;
    } else if (info.name == "crwarp.thm3") {
        Thm3Result t3 = thm3_margin_at(S, u);
        rec.values = {{"omega_norm_sq", t3.omega_norm_sq},
                      {"p_norm_sq", t3.p_norm_sq},
                      {"q_grad_sq", t3.q_grad_sq},
                      {"hypothesis_residual", t3.hypothesis_residual},
                      {"margin", t3.margin}};
        eval_margin_record(rec, t3.margin);
    } else {
        throw Error("unhandled check '" + info.name + "'");
    }
    return rec;
}

// one record for the whole sample
CheckRecord eval_sample_check(const RunContext& ctx, const CheckInfo& info) {
    CheckRecord rec;
    rec.check = info.name;
    rec.point_index = 0;
    rec.point = ctx.points.empty() ? Vec{} : ctx.points.front();
    rec.digest = digest_inputs(info.name, rec.point);
    rec.tolerance = check_tol(ctx, info);
    if (info.name == "crwarp.thm4_report") {
        Thm4Report rep = thm4_dichotomy_report(ctx.immersion, ctx.points);
        rec.values = {{"n", static_cast<double>(rep.n)},
                      {"p", static_cast<double>(rep.p)},
                      {"q", static_cast<double>(rep.q)},
                      {"cond_n1_le_pq", rep.cond_pq ? 1.0 : 0.0},
                      {"cond_2n1_le_q2", rep.cond_q2 ? 1.0 : 0.0},
                      {"rho_min", rep.rho_min},
                      {"rho_max", rep.rho_max},
                      {"grad_min", rep.grad_min},
                      {"grad_max", rep.grad_max}};
        rec.note = rep.note;
        rec.pass = true;
    } else {
        throw Error("unhandled sample check '" + info.name + "'");
    }
    return rec;
}

std::string timestamp_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

}  // namespace

const std::vector<CheckInfo>& check_catalog() { return kCatalog; }

const CheckInfo* find_check(const std::string& name) {
    for (const CheckInfo& c : kCatalog)
        if (c.name == name) return &c;
    return nullptr;
}

RunReport run_config(const RunConfig& cfg, int jobs, double tol_scale) {
    for (const std::string& name : cfg.checks)
        if (!find_check(name)) throw Error("unknown check '" + name + "'");
    for (const auto& [name, tol] : cfg.tol_overrides) {
        if (!find_check(name)) throw Error("unknown check '" + name + "' in tolerance override");
        if (!(tol > 0.0)) throw Error("tolerance for '" + name + "' must be positive");
    }

    RunContext ctx{cfg, ambient_from_config(cfg), immersion_from_config(cfg), {}, tol_scale};
    ctx.points = sample_points_from_config(cfg, ctx.immersion);

    struct Task {
        const CheckInfo* info;
        int point_index;  // -1 for whole-sample checks
    };
    std::vector<Task> tasks;
    for (const std::string& name : cfg.checks) {
        const CheckInfo* info = find_check(name);
        if (info->name == "crwarp.thm4_report") {
            tasks.push_back({info, -1});
        } else {
            for (int i = 0; i < static_cast<int>(ctx.points.size()); ++i) tasks.push_back({info, i});
        }
    }

    std::vector<CheckRecord> records(tasks.size());
    auto work = [&](std::size_t t) {
        const Task& task = tasks[t];
        try {
            records[t] = task.point_index < 0 ? eval_sample_check(ctx, *task.info)
                                              : eval_point_check(ctx, *task.info, task.point_index);
        } catch (const std::exception& e) {
            CheckRecord rec;
            rec.check = task.info->name;
            rec.point_index = std::max(0, task.point_index);
            rec.point = task.point_index >= 0 ? ctx.points[task.point_index] : Vec{};
            rec.digest = digest_inputs(rec.check, rec.point);
            rec.tolerance = check_tol(ctx, *task.info);
            rec.pass = false;
            rec.residual = std::numeric_limits<double>::quiet_NaN();
            rec.note = e.what();
            records[t] = std::move(rec);
        }
    };
    if (jobs <= 1) {
        for (std::size_t t = 0; t < tasks.size(); ++t) work(t);
    } else {
        std::vector<std::thread> pool;
        std::size_t stride = static_cast<std::size_t>(jobs);
        for (std::size_t w = 0; w < stride; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t t = w; t < tasks.size(); t += stride) work(t);
            });
        for (auto& th : pool) th.join();
    }

    std::stable_sort(records.begin(), records.end(), [](const CheckRecord& a, const CheckRecord& b) {
        if (a.check != b.check) return a.check < b.check;
        return a.point_index < b.point_index;
    });

    RunReport rep;
    rep.config_echo = config_echo(cfg);
    rep.timestamp = timestamp_now();
    rep.kernel = kern::active_name();
    rep.records = std::move(records);
    rep.total = static_cast<int>(rep.records.size());
    for (const CheckRecord& rec : rep.records) {
        if (rec.pass)
            ++rep.passed;
        else
            ++rep.failed;
        const CheckInfo* info = find_check(rec.check);
        bool margin_kind = info && info->kind == CheckKind::Margin;
        auto it = rep.worst.find(rec.check);
        if (it == rep.worst.end())
            rep.worst[rec.check] = rec.residual;
        else if (margin_kind ? rec.residual < it->second : rec.residual > it->second)
            it->second = rec.residual;
    }
    return rep;
}

std::string list_builtins_text() {
    std::ostringstream os;
    os << "builtin immersions:\n";
    os << "  CLINE        complex line (u,v) -> (u+iv, 0); ambients: flat, fubini_study, complex_hyperbolic\n";
    os << "  CRW          (u,v,t) -> (z cos t, z sin t), z = u+iv; CR-warped product, f = |z|\n";
    os << "  LAGR2        totally real plane in flat C^2 (SLANT at pi/2)\n";
    os << "  SLANT        param theta: plane spanned by (1,0,0,0) and (0,cos t,sin t,0) in flat C^2\n";
    os << "  SPH3         param radius: round 3-sphere chart in flat C^2\n";
    os << "\nexpression immersions: components = [ ... ] with vars/domain; grammar: + - * / ^,\n";
    os << "functions sin cos tan exp log sqrt sinh cosh, constants, parentheses.\n";
    os << "\nchecks (name, default tolerance, kind):\n";
    char line[200];
    for (const CheckInfo& c : kCatalog) {
        const char* kind = c.kind == CheckKind::Residual ? "residual"
                           : c.kind == CheckKind::Margin ? "margin"
                                                         : "info";
        std::snprintf(line, sizeof line, "  %-22s %-9.1e %-8s %s\n", c.name.c_str(), c.default_tol,
                      kind, c.description.c_str());
        os << line;
    }
    return os.str();
}

}  // namespace kgeom
