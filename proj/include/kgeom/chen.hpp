#pragma once

#include <map>
#include <string>
#include <utility>

#include "kgeom/bochner.hpp"
#include "kgeom/submanifold.hpp"

// Plane-section curvature lower bounds: the algebraic lemma, the margin of
// the main inequality
//
//   K(pi) >= (5n^2+31n+26+3|T|^2)/(2(2n+2)(2n+4)) * rho
//          - n^2(n-2)/(2(n-1)) * |H|^2
//          - 6/(2(2n+4)) * sum_ij Ric(e_i,Je_j) g(e_i,Je_j)
//
// with rho = sum_{i<j} K(e_i,e_j) intrinsic and Ric ambient by default, the
// slant/invariant/anti-invariant and Einstein specializations, the numeric
// audit of the derivation chain, and detection of the equality-case shape
// operator patterns. Margins are reported, never clamped: a negative margin
// is data.

namespace kgeom {

struct LemmaResult {
    bool holds = false;
    double slack = 0.0;  // 2 x1 x2 - b
    bool equality = false;
};

// Requires (sum x)^2 = (n-1)(sum x^2 + b) within 1e-9 relative; throws
// with both sides otherwise. equality <=> x1+x2 = x3 = ... = xn (1e-9).
LemmaResult chen_lemma(const Vec& x, double b);

double chen_coefficient(int n, double t_norm_sq);
double chen_eps_coefficient(int n, double t_norm_sq);

enum class RicSource { Ambient, Intrinsic };

struct ChenTerms {
    int n = 0;
    bool degenerate_n2 = false;  // plane section exhausts T_xW, (n-2) factor vanishes
    double k_pi = 0.0;
    double rho = 0.0;
    double h_norm_sq = 0.0;
    double t_norm_sq = 0.0;
    double ric_term_ambient = 0.0;
    double ric_term_intrinsic = 0.0;
    double ric_term = 0.0;  // the one selected by convention
    double coefficient = 0.0;
    double epsilon = 0.0;  // the auxiliary quantity of the derivation
    double margin = 0.0;   // K(pi) - RHS
    RicSource convention = RicSource::Ambient;
};

ChenTerms chen_terms_at(const Immersion& S, const Vec& u, std::pair<int, int> plane = {0, 1},
                        RicSource ric = RicSource::Ambient);
ChenTerms chen_terms_at(const Immersion& S, const Vec& u, const AdaptedFrame& frame,
                        std::pair<int, int> plane, RicSource ric);

inline ChenTerms thm1_margin_at(const Immersion& S, const Vec& u, std::pair<int, int> plane = {0, 1},
                                RicSource ric = RicSource::Ambient) {
    return chen_terms_at(S, u, plane, ric);
}

struct ProofAudit {
    std::map<std::string, double> residuals;
    std::string best_trace_denom;   // denominator convention minimizing the trace-identity residual
    std::string best_plane_denom;  // same for the plane-curvature identity
};
ProofAudit proof_audit_at(const Immersion& S, const Vec& u);

struct EqualityForm {
    double alpha = 0.0, beta = 0.0, xi = 0.0;
    double first_pattern_residual = 0.0;  // diag(alpha,beta,xi,...,xi), alpha+beta = xi
    double rest_pattern_residual = 0.0;   // traceless 2x2 block, zeros elsewhere
    double residual = 0.0;                // max of the two
    bool pass = false;
};

// Frame search: the first normal is aligned with H when it is nonzero, the
// tangent frame is rotated into the eigenbasis of its shape operator, and
// every (alpha,beta) pair assignment is tried; best fit wins.
EqualityForm equality_form_detect(const Immersion& S, const Vec& u, double tol);

struct Thm2Result {
    double margin = 0.0;
    double theta = 0.0;
    double thm1_margin = 0.0;  // same point/plane through the general inequality
    double discrepancy = 0.0;  // |margin - thm1_margin|, reported (printed forms differ)
    ChenTerms terms;
};

// Requires classify to return slant (invariant/anti-invariant count as
// theta = 0, pi/2); throws otherwise.
Thm2Result thm2_margin_at(const Immersion& S, const Vec& u, std::pair<int, int> plane = {0, 1});

enum class Corollary { Einstein, SlantEinstein, Invariant, AntiInvariant };

// Which metric the Einstein hypothesis is tested on. The grammar of the
// statement leaves it open; ambient is the default since the reduced Ricci
// term is ambient.
enum class EinsteinSource { Ambient, Submanifold };

struct CorollaryResult {
    double margin = 0.0;
    double lambda = 0.0;  // Einstein constant, when fitted
    bool has_lambda = false;
    double einstein_residual = 0.0;
    ChenTerms terms;
};

// Einstein variants fit lambda as the average Ricci eigenvalue (tau/dim) and
// require max|Ric - lambda g| <= 1e-6 on the chosen metric; class-restricted
// variants require a matching classification.
CorollaryResult corollary_margin_at(const Immersion& S, const Vec& u, std::pair<int, int> plane,
                                    Corollary which,
                                    EinsteinSource einstein = EinsteinSource::Ambient);

}  // namespace kgeom
