#pragma once

#include "spps/expr.hpp"
#include "spps/grid.hpp"

#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spps {

struct ProblemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Strategy { regular, determinant, darboux, zs };

enum class OutputFormat { json, csv };

// Acceptance rectangle in the spectral-parameter plane.
struct Window {
    double re_lo = -std::numeric_limits<double>::infinity();
    double re_hi = std::numeric_limits<double>::infinity();
    double im_lo = -std::numeric_limits<double>::infinity();
    double im_hi = std::numeric_limits<double>::infinity();
    bool contains(cplx z) const {
        return z.real() >= re_lo && z.real() <= re_hi && z.imag() >= im_lo &&
               z.imag() <= im_hi;
    }
    bool unbounded() const {
        return std::isinf(re_lo) && std::isinf(re_hi) && std::isinf(im_lo) &&
               std::isinf(im_hi);
    }
};

// One polynomial term of the right-hand side: R_k[u] = r_k u + s_k u'.
struct PencilTerm {
    SampledFunction r;
    SampledFunction s; // empty = identically zero
    bool has_s() const { return !s.empty(); }
};

// alpha(lam) * u + beta(lam) * (p u') = 0 at an endpoint; alpha and beta are
// polynomials in lam, coefficients ascending.
struct BoundaryCondition {
    std::vector<cplx> alpha;
    std::vector<cplx> beta;
};

struct ProblemFlags {
    bool self_adjoint = false; // real spectrum expected; imaginary-part filter applies
    double endpoint_cap = 1e8;
    bool p_vanishes_at_endpoints = false;
    bool capped = false; // an endpoint sample was replaced by the cap
    // The discrete spectrum is a finite set inside the search window (as for
    // scattering problems), so solve() collects every windowed root of one
    // expansion instead of walking an eigenvalue ladder.
    bool finite_spectrum = false;
};

struct SeedPair {
    SampledFunction f, g, pfp, pgp;
};

// A fully sampled problem on a concrete grid.
struct SpectralProblem {
    Grid grid;
    SampledFunction p, q;
    std::vector<PencilTerm> terms;
    BoundaryCondition left, right;
    ProblemFlags flags;
    SeamMap p_seams, q_seams;
    std::vector<SeamMap> r_seams, s_seams; // per term
    std::optional<SeedPair> seed;          // exact particular solutions at lam = 0
    std::size_t n_terms() const { return terms.size(); }
    bool has_any_s() const {
        for (const auto& t : terms)
            if (t.has_s()) return true;
        return false;
    }
};

struct ZakharovShabatProblem {
    Grid grid; // over the truncation interval [-L, L]
    SampledFunction P, Q;
    double half_width = 8.0;
};

// Per-problem run defaults carried by problem files and builtins.
struct RunDefaults {
    std::optional<int> N;
    std::optional<std::size_t> M;
    std::optional<int> count;
    std::optional<Strategy> strategy;
    std::optional<Window> window;
    std::optional<double> x0;
    std::optional<GridKind> quadrature;
    int index_offset = 0; // label of the lowest computed eigenvalue
};

// Piecewise expression: pieces.size() == breakpoints.size() + 1.
struct CoefficientSpec {
    std::vector<Expr> pieces;
    bool empty() const { return pieces.empty(); }
};

// A parsed problem document, independent of any grid resolution.
struct ProblemDescription {
    enum Kind { pencil, zakharov_shabat } kind = pencil;
    std::string name;
    double a = 0.0, b = 1.0; // interval (pencil) or truncation (zs)
    std::vector<double> breakpoints;
    CoefficientSpec p, q;
    struct TermSpec {
        CoefficientSpec r, s; // s may be empty
    };
    std::vector<TermSpec> terms;
    struct BcSpec {
        std::vector<Expr> alpha, beta;
    } left, right;
    Expr zs_P, zs_Q; // zakharov_shabat kind
    ProblemFlags flags;
    struct SeedSpec {
        Expr f, g, pfp, pgp;
    };
    std::optional<SeedSpec> seed;
    RunDefaults defaults;
};

ProblemDescription load_problem_text(const std::string& json_text);
ProblemDescription load_problem_file(const std::string& path);
// Inverse of load_problem_text: emits a document that reloads to identical
// sampled coefficients (expressions are stored verbatim).
std::string save_problem(const ProblemDescription& d);

std::vector<std::string> builtin_names();
// Throws ProblemError with the list of known names when absent.
ProblemDescription builtin(const std::string& name);

// Samples a pencil description on a concrete grid, applying the endpoint-cap
// policy. x0 falls back to the description default, then to the left endpoint.
SpectralProblem materialize(const ProblemDescription& d, std::size_t M,
                            std::optional<double> x0 = std::nullopt,
                            GridKind kind = GridKind::uniform);

ZakharovShabatProblem materialize_zs(const ProblemDescription& d, std::size_t M,
                                     std::optional<double> x0 = std::nullopt,
                                     GridKind kind = GridKind::uniform);

// Scalarizes the first-order system into an operator pencil:
// p = 1/Q, q = P, r1 = Q'/Q^2, r2 = 1/Q with the Jost boundary forms.
SpectralProblem zs_to_pencil(const ZakharovShabatProblem& zs);

Strategy strategy_from_string(const std::string& s);
std::string to_string(Strategy s);
GridKind quadrature_from_string(const std::string& s);
std::string to_string(GridKind k);

} // namespace spps
