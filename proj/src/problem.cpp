#include "spps/problem.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace spps {

using njson = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ProblemError(msg); }

void reject_unknown(const njson& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok) fail("unknown key \"" + it.key() + "\" in " + where);
    }
}

Expr parse_named(const std::string& text, const std::string& where) {
    try {
        return parse_expression(text);
    } catch (const ExprError& e) {
        fail(where + ": " + e.what());
    }
}

CoefficientSpec parse_coef(const njson& j, const std::string& where) {
    CoefficientSpec out;
    if (j.is_string()) {
        out.pieces.push_back(parse_named(j.get<std::string>(), where));
    } else if (j.is_object()) {
        reject_unknown(j, {"pieces"}, where);
        if (!j.contains("pieces") || !j["pieces"].is_array() || j["pieces"].empty())
            fail(where + ": expected {\"pieces\": [\"...\"]}");
        for (const auto& piece : j["pieces"]) {
            if (!piece.is_string()) fail(where + ": pieces must be strings");
            out.pieces.push_back(parse_named(piece.get<std::string>(), where));
        }
    } else {
        fail(where + ": expected expression string or pieces object");
    }
    return out;
}

std::vector<Expr> parse_poly(const njson& j, const std::string& where) {
    if (!j.is_array() || j.empty())
        fail(where + ": expected non-empty array of coefficient expressions");
    std::vector<Expr> out;
    for (const auto& e : j) {
        if (!e.is_string()) fail(where + ": coefficients must be strings");
        out.push_back(parse_named(e.get<std::string>(), where));
    }
    return out;
}

double get_number(const njson& j, const std::string& where) {
    if (!j.is_number()) fail(where + ": expected a number");
    return j.get<double>();
}

ProblemDescription::BcSpec parse_bc(const njson& j, const std::string& where) {
    if (!j.is_object()) fail(where + ": expected object");
    reject_unknown(j, {"alpha", "beta"}, where);
    if (!j.contains("alpha") || !j.contains("beta"))
        fail(where + ": needs alpha and beta");
    ProblemDescription::BcSpec bc;
    bc.alpha = parse_poly(j["alpha"], where + ".alpha");
    bc.beta = parse_poly(j["beta"], where + ".beta");
    return bc;
}

RunDefaults parse_defaults(const njson& j) {
    RunDefaults d;
    reject_unknown(j,
                   {"N", "M", "count", "strategy", "window", "quadrature",
                    "index_offset"},
                   "defaults");
    if (j.contains("N")) d.N = j["N"].get<int>();
    if (j.contains("M")) d.M = j["M"].get<std::size_t>();
    if (j.contains("count")) d.count = j["count"].get<int>();
    if (j.contains("strategy"))
        d.strategy = strategy_from_string(j["strategy"].get<std::string>());
    if (j.contains("quadrature"))
        d.quadrature = quadrature_from_string(j["quadrature"].get<std::string>());
    if (j.contains("index_offset")) d.index_offset = j["index_offset"].get<int>();
    if (j.contains("window")) {
        const auto& w = j["window"];
        if (!w.is_array() || w.size() != 4)
            fail("defaults.window: expected [re_lo, re_hi, im_lo, im_hi]");
        Window win;
        win.re_lo = get_number(w[0], "window");
        win.re_hi = get_number(w[1], "window");
        win.im_lo = get_number(w[2], "window");
        win.im_hi = get_number(w[3], "window");
        d.window = win;
    }
    return d;
}

ProblemFlags parse_flags(const njson& j) {
    ProblemFlags f;
    reject_unknown(j, {"self_adjoint", "endpoint_cap", "p_vanishes_at_endpoints"},
                   "flags");
    if (j.contains("self_adjoint")) f.self_adjoint = j["self_adjoint"].get<bool>();
    if (j.contains("endpoint_cap"))
        f.endpoint_cap = get_number(j["endpoint_cap"], "flags.endpoint_cap");
    if (j.contains("p_vanishes_at_endpoints"))
        f.p_vanishes_at_endpoints = j["p_vanishes_at_endpoints"].get<bool>();
    return f;
}

bool finite_c(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

// Non-finite samples are legal only at the interval ends, where they are
// replaced by +-cap along the phase of the neighbouring sample.
void apply_cap(SampledFunction& y, double cap, bool& capped,
               const std::string& name) {
    const std::size_t m = y.size() - 1;
    for (std::size_t i = 1; i < m; ++i)
        if (!finite_c(y[i]))
            fail(name + ": non-finite sample at interior node " + std::to_string(i));
    for (std::size_t idx : {std::size_t(0), m}) {
        cplx v = y[idx];
        if (finite_c(v) && std::abs(v) <= cap) continue;
        cplx nb = y[idx == 0 ? 1 : m - 1];
        cplx phase = (finite_c(nb) && std::abs(nb) > 0.0) ? nb / std::abs(nb)
                                                         : cplx(1.0, 0.0);
        y[idx] = cap * phase;
        capped = true;
    }
}

// Piece index for a node: boundary nodes belong to the piece on their left.
std::size_t piece_of(double x, const std::vector<double>& breaks, double tol) {
    std::size_t k = 0;
    for (double bp : breaks)
        if (bp < x - tol) ++k;
    return k;
}

SampledFunction sample_coef(const CoefficientSpec& c, const Grid& g,
                            const std::vector<double>& breaks, SeamMap& seams,
                            const std::string& where) {
    if (c.empty()) fail(where + ": missing coefficient");
    const double tol = 1e-12 * (g.b - g.a);
    SampledFunction out(g.size());
    if (c.pieces.size() == 1) {
        out = eval_on_nodes(c.pieces[0], g);
        return out;
    }
    if (c.pieces.size() != breaks.size() + 1)
        fail(where + ": pieces count must be breakpoints + 1");
    for (std::size_t i = 0; i < g.size(); ++i) {
        std::size_t k = piece_of(g.nodes[i], breaks, tol);
        out[i] = eval_expression(c.pieces[k], g.nodes[i]);
    }
    // right-limit values at the interior joints
    for (std::size_t bi = 0; bi < breaks.size(); ++bi) {
        double bp = breaks[bi];
        std::size_t ni = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < g.size(); ++i) {
            double d = std::abs(g.nodes[i] - bp);
            if (d < best) { best = d; ni = i; }
        }
        if (best > tol) fail(where + ": breakpoint is not a grid node");
        seams[ni] = eval_expression(c.pieces[bi + 1], bp);
    }
    return out;
}

std::vector<cplx> eval_bc_poly(const std::vector<Expr>& poly,
                               const std::string& where) {
    std::vector<cplx> out;
    out.reserve(poly.size());
    for (const auto& e : poly) {
        try {
            out.push_back(eval_constant(e));
        } catch (const ExprError& err) {
            fail(where + ": " + err.what());
        }
    }
    while (out.size() > 1 && std::abs(out.back()) == 0.0) out.pop_back();
    if (out.size() == 1 && std::abs(out[0]) == 0.0) out.clear();
    return out;
}

} // namespace

Strategy strategy_from_string(const std::string& s) {
    if (s == "regular") return Strategy::regular;
    if (s == "determinant") return Strategy::determinant;
    if (s == "darboux") return Strategy::darboux;
    if (s == "zs") return Strategy::zs;
    fail("unknown strategy \"" + s +
         "\" (expected regular, determinant, darboux or zs)");
}

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::regular: return "regular";
        case Strategy::determinant: return "determinant";
        case Strategy::darboux: return "darboux";
        case Strategy::zs: return "zs";
    }
    return "regular";
}

GridKind quadrature_from_string(const std::string& s) {
    if (s == "newton-cotes") return GridKind::uniform;
    if (s == "clenshaw-curtis") return GridKind::chebyshev;
    fail("unknown quadrature \"" + s +
         "\" (expected newton-cotes or clenshaw-curtis)");
}

std::string to_string(GridKind k) {
    return k == GridKind::uniform ? "newton-cotes" : "clenshaw-curtis";
}

ProblemDescription load_problem_text(const std::string& json_text) {
    njson j;
    try {
        j = njson::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        fail(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) fail("problem document must be a JSON object");
    if (!j.contains("kind")) fail("missing \"kind\"");

    ProblemDescription d;
    std::string kind = j["kind"].get<std::string>();
    if (j.contains("name")) d.name = j["name"].get<std::string>();
    if (j.contains("defaults")) d.defaults = parse_defaults(j["defaults"]);
    if (j.contains("flags")) d.flags = parse_flags(j["flags"]);
    if (j.contains("x0")) d.defaults.x0 = get_number(j["x0"], "x0");

    if (kind == "zakharov_shabat") {
        d.kind = ProblemDescription::zakharov_shabat;
        reject_unknown(j, {"kind", "name", "truncation", "P", "Q", "flags",
                           "defaults", "x0"},
                       "document");
        if (!j.contains("truncation") || !j["truncation"].is_array() ||
            j["truncation"].size() != 2)
            fail("zakharov_shabat needs \"truncation\": [-L, L]");
        d.a = get_number(j["truncation"][0], "truncation");
        d.b = get_number(j["truncation"][1], "truncation");
        if (!(d.a < d.b)) fail("truncation must satisfy a < b");
        if (std::abs(d.a + d.b) > 1e-12 * (d.b - d.a))
            fail("truncation interval must be symmetric about 0");
        if (!j.contains("P") || !j.contains("Q"))
            fail("zakharov_shabat needs potentials P and Q");
        d.zs_P = parse_named(j["P"].get<std::string>(), "P");
        d.zs_Q = parse_named(j["Q"].get<std::string>(), "Q");
        return d;
    }
    if (kind != "pencil") fail("kind must be \"pencil\" or \"zakharov_shabat\"");

    d.kind = ProblemDescription::pencil;
    reject_unknown(j,
                   {"kind", "name", "interval", "breakpoints", "p", "q", "terms",
                    "boundary", "flags", "seed_basis", "defaults", "x0"},
                   "document");
    if (!j.contains("interval") || !j["interval"].is_array() ||
        j["interval"].size() != 2)
        fail("pencil needs \"interval\": [a, b]");
    d.a = get_number(j["interval"][0], "interval");
    d.b = get_number(j["interval"][1], "interval");
    if (!(d.a < d.b)) fail("interval must satisfy a < b");
    if (j.contains("breakpoints")) {
        for (const auto& bp : j["breakpoints"]) {
            double v = get_number(bp, "breakpoints");
            if (!(v > d.a && v < d.b)) fail("breakpoints must lie inside the interval");
            d.breakpoints.push_back(v);
        }
        std::sort(d.breakpoints.begin(), d.breakpoints.end());
    }
    if (!j.contains("p") || !j.contains("q")) fail("pencil needs p and q");
    d.p = parse_coef(j["p"], "p");
    d.q = parse_coef(j["q"], "q");
    if (!j.contains("terms") || !j["terms"].is_array() || j["terms"].empty())
        fail("pencil needs a non-empty \"terms\" array");
    for (const auto& t : j["terms"]) {
        if (!t.is_object()) fail("each term must be an object");
        reject_unknown(t, {"r", "s"}, "terms[]");
        if (!t.contains("r")) fail("each term needs r");
        ProblemDescription::TermSpec ts;
        ts.r = parse_coef(t["r"], "terms[].r");
        if (t.contains("s")) ts.s = parse_coef(t["s"], "terms[].s");
        d.terms.push_back(std::move(ts));
    }
    if (!j.contains("boundary") || !j["boundary"].is_object())
        fail("pencil needs \"boundary\"");
    reject_unknown(j["boundary"], {"left", "right"}, "boundary");
    if (!j["boundary"].contains("left") || !j["boundary"].contains("right"))
        fail("boundary needs left and right");
    d.left = parse_bc(j["boundary"]["left"], "boundary.left");
    d.right = parse_bc(j["boundary"]["right"], "boundary.right");
    if (j.contains("seed_basis")) {
        const auto& s = j["seed_basis"];
        reject_unknown(s, {"f", "g", "pfp", "pgp"}, "seed_basis");
        for (const char* k : {"f", "g", "pfp", "pgp"})
            if (!s.contains(k)) fail(std::string("seed_basis needs ") + k);
        ProblemDescription::SeedSpec seed;
        seed.f = parse_named(s["f"].get<std::string>(), "seed_basis.f");
        seed.g = parse_named(s["g"].get<std::string>(), "seed_basis.g");
        seed.pfp = parse_named(s["pfp"].get<std::string>(), "seed_basis.pfp");
        seed.pgp = parse_named(s["pgp"].get<std::string>(), "seed_basis.pgp");
        d.seed = seed;
    }
    return d;
}

ProblemDescription load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open problem file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_problem_text(ss.str());
}

namespace {

njson coef_to_json(const CoefficientSpec& c) {
    if (c.pieces.size() == 1) return njson(c.pieces[0].source);
    njson arr = njson::array();
    for (const auto& e : c.pieces) arr.push_back(e.source);
    njson obj;
    obj["pieces"] = arr;
    return obj;
}

njson poly_to_json(const std::vector<Expr>& poly) {
    njson arr = njson::array();
    for (const auto& e : poly) arr.push_back(e.source);
    return arr;
}

} // namespace

std::string save_problem(const ProblemDescription& d) {
    njson j;
    j["kind"] = d.kind == ProblemDescription::pencil ? "pencil" : "zakharov_shabat";
    if (!d.name.empty()) j["name"] = d.name;
    if (d.kind == ProblemDescription::zakharov_shabat) {
        j["truncation"] = {d.a, d.b};
        j["P"] = d.zs_P.source;
        j["Q"] = d.zs_Q.source;
    } else {
        j["interval"] = {d.a, d.b};
        if (!d.breakpoints.empty()) j["breakpoints"] = d.breakpoints;
        j["p"] = coef_to_json(d.p);
        j["q"] = coef_to_json(d.q);
        njson terms = njson::array();
        for (const auto& t : d.terms) {
            njson obj;
            obj["r"] = coef_to_json(t.r);
            if (!t.s.empty()) obj["s"] = coef_to_json(t.s);
            terms.push_back(obj);
        }
        j["terms"] = terms;
        njson bc;
        bc["left"] = {{"alpha", poly_to_json(d.left.alpha)},
                      {"beta", poly_to_json(d.left.beta)}};
        bc["right"] = {{"alpha", poly_to_json(d.right.alpha)},
                       {"beta", poly_to_json(d.right.beta)}};
        j["boundary"] = bc;
        if (d.seed) {
            j["seed_basis"] = {{"f", d.seed->f.source},
                               {"g", d.seed->g.source},
                               {"pfp", d.seed->pfp.source},
                               {"pgp", d.seed->pgp.source}};
        }
    }
    njson flags;
    if (d.flags.self_adjoint) flags["self_adjoint"] = true;
    if (d.flags.endpoint_cap != 1e8) flags["endpoint_cap"] = d.flags.endpoint_cap;
    if (d.flags.p_vanishes_at_endpoints) flags["p_vanishes_at_endpoints"] = true;
    if (!flags.empty()) j["flags"] = flags;
    if (d.defaults.x0) j["x0"] = *d.defaults.x0;
    njson defs;
    if (d.defaults.N) defs["N"] = *d.defaults.N;
    if (d.defaults.M) defs["M"] = *d.defaults.M;
    if (d.defaults.count) defs["count"] = *d.defaults.count;
    if (d.defaults.strategy) defs["strategy"] = to_string(*d.defaults.strategy);
    if (d.defaults.window) {
        const Window& w = *d.defaults.window;
        defs["window"] = {w.re_lo, w.re_hi, w.im_lo, w.im_hi};
    }
    if (d.defaults.quadrature) defs["quadrature"] = to_string(*d.defaults.quadrature);
    if (d.defaults.index_offset != 0) defs["index_offset"] = d.defaults.index_offset;
    if (!defs.empty()) j["defaults"] = defs;
    return j.dump(2) + "\n";
}

SpectralProblem materialize(const ProblemDescription& d, std::size_t M,
                            std::optional<double> x0, GridKind kind) {
    if (d.kind != ProblemDescription::pencil)
        fail("materialize expects a pencil problem (use materialize_zs)");
    double anchor = x0 ? *x0 : (d.defaults.x0 ? *d.defaults.x0 : d.a);
    if (!(anchor >= d.a && anchor <= d.b)) fail("x0 must lie in the interval");

    SpectralProblem sp;
    if (kind == GridKind::uniform) {
        sp.grid = make_uniform_grid(d.a, d.b, M, anchor, d.breakpoints);
    } else {
        if (!d.breakpoints.empty())
            fail("clenshaw-curtis quadrature does not support breakpoints");
        sp.grid = make_chebyshev_grid(d.a, d.b, M, anchor);
    }
    sp.flags = d.flags;
    sp.p = sample_coef(d.p, sp.grid, d.breakpoints, sp.p_seams, "p");
    sp.q = sample_coef(d.q, sp.grid, d.breakpoints, sp.q_seams, "q");
    apply_cap(sp.p, d.flags.endpoint_cap, sp.flags.capped, "p");
    apply_cap(sp.q, d.flags.endpoint_cap, sp.flags.capped, "q");
    for (std::size_t t = 0; t < d.terms.size(); ++t) {
        PencilTerm term;
        SeamMap rs, ss;
        term.r = sample_coef(d.terms[t].r, sp.grid, d.breakpoints, rs,
                             "terms[" + std::to_string(t) + "].r");
        apply_cap(term.r, d.flags.endpoint_cap, sp.flags.capped, "r");
        if (!d.terms[t].s.empty()) {
            term.s = sample_coef(d.terms[t].s, sp.grid, d.breakpoints, ss,
                                 "terms[" + std::to_string(t) + "].s");
            apply_cap(term.s, d.flags.endpoint_cap, sp.flags.capped, "s");
        }
        sp.terms.push_back(std::move(term));
        sp.r_seams.push_back(std::move(rs));
        sp.s_seams.push_back(std::move(ss));
    }
    const std::size_t m = sp.grid.size() - 1;
    if (std::abs(sp.p[0]) < 1e-300 || std::abs(sp.p[m]) < 1e-300)
        sp.flags.p_vanishes_at_endpoints = true;
    if (std::abs(sp.p[sp.grid.x0_index]) < 1e-300)
        fail("p vanishes at the expansion point x0");
    sp.left.alpha = eval_bc_poly(d.left.alpha, "boundary.left.alpha");
    sp.left.beta = eval_bc_poly(d.left.beta, "boundary.left.beta");
    sp.right.alpha = eval_bc_poly(d.right.alpha, "boundary.right.alpha");
    sp.right.beta = eval_bc_poly(d.right.beta, "boundary.right.beta");
    if (sp.left.alpha.empty() && sp.left.beta.empty())
        fail("left boundary condition is identically zero");
    if (sp.right.alpha.empty() && sp.right.beta.empty())
        fail("right boundary condition is identically zero");
    if (d.seed) {
        SeedPair seed;
        seed.f = eval_on_nodes(d.seed->f, sp.grid);
        seed.g = eval_on_nodes(d.seed->g, sp.grid);
        seed.pfp = eval_on_nodes(d.seed->pfp, sp.grid);
        seed.pgp = eval_on_nodes(d.seed->pgp, sp.grid);
        sp.seed = std::move(seed);
    }
    return sp;
}

ZakharovShabatProblem materialize_zs(const ProblemDescription& d, std::size_t M,
                                     std::optional<double> x0, GridKind kind) {
    if (d.kind != ProblemDescription::zakharov_shabat)
        fail("materialize_zs expects a zakharov_shabat problem");
    double anchor = x0 ? *x0 : (d.defaults.x0 ? *d.defaults.x0 : d.a);
    if (!(anchor >= d.a && anchor <= d.b)) fail("x0 must lie in the truncation");
    ZakharovShabatProblem zs;
    zs.half_width = d.b;
    if (kind == GridKind::uniform)
        zs.grid = make_uniform_grid(d.a, d.b, M, anchor, {});
    else
        zs.grid = make_chebyshev_grid(d.a, d.b, M, anchor);
    zs.P = eval_on_nodes(d.zs_P, zs.grid);
    zs.Q = eval_on_nodes(d.zs_Q, zs.grid);
    for (std::size_t i = 0; i < zs.grid.size(); ++i) {
        if (!finite_c(zs.P[i]) || !finite_c(zs.Q[i]))
            fail("zakharov_shabat potentials must be finite on the truncation");
        if (std::abs(zs.Q[i]) < 1e-300)
            fail("Q must not vanish on the truncation interval");
    }
    return zs;
}

SpectralProblem zs_to_pencil(const ZakharovShabatProblem& zs) {
    const std::size_t n = zs.grid.size();
    SpectralProblem sp;
    sp.grid = zs.grid;
    sp.p.resize(n);
    sp.q = zs.P;
    PencilTerm t1, t2;
    t1.r.resize(n);
    t2.r.resize(n);
    SampledFunction Qp = derivative_samples(zs.grid, zs.Q);
    for (std::size_t i = 0; i < n; ++i) {
        sp.p[i] = 1.0 / zs.Q[i];
        t1.r[i] = Qp[i] / (zs.Q[i] * zs.Q[i]);
        t2.r[i] = sp.p[i];
    }
    sp.terms.push_back(std::move(t1));
    sp.terms.push_back(std::move(t2));
    sp.r_seams.resize(2);
    sp.s_seams.resize(2);
    // Jost conditions: u(-L) = 0 and u'(L) + lam u(L) = 0, the latter written
    // as lam p(L) u + (p u') = 0.
    sp.left.alpha = {cplx(1.0, 0.0)};
    sp.right.alpha = {cplx(0.0, 0.0), sp.p[n - 1]};
    sp.right.beta = {cplx(1.0, 0.0)};
    sp.flags.self_adjoint = false;
    sp.flags.finite_spectrum = true;
    return sp;
}

namespace {

struct BuiltinDef {
    const char* name;
    const char* text;
};

const BuiltinDef kBuiltins[] = {
    {"dirichlet_free", R"json({
  "kind": "pencil",
  "name": "dirichlet_free",
  "interval": [0, 3.141592653589793],
  "p": "1",
  "q": "0",
  "terms": [{"r": "-1"}],
  "boundary": {
    "left":  {"alpha": ["1"], "beta": ["0"]},
    "right": {"alpha": ["1"], "beta": ["0"]}
  },
  "flags": {"self_adjoint": true},
  "seed_basis": {"f": "1", "g": "1+x", "pfp": "0", "pgp": "1"},
  "x0": 0,
  "defaults": {"N": 40, "M": 1000, "count": 10, "strategy": "regular", "index_offset": 1}
})json"},
    {"paine2", R"json({
  "kind": "pencil",
  "name": "paine2",
  "interval": [0, 3.141592653589793],
  "p": "1",
  "q": "-1/(x+0.1)^2",
  "terms": [{"r": "-1"}],
  "boundary": {
    "left":  {"alpha": ["1"], "beta": ["0"]},
    "right": {"alpha": ["1"], "beta": ["0"]}
  },
  "flags": {"self_adjoint": true},
  "x0": 1.5707963267948966,
  "defaults": {"N": 100, "M": 10000, "count": 20, "strategy": "determinant", "index_offset": 1}
})json"},
    {"pryce9", R"json({
  "kind": "pencil",
  "name": "pryce9",
  "interval": [-1, 1],
  "p": "1/sqrt(1-x^2)",
  "q": "0",
  "terms": [{"r": "-1/sqrt(1-x^2)"}],
  "boundary": {
    "left":  {"alpha": ["1"], "beta": ["0"]},
    "right": {"alpha": ["1"], "beta": ["0"]}
  },
  "flags": {"self_adjoint": true},
  "seed_basis": {"f": "1", "g": "1+(x*sqrt(1-x^2)+arcsin(x))/2", "pfp": "0", "pgp": "1"},
  "x0": 0,
  "defaults": {"N": 100, "M": 19999, "count": 1, "strategy": "determinant"}
})json"},
    {"pryce10", R"json({
  "kind": "pencil",
  "name": "pryce10",
  "interval": [-1, 1],
  "p": "sqrt(1-x^2)",
  "q": "0",
  "terms": [{"r": "-1"}],
  "boundary": {
    "left":  {"alpha": ["0"], "beta": ["1"]},
    "right": {"alpha": ["1"], "beta": ["0"]}
  },
  "flags": {"self_adjoint": true},
  "seed_basis": {"f": "1", "g": "1+arcsin(x)", "pfp": "0", "pgp": "1"},
  "x0": 0,
  "defaults": {"N": 100, "M": 19999, "count": 1, "strategy": "determinant"}
})json"},
    {"pryce11", R"json({
  "kind": "pencil",
  "name": "pryce11",
  "interval": [0, 4],
  "p": "1",
  "q": "-ln(x)",
  "terms": [{"r": "-1"}],
  "boundary": {
    "left":  {"alpha": ["1"], "beta": ["0"]},
    "right": {"alpha": ["1"], "beta": ["0"]}
  },
  "flags": {"self_adjoint": true},
  "x0": 2,
  "defaults": {"N": 100, "M": 20000, "count": 25, "strategy": "determinant",
               "window": [-0.5, 1e308, -1e308, 1e308]}
})json"},
    {"pencil_at33", R"json({
  "kind": "pencil",
  "name": "pencil_at33",
  "interval": [0, 1],
  "p": "1",
  "q": "-x^2",
  "terms": [{"r": "-1", "s": "-2i"}],
  "boundary": {
    "left":  {"alpha": ["0", "i"], "beta": ["1"]},
    "right": {"alpha": ["0", "i"], "beta": ["1"]}
  },
  "flags": {"self_adjoint": true},
  "x0": 0,
  "defaults": {"N": 100, "M": 10001, "count": 5, "strategy": "regular",
               "window": [-4.8, 6.8, -1, 1], "index_offset": -2}
})json"},
    {"pencil_at31", R"json({
  "kind": "pencil",
  "name": "pencil_at31",
  "interval": [0, 1],
  "breakpoints": [0.5],
  "p": "1",
  "q": {"pieces": ["-1", "0"]},
  "terms": [{"r": "-1", "s": "-2i"}],
  "boundary": {
    "left":  {"alpha": ["1"], "beta": ["0"]},
    "right": {"alpha": ["0", "i"], "beta": ["1"]}
  },
  "flags": {"self_adjoint": true},
  "x0": 0,
  "defaults": {"N": 100, "M": 10001, "count": 5, "strategy": "regular",
               "window": [-3.5, 11.5, -1, 1], "index_offset": -1}
})json"},
    {"string", R"json({
  "kind": "pencil",
  "name": "string",
  "interval": [0, 1],
  "p": "1",
  "q": "0",
  "terms": [{"r": "i*x"}, {"r": "-1"}],
  "boundary": {
    "left":  {"alpha": ["1"], "beta": ["0"]},
    "right": {"alpha": ["0", "i", "-1"], "beta": ["1"]}
  },
  "seed_basis": {"f": "1", "g": "1+x", "pfp": "0", "pgp": "1"},
  "x0": 0,
  "defaults": {"N": 100, "M": 10001, "count": 5, "strategy": "regular",
               "window": [0, 14, -2, 2], "index_offset": 1}
})json"},
    {"bronski", R"json({
  "kind": "zakharov_shabat",
  "name": "bronski",
  "truncation": [-5, 5],
  "P": "(-i/0.3)*sech(2*x)*exp(i*sech(2*x)/0.3)",
  "Q": "(i/0.3)*sech(2*x)*exp(-i*sech(2*x)/0.3)",
  "x0": 0,
  "defaults": {"N": 100, "M": 5000, "count": 2, "strategy": "determinant",
               "window": [0.05, 2.2, -2.2, 2.2]}
})json"},
};

} // namespace

std::vector<std::string> builtin_names() {
    std::vector<std::string> out;
    for (const auto& b : kBuiltins) out.push_back(b.name);
    return out;
}

ProblemDescription builtin(const std::string& name) {
    for (const auto& b : kBuiltins)
        if (name == b.name) return load_problem_text(b.text);
    std::string msg = "unknown builtin problem \"" + name + "\"; available:";
    for (const auto& b : kBuiltins) msg += std::string(" ") + b.name;
    fail(msg);
}

} // namespace spps
