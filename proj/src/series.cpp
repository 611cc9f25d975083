#include "spps/series.hpp"

#include <cmath>

namespace spps {

std::vector<cplx> polymul(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<cplx> out(a.size() + b.size() - 1, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

std::vector<cplx> polyadd(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    std::vector<cplx> out(std::max(a.size(), b.size()), cplx(0.0, 0.0));
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

namespace {

double binom(int n, int k) {
    double v = 1.0;
    for (int j = 1; j <= k; ++j) v = v * (n - k + j) / j;
    return v;
}

} // namespace

std::vector<cplx> recenter_poly(const std::vector<cplx>& c, cplx lam0) {
    if (c.empty()) return {};
    const int d = (int)c.size() - 1;
    std::vector<cplx> out(c.size(), cplx(0.0, 0.0));
    for (int j = 0; j <= d; ++j) {
        cplx s = 0.0, lp = 1.0;
        for (int k = j; k <= d; ++k) {
            s += binom(k, j) * c[k] * lp;
            lp *= lam0;
        }
        out[j] = s;
    }
    return out;
}

cplx polyval(const std::vector<cplx>& c, cplx z) {
    cplx out = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) out = out * z + c[k];
    return out;
}

SeriesSolution assemble_series(const PowerTable& t, const SolutionBasis& basis,
                               const SampledFunction& pfp, const SampledFunction& pgp,
                               cplx center, std::size_t x0_index, SampledFunction P) {
    if (!t.full)
        throw ProblemError("series assembly needs full power tables");
    const std::size_t n = basis.f.size();
    const cplx rho = basis.rho;
    SeriesSolution s;
    s.center = center;
    s.N = t.N;
    s.x0_index = x0_index;
    s.P = std::move(P);
    s.u1.reserve(t.N + 1);
    s.u2.reserve(t.N + 1);
    s.pu1.reserve(t.N + 1);
    s.pu2.reserve(t.N + 1);
    for (int k = 0; k <= t.N; ++k) {
        s.u1.push_back(t.Ftil[2 * k]);
        s.u2.push_back(t.F[2 * k + 1]);
        SampledFunction row1(n), row2(n);
        if (k == 0) {
            row1 = pfp;
        } else {
            const SampledFunction &G2k = t.G[2 * k], &Gt1 = t.Gtil[2 * k - 1],
                                  &Ft1 = t.Ftil[2 * k - 1];
            for (std::size_t i = 0; i < n; ++i)
                row1[i] = pfp[i] * G2k[i] -
                          rho * (pfp[i] * Gt1[i] - pgp[i] * Ft1[i]);
        }
        const SampledFunction &F2k = t.F[2 * k], &G2kb = t.G[2 * k];
        for (std::size_t i = 0; i < n; ++i)
            row2[i] = rho * (pgp[i] * F2k[i] - pfp[i] * G2kb[i]);
        s.pu1.push_back(std::move(row1));
        s.pu2.push_back(std::move(row2));
    }
    return s;
}

SampledFunction eval_series(const std::vector<SampledFunction>& rows, cplx dl) {
    const std::size_t n = rows.front().size();
    SampledFunction out(n, cplx(0.0, 0.0));
    for (std::size_t k = rows.size(); k-- > 0;) {
        const SampledFunction& row = rows[k];
        for (std::size_t i = 0; i < n; ++i) out[i] = out[i] * dl + row[i];
    }
    return out;
}

std::vector<cplx> series_at(const std::vector<SampledFunction>& rows,
                            std::size_t node) {
    std::vector<cplx> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(row[node]);
    return out;
}

SolutionBasis rebase_basis(const SeriesSolution& s, cplx lam) {
    const cplx dl = lam - s.center;
    SolutionBasis b;
    b.f = eval_series(s.u1, dl);
    SampledFunction u2v = eval_series(s.u2, dl);
    SampledFunction pu1v = eval_series(s.pu1, dl);
    SampledFunction pu2v = eval_series(s.pu2, dl);
    const std::size_t n = b.f.size();
    b.g.resize(n);
    b.pfp.resize(n);
    b.pgp.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        b.g[i] = b.f[i] + u2v[i];
        b.pfp[i] = pu1v[i] / s.P[i];
        b.pgp[i] = b.pfp[i] + pu2v[i] / s.P[i];
    }
    cplx denom = b.pgp[s.x0_index] - b.pfp[s.x0_index];
    if (std::abs(denom) < 1e-300)
        throw ProblemError("rebased basis degenerates at x0");
    b.rho = 1.0 / denom;
    return b;
}

namespace {

cplx value_at(const SampledFunction& y, const SeamMap& seams, std::size_t k) {
    auto it = seams.find(k);
    return it != seams.end() ? it->second : y[k];
}

} // namespace

ShiftedPencil shift_pencil(const SpectralProblem& pr, cplx lam0) {
    const std::size_t n = pr.p.size();
    const int Nt = (int)pr.terms.size();
    ShiftedPencil out;

    SampledFunction ssum(n, cplx(0.0, 0.0));
    bool any_s = false;
    {
        cplx lp = lam0;
        for (int k = 1; k <= Nt; ++k) {
            const auto& term = pr.terms[k - 1];
            if (term.has_s()) {
                any_s = true;
                for (std::size_t i = 0; i < n; ++i) ssum[i] += lp * term.s[i];
            }
            lp *= lam0;
        }
    }
    double smax = 0.0;
    for (cplx v : ssum) smax = std::max(smax, std::abs(v));
    if (any_s && smax > 0.0) {
        SampledFunction integrand(n);
        for (std::size_t i = 0; i < n; ++i) integrand[i] = ssum[i] / pr.p[i];
        SeamMap seams;
        std::map<std::size_t, bool> nodes;
        for (const auto& [k, v] : pr.p_seams) nodes[k] = true;
        for (const auto& m : pr.s_seams)
            for (const auto& [k, v] : m) nodes[k] = true;
        for (const auto& [node, unused] : nodes) {
            cplx sv = 0.0, lp = lam0;
            for (int k = 1; k <= Nt; ++k) {
                const auto& term = pr.terms[k - 1];
                if (term.has_s())
                    sv += lp * value_at(term.s, pr.s_seams[k - 1], node);
                lp *= lam0;
            }
            seams[node] = sv / value_at(pr.p, pr.p_seams, node);
        }
        SampledFunction I =
            cumulative_integral(pr.grid, integrand, seams.empty() ? nullptr : &seams);
        out.P.resize(n);
        for (std::size_t i = 0; i < n; ++i) out.P[i] = std::exp(-I[i]);
    } else {
        out.P.assign(n, cplx(1.0, 0.0));
    }

    SampledFunction rsum(n, cplx(0.0, 0.0));
    {
        cplx lp = lam0;
        for (int k = 1; k <= Nt; ++k) {
            for (std::size_t i = 0; i < n; ++i) rsum[i] += lp * pr.terms[k - 1].r[i];
            lp *= lam0;
        }
    }
    out.p.resize(n);
    out.q.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.p[i] = out.P[i] * pr.p[i];
        out.q[i] = out.P[i] * (pr.q[i] - rsum[i]);
    }

    out.r_seams.resize(Nt);
    out.s_seams.resize(Nt);
    for (int k = 1; k <= Nt; ++k) {
        PencilTerm term;
        term.r.assign(n, cplx(0.0, 0.0));
        bool s_present = false;
        for (int l = 0; l + k <= Nt; ++l)
            if (pr.terms[k + l - 1].has_s()) s_present = true;
        if (s_present) term.s.assign(n, cplx(0.0, 0.0));
        cplx lp = 1.0;
        for (int l = 0; l + k <= Nt; ++l) {
            cplx c = binom(k + l, l) * lp;
            const auto& src = pr.terms[k + l - 1];
            for (std::size_t i = 0; i < n; ++i) term.r[i] += c * src.r[i];
            if (src.has_s())
                for (std::size_t i = 0; i < n; ++i) term.s[i] += c * src.s[i];
            lp *= lam0;
        }
        for (std::size_t i = 0; i < n; ++i) {
            term.r[i] *= out.P[i];
            if (s_present) term.s[i] *= out.P[i];
        }
        // transformed seam values at the joints of contributing coefficients
        std::map<std::size_t, bool> rnodes, snodes;
        for (int l = 0; l + k <= Nt; ++l) {
            for (const auto& [nd, v] : pr.r_seams[k + l - 1]) rnodes[nd] = true;
            for (const auto& [nd, v] : pr.s_seams[k + l - 1]) snodes[nd] = true;
        }
        for (const auto& [nd, unused] : rnodes) {
            cplx acc = 0.0, lpl = 1.0;
            for (int l = 0; l + k <= Nt; ++l) {
                acc += binom(k + l, l) * lpl *
                       value_at(pr.terms[k + l - 1].r, pr.r_seams[k + l - 1], nd);
                lpl *= lam0;
            }
            out.r_seams[k - 1][nd] = out.P[nd] * acc;
        }
        for (const auto& [nd, unused] : snodes) {
            cplx acc = 0.0, lpl = 1.0;
            for (int l = 0; l + k <= Nt; ++l) {
                const auto& src = pr.terms[k + l - 1];
                if (src.has_s())
                    acc += binom(k + l, l) * lpl *
                           value_at(src.s, pr.s_seams[k + l - 1], nd);
                lpl *= lam0;
            }
            out.s_seams[k - 1][nd] = out.P[nd] * acc;
        }
        out.terms.push_back(std::move(term));
    }
    return out;
}

SampledFunction darboux_potential(const Grid& g, const SampledFunction& f,
                                  const SampledFunction& p,
                                  const SampledFunction& q,
                                  const SampledFunction& r) {
    const std::size_t n = f.size();
    SampledFunction fp = derivative_samples(g, f);
    SampledFunction pr(n);
    for (std::size_t i = 0; i < n; ++i) pr[i] = p[i] * r[i];
    SampledFunction prp = derivative_samples(g, pr);
    SampledFunction out(n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx lf = fp[i] / f[i];
        out[i] = -(q[i] / pr[i] + 2.0 / r[i] * lf * lf +
                   lf / r[i] * prp[i] / pr[i]);
    }
    return out;
}

} // namespace spps
