#include "spps/spectrum.hpp"

#include <algorithm>
#include <cmath>

namespace spps {

namespace {

cplx value_at(const SampledFunction& y, const SeamMap& seams, std::size_t k) {
    auto it = seams.find(k);
    return it != seams.end() ? it->second : y[k];
}

std::vector<cplx> negate(std::vector<cplx> v) {
    for (auto& c : v) c = -c;
    return v;
}

std::vector<cplx> scale(std::vector<cplx> v, cplx s) {
    for (auto& c : v) c *= s;
    return v;
}

// alpha*U + beta*PU as a polynomial in (lam - lam0)
std::vector<cplx> boundary_form(const std::vector<cplx>& alpha,
                                const std::vector<cplx>& beta,
                                const std::vector<cplx>& U,
                                const std::vector<cplx>& PU) {
    return polyadd(polymul(alpha, U), polymul(beta, PU));
}

} // namespace

double empirical_trust_radius(const std::vector<cplx>& coeffs) {
    const std::size_t D = coeffs.size();
    if (D < 2) return 0.0;
    std::vector<double> lg(D);
    bool any = false;
    for (std::size_t k = 0; k < D; ++k) {
        double a = std::abs(coeffs[k]);
        lg[k] = a > 0.0 ? std::log(a) : -1e300;
        any |= a > 0.0;
    }
    if (!any) return 0.0;
    const std::size_t tail = D >= 5 ? D - 5 : 0;
    auto ok = [&](double rr) {
        double lr = std::log(rr);
        double mx = -1e300, mtail = -1e300;
        for (std::size_t k = 0; k < D; ++k) {
            if (lg[k] <= -1e299) continue;
            double t = lg[k] + k * lr;
            mx = std::max(mx, t);
            if (k >= tail) mtail = std::max(mtail, t);
        }
        return mtail <= std::log(1e-3) + mx;
    };
    double lo = 1e-3, hi = 1e3;
    if (!ok(lo)) return 0.0;
    for (int it = 0; it < 60; ++it) {
        double mid = std::sqrt(lo * hi);
        if (ok(mid)) lo = mid;
        else hi = mid;
    }
    return lo;
}

SolutionBasis particular_solutions_at(const SpectralProblem& pr, cplx lam0) {
    if (lam0 == cplx(0.0, 0.0) && pr.seed) return basis_from_seed(pr);
    ShiftedPencil sh = shift_pencil(pr, lam0);
    // seams of the recentered zero-order coefficient, for the bootstrap weights
    SeamMap q_seams, p_seams;
    {
        std::map<std::size_t, bool> nodes;
        for (const auto& [k, v] : pr.q_seams) nodes[k] = true;
        for (const auto& m : pr.r_seams)
            for (const auto& [k, v] : m) nodes[k] = true;
        for (const auto& [node, u] : nodes) {
            cplx rsum = 0.0, lp = lam0;
            for (std::size_t k = 0; k < pr.terms.size(); ++k) {
                rsum += lp * value_at(pr.terms[k].r, pr.r_seams[k], node);
                lp *= lam0;
            }
            q_seams[node] =
                sh.P[node] * (value_at(pr.q, pr.q_seams, node) - rsum);
        }
        for (const auto& [node, v] : pr.p_seams)
            p_seams[node] = sh.P[node] * v;
    }
    SolutionBasis b = bootstrap_basis(pr.grid, sh.p, sh.q,
                                      q_seams.empty() ? nullptr : &q_seams,
                                      p_seams.empty() ? nullptr : &p_seams);
    // bootstrap ran in the gauge-weighted problem; return to original p units
    bool gauged = false;
    for (cplx v : sh.P)
        if (v != cplx(1.0, 0.0)) { gauged = true; break; }
    if (gauged) {
        for (std::size_t i = 0; i < b.pfp.size(); ++i) {
            b.pfp[i] /= sh.P[i];
            b.pgp[i] /= sh.P[i];
        }
        cplx denom = b.pgp[pr.grid.x0_index] - b.pfp[pr.grid.x0_index];
        b.rho = 1.0 / denom;
    }
    return b;
}

namespace {

StageArtifacts build_stage_darboux(const SpectralProblem& pr, cplx lam0,
                                   const SolutionBasis& basis, int N) {
    if (pr.terms.size() != 1 || pr.terms[0].has_s())
        throw ProblemError(
            "darboux strategy supports only single-term problems without u' terms");
    if (!pr.left.beta.empty() || !pr.right.beta.empty() ||
        pr.left.alpha.size() != 1 || pr.right.alpha.size() != 1)
        throw ProblemError(
            "darboux strategy supports only Dirichlet boundary conditions");
    ShiftedPencil sh = shift_pencil(pr, lam0);
    const Grid& g = pr.grid;
    const std::size_t n = g.size(), ib = n - 1;
    cplx rho = 1.0 / (basis.pgp[g.x0_index] - basis.pfp[g.x0_index]);
    OriginalPowers A = original_powers(g, basis.f, pr.p, sh.terms[0].r, 2 * N + 1);
    OriginalPowers B = original_powers(g, basis.g, pr.p, sh.terms[0].r, 2 * N + 1);
    std::vector<cplx> U1a, U1b, U2a, U2b;
    for (int k = 0; k <= N; ++k) {
        for (std::size_t idx : {std::size_t(0), ib}) {
            cplx u1 = basis.f[idx] * B.X[2 * k][idx];
            if (k >= 1)
                u1 -= rho * (basis.f[idx] * B.Xtil[2 * k - 1][idx] -
                             basis.g[idx] * A.Xtil[2 * k - 1][idx]);
            cplx u2 = rho * (basis.g[idx] * A.X[2 * k][idx] -
                             basis.f[idx] * B.X[2 * k][idx]);
            if (idx == 0) {
                U1a.push_back(u1);
                U2a.push_back(u2);
            } else {
                U1b.push_back(u1);
                U2b.push_back(u2);
            }
        }
    }
    StageArtifacts out;
    out.phi.center = lam0;
    out.phi.strategy = Strategy::darboux;
    out.phi.coeffs = polyadd(polymul(U1a, U2b), negate(polymul(U2a, U1b)));
    out.phi.trust_radius = empirical_trust_radius(out.phi.coeffs);
    return out;
}

} // namespace

StageArtifacts build_stage(const SpectralProblem& pr, cplx lam0,
                           const SolutionBasis& basis, int N, Strategy strategy) {
    if (strategy == Strategy::darboux)
        return build_stage_darboux(pr, lam0, basis, N);

    const Grid& g = pr.grid;
    const std::size_t n = g.size(), x0i = g.x0_index, ib = n - 1;
    if (strategy == Strategy::regular && x0i != 0)
        throw ProblemError("regular strategy requires x0 at the left endpoint");
    if (strategy == Strategy::zs && x0i != 0)
        throw ProblemError("zs strategy requires x0 at the left endpoint");

    ShiftedPencil sh = shift_pencil(pr, lam0);
    const int Nt = (int)pr.terms.size();

    SampledFunction fp(n), gp(n);
    for (std::size_t i = 0; i < n; ++i) {
        fp[i] = basis.pfp[i] / pr.p[i];
        gp[i] = basis.pgp[i] / pr.p[i];
    }
    std::vector<SampledFunction> Rf(Nt), Gf(Nt);
    std::vector<SeamMap> Rf_seams(Nt), Gf_seams(Nt);
    for (int k = 0; k < Nt; ++k) {
        Rf[k].resize(n);
        Gf[k].resize(n);
        const auto& t = sh.terms[k];
        for (std::size_t i = 0; i < n; ++i) {
            Rf[k][i] = t.r[i] * basis.f[i];
            Gf[k][i] = t.r[i] * basis.g[i];
            if (t.has_s()) {
                Rf[k][i] += t.s[i] * fp[i];
                Gf[k][i] += t.s[i] * gp[i];
            }
        }
        std::map<std::size_t, bool> nodes;
        for (const auto& [nd, v] : sh.r_seams[k]) nodes[nd] = true;
        for (const auto& [nd, v] : sh.s_seams[k]) nodes[nd] = true;
        for (const auto& [nd, u] : nodes) {
            cplx rv = value_at(t.r, sh.r_seams[k], nd);
            cplx sv = t.has_s() ? value_at(t.s, sh.s_seams[k], nd) : cplx(0.0, 0.0);
            Rf_seams[k][nd] = rv * basis.f[nd] + sv * fp[nd];
            Gf_seams[k][nd] = rv * basis.g[nd] + sv * gp[nd];
        }
    }

    SolutionBasis b2 = basis;
    b2.rho = 1.0 / (basis.pgp[x0i] - basis.pfp[x0i]);

    PowerTable table;
    bool plain_sl = Nt == 1 && !pr.terms[0].has_s();
    if (plain_sl) {
        table = modified_powers(g, b2, sh.terms[0].r, N,
                                sh.r_seams[0].empty() ? nullptr : &sh.r_seams[0]);
    } else {
        table = pencil_powers(g, b2, Rf, Gf, N, &Rf_seams, &Gf_seams);
    }

    SampledFunction pfp_w(n), pgp_w(n);
    for (std::size_t i = 0; i < n; ++i) {
        pfp_w[i] = sh.P[i] * basis.pfp[i];
        pgp_w[i] = sh.P[i] * basis.pgp[i];
    }
    StageArtifacts out;
    out.series = assemble_series(table, b2, pfp_w, pgp_w, lam0, x0i, sh.P);
    table = PowerTable{};

    BoundConstants bc = bound_constants(b2, Rf, Gf);
    out.phi.center = lam0;
    out.phi.strategy = strategy;

    const SeriesSolution& s = out.series;
    auto at_end = [&](const std::vector<SampledFunction>& rows, std::size_t idx,
                      bool ungauge) {
        std::vector<cplx> col = series_at(rows, idx);
        if (ungauge)
            for (auto& v : col) v /= s.P[idx];
        return col;
    };

    if (strategy == Strategy::regular) {
        std::vector<cplx> aA = recenter_poly(pr.left.alpha, lam0);
        std::vector<cplx> bA = recenter_poly(pr.left.beta, lam0);
        std::vector<cplx> aB = recenter_poly(pr.right.alpha, lam0);
        std::vector<cplx> bB = recenter_poly(pr.right.beta, lam0);
        cplx heff = basis.pfp[0];
        std::vector<cplx> cA = bA;
        std::vector<cplx> cB = negate(polyadd(aA, scale(bA, heff)));
        std::vector<cplx> U1 = at_end(s.u1, ib, false);
        std::vector<cplx> U2 = at_end(s.u2, ib, false);
        std::vector<cplx> P1 = at_end(s.pu1, ib, true);
        std::vector<cplx> P2 = at_end(s.pu2, ib, true);
        std::vector<cplx> ub = polyadd(polymul(cA, U1), polymul(cB, U2));
        std::vector<cplx> pub = polyadd(polymul(cA, P1), polymul(cB, P2));
        out.phi.coeffs = polyadd(polymul(aB, ub), polymul(bB, pub));
    } else if (strategy == Strategy::determinant) {
        std::vector<cplx> aA = recenter_poly(pr.left.alpha, lam0);
        std::vector<cplx> bA = recenter_poly(pr.left.beta, lam0);
        std::vector<cplx> aB = recenter_poly(pr.right.alpha, lam0);
        std::vector<cplx> bB = recenter_poly(pr.right.beta, lam0);
        std::vector<cplx> Ea1 = boundary_form(aA, bA, at_end(s.u1, 0, false),
                                              at_end(s.pu1, 0, true));
        std::vector<cplx> Ea2 = boundary_form(aA, bA, at_end(s.u2, 0, false),
                                              at_end(s.pu2, 0, true));
        std::vector<cplx> Eb1 = boundary_form(aB, bB, at_end(s.u1, ib, false),
                                              at_end(s.pu1, ib, true));
        std::vector<cplx> Eb2 = boundary_form(aB, bB, at_end(s.u2, ib, false),
                                              at_end(s.pu2, ib, true));
        out.phi.coeffs =
            polyadd(polymul(Ea1, Eb2), negate(polymul(Ea2, Eb1)));
    } else { // Strategy::zs
        if (pr.left.alpha.size() != 1 || !pr.left.beta.empty() ||
            pr.right.alpha.size() != 2 || std::abs(pr.right.alpha[0]) != 0.0 ||
            pr.right.beta.size() != 1)
            throw ProblemError(
                "zs characteristic form expects Jost-type boundary conditions");
        std::vector<cplx> U2 = at_end(s.u2, ib, false);
        std::vector<cplx> P2 = at_end(s.pu2, ib, true);
        cplx pb = pr.p[ib];
        std::vector<cplx> c(s.N + 2, cplx(0.0, 0.0));
        for (int k = 0; k <= s.N; ++k) {
            c[k] = P2[k] / pb + lam0 * U2[k];
            if (k >= 1) c[k] += U2[k - 1];
        }
        c[s.N + 1] = U2[s.N];
        out.phi.coeffs = std::move(c);
    }

    out.phi.trust_radius = empirical_trust_radius(out.phi.coeffs);
    double span = std::max(g.b - g.x0(), g.x0() - g.a);
    double blog = power_bound_log(PowerFamily::tilde_even, N, span, bc);
    out.phi.bound_radius =
        std::isfinite(blog) ? std::exp((std::log(1e-6) - blog) / N) : 0.0;
    return out;
}

SolveResult solve(const SpectralProblem& pr, const SolveOptions& opt) {
    SolveResult res;
    if (opt.count <= 0) return res;
    const bool sa = pr.flags.self_adjoint;
    const bool outside =
        pr.flags.p_vanishes_at_endpoints || pr.flags.capped;

    auto imag_ok = [&](cplx lam) {
        return !sa ||
               std::abs(lam.imag()) <= 1e-6 * (1.0 + std::abs(lam.real()));
    };
    auto duplicate = [&](cplx lam) {
        for (const auto& e : res.eigenvalues) {
            double s = 1.0 + std::max(std::abs(lam), std::abs(e.lambda));
            if (std::abs(lam - e.lambda) <= 1e-6 * s) return true;
        }
        return false;
    };

    SolutionBasis basis = particular_solutions_at(pr, opt.lam_start);
    cplx lam0 = opt.lam_start;

    // The Darboux path produces one characteristic polynomial per run, and a
    // finite-spectrum problem has nothing to gain from re-expansion, so both
    // take every acceptable root from a single stage.
    if (opt.strategy == Strategy::darboux || pr.flags.finite_spectrum) {
        StageArtifacts st = build_stage(pr, lam0, basis, opt.N, opt.strategy);
        RootResult rr = polynomial_roots(st.phi.coeffs);
        if (!rr.converged)
            res.warnings.push_back("root iteration hit its cap; results may be partial");
        std::vector<cplx> roots = rr.roots;
        std::sort(roots.begin(), roots.end(),
                  [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
        for (cplx z : roots) {
            if ((int)res.eigenvalues.size() >= opt.count) break;
            if (std::abs(z) > st.phi.trust_radius) continue;
            cplx lam = lam0 + z;
            if (!imag_ok(lam) || !opt.window.contains(lam) || duplicate(lam))
                continue;
            EigenvalueEstimate e;
            e.lambda = sa ? cplx(lam.real(), 0.0) : lam;
            e.residual = std::abs(polyval(st.phi.coeffs, z));
            e.center_used = lam0;
            e.outside_theorem_hypotheses = outside;
            res.eigenvalues.push_back(e);
        }
        if ((int)res.eigenvalues.size() < opt.count)
            res.warnings.push_back("found fewer eigenvalues than requested");
    } else {
        // Acceptable roots seen at some stage but not chosen: remembered with
        // the |z| of their most accurate observation, as a last-resort source
        // when both directional phases end early.
        struct Candidate {
            cplx lambda;
            double quality;
            double residual;
        };
        std::vector<Candidate> pool;
        auto pool_note = [&](cplx lam, double q, double resid) {
            for (auto& c : pool) {
                double s = 1.0 + std::max(std::abs(lam), std::abs(c.lambda));
                if (std::abs(lam - c.lambda) <= 1e-6 * s) {
                    if (q < c.quality) c = Candidate{lam, q, resid};
                    return;
                }
            }
            pool.push_back(Candidate{lam, q, resid});
        };

        const SolutionBasis basis0 = basis;
        const double re0 = opt.lam_start.real();
        StageArtifacts st;
        bool last_polished = true;

        // One directional phase: accept the nearest new root on the dir side
        // of the start center, re-expanding at each accepted eigenvalue. Each
        // stage is centered on the previous pick, so its smallest root also
        // refines that pick. Returns true when count is reached.
        auto walk_phase = [&](int dir) {
            for (;;) {
                if ((int)res.eigenvalues.size() >= opt.count) return true;
                st = StageArtifacts{};
                st = build_stage(pr, lam0, basis, opt.N, opt.strategy);
                double mx = 0.0;
                for (cplx c : st.phi.coeffs) mx = std::max(mx, std::abs(c));
                if (mx == 0.0) {
                    res.warnings.push_back(
                        "characteristic function vanished identically");
                    return false;
                }
                RootResult rr = polynomial_roots(st.phi.coeffs);
                if (!rr.converged)
                    res.warnings.push_back("root iteration hit its cap");
                std::vector<cplx> roots = rr.roots;
                std::sort(roots.begin(), roots.end(),
                          [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
                if (!res.eigenvalues.empty() && !roots.empty() &&
                    res.eigenvalues.back().lambda == lam0) {
                    cplx z0 = roots.front();
                    if (std::abs(z0) <= 1e-6 * (1.0 + std::abs(lam0))) {
                        cplx refined = lam0 + z0;
                        if (sa) refined = cplx(refined.real(), 0.0);
                        res.eigenvalues.back().lambda = refined;
                        res.eigenvalues.back().residual =
                            std::abs(polyval(st.phi.coeffs, z0));
                        last_polished = true;
                    }
                }
                bool have = false;
                cplx pick;
                double pick_res = 0.0;
                for (cplx z : roots) {
                    if (std::abs(z) > st.phi.trust_radius) continue;
                    cplx lam = lam0 + z;
                    if (!imag_ok(lam) || !opt.window.contains(lam) ||
                        duplicate(lam))
                        continue;
                    double resid = std::abs(polyval(st.phi.coeffs, z));
                    pool_note(lam, std::abs(z), resid);
                    if (have) continue;
                    if (dir > 0 && lam.real() < re0 - 1e-9) continue;
                    if (dir < 0 && lam.real() > re0 + 1e-9) continue;
                    pick = lam;
                    pick_res = resid;
                    have = true;
                }
                if (!have) return false;
                if (sa) pick = cplx(pick.real(), 0.0);
                EigenvalueEstimate e;
                e.lambda = pick;
                e.residual = pick_res;
                e.center_used = lam0;
                e.outside_theorem_hypotheses = outside;
                res.eigenvalues.push_back(e);
                last_polished = false;
                basis = rebase_basis(st.series, pick);
                lam0 = pick;
            }
        };

        bool reached = walk_phase(+1);
        if (!reached && (int)res.eigenvalues.size() < opt.count) {
            basis = basis0;
            lam0 = opt.lam_start;
            reached = walk_phase(-1);
        }
        while ((int)res.eigenvalues.size() < opt.count) {
            const Candidate* best = nullptr;
            for (const auto& c : pool)
                if (!duplicate(c.lambda) &&
                    (best == nullptr || c.quality < best->quality))
                    best = &c;
            if (best == nullptr) break;
            cplx lam = best->lambda;
            if (sa) lam = cplx(lam.real(), 0.0);
            EigenvalueEstimate e;
            e.lambda = lam;
            e.residual = best->residual;
            e.center_used = opt.lam_start;
            e.outside_theorem_hypotheses = outside;
            res.eigenvalues.push_back(e);
        }
        if ((int)res.eigenvalues.size() < opt.count) {
            res.warnings.push_back(
                "walk stalled after " +
                std::to_string(res.eigenvalues.size()) + " eigenvalues");
        } else if (!last_polished && !res.eigenvalues.empty() &&
                   res.eigenvalues.back().lambda == lam0) {
            st = StageArtifacts{};
            st = build_stage(pr, lam0, basis, opt.N, opt.strategy);
            RootResult rr = polynomial_roots(st.phi.coeffs);
            if (!rr.roots.empty()) {
                cplx z0 = *std::min_element(
                    rr.roots.begin(), rr.roots.end(),
                    [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
                if (std::abs(z0) <= 1e-6 * (1.0 + std::abs(lam0))) {
                    cplx refined = lam0 + z0;
                    if (sa) refined = cplx(refined.real(), 0.0);
                    res.eigenvalues.back().lambda = refined;
                    res.eigenvalues.back().residual =
                        std::abs(polyval(st.phi.coeffs, z0));
                }
            }
        }
    }

    std::stable_sort(res.eigenvalues.begin(), res.eigenvalues.end(),
                     [sa](const EigenvalueEstimate& a, const EigenvalueEstimate& b) {
                         return sa ? a.lambda.real() < b.lambda.real()
                                   : std::abs(a.lambda) < std::abs(b.lambda);
                     });
    for (std::size_t i = 0; i < res.eigenvalues.size(); ++i)
        res.eigenvalues[i].index_hint = opt.index_offset + (int)i;
    return res;
}

} // namespace spps
