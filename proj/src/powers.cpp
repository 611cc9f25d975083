#include "spps/powers.hpp"

#include <cmath>

namespace spps {

namespace {

SampledFunction ones(std::size_t n) { return SampledFunction(n, cplx(1.0, 0.0)); }
SampledFunction zeros(std::size_t n) { return SampledFunction(n, cplx(0.0, 0.0)); }

SampledFunction mul(const SampledFunction& a, const SampledFunction& b) {
    SampledFunction out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

void axpy(SampledFunction& y, cplx alpha, const SampledFunction& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

double max_abs(const SampledFunction& y) {
    double m = 0.0;
    for (cplx v : y) m = std::max(m, std::abs(v));
    return m;
}

cplx basis_rho(const SampledFunction& pfp, const SampledFunction& pgp,
               std::size_t x0i) {
    cplx denom = pgp[x0i] - pfp[x0i];
    double scale = std::max({1.0, std::abs(pfp[x0i]), std::abs(pgp[x0i])});
    if (std::abs(denom) <= 1e-12 * scale)
        throw ProblemError("basis solutions are linearly dependent at x0");
    return 1.0 / denom;
}

} // namespace

SolutionBasis basis_from_seed(const SpectralProblem& pr) {
    if (!pr.seed) throw ProblemError("problem has no seed basis");
    SolutionBasis b;
    b.f = pr.seed->f;
    b.g = pr.seed->g;
    b.pfp = pr.seed->pfp;
    b.pgp = pr.seed->pgp;
    const std::size_t i0 = pr.grid.x0_index;
    cplx f0 = b.f[i0], g0 = b.g[i0];
    if (std::abs(f0) < 1e-300 || std::abs(g0) < 1e-300)
        throw ProblemError("seed basis vanishes at x0");
    if (f0 != cplx(1.0, 0.0)) {
        for (auto& v : b.f) v /= f0;
        for (auto& v : b.pfp) v /= f0;
    }
    if (g0 != cplx(1.0, 0.0)) {
        for (auto& v : b.g) v /= g0;
        for (auto& v : b.pgp) v /= g0;
    }
    b.rho = basis_rho(b.pfp, b.pgp, i0);
    return b;
}

SolutionBasis basis_from_samples(const Grid& g, const SampledFunction& p,
                                 const SampledFunction& f,
                                 const SampledFunction& gg) {
    SolutionBasis b;
    b.f = f;
    b.g = gg;
    SampledFunction fp = derivative_samples(g, f);
    SampledFunction gp = derivative_samples(g, gg);
    b.pfp = mul(p, fp);
    b.pgp = mul(p, gp);
    const std::size_t i0 = g.x0_index;
    cplx f0 = b.f[i0], g0 = b.g[i0];
    if (std::abs(f0) < 1e-300 || std::abs(g0) < 1e-300)
        throw ProblemError("basis sample vanishes at x0");
    for (auto& v : b.f) v /= f0;
    for (auto& v : b.pfp) v /= f0;
    for (auto& v : b.g) v /= g0;
    for (auto& v : b.pgp) v /= g0;
    b.rho = basis_rho(b.pfp, b.pgp, i0);
    return b;
}

SolutionBasis bootstrap_basis(const Grid& g, const SampledFunction& p,
                              const SampledFunction& q, const SeamMap* q_seams,
                              const SeamMap* p_seams, int max_levels, double tol) {
    const std::size_t n = p.size();
    SampledFunction w_odd(n), w_even(n);
    for (std::size_t i = 0; i < n; ++i) {
        w_odd[i] = -q[i];
        w_even[i] = 1.0 / p[i];
    }
    SeamMap w_odd_seams, w_even_seams;
    if (q_seams)
        for (const auto& [k, v] : *q_seams) w_odd_seams[k] = -v;
    if (p_seams)
        for (const auto& [k, v] : *p_seams) w_even_seams[k] = 1.0 / v;

    auto step = [&](SampledFunction& lvl, const SampledFunction& w,
                    const SeamMap& ws) {
        SampledFunction integrand = mul(lvl, w);
        SeamMap seams;
        for (const auto& [k, v] : ws) seams[k] = lvl[k] * v;
        lvl = cumulative_integral(g, integrand, seams.empty() ? nullptr : &seams);
    };

    SampledFunction Xt = ones(n), X = ones(n);
    SolutionBasis b;
    b.f = ones(n);
    b.pfp = zeros(n);
    SampledFunction v2 = zeros(n), pv2 = ones(n);
    for (int lvl = 1; lvl <= max_levels; ++lvl) {
        if (lvl % 2 == 1) {
            step(Xt, w_odd, w_odd_seams);
            step(X, w_even, w_even_seams);
            axpy(b.pfp, 1.0, Xt);
            axpy(v2, 1.0, X);
        } else {
            step(Xt, w_even, w_even_seams);
            step(X, w_odd, w_odd_seams);
            axpy(b.f, 1.0, Xt);
            axpy(pv2, 1.0, X);
        }
        double m = std::max(max_abs(Xt), max_abs(X));
        if (m < tol * std::max(1.0, max_abs(b.f))) break;
    }
    b.g = b.f;
    axpy(b.g, 1.0, v2);
    b.pgp = b.pfp;
    axpy(b.pgp, 1.0, pv2);
    b.rho = basis_rho(b.pfp, b.pgp, g.x0_index);
    return b;
}

namespace {

// Holds either every computed level or just a ring of the most recent ones.
class LevelStore {
  public:
    LevelStore(bool full, int depth, std::size_t nodes)
        : full_(full), depth_(depth), zero_(zeros(nodes)) {}

    const SampledFunction& at(int level) const {
        if (level < 0) return zero_;
        if (full_) return rows_[level];
        int back = count_ - 1 - level;
        if (back < 0 || back >= (int)ring_.size())
            throw std::logic_error("power level out of streaming window");
        return ring_[(head_ + ring_.size() - 1 - back) % ring_.size()];
    }

    void push(SampledFunction v) {
        if (full_) {
            rows_.push_back(std::move(v));
        } else {
            if ((int)ring_.size() < depth_) {
                ring_.push_back(std::move(v));
                head_ = ring_.size() % depth_;
            } else {
                ring_[head_] = std::move(v);
                head_ = (head_ + 1) % depth_;
            }
        }
        ++count_;
    }

    std::vector<SampledFunction> take_rows() { return std::move(rows_); }

  private:
    bool full_;
    int depth_;
    std::size_t head_ = 0;
    int count_ = 0;
    SampledFunction zero_;
    std::vector<SampledFunction> rows_;
    std::vector<SampledFunction> ring_;
};

std::array<cplx, 2> ends_of(const SampledFunction& y) {
    return {y.front(), y.back()};
}

cplx seam_or(const SampledFunction& y, const SeamMap* seams, std::size_t k) {
    if (seams) {
        auto it = seams->find(k);
        if (it != seams->end()) return it->second;
    }
    return y[k];
}

} // namespace

PowerTable modified_powers(const Grid& g, const SolutionBasis& basis,
                           const SampledFunction& r, int N,
                           const SeamMap* r_seams, bool full) {
    const std::size_t n = r.size();
    const cplx rho = basis.rho;
    const SampledFunction &f = basis.f, &gg = basis.g;
    SampledFunction fr = mul(f, r), gr = mul(gg, r);
    SeamMap frs, grs;
    if (r_seams)
        for (const auto& [k, v] : *r_seams) {
            frs[k] = f[k] * v;
            grs[k] = gg[k] * v;
        }

    auto integrate_level = [&](const SampledFunction& prev,
                               const SampledFunction& w, const SeamMap& ws) {
        SampledFunction integrand = mul(prev, w);
        SeamMap seams;
        for (const auto& [k, v] : ws) seams[k] = prev[k] * v;
        return cumulative_integral(g, integrand, seams.empty() ? nullptr : &seams);
    };

    PowerTable out;
    out.N = N;
    out.full = full;
    LevelStore F(full, 2, n), G(full, 2, n), Ft(full, 2, n), Gt(full, 2, n);
    auto push_all = [&](SampledFunction fn, SampledFunction gn, SampledFunction ftn,
                        SampledFunction gtn) {
        out.F_ends.push_back(ends_of(fn));
        out.G_ends.push_back(ends_of(gn));
        out.Ftil_ends.push_back(ends_of(ftn));
        out.Gtil_ends.push_back(ends_of(gtn));
        F.push(std::move(fn));
        G.push(std::move(gn));
        Ft.push(std::move(ftn));
        Gt.push(std::move(gtn));
    };
    push_all(ones(n), ones(n), f, gg);
    for (int lv = 1; lv <= 2 * N + 1; ++lv) {
        const SampledFunction &Fp = F.at(lv - 1), &Gp = G.at(lv - 1);
        const SampledFunction &Ftp = Ft.at(lv - 1), &Gtp = Gt.at(lv - 1);
        SampledFunction Fn(n), Gn(n), Ftn(n), Gtn(n);
        if (lv % 2 == 1) {
            for (std::size_t i = 0; i < n; ++i)
                Fn[i] = rho * (gg[i] * Fp[i] - f[i] * Gp[i]);
            Gn = Fn;
            Ftn = integrate_level(Ftp, fr, frs);
            Gtn = integrate_level(Gtp, gr, grs);
        } else {
            Fn = integrate_level(Fp, fr, frs);
            Gn = integrate_level(Gp, gr, grs);
            for (std::size_t i = 0; i < n; ++i) {
                cplx cross = rho * (f[i] * Gtp[i] - gg[i] * Ftp[i]);
                Ftn[i] = f[i] * Gn[i] - cross;
                Gtn[i] = gg[i] * Fn[i] - cross;
            }
        }
        push_all(std::move(Fn), std::move(Gn), std::move(Ftn), std::move(Gtn));
    }
    if (full) {
        out.F = F.take_rows();
        out.G = G.take_rows();
        out.Ftil = Ft.take_rows();
        out.Gtil = Gt.take_rows();
    }
    return out;
}

PowerTable pencil_powers(const Grid& g, const SolutionBasis& basis,
                         const std::vector<SampledFunction>& Rf,
                         const std::vector<SampledFunction>& Gf, int N,
                         const std::vector<SeamMap>* Rf_seams,
                         const std::vector<SeamMap>* Gf_seams, bool full) {
    const int Nt = (int)Rf.size();
    if (Nt == 0) throw ProblemError("pencil needs at least one term");
    const std::size_t n = basis.f.size();
    const cplx rho = basis.rho;
    const SampledFunction &f = basis.f, &gg = basis.g;

    bool have_seams = false;
    if (Rf_seams)
        for (const auto& m : *Rf_seams) have_seams |= !m.empty();
    if (Gf_seams)
        for (const auto& m : *Gf_seams) have_seams |= !m.empty();
    std::vector<std::size_t> seam_nodes;
    if (have_seams) {
        SeamMap merged;
        for (const auto* maps : {Rf_seams, Gf_seams})
            if (maps)
                for (const auto& m : *maps)
                    for (const auto& [k, v] : m) merged[k] = v;
        for (const auto& [k, v] : merged) seam_nodes.push_back(k);
    }
    auto Rf_at = [&](int k, std::size_t i) {
        return seam_or(Rf[k], Rf_seams ? &(*Rf_seams)[k] : nullptr, i);
    };
    auto Gf_at = [&](int k, std::size_t i) {
        return seam_or(Gf[k], Gf_seams ? &(*Gf_seams)[k] : nullptr, i);
    };

    PowerTable out;
    out.N = N;
    out.full = full;
    const int depth = 2 * Nt + 1;
    LevelStore F(full, depth, n), G(full, depth, n), Ft(full, depth, n),
        Gt(full, depth, n);
    auto push_all = [&](SampledFunction fn, SampledFunction gn, SampledFunction ftn,
                        SampledFunction gtn) {
        out.F_ends.push_back(ends_of(fn));
        out.G_ends.push_back(ends_of(gn));
        out.Ftil_ends.push_back(ends_of(ftn));
        out.Gtil_ends.push_back(ends_of(gtn));
        F.push(std::move(fn));
        G.push(std::move(gn));
        Ft.push(std::move(ftn));
        Gt.push(std::move(gtn));
    };
    push_all(ones(n), ones(n), f, gg);
    for (int lv = 1; lv <= 2 * N + 1; ++lv) {
        SampledFunction Fn(n), Gn(n), Ftn(n), Gtn(n);
        if (lv % 2 == 1) {
            const SampledFunction &Fp = F.at(lv - 1), &Gp = G.at(lv - 1);
            for (std::size_t i = 0; i < n; ++i)
                Fn[i] = rho * (gg[i] * Fp[i] - f[i] * Gp[i]);
            Gn = Fn;
            SampledFunction Sf = zeros(n), Sg = zeros(n);
            for (int k = 1; k <= Nt; ++k) {
                const SampledFunction &Ftk = Ft.at(lv - 2 * k),
                                      &Gtk = Gt.at(lv - 2 * k);
                const SampledFunction &Gk = G.at(lv - 2 * k + 1),
                                      &Fk = F.at(lv - 2 * k + 1);
                for (std::size_t i = 0; i < n; ++i) {
                    cplx inner =
                        rho * (Gf[k - 1][i] * Ftk[i] - Rf[k - 1][i] * Gtk[i]);
                    Sf[i] += Rf[k - 1][i] * Gk[i] + inner;
                    Sg[i] += Gf[k - 1][i] * Fk[i] + inner;
                }
            }
            SeamMap sf_seams, sg_seams;
            for (std::size_t node : seam_nodes) {
                cplx vf = 0.0, vg = 0.0;
                for (int k = 1; k <= Nt; ++k) {
                    cplx rfv = Rf_at(k - 1, node), gfv = Gf_at(k - 1, node);
                    cplx inner = rho * (gfv * Ft.at(lv - 2 * k)[node] -
                                        rfv * Gt.at(lv - 2 * k)[node]);
                    vf += rfv * G.at(lv - 2 * k + 1)[node] + inner;
                    vg += gfv * F.at(lv - 2 * k + 1)[node] + inner;
                }
                sf_seams[node] = f[node] * vf;
                sg_seams[node] = gg[node] * vg;
            }
            Ftn = cumulative_integral(g, mul(f, Sf),
                                      sf_seams.empty() ? nullptr : &sf_seams);
            Gtn = cumulative_integral(g, mul(gg, Sg),
                                      sg_seams.empty() ? nullptr : &sg_seams);
        } else {
            SampledFunction S = zeros(n);
            for (int k = 1; k <= Nt; ++k) {
                const SampledFunction &Fk = F.at(lv - 2 * k), &Gk = G.at(lv - 2 * k);
                for (std::size_t i = 0; i < n; ++i)
                    S[i] += Gf[k - 1][i] * Fk[i] - Rf[k - 1][i] * Gk[i];
            }
            SeamMap sf_seams, sg_seams;
            for (std::size_t node : seam_nodes) {
                cplx v = 0.0;
                for (int k = 1; k <= Nt; ++k)
                    v += Gf_at(k - 1, node) * F.at(lv - 2 * k)[node] -
                         Rf_at(k - 1, node) * G.at(lv - 2 * k)[node];
                sf_seams[node] = f[node] * v;
                sg_seams[node] = gg[node] * v;
            }
            SampledFunction If = cumulative_integral(
                g, mul(f, S), sf_seams.empty() ? nullptr : &sf_seams);
            SampledFunction Ig = cumulative_integral(
                g, mul(gg, S), sg_seams.empty() ? nullptr : &sg_seams);
            const SampledFunction &Ftp = Ft.at(lv - 1), &Gtp = Gt.at(lv - 1);
            for (std::size_t i = 0; i < n; ++i) {
                Fn[i] = rho * If[i];
                Gn[i] = rho * Ig[i];
                cplx cross = rho * (f[i] * Gtp[i] - gg[i] * Ftp[i]);
                Ftn[i] = f[i] * Gn[i] - cross;
                Gtn[i] = gg[i] * Fn[i] - cross;
            }
        }
        push_all(std::move(Fn), std::move(Gn), std::move(Ftn), std::move(Gtn));
    }
    if (full) {
        out.F = F.take_rows();
        out.G = G.take_rows();
        out.Ftil = Ft.take_rows();
        out.Gtil = Gt.take_rows();
    }
    return out;
}

OriginalPowers original_powers(const Grid& g, const SampledFunction& f,
                               const SampledFunction& p, const SampledFunction& r,
                               int levels) {
    const std::size_t n = f.size();
    SampledFunction w_r(n), w_p(n);
    for (std::size_t i = 0; i < n; ++i) {
        w_r[i] = f[i] * f[i] * r[i];
        w_p[i] = 1.0 / (f[i] * f[i] * p[i]);
    }
    OriginalPowers out;
    out.X.push_back(ones(n));
    out.Xtil.push_back(ones(n));
    for (int lv = 1; lv <= levels; ++lv) {
        const SampledFunction &Xp = out.X.back(), &Xtp = out.Xtil.back();
        SampledFunction X, Xt;
        if (lv % 2 == 1) {
            Xt = cumulative_integral(g, mul(Xtp, w_r));
            X = cumulative_integral(g, mul(Xp, w_p));
        } else {
            Xt = cumulative_integral(g, mul(Xtp, w_p));
            X = cumulative_integral(g, mul(Xp, w_r));
        }
        out.X.push_back(std::move(X));
        out.Xtil.push_back(std::move(Xt));
    }
    return out;
}

BoundConstants bound_constants(const SolutionBasis& basis,
                               const std::vector<SampledFunction>& Rf,
                               const std::vector<SampledFunction>& Gf) {
    BoundConstants c;
    c.c1 = std::abs(basis.rho);
    c.terms = std::max<std::size_t>(1, Rf.size());
    for (const auto& row : Rf) c.c2 = std::max(c.c2, max_abs(row));
    for (const auto& row : Gf) c.c2 = std::max(c.c2, max_abs(row));
    c.c3 = std::max(max_abs(basis.f), max_abs(basis.g));
    return c;
}

double power_bound_log(PowerFamily fam, int n, double dist,
                       const BoundConstants& c) {
    auto logC = [&](int m) {
        return m * std::log1p(2.0 * c.c1 * c.c2 * c.c3 * dist) -
               std::lgamma(m / c.terms + 1.0);
    };
    switch (fam) {
        case PowerFamily::even: return logC(n);
        case PowerFamily::odd: return std::log(2.0 * c.c1 * c.c3) + logC(n);
        case PowerFamily::tilde_even:
            return std::log((n + 1.0) * c.c3) + logC(n);
        case PowerFamily::tilde_odd:
            return std::log((n + 1.0) / (2.0 * c.c1)) + logC(n + 1);
    }
    return 0.0;
}

} // namespace spps
