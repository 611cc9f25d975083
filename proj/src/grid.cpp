#include "spps/grid.hpp"

#include <algorithm>
#include <cmath>

namespace spps {

namespace {

// Cumulative weights for one 6-node block of spacing h: CW[j][k] is the
// coefficient of y[k] in the integral of the degree-5 interpolant from node 0
// to node j, in units of h. Derived once from exact rational interpolation.
const double CW[6][6] = {
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {95.0 / 288, 1427.0 / 1440, -133.0 / 240, 241.0 / 720, -173.0 / 1440, 3.0 / 160},
    {14.0 / 45, 43.0 / 30, 7.0 / 45, 7.0 / 45, -1.0 / 15, 1.0 / 90},
    {51.0 / 160, 219.0 / 160, 57.0 / 80, 57.0 / 80, -21.0 / 160, 3.0 / 160},
    {14.0 / 45, 64.0 / 45, 8.0 / 15, 64.0 / 45, 14.0 / 45, 0.0},
    {95.0 / 288, 125.0 / 96, 125.0 / 144, 125.0 / 144, 125.0 / 96, 95.0 / 288},
};

// Derivative of the same interpolant at node p, in units of 1/h.
const double DW[6][6] = {
    {-137.0 / 60, 5.0, -5.0, 10.0 / 3, -5.0 / 4, 1.0 / 5},
    {-1.0 / 5, -13.0 / 12, 2.0, -1.0, 1.0 / 3, -1.0 / 20},
    {1.0 / 20, -1.0 / 2, -1.0 / 3, 1.0, -1.0 / 4, 1.0 / 30},
    {-1.0 / 30, 1.0 / 4, -1.0, 1.0 / 3, 1.0 / 2, -1.0 / 20},
    {1.0 / 20, -1.0 / 3, 1.0, -2.0, 13.0 / 12, 1.0 / 5},
    {-1.0 / 5, 5.0 / 4, -10.0 / 3, 5.0, -5.0, 137.0 / 60},
};

bool fits(std::size_t mp, const std::vector<double>& fracs, std::vector<std::size_t>& idx) {
    idx.clear();
    for (double fr : fracs) {
        double v = fr * static_cast<double>(mp);
        double iv = std::round(v);
        if (std::abs(v - iv) > 1e-9) return false;
        idx.push_back(static_cast<std::size_t>(iv));
    }
    for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
        if ((idx[i + 1] - idx[i]) % 5 != 0) return false;
    }
    return true;
}

} // namespace

struct ChebWorkspace {
    std::size_t m = 0;
    std::vector<double> cosmat; // (m+1)^2, cos(j*k*pi/m)
    std::vector<double> t;      // ascending, t[i] = cos((m-i)*pi/m)
};

Grid make_uniform_grid(double a, double b, std::size_t m, double x0,
                       const std::vector<double>& breakpoints) {
    if (!(b > a)) throw GridError("grid: interval endpoints must satisfy a < b");
    if (m < 10) m = 10;
    if (x0 < a || x0 > b) throw GridError("grid: x0 outside [a,b]");
    for (double c : breakpoints) {
        if (c <= a || c >= b) throw GridError("grid: breakpoint outside (a,b)");
    }

    const double span = b - a;
    const double tol = 1e-12 * span;
    auto add_special = [&](std::vector<double>& sp, double v) {
        for (double s : sp) {
            if (std::abs(s - v) <= tol) return;
        }
        sp.push_back(v);
    };

    std::vector<double> specials{a, b};
    for (double c : breakpoints) add_special(specials, c);
    bool x0_snapped = false;
    add_special(specials, x0);
    std::sort(specials.begin(), specials.end());

    std::vector<double> fracs;
    for (double s : specials) fracs.push_back((s - a) / span);

    std::vector<std::size_t> idx;
    std::size_t mp = m;
    const std::size_t limit = m + 200000;
    while (mp <= limit && !fits(mp, fracs, idx)) ++mp;

    if (mp > limit) {
        // x0 does not sit at a representable fraction; fit the breakpoints
        // alone and snap x0 to the nearest block-aligned node afterwards.
        specials.clear();
        specials = {a, b};
        for (double c : breakpoints) add_special(specials, c);
        std::sort(specials.begin(), specials.end());
        fracs.clear();
        for (double s : specials) fracs.push_back((s - a) / span);
        mp = m;
        while (mp <= limit && !fits(mp, fracs, idx)) ++mp;
        if (mp > limit) throw GridError("grid: could not place breakpoints on a uniform grid");
        x0_snapped = true;
    }

    Grid g;
    g.kind = GridKind::uniform;
    g.a = a;
    g.b = b;
    g.h = span / static_cast<double>(mp);
    g.nodes.resize(mp + 1);
    for (std::size_t i = 0; i <= mp; ++i) {
        g.nodes[i] = a + (span * static_cast<double>(i)) / static_cast<double>(mp);
    }
    g.nodes.back() = b;
    g.segment_bounds = idx;

    if (!x0_snapped) {
        double v = (x0 - a) / span * static_cast<double>(mp);
        g.x0_index = static_cast<std::size_t>(std::llround(v));
    } else {
        // nearest node that is a multiple of 5 away from its segment start
        double v = (x0 - a) / span * static_cast<double>(mp);
        std::size_t near = static_cast<std::size_t>(std::llround(v));
        std::size_t lo = 0;
        for (std::size_t sb : g.segment_bounds) {
            if (sb <= near) lo = sb;
        }
        std::size_t off = ((near - lo) + 2) / 5 * 5;
        std::size_t cand = lo + off;
        if (cand > mp) cand = mp;
        g.x0_index = cand;
        if (std::find(g.segment_bounds.begin(), g.segment_bounds.end(), cand) ==
            g.segment_bounds.end()) {
            g.segment_bounds.push_back(cand);
            std::sort(g.segment_bounds.begin(), g.segment_bounds.end());
        }
    }
    return g;
}

Grid make_chebyshev_grid(double a, double b, std::size_t m, double x0) {
    if (!(b > a)) throw GridError("grid: interval endpoints must satisfy a < b");
    if (m < 10) m = 10;
    if (m > 4000) throw GridError("grid: chebyshev kind limited to 4000 intervals");
    if (x0 < a || x0 > b) throw GridError("grid: x0 outside [a,b]");

    Grid g;
    g.kind = GridKind::chebyshev;
    g.a = a;
    g.b = b;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    auto ws = std::make_shared<ChebWorkspace>();
    ws->m = m;
    ws->t.resize(m + 1);
    g.nodes.resize(m + 1);
    const double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i <= m; ++i) {
        double t = std::cos(static_cast<double>(m - i) * pi / static_cast<double>(m));
        ws->t[i] = t;
        g.nodes[i] = mid + half * t;
    }
    g.nodes.front() = a;
    g.nodes.back() = b;
    ws->cosmat.resize((m + 1) * (m + 1));
    for (std::size_t j = 0; j <= m; ++j) {
        for (std::size_t k = 0; k <= m; ++k) {
            ws->cosmat[j * (m + 1) + k] =
                std::cos(static_cast<double>(j) * static_cast<double>(k) * pi /
                         static_cast<double>(m));
        }
    }
    g.cheb = ws;

    std::size_t best = 0;
    double bd = std::abs(g.nodes[0] - x0);
    for (std::size_t i = 1; i <= m; ++i) {
        double d = std::abs(g.nodes[i] - x0);
        if (d < bd) {
            bd = d;
            best = i;
        }
    }
    g.x0_index = best;
    g.segment_bounds = {0, m};
    return g;
}

SampledFunction integrate_newton_cotes(const Grid& g, const SampledFunction& y,
                                       const SeamMap* seams) {
    if (g.kind != GridKind::uniform) {
        throw GridError("integrate_newton_cotes: uniform grid required");
    }
    if (y.size() != g.size()) throw GridError("integrate_newton_cotes: size mismatch");
    const double h = g.h;
    const auto& sb = g.segment_bounds;
    SampledFunction out(y.size(), cplx(0.0, 0.0));

    std::size_t k0 = 0;
    while (k0 < sb.size() && sb[k0] != g.x0_index) ++k0;
    if (k0 == sb.size()) throw GridError("integrate_newton_cotes: x0 not on a segment boundary");

    cplx blk[6];
    cplx acc[6];
    auto block_weights = [&](std::size_t b0, std::size_t lo) {
        for (int j = 0; j < 6; ++j) blk[j] = y[b0 + j];
        if (seams && b0 == lo) {
            auto it = seams->find(lo);
            if (it != seams->end()) blk[0] = it->second;
        }
        for (int j = 0; j < 6; ++j) {
            cplx s(0.0, 0.0);
            for (int k = 0; k < 6; ++k) s += CW[j][k] * blk[k];
            acc[j] = h * s;
        }
    };

    // rightward from x0
    for (std::size_t si = k0; si + 1 < sb.size(); ++si) {
        const std::size_t lo = sb[si], hi = sb[si + 1];
        for (std::size_t b0 = lo; b0 < hi; b0 += 5) {
            block_weights(b0, lo);
            for (int j = 1; j < 6; ++j) out[b0 + j] = out[b0] + acc[j];
        }
    }
    // leftward from x0: blocks walked right to left so each block's right
    // edge value is already known
    for (std::size_t si = k0; si-- > 0;) {
        const std::size_t lo = sb[si], hi = sb[si + 1];
        std::size_t b0 = hi - 5;
        while (true) {
            block_weights(b0, lo);
            for (int j = 0; j < 5; ++j) out[b0 + j] = out[b0 + 5] - (acc[5] - acc[j]);
            if (b0 == lo) break;
            b0 -= 5;
        }
    }
    return out;
}

SampledFunction integrate_clenshaw_curtis(const Grid& g, const SampledFunction& y) {
    if (g.kind != GridKind::chebyshev || !g.cheb) {
        throw GridError("integrate_clenshaw_curtis: chebyshev grid required");
    }
    if (y.size() != g.size()) throw GridError("integrate_clenshaw_curtis: size mismatch");
    const auto& ws = *g.cheb;
    const std::size_t m = ws.m;
    const double half = 0.5 * (g.b - g.a);

    // forward transform: a_k = (2/m) * sum over theta-ordered samples with
    // halved end weights; a_0 and a_m halved once more for a plain T_k sum
    std::vector<cplx> yt(m + 1);
    for (std::size_t j = 0; j <= m; ++j) yt[j] = y[m - j];
    yt[0] *= 0.5;
    yt[m] *= 0.5;
    std::vector<cplx> ak(m + 1, cplx(0.0, 0.0));
    for (std::size_t k = 0; k <= m; ++k) {
        cplx s(0.0, 0.0);
        const double* row = &ws.cosmat[k * (m + 1)];
        for (std::size_t j = 0; j <= m; ++j) s += row[j] * yt[j];
        ak[k] = (2.0 / static_cast<double>(m)) * s;
    }
    ak[0] *= 0.5;
    ak[m] *= 0.5;

    // antiderivative coefficients
    std::vector<cplx> bk(m + 2, cplx(0.0, 0.0));
    auto at = [&](std::size_t k) -> cplx { return k <= m ? ak[k] : cplx(0.0, 0.0); };
    bk[1] = at(0) - at(2) * 0.5;
    for (std::size_t k = 2; k <= m + 1; ++k) {
        bk[k] = (at(k - 1) - at(k + 1)) / (2.0 * static_cast<double>(k));
    }

    // evaluate and re-anchor
    SampledFunction out(m + 1, cplx(0.0, 0.0));
    std::vector<cplx> tm1(m + 1, cplx(1.0, 0.0)), tc(m + 1);
    for (std::size_t i = 0; i <= m; ++i) tc[i] = ws.t[i];
    for (std::size_t i = 0; i <= m; ++i) out[i] = bk[0] * tm1[i] + bk[1] * tc[i];
    for (std::size_t k = 2; k <= m + 1; ++k) {
        for (std::size_t i = 0; i <= m; ++i) {
            cplx tn = 2.0 * ws.t[i] * tc[i] - tm1[i];
            out[i] += bk[k] * tn;
            tm1[i] = tc[i];
            tc[i] = tn;
        }
    }
    const cplx anchor = out[g.x0_index];
    for (auto& v : out) v = (v - anchor) * half;
    return out;
}

SampledFunction cumulative_integral(const Grid& g, const SampledFunction& y,
                                    const SeamMap* seams) {
    if (g.kind == GridKind::uniform) return integrate_newton_cotes(g, y, seams);
    return integrate_clenshaw_curtis(g, y);
}

SampledFunction weighted_integral(const Grid& g, const SampledFunction& w,
                                  const SampledFunction& y, const SeamMap* seams) {
    if (w.size() != y.size()) throw GridError("weighted_integral: size mismatch");
    SampledFunction prod(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) prod[i] = w[i] * y[i];
    return cumulative_integral(g, prod, seams);
}

SampledFunction derivative_samples(const Grid& g, const SampledFunction& y) {
    if (y.size() != g.size()) throw GridError("derivative_samples: size mismatch");
    SampledFunction out(y.size());
    if (g.kind == GridKind::uniform) {
        const auto& sb = g.segment_bounds;
        for (std::size_t si = 0; si + 1 < sb.size(); ++si) {
            const std::size_t lo = sb[si], hi = sb[si + 1];
            for (std::size_t i = lo; i <= hi; ++i) {
                if (i == lo && si > 0) continue; // written by the previous segment
                std::size_t start = i >= lo + 2 ? i - 2 : lo;
                if (start + 5 > hi) start = hi - 5;
                const std::size_t p = i - start;
                cplx s(0.0, 0.0);
                for (int k = 0; k < 6; ++k) s += DW[p][k] * y[start + k];
                out[i] = s / g.h;
            }
        }
        return out;
    }
    // chebyshev: differentiate in coefficient space
    const auto& ws = *g.cheb;
    const std::size_t m = ws.m;
    const double half = 0.5 * (g.b - g.a);
    std::vector<cplx> yt(m + 1);
    for (std::size_t j = 0; j <= m; ++j) yt[j] = y[m - j];
    yt[0] *= 0.5;
    yt[m] *= 0.5;
    std::vector<cplx> ak(m + 1, cplx(0.0, 0.0));
    for (std::size_t k = 0; k <= m; ++k) {
        cplx s(0.0, 0.0);
        const double* row = &ws.cosmat[k * (m + 1)];
        for (std::size_t j = 0; j <= m; ++j) s += row[j] * yt[j];
        ak[k] = (2.0 / static_cast<double>(m)) * s;
    }
    ak[0] *= 0.5;
    ak[m] *= 0.5;

    std::vector<cplx> ck(m + 2, cplx(0.0, 0.0));
    for (std::size_t k = m; k >= 1; --k) {
        ck[k - 1] = ck[k + 1] + 2.0 * static_cast<double>(k) * ak[k];
    }
    ck[0] *= 0.5;

    std::vector<cplx> tm1(m + 1, cplx(1.0, 0.0)), tc(m + 1);
    for (std::size_t i = 0; i <= m; ++i) tc[i] = ws.t[i];
    for (std::size_t i = 0; i <= m; ++i) out[i] = ck[0] * tm1[i] + ck[1] * tc[i];
    for (std::size_t k = 2; k <= m; ++k) {
        for (std::size_t i = 0; i <= m; ++i) {
            cplx tn = 2.0 * ws.t[i] * tc[i] - tm1[i];
            out[i] += ck[k] * tn;
            tm1[i] = tc[i];
            tc[i] = tn;
        }
    }
    for (auto& v : out) v /= half;
    return out;
}

} // namespace spps
