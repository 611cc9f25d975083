#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "spps/grid.hpp"
#include "spps/powers.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <random>

using namespace spps;

namespace {

SampledFunction sample(const Grid& g, const std::function<cplx(double)>& fn) {
    SampledFunction y(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) y[j] = fn(g.nodes[j]);
    return y;
}

SampledFunction constant(const Grid& g, cplx v) {
    return SampledFunction(g.size(), v);
}

SampledFunction prod(const SampledFunction& a, const SampledFunction& b) {
    SampledFunction y(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) y[j] = a[j] * b[j];
    return y;
}

// ca*a + cb*b
SampledFunction combo(cplx ca, const SampledFunction& a, cplx cb,
                      const SampledFunction& b) {
    SampledFunction y(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) y[j] = ca * a[j] + cb * b[j];
    return y;
}

double maxabs(const SampledFunction& y) {
    double m = 0.0;
    for (cplx v : y) m = std::max(m, std::abs(v));
    return m;
}

// max |a-b| over the grid, relative to the larger of the two rows (floored at 1)
double rel_gap(const SampledFunction& a, const SampledFunction& b) {
    double scale = 1.0, gap = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        scale = std::max({scale, std::abs(a[j]), std::abs(b[j])});
        gap = std::max(gap, std::abs(a[j] - b[j]));
    }
    return gap / scale;
}

double rel_gap_fn(const Grid& g, const SampledFunction& a,
                  const std::function<cplx(double)>& fn) {
    return rel_gap(a, sample(g, fn));
}

// residual of (p y')' + q y = rhs with both derivatives taken by finite
// differences, relative to the row scale
double ode_gap(const Grid& g, const SampledFunction& p, const SampledFunction& q,
               const SampledFunction& y, const SampledFunction& rhs) {
    SampledFunction d = derivative_samples(g, y);
    for (std::size_t j = 0; j < d.size(); ++j) d[j] *= p[j];
    SampledFunction dd = derivative_samples(g, d);
    double scale = 1.0, gap = 0.0;
    for (std::size_t j = 0; j < dd.size(); ++j) {
        scale = std::max({scale, std::abs(y[j]), std::abs(rhs[j])});
        gap = std::max(gap, std::abs(dd[j] + q[j] * y[j] - rhs[j]));
    }
    return gap / scale;
}

double fact(int m) { return std::tgamma(m + 1.0); }
double binom(int n, int k) { return fact(n) / (fact(k) * fact(n - k)); }

// Growth envelope for the level with family index n, assembled term by term.
// Deliberately written from the binomial sums rather than the closed form the
// library uses, so the two can check each other.
double summed_bound(PowerFamily fam, int n, double dist, const BoundConstants& c) {
    const double base = 2.0 * c.c1 * c.c2 * c.c3;
    double total = 0.0;
    if (fam == PowerFamily::tilde_odd) {
        int top = std::min(n, (n + 1) - (n + 1) / c.terms);
        for (int k = 0; k <= top; ++k)
            total += binom(n + 1, k) * std::pow(base, n - k) *
                     std::pow(dist, n + 1 - k) / fact(n - k);
        return c.c2 * c.c3 * total;
    }
    int top = n - n / c.terms;
    for (int k = 0; k <= top; ++k) {
        double term = binom(n, k) * std::pow(base * dist, n - k) / fact(n - k);
        if (fam == PowerFamily::tilde_even) term *= n - k + 1;
        total += term;
    }
    if (fam == PowerFamily::odd) return 2.0 * c.c1 * c.c3 * total;
    if (fam == PowerFamily::tilde_even) return c.c3 * total;
    return total;
}

// Checks every node of every level of a table against the growth envelope.
void check_table_bounds(const Grid& g, const PowerTable& t,
                        const BoundConstants& c) {
    const double x0 = g.x0();
    for (int lv = 0; lv <= 2 * t.N + 1; ++lv) {
        const int n = lv / 2;
        PowerFamily plain = lv % 2 ? PowerFamily::odd : PowerFamily::even;
        PowerFamily tilde = lv % 2 ? PowerFamily::tilde_odd : PowerFamily::tilde_even;
        double worst_plain = 0.0, worst_tilde = 0.0, worst_lib = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            double d = std::abs(g.nodes[j] - x0);
            double bp = summed_bound(plain, n, d, c);
            double bt = summed_bound(tilde, n, d, c);
            double lib_p = std::exp(power_bound_log(plain, n, d, c));
            double lib_t = std::exp(power_bound_log(tilde, n, d, c));
            worst_plain = std::max({worst_plain, std::abs(t.F[lv][j]) - bp,
                                    std::abs(t.G[lv][j]) - bp});
            worst_tilde = std::max({worst_tilde, std::abs(t.Ftil[lv][j]) - bt,
                                    std::abs(t.Gtil[lv][j]) - bt});
            worst_lib = std::max({worst_lib, std::abs(t.F[lv][j]) - lib_p,
                                  std::abs(t.Ftil[lv][j]) - lib_t});
        }
        CAPTURE(lv);
        CHECK(worst_plain <= 1e-9);
        CHECK(worst_tilde <= 1e-9);
        CHECK(worst_lib <= 1e-9);
    }
}

// Basis f = e^x, g = e^-x of u'' = u with p = 1, rho = -1/2, plus a smooth
// complex weight. Small enough to recompute per test case.
struct ExpFixture {
    Grid g;
    SampledFunction p, r;
    SolutionBasis basis;
    PowerTable t;
    OriginalPowers xf, yg; // classic families attached to f and to g
    int N = 6;
};

ExpFixture exp_fixture() {
    ExpFixture fx;
    fx.g = make_uniform_grid(-0.8, 1.2, 1000, 0.0);
    fx.p = constant(fx.g, 1.0);
    fx.r = sample(fx.g, [](double x) {
        return cplx(std::cos(x) + 0.25 * x, 0.4 * std::sin(2.0 * x) - 0.3);
    });
    fx.basis.f = sample(fx.g, [](double x) { return cplx(std::exp(x)); });
    fx.basis.g = sample(fx.g, [](double x) { return cplx(std::exp(-x)); });
    fx.basis.pfp = fx.basis.f;
    fx.basis.pgp = sample(fx.g, [](double x) { return cplx(-std::exp(-x)); });
    fx.basis.rho = cplx(-0.5);
    fx.t = modified_powers(fx.g, fx.basis, fx.r, fx.N);
    fx.xf = original_powers(fx.g, fx.basis.f, fx.p, fx.r, 2 * fx.N + 1);
    fx.yg = original_powers(fx.g, fx.basis.g, fx.p, fx.r, 2 * fx.N + 1);
    return fx;
}

// Manufactured smooth problem: f = exp(t) with t(0) = 0, the companion g
// built by reduction of order so that both solve the same equation and the
// Wronskian normalization holds by construction.
struct RandomProblem {
    Grid g;
    SampledFunction p, q, r, fp, gp; // fp, gp are plain derivatives f', g'
    SolutionBasis basis;
    PowerTable t;
    OriginalPowers xf, yg;
    int N = 6;
};

RandomProblem random_problem(unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const double a1 = 0.4 * U(rng), a2 = 0.5 * U(rng), a3 = 0.3 * U(rng);
    const double s1 = 0.3 * U(rng), s2 = 0.35 * U(rng);
    double wsize = 0.3 + 0.4 * std::abs(U(rng));
    if (U(rng) < 0.0) wsize = -wsize;
    const double r0 = U(rng), r1 = U(rng), r2 = U(rng), r3 = U(rng), r4 = U(rng);

    RandomProblem rp;
    rp.g = make_uniform_grid(-1.0, 1.0, 1000, 0.0);
    auto tv = [=](double x) {
        return a1 * x + a2 * std::sin(x) + a3 * (std::cos(2.0 * x) - 1.0);
    };
    auto tp = [=](double x) {
        return a1 + a2 * std::cos(x) - 2.0 * a3 * std::sin(2.0 * x);
    };
    rp.p = sample(rp.g, [=](double x) {
        return cplx(std::exp(s1 * std::sin(x) + s2 * x));
    });
    rp.basis.f = sample(rp.g, [=](double x) { return cplx(std::exp(tv(x))); });
    rp.fp = sample(rp.g, [=](double x) { return cplx(tp(x) * std::exp(tv(x))); });
    rp.basis.pfp = prod(rp.p, rp.fp);

    SampledFunction integrand(rp.g.size());
    for (std::size_t j = 0; j < rp.g.size(); ++j)
        integrand[j] = 1.0 / (rp.p[j] * rp.basis.f[j] * rp.basis.f[j]);
    SampledFunction I = cumulative_integral(rp.g, integrand);
    // The classic families require 1/(g^2 p) integrable, so w is scaled to
    // keep 1 + w I bounded away from zero on the whole interval.
    const double w = wsize / maxabs(I);
    rp.basis.g.resize(rp.g.size());
    rp.basis.pgp.resize(rp.g.size());
    rp.gp.resize(rp.g.size());
    for (std::size_t j = 0; j < rp.g.size(); ++j) {
        cplx one_plus = 1.0 + w * I[j];
        rp.basis.g[j] = rp.basis.f[j] * one_plus;
        rp.basis.pgp[j] = rp.basis.pfp[j] * one_plus + w / rp.basis.f[j];
        rp.gp[j] = rp.basis.pgp[j] / rp.p[j];
    }
    rp.basis.rho =
        1.0 / (rp.basis.pgp[rp.g.x0_index] - rp.basis.pfp[rp.g.x0_index]);

    // q recovered from the equation f satisfies; only the finite-difference
    // second-derivative checks consume it
    SampledFunction dpfp = derivative_samples(rp.g, rp.basis.pfp);
    rp.q.resize(rp.g.size());
    for (std::size_t j = 0; j < rp.g.size(); ++j)
        rp.q[j] = -dpfp[j] / rp.basis.f[j];

    rp.r = sample(rp.g, [=](double x) {
        return cplx(r0 + 0.5 * r1 * x + 0.5 * r2 * std::sin(x),
                    0.5 * r3 + 0.5 * r4 * std::cos(2.0 * x));
    });
    rp.t = modified_powers(rp.g, rp.basis, rp.r, rp.N);
    rp.xf = original_powers(rp.g, rp.basis.f, rp.p, rp.r, 2 * rp.N + 1);
    rp.yg = original_powers(rp.g, rp.basis.g, rp.p, rp.r, 2 * rp.N + 1);
    return rp;
}

// The identity battery shared by the fixed and the randomized problems.
// fp and gp are the plain first derivatives of the basis pair.
void check_identities(const Grid& g, const SolutionBasis& b,
                      const SampledFunction& p, const SampledFunction& q,
                      const SampledFunction& r, const SampledFunction& fp,
                      const SampledFunction& gp, const PowerTable& t,
                      const OriginalPowers& xf, const OriginalPowers& yg,
                      double tol) {
    const cplx rho = b.rho;
    const std::size_t n = g.size();
    const SampledFunction zero = constant(g, 0.0);
    const int top = 2 * t.N + 1;

    // basis pair Wronskian: f (pg') - g (pf') = 1/rho everywhere
    {
        SampledFunction wr(n);
        for (std::size_t j = 0; j < n; ++j)
            wr[j] = b.f[j] * b.pgp[j] - b.g[j] * b.pfp[j];
        CHECK(rel_gap(wr, constant(g, 1.0 / rho)) < tol);
    }

    // bridge relations between the classic families attached to f and to g
    for (int k = 0; 2 * k + 1 <= top; ++k) {
        CAPTURE(k);
        SampledFunction lhs = prod(b.g, yg.X[2 * k + 1]);
        CHECK(rel_gap(lhs, prod(b.f, xf.X[2 * k + 1])) < tol);
        SampledFunction r1b(n), r2(n);
        for (std::size_t j = 0; j < n; ++j) {
            r1b[j] = rho * (b.g[j] * yg.Xtil[2 * k][j] - b.f[j] * xf.Xtil[2 * k][j]);
            r2[j] = rho * (b.g[j] * xf.X[2 * k][j] - b.f[j] * yg.X[2 * k][j]);
        }
        CHECK(rel_gap(lhs, r1b) < tol);
        CHECK(rel_gap(lhs, r2) < tol);
    }
    for (int k = 0; 2 * k <= top; ++k) {
        CAPTURE(k);
        const SampledFunction& xt_prev = k ? xf.Xtil[2 * k - 1] : zero;
        const SampledFunction& yt_prev = k ? yg.Xtil[2 * k - 1] : zero;
        SampledFunction cross(n), r3(n), r4(n);
        for (std::size_t j = 0; j < n; ++j) {
            cross[j] = rho * (b.g[j] * xt_prev[j] - b.f[j] * yt_prev[j]);
            r3[j] = b.g[j] * xf.X[2 * k][j] + cross[j];
            r4[j] = b.f[j] * yg.X[2 * k][j] + cross[j];
        }
        CHECK(rel_gap(prod(b.g, yg.Xtil[2 * k]), r3) < tol);
        CHECK(rel_gap(prod(b.f, xf.Xtil[2 * k]), r4) < tol);
    }

    // the modified table factors through the classic powers
    for (int lv = 0; lv <= top; ++lv) {
        CAPTURE(lv);
        if (lv % 2) {
            CHECK(rel_gap(t.F[lv], prod(b.f, xf.X[lv])) < tol);
            CHECK(rel_gap(t.Ftil[lv], xf.Xtil[lv]) < tol);
            CHECK(rel_gap(t.G[lv], prod(b.g, yg.X[lv])) < tol);
            CHECK(rel_gap(t.Gtil[lv], yg.Xtil[lv]) < tol);
        } else {
            CHECK(rel_gap(t.F[lv], xf.X[lv]) < tol);
            CHECK(rel_gap(t.Ftil[lv], prod(b.f, xf.Xtil[lv])) < tol);
            CHECK(rel_gap(t.G[lv], yg.X[lv]) < tol);
            CHECK(rel_gap(t.Gtil[lv], prod(b.g, yg.Xtil[lv])) < tol);
        }
    }

    // odd rows equal rho times the gap of the tilde pair one level down,
    // and that gap itself folds back onto the plain rows
    for (int lv = 1; lv <= top; lv += 2) {
        CAPTURE(lv);
        SampledFunction gap(n), fold(n);
        for (std::size_t j = 0; j < n; ++j) {
            gap[j] = rho * (t.Gtil[lv - 1][j] - t.Ftil[lv - 1][j]);
            fold[j] = b.g[j] * t.F[lv - 1][j] - b.f[j] * t.G[lv - 1][j];
        }
        CHECK(rel_gap(t.F[lv], gap) < tol);
        CHECK(rel_gap(combo(1.0, t.Gtil[lv - 1], -1.0, t.Ftil[lv - 1]), fold) < tol);
    }

    // first derivatives close the coupled recurrences
    for (int lv = 1; lv <= top; ++lv) {
        CAPTURE(lv);
        if (lv % 2) {
            SampledFunction want(n);
            for (std::size_t j = 0; j < n; ++j)
                want[j] = rho * (gp[j] * t.F[lv - 1][j] - fp[j] * t.G[lv - 1][j]);
            CHECK(rel_gap(derivative_samples(g, t.F[lv]), want) < tol);
            CHECK(rel_gap(derivative_samples(g, t.Ftil[lv]),
                          prod(t.Ftil[lv - 1], prod(b.f, r))) < tol);
            CHECK(rel_gap(derivative_samples(g, t.Gtil[lv]),
                          prod(t.Gtil[lv - 1], prod(b.g, r))) < tol);
        } else {
            SampledFunction cross(n), wf(n), wg(n);
            for (std::size_t j = 0; j < n; ++j) {
                cross[j] = rho * (fp[j] * t.Gtil[lv - 1][j] - gp[j] * t.Ftil[lv - 1][j]);
                wf[j] = fp[j] * t.G[lv][j] - cross[j];
                wg[j] = gp[j] * t.F[lv][j] - cross[j];
            }
            CHECK(rel_gap(derivative_samples(g, t.Ftil[lv]), wf) < tol);
            CHECK(rel_gap(derivative_samples(g, t.Gtil[lv]), wg) < tol);
            CHECK(rel_gap(derivative_samples(g, t.F[lv]),
                          prod(t.F[lv - 1], prod(b.f, r))) < tol);
        }
    }

    // each level solves the equation driven by the row two levels down
    for (int lv : {3, 5}) {
        CAPTURE(lv);
        CHECK(ode_gap(g, p, q, t.F[lv], prod(r, t.F[lv - 2])) < 1e-6);
        CHECK(ode_gap(g, p, q, t.G[lv], prod(r, t.G[lv - 2])) < 1e-6);
    }
    for (int lv : {2, 4}) {
        CAPTURE(lv);
        CHECK(ode_gap(g, p, q, t.Ftil[lv], prod(r, t.Ftil[lv - 2])) < 1e-6);
        CHECK(ode_gap(g, p, q, t.Gtil[lv], prod(r, t.Gtil[lv - 2])) < 1e-6);
    }

    // growth envelope, with the single plain weight as the only term
    check_table_bounds(g, t, bound_constants(b, {prod(b.f, r)}, {prod(b.g, r)}));
}

} // namespace

TEST_CASE("classic powers of the trivial solution are scaled monomials") {
    Grid g = make_uniform_grid(0.0, 2.0, 1000, 0.0);
    SampledFunction one = constant(g, 1.0);
    OriginalPowers op = original_powers(g, one, one, one, 8);
    REQUIRE(op.X.size() == 9);
    REQUIRE(op.Xtil.size() == 9);
    for (int n = 0; n <= 8; ++n) {
        CAPTURE(n);
        auto mono = [n](double x) { return cplx(std::pow(x, n) / fact(n)); };
        CHECK(rel_gap_fn(g, op.X[n], mono) < 1e-12);
        CHECK(rel_gap_fn(g, op.Xtil[n], mono) < 1e-12);
    }
}

TEST_CASE("classic powers of an exponential solution match closed forms") {
    Grid g = make_uniform_grid(0.0, 1.0, 1000, 0.0);
    SampledFunction one = constant(g, 1.0);
    SampledFunction f = sample(g, [](double x) { return cplx(std::exp(x)); });
    OriginalPowers op = original_powers(g, f, one, one, 3);

    CHECK(std::abs(op.X[1][g.x0_index]) == 0.0);
    CHECK(std::abs(op.Xtil[1][g.x0_index]) == 0.0);

    CHECK(rel_gap_fn(g, op.X[1], [](double x) {
              return cplx((1.0 - std::exp(-2.0 * x)) / 2.0);
          }) < 1e-12);
    CHECK(rel_gap_fn(g, op.Xtil[1], [](double x) {
              return cplx((std::exp(2.0 * x) - 1.0) / 2.0);
          }) < 1e-12);
    CHECK(rel_gap_fn(g, op.X[2], [](double x) {
              return cplx((std::exp(2.0 * x) - 1.0) / 4.0 - x / 2.0);
          }) < 1e-12);
    CHECK(rel_gap_fn(g, op.Xtil[2], [](double x) {
              return cplx(x / 2.0 + (std::exp(-2.0 * x) - 1.0) / 4.0);
          }) < 1e-12);
    CHECK(rel_gap_fn(g, op.X[3], [](double x) {
              double e = std::exp(-2.0 * x);
              return cplx(x / 4.0 + x * e / 4.0 + (e - 1.0) / 4.0);
          }) < 1e-12);
    CHECK(rel_gap_fn(g, op.Xtil[3], [](double x) {
              double e = std::exp(2.0 * x);
              return cplx(x * e / 4.0 + x / 4.0 - (e - 1.0) / 4.0);
          }) < 1e-12);
}

TEST_CASE("modified levels of an affine basis match hand integration") {
    Grid g = make_uniform_grid(0.0, 1.0, 1000, 0.0);
    SolutionBasis b;
    b.f = constant(g, 1.0);
    b.g = sample(g, [](double x) { return cplx(1.0 + x); });
    b.pfp = constant(g, 0.0);
    b.pgp = constant(g, 1.0);
    b.rho = 1.0;
    PowerTable t = modified_powers(g, b, constant(g, -1.0), 1);
    REQUIRE(t.F.size() == 4);

    auto close = [&](const SampledFunction& row, cplx (*fn)(double)) {
        return rel_gap_fn(g, row, fn) < 1e-14;
    };
    CHECK(close(t.F[1], [](double x) { return cplx(x); }));
    CHECK(close(t.G[1], [](double x) { return cplx(x); }));
    CHECK(close(t.Ftil[1], [](double x) { return cplx(-x); }));
    CHECK(close(t.Gtil[1],
                [](double x) { return cplx(-(x + x * x + x * x * x / 3.0)); }));
    CHECK(close(t.F[2], [](double x) { return cplx(-x * x / 2.0); }));
    CHECK(close(t.G[2],
                [](double x) { return cplx(-(x * x / 2.0 + x * x * x / 3.0)); }));
    CHECK(close(t.Ftil[2], [](double x) { return cplx(-x * x / 2.0); }));
    CHECK(close(t.Gtil[2],
                [](double x) { return cplx(-x * x / 2.0 - x * x * x / 6.0); }));
    CHECK(close(t.F[3], [](double x) { return cplx(-x * x * x / 6.0); }));
}

TEST_CASE("modified levels with a linear f collapse to closed forms") {
    const double c = 0.7;
    Grid g = make_uniform_grid(0.0, 1.0, 1000, 0.0);
    SolutionBasis b;
    b.f = sample(g, [=](double x) { return cplx(1.0 + c * x); });
    b.g = constant(g, 1.0);
    b.pfp = constant(g, c);
    b.pgp = constant(g, 0.0);
    b.rho = -1.0 / c;
    PowerTable t = modified_powers(g, b, constant(g, 1.0), 3);
    for (int n = 0; n <= 7; ++n) {
        CAPTURE(n);
        CHECK(rel_gap_fn(g, t.G[n], [=](double x) {
                  return cplx(std::pow(x, n) / fact(n));
              }) < 1e-13);
        if (n % 2) {
            CHECK(rel_gap_fn(g, t.F[n], [=](double x) {
                      return cplx(std::pow(x, n) / fact(n));
                  }) < 1e-13);
        } else {
            CHECK(rel_gap_fn(g, t.F[n], [=](double x) {
                      return cplx(std::pow(x, n) * (n * (1.0 + c * x) + 1.0) /
                                  fact(n + 1));
                  }) < 1e-13);
        }
    }
}

TEST_CASE("table structure: odd duplication, vanishing at x0, basis swap") {
    ExpFixture fx = exp_fixture();
    const std::size_t i0 = fx.g.x0_index;

    for (int lv = 1; lv <= 2 * fx.N + 1; ++lv) {
        CAPTURE(lv);
        if (lv % 2) {
            // odd plain rows are one shared function
            CHECK(rel_gap(fx.t.F[lv], fx.t.G[lv]) == 0.0);
        }
        CHECK(fx.t.F[lv][i0] == cplx(0.0, 0.0));
        CHECK(fx.t.G[lv][i0] == cplx(0.0, 0.0));
        CHECK(fx.t.Ftil[lv][i0] == cplx(0.0, 0.0));
        CHECK(fx.t.Gtil[lv][i0] == cplx(0.0, 0.0));
    }
    CHECK(fx.t.Ftil[0][i0] == cplx(1.0, 0.0));
    CHECK(fx.t.Gtil[0][i0] == cplx(1.0, 0.0));

    // exchanging the pair exchanges the two halves of the table
    SolutionBasis sw;
    sw.f = fx.basis.g;
    sw.g = fx.basis.f;
    sw.pfp = fx.basis.pgp;
    sw.pgp = fx.basis.pfp;
    sw.rho = 1.0 / (sw.pgp[i0] - sw.pfp[i0]);
    PowerTable ts = modified_powers(fx.g, sw, fx.r, fx.N);
    for (int lv = 0; lv <= 2 * fx.N + 1; ++lv) {
        CAPTURE(lv);
        CHECK(rel_gap(ts.F[lv], fx.t.G[lv]) < 1e-14);
        CHECK(rel_gap(ts.G[lv], fx.t.F[lv]) < 1e-14);
        CHECK(rel_gap(ts.Ftil[lv], fx.t.Gtil[lv]) < 1e-14);
        CHECK(rel_gap(ts.Gtil[lv], fx.t.Ftil[lv]) < 1e-14);
    }
}

TEST_CASE("exponential basis satisfies the full identity battery") {
    ExpFixture fx = exp_fixture();
    SampledFunction q = constant(fx.g, -1.0);
    SampledFunction fp = fx.basis.f;
    SampledFunction gp = sample(fx.g, [](double x) { return cplx(-std::exp(-x)); });
    check_identities(fx.g, fx.basis, fx.p, q, fx.r, fp, gp, fx.t, fx.xf, fx.yg,
                     1e-9);
}

TEST_CASE("growth envelope formulas agree with their closed forms") {
    // one term: the binomial sums collapse to single factorial expressions
    BoundConstants c1{0.7, 1.3, 0.9, 1};
    const double cc = c1.c1 * c1.c2 * c1.c3;
    for (double d : {0.3, 1.7}) {
        for (int n = 0; n <= 12; ++n) {
            CAPTURE(n);
            CAPTURE(d);
            double even = std::pow(2.0 * cc * d, n) / fact(n);
            double odd = 2.0 * c1.c1 * c1.c3 * even;
            double teven = (n + 1.0) * c1.c3 * even;
            double todd = c1.c2 * c1.c3 * std::pow(2.0 * cc, n) *
                          std::pow(d, n + 1) / fact(n);
            CHECK(summed_bound(PowerFamily::even, n, d, c1) ==
                  doctest::Approx(even).epsilon(1e-12));
            CHECK(summed_bound(PowerFamily::odd, n, d, c1) ==
                  doctest::Approx(odd).epsilon(1e-12));
            CHECK(summed_bound(PowerFamily::tilde_even, n, d, c1) ==
                  doctest::Approx(teven).epsilon(1e-12));
            CHECK(summed_bound(PowerFamily::tilde_odd, n, d, c1) ==
                  doctest::Approx(todd).epsilon(1e-12));
        }
    }

    // the library's closed-form envelope majorizes the termwise sums
    for (int terms : {1, 2, 3}) {
        BoundConstants c{0.6, 1.1, 1.4, terms};
        for (double d : {0.25, 1.0, 2.2}) {
            for (int n = 0; n <= 15; ++n) {
                CAPTURE(terms);
                CAPTURE(d);
                CAPTURE(n);
                for (PowerFamily fam :
                     {PowerFamily::even, PowerFamily::odd, PowerFamily::tilde_even,
                      PowerFamily::tilde_odd}) {
                    double lib = std::exp(power_bound_log(fam, n, d, c));
                    double sum = summed_bound(fam, n, d, c);
                    CHECK(lib >= sum * (1.0 - 1e-12));
                }
            }
        }
    }
}

TEST_CASE("two-term pencil levels match hand integration") {
    Grid g = make_uniform_grid(0.0, 1.0, 1000, 0.0);
    SolutionBasis b;
    b.f = constant(g, 1.0);
    b.g = sample(g, [](double x) { return cplx(1.0 + x); });
    b.pfp = constant(g, 0.0);
    b.pgp = constant(g, 1.0);
    b.rho = 1.0;
    // R1[u] = -u, R2[u] = 2u
    std::vector<SampledFunction> Rf = {constant(g, -1.0), constant(g, 2.0)};
    std::vector<SampledFunction> Gf = {
        sample(g, [](double x) { return cplx(-(1.0 + x)); }),
        sample(g, [](double x) { return cplx(2.0 * (1.0 + x)); })};
    PowerTable t = pencil_powers(g, b, Rf, Gf, 2);
    REQUIRE(t.F.size() == 6);

    auto close = [&](const SampledFunction& row, cplx (*fn)(double)) {
        return rel_gap_fn(g, row, fn) < 1e-13;
    };
    CHECK(close(t.F[1], [](double x) { return cplx(x); }));
    CHECK(close(t.F[2], [](double x) { return cplx(-x * x / 2.0); }));
    CHECK(close(t.F[3], [](double x) { return cplx(-x * x * x / 6.0); }));
    CHECK(close(t.F[4], [](double x) {
        return cplx(std::pow(x, 4) / 24.0 + x * x);
    }));
    CHECK(close(t.F[5], [](double x) {
        return cplx(x * x * x / 3.0 + std::pow(x, 5) / 120.0);
    }));
    CHECK(close(t.G[2], [](double x) {
        return cplx(-(x * x / 2.0 + x * x * x / 3.0));
    }));
    CHECK(close(t.G[4], [](double x) {
        return cplx(x * x + 2.0 * x * x * x / 3.0 + std::pow(x, 4) / 24.0 +
                    std::pow(x, 5) / 30.0);
    }));
    CHECK(close(t.Ftil[1], [](double x) { return cplx(-x); }));
    CHECK(close(t.Ftil[2], [](double x) { return cplx(-x * x / 2.0); }));
    CHECK(close(t.Ftil[3], [](double x) {
        return cplx(x * x * x / 6.0 + 2.0 * x);
    }));
    CHECK(close(t.Ftil[4], [](double x) {
        return cplx(x * x + std::pow(x, 4) / 24.0);
    }));
    CHECK(close(t.Gtil[1], [](double x) {
        return cplx(-(x + x * x + x * x * x / 3.0));
    }));
    CHECK(close(t.Gtil[2], [](double x) {
        return cplx(-x * x / 2.0 - x * x * x / 6.0);
    }));
    CHECK(close(t.Gtil[3], [](double x) {
        return cplx(2.0 * x + 2.0 * x * x + 5.0 * x * x * x / 6.0 +
                    std::pow(x, 4) / 6.0 + std::pow(x, 5) / 30.0);
    }));
    CHECK(close(t.Gtil[4], [](double x) {
        return cplx(x * x + x * x * x / 3.0 + std::pow(x, 4) / 24.0 +
                    std::pow(x, 5) / 120.0);
    }));

    // levels obey the equation driven by the term-weighted lower rows:
    // (p u')' + q u = sum_k R_k[level n-2k] with p = 1, q = 0 here
    SampledFunction one = constant(g, 1.0), zero = constant(g, 0.0);
    CHECK(ode_gap(g, one, zero, t.Ftil[4],
                  combo(-1.0, t.Ftil[2], 2.0, t.Ftil[0])) < 1e-6);
    CHECK(ode_gap(g, one, zero, t.F[5], combo(-1.0, t.F[3], 2.0, t.F[1])) < 1e-6);
    CHECK(ode_gap(g, one, zero, t.Gtil[4],
                  combo(-1.0, t.Gtil[2], 2.0, t.Gtil[0])) < 1e-6);

    // growth envelope with both terms counted
    BoundConstants bc = bound_constants(b, Rf, Gf);
    CHECK(bc.terms == 2);
    CHECK(bc.c1 == 1.0);
    CHECK(bc.c2 == doctest::Approx(4.0));
    CHECK(bc.c3 == doctest::Approx(2.0));
    check_table_bounds(g, t, bc);
}

TEST_CASE("a single plain term reduces the pencil table to the modified one") {
    RandomProblem rp = random_problem(5);
    std::vector<SampledFunction> Rf = {prod(rp.basis.f, rp.r)};
    std::vector<SampledFunction> Gf = {prod(rp.basis.g, rp.r)};
    PowerTable tp = pencil_powers(rp.g, rp.basis, Rf, Gf, rp.N);
    for (int lv = 0; lv <= 2 * rp.N + 1; ++lv) {
        CAPTURE(lv);
        CHECK(rel_gap(tp.F[lv], rp.t.F[lv]) < 1e-13);
        CHECK(rel_gap(tp.G[lv], rp.t.G[lv]) < 1e-13);
        CHECK(rel_gap(tp.Ftil[lv], rp.t.Ftil[lv]) < 1e-13);
        CHECK(rel_gap(tp.Gtil[lv], rp.t.Gtil[lv]) < 1e-13);
    }
}

TEST_CASE("streaming mode keeps exact endpoint rows") {
    ExpFixture fx = exp_fixture();
    PowerTable ts = modified_powers(fx.g, fx.basis, fx.r, fx.N, nullptr, false);
    CHECK(!ts.full);
    CHECK(ts.F.empty());
    REQUIRE(ts.F_ends.size() == fx.t.F_ends.size());
    for (int lv = 0; lv <= 2 * fx.N + 1; ++lv) {
        CAPTURE(lv);
        CHECK(ts.F_ends[lv][0] == fx.t.F[lv].front());
        CHECK(ts.F_ends[lv][1] == fx.t.F[lv].back());
        CHECK(ts.G_ends[lv][1] == fx.t.G[lv].back());
        CHECK(ts.Ftil_ends[lv][0] == fx.t.Ftil[lv].front());
        CHECK(ts.Ftil_ends[lv][1] == fx.t.Ftil[lv].back());
        CHECK(ts.Gtil_ends[lv][1] == fx.t.Gtil[lv].back());
    }

    // same contract on the pencil path
    Grid g = make_uniform_grid(0.0, 1.0, 500, 0.0);
    SolutionBasis b;
    b.f = constant(g, 1.0);
    b.g = sample(g, [](double x) { return cplx(1.0 + x); });
    b.pfp = constant(g, 0.0);
    b.pgp = constant(g, 1.0);
    b.rho = 1.0;
    std::vector<SampledFunction> Rf = {constant(g, -1.0), constant(g, 2.0)};
    std::vector<SampledFunction> Gf = {
        sample(g, [](double x) { return cplx(-(1.0 + x)); }),
        sample(g, [](double x) { return cplx(2.0 * (1.0 + x)); })};
    PowerTable full = pencil_powers(g, b, Rf, Gf, 3);
    PowerTable ends = pencil_powers(g, b, Rf, Gf, 3, nullptr, nullptr, false);
    for (int lv = 0; lv <= 7; ++lv) {
        CAPTURE(lv);
        CHECK(ends.F_ends[lv][1] == full.F[lv].back());
        CHECK(ends.Gtil_ends[lv][1] == full.Gtil[lv].back());
    }
}

TEST_CASE("solution bases from samples and from scratch") {
    SUBCASE("samples are renormalized and the derivative is recovered") {
        Grid g = make_uniform_grid(0.0, 1.0, 1000, 0.0);
        SampledFunction p = constant(g, 1.0);
        SampledFunction f = sample(g, [](double x) { return cplx(2.0 * (1.0 + x)); });
        SampledFunction gg = constant(g, 1.0);
        SolutionBasis b = basis_from_samples(g, p, f, gg);
        CHECK(b.f[g.x0_index] == cplx(1.0, 0.0));
        CHECK(rel_gap_fn(g, b.f, [](double x) { return cplx(1.0 + x); }) < 1e-12);
        CHECK(maxabs(b.pgp) < 1e-9);
        CHECK(rel_gap(b.pfp, constant(g, 1.0)) < 1e-9);
        CHECK(std::abs(b.rho - cplx(-1.0)) < 1e-9);
    }
    SUBCASE("a dependent pair is rejected") {
        Grid g = make_uniform_grid(0.0, 1.0, 100, 0.0);
        SampledFunction p = constant(g, 1.0);
        SampledFunction f = sample(g, [](double x) { return cplx(1.0 + x); });
        CHECK_THROWS_WITH_AS(basis_from_samples(g, p, f, f),
                             doctest::Contains("linearly dependent"),
                             ProblemError);
    }
    SUBCASE("bootstrap with q = 0 gives the affine pair") {
        Grid g = make_uniform_grid(0.0, 1.0, 500, 0.0);
        SolutionBasis b =
            bootstrap_basis(g, constant(g, 1.0), constant(g, 0.0));
        CHECK(rel_gap(b.f, constant(g, 1.0)) == 0.0);
        CHECK(rel_gap_fn(g, b.g, [](double x) { return cplx(1.0 + x); }) < 1e-14);
        CHECK(std::abs(b.rho - cplx(1.0)) < 1e-14);
    }
    SUBCASE("bootstrap with constant q reproduces hyperbolic solutions") {
        Grid g = make_uniform_grid(-1.0, 1.5, 1000, 0.0);
        SolutionBasis b =
            bootstrap_basis(g, constant(g, 1.0), constant(g, -1.0));
        CHECK(rel_gap_fn(g, b.f, [](double x) { return cplx(std::cosh(x)); }) <
              1e-12);
        CHECK(rel_gap_fn(g, b.pfp, [](double x) { return cplx(std::sinh(x)); }) <
              1e-12);
        CHECK(rel_gap_fn(g, b.g, [](double x) { return cplx(std::exp(x)); }) <
              1e-12);
        CHECK(std::abs(b.rho - cplx(1.0)) < 1e-12);
    }
    SUBCASE("bootstrap with complex q still solves the equation") {
        Grid g = make_uniform_grid(-1.0, 1.0, 1000, 0.2);
        SampledFunction p = sample(g, [](double x) {
            return cplx(1.0 + 0.3 * std::cos(x));
        });
        SampledFunction q = sample(g, [](double x) {
            return cplx(-1.0 + 0.2 * x, 0.4 * std::sin(x));
        });
        SolutionBasis b = bootstrap_basis(g, p, q);
        CHECK(b.f[g.x0_index] == cplx(1.0, 0.0));
        CHECK(b.g[g.x0_index] == cplx(1.0, 0.0));
        // pfp really is p f'
        CHECK(rel_gap(b.pfp, prod(p, derivative_samples(g, b.f))) < 1e-8);
        // (p f')' + q f = 0 and the same for g
        SampledFunction zero = constant(g, 0.0);
        CHECK(ode_gap(g, p, q, b.f, zero) < 1e-8);
        CHECK(ode_gap(g, p, q, b.g, zero) < 1e-8);
        // normalized Wronskian
        SampledFunction wr(g.size());
        for (std::size_t j = 0; j < g.size(); ++j)
            wr[j] = b.f[j] * b.pgp[j] - b.g[j] * b.pfp[j];
        CHECK(rel_gap(wr, constant(g, 1.0 / b.rho)) < 1e-10);
    }
}

TEST_CASE("randomized smooth problems satisfy the full identity battery") {
    for (unsigned seed : {11u, 23u, 37u}) {
        CAPTURE(seed);
        RandomProblem rp = random_problem(seed);
        check_identities(rp.g, rp.basis, rp.p, rp.q, rp.r, rp.fp, rp.gp, rp.t,
                         rp.xf, rp.yg, 1e-9);
    }
}
