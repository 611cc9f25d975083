#pragma once

#include "spps/grid.hpp"
#include "spps/problem.hpp"

#include <array>

namespace spps {

// A pair of particular solutions of (p v')' + q v = 0 normalized to
// f(x0) = g(x0) = 1, together with p f' and p g' in the original p.
struct SolutionBasis {
    SampledFunction f, g, pfp, pgp;
    cplx rho; // 1 / (p(x0) (g' - f')(x0)) = 1 / (pgp - pfp)(x0)
};

SolutionBasis basis_from_seed(const SpectralProblem& pr);

// Derivatives are recovered numerically; f and g are renormalized at x0.
SolutionBasis basis_from_samples(const Grid& g, const SampledFunction& p,
                                 const SampledFunction& f,
                                 const SampledFunction& gg);

// Builds the basis from scratch: f as a power series in the auxiliary
// parameter around the trivial solution 1, then g = f + v2 from the
// companion solution with unit Wronskian.
SolutionBasis bootstrap_basis(const Grid& g, const SampledFunction& p,
                              const SampledFunction& q,
                              const SeamMap* q_seams = nullptr,
                              const SeamMap* p_seams = nullptr,
                              int max_levels = 300, double tol = 1e-17);

// Formal power levels 0..2N+1. With full=false only the endpoint rows are
// retained (constant memory in the level count).
struct PowerTable {
    int N = 0;
    bool full = true;
    std::vector<SampledFunction> F, G, Ftil, Gtil;
    std::vector<std::array<cplx, 2>> F_ends, G_ends, Ftil_ends, Gtil_ends;
};

PowerTable modified_powers(const Grid& g, const SolutionBasis& basis,
                           const SampledFunction& r, int N,
                           const SeamMap* r_seams = nullptr, bool full = true);

// Rf[k], Gf[k] hold samples of R_{k+1}[f] and R_{k+1}[g].
PowerTable pencil_powers(const Grid& g, const SolutionBasis& basis,
                         const std::vector<SampledFunction>& Rf,
                         const std::vector<SampledFunction>& Gf, int N,
                         const std::vector<SeamMap>* Rf_seams = nullptr,
                         const std::vector<SeamMap>* Gf_seams = nullptr,
                         bool full = true);

// Classic power levels X^(n), Xtil^(n) attached to one particular solution.
struct OriginalPowers {
    std::vector<SampledFunction> X, Xtil;
};

OriginalPowers original_powers(const Grid& g, const SampledFunction& f,
                               const SampledFunction& p, const SampledFunction& r,
                               int levels);

struct BoundConstants {
    double c1 = 0, c2 = 0, c3 = 0;
    int terms = 1;
};

BoundConstants bound_constants(const SolutionBasis& basis,
                               const std::vector<SampledFunction>& Rf,
                               const std::vector<SampledFunction>& Gf);

enum class PowerFamily { even, odd, tilde_even, tilde_odd };

// log of the closed-form growth bound for the level with index n
// (F_{2n}, F_{2n+1}, Ftil_{2n}, Ftil_{2n+1}) at distance dist from x0.
double power_bound_log(PowerFamily fam, int n, double dist,
                       const BoundConstants& c);

} // namespace spps
