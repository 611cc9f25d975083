#pragma once

#include "spps/powers.hpp"

namespace spps {

// Dense polynomial helpers; coefficients ascending in the parameter.
std::vector<cplx> polymul(const std::vector<cplx>& a, const std::vector<cplx>& b);
std::vector<cplx> polyadd(const std::vector<cplx>& a, const std::vector<cplx>& b);
// Re-centers sum c_k lam^k to powers of (lam - lam0).
std::vector<cplx> recenter_poly(const std::vector<cplx>& c, cplx lam0);
cplx polyval(const std::vector<cplx>& c, cplx z);

// Truncated power-series solutions around a spectral center. Row k holds the
// coefficient of (lam - center)^k sampled on the grid nodes. pu1/pu2 carry the
// gauge factor P of the shifted problem; dividing by P restores p u'.
struct SeriesSolution {
    cplx center = 0.0;
    int N = 0;
    std::size_t x0_index = 0;
    std::vector<SampledFunction> u1, u2, pu1, pu2;
    SampledFunction P;
};

// pfp/pgp must already carry the gauge factor (P * p f', P * p g').
SeriesSolution assemble_series(const PowerTable& t, const SolutionBasis& basis,
                               const SampledFunction& pfp, const SampledFunction& pgp,
                               cplx center, std::size_t x0_index, SampledFunction P);

SampledFunction eval_series(const std::vector<SampledFunction>& rows, cplx dl);
std::vector<cplx> series_at(const std::vector<SampledFunction>& rows,
                            std::size_t node);

// Exact solution pair at lam, normalized at x0, in original p units.
SolutionBasis rebase_basis(const SeriesSolution& s, cplx lam);

// Coefficients of the pencil recentered at lam0, all weighted by the gauge
// factor P = exp(-int (sum lam0^k s_k) / p).
struct ShiftedPencil {
    SampledFunction p, q, P;
    std::vector<PencilTerm> terms;
    std::vector<SeamMap> r_seams, s_seams;
};

ShiftedPencil shift_pencil(const SpectralProblem& pr, cplx lam0);

// Potential of the Sturm-Liouville problem Darboux-associated with
// (p u')' + q u = lam r u; its lam = 0 solution is 1/f.
SampledFunction darboux_potential(const Grid& g, const SampledFunction& f,
                                  const SampledFunction& p,
                                  const SampledFunction& q,
                                  const SampledFunction& r);

} // namespace spps
