#pragma once

#include "spps/aberth.hpp"
#include "spps/series.hpp"

#include <string>

namespace spps {

struct CharacteristicPolynomial {
    cplx center = 0.0;
    std::vector<cplx> coeffs; // ascending in (lam - center)
    double trust_radius = 0.0; // empirical coefficient-decay radius
    double bound_radius = 0.0; // radius certified by the a-priori estimates
    Strategy strategy = Strategy::regular;
};

// Largest radius rr (bisected in [1e-3, 1e3]) at which the last five
// coefficient magnitudes stay three orders below the dominant one.
double empirical_trust_radius(const std::vector<cplx>& coeffs);

// Basis of particular solutions at the given spectral center: the exact seed
// pair when available at lam0 = 0, otherwise built from scratch for the
// recentered problem.
SolutionBasis particular_solutions_at(const SpectralProblem& pr, cplx lam0);

struct StageArtifacts {
    SeriesSolution series; // empty rows for strategies without rebase support
    CharacteristicPolynomial phi;
};

StageArtifacts build_stage(const SpectralProblem& pr, cplx lam0,
                           const SolutionBasis& basis, int N, Strategy strategy);

struct EigenvalueEstimate {
    int index_hint = 0;
    cplx lambda;
    double residual = 0.0;
    cplx center_used;
    bool outside_theorem_hypotheses = false;
};

struct SolveOptions {
    int N = 100;
    int count = 1;
    cplx lam_start = 0.0;
    Strategy strategy = Strategy::regular;
    Window window;
    int index_offset = 0;
};

struct SolveResult {
    std::vector<EigenvalueEstimate> eigenvalues;
    std::vector<std::string> warnings;
};

SolveResult solve(const SpectralProblem& pr, const SolveOptions& opt);

} // namespace spps
