#pragma once

#include "spps/grid.hpp"

#include <vector>

namespace spps {

struct RootResult {
    std::vector<cplx> roots;
    bool converged = true;
};

// All roots of sum c_k z^k (coefficients ascending) by the Aberth-Ehrlich
// iteration with convex-hull initialization. Deterministic: identical input
// produces identical output.
RootResult polynomial_roots(const std::vector<cplx>& coeffs);

} // namespace spps
