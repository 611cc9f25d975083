#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace spps {

using cplx = std::complex<double>;

// Values of a function tabulated on the nodes of a Grid. Kept as a bare
// vector: every operation that consumes one also receives the grid, and the
// solver allocates these by the hundred.
using SampledFunction = std::vector<cplx>;

enum class GridKind { uniform, chebyshev };

struct GridError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Workspace for the Chebyshev coefficient transform (dense cosine matrix,
// built once per grid). Kept out of line so uniform grids pay nothing.
struct ChebWorkspace;

// A grid knows its nodes, the anchor node x0 every cumulative integral is
// taken from, and (uniform kind only) the segment boundaries that integration
// blocks must not straddle. Uniform grids always have an interval count
// divisible by 5 inside each segment so that 6-point blocks tile exactly.
struct Grid {
    GridKind kind = GridKind::uniform;
    double a = 0.0;
    double b = 1.0;
    std::vector<double> nodes;
    std::size_t x0_index = 0;
    // Sorted node indices of segment boundaries; always contains 0, x0_index
    // and the last node. Breakpoints of piecewise coefficients are forced in.
    std::vector<std::size_t> segment_bounds;
    double h = 0.0; // uniform spacing (uniform kind)

    std::shared_ptr<const ChebWorkspace> cheb; // chebyshev kind only

    std::size_t size() const { return nodes.size(); }
    std::size_t intervals() const { return nodes.size() - 1; }
    double x0() const { return nodes[x0_index]; }
};

// Right-limit values substituted for the first node of any integration block
// that starts at a segment boundary, keyed by node index. This is how a
// piecewise-continuous integrand is integrated segment by segment without
// storing two values per node.
using SeamMap = std::map<std::size_t, cplx>;

// Builds a uniform grid over [a,b] with at least m intervals. m is adjusted
// upward until x0 and every breakpoint fall exactly on nodes and every
// segment length is a multiple of 5. If x0 cannot be fitted together with the
// breakpoints (irrational position), it is snapped to the nearest segment
// boundary-compatible node and the returned grid reflects that.
Grid make_uniform_grid(double a, double b, std::size_t m, double x0,
                       const std::vector<double>& breakpoints = {});

// Chebyshev-Lobatto nodes mapped to [a,b], ascending. x0 snaps to the nearest
// node. Breakpoints are not supported on this kind.
Grid make_chebyshev_grid(double a, double b, std::size_t m, double x0);

// Cumulative antiderivative anchored at the grid's x0 node:
// I(x_j) = integral from x0 to x_j of the sampled integrand.
// Composite 6-point rule; interior nodes of each block get the exact
// antiderivative of the block's degree-5 interpolant.
SampledFunction integrate_newton_cotes(const Grid& g, const SampledFunction& y,
                                       const SeamMap* seams = nullptr);

// Same contract on a chebyshev grid: transform to Chebyshev coefficients,
// apply the coefficient antiderivative recurrence, evaluate, re-anchor at x0.
SampledFunction integrate_clenshaw_curtis(const Grid& g, const SampledFunction& y);

// Dispatch on grid kind. The single primitive the power recursions call.
SampledFunction cumulative_integral(const Grid& g, const SampledFunction& y,
                                    const SeamMap* seams = nullptr);

// cumulative_integral of the pointwise product w*y (the shape of every
// recursion step). Seams, when given, are right-limit values of the product.
SampledFunction weighted_integral(const Grid& g, const SampledFunction& w,
                                  const SampledFunction& y,
                                  const SeamMap* seams = nullptr);

// Derivative of sampled values by the grid's native rule: 6-point finite
// differences (one-sided at the ends, segment-aware) on uniform grids,
// Chebyshev coefficient differentiation on chebyshev grids.
SampledFunction derivative_samples(const Grid& g, const SampledFunction& y);

} // namespace spps
