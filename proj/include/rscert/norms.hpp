#pragma once

#include "rscert/dyadic.hpp"
#include "rscert/eval.hpp"
#include "rscert/sequence.hpp"

#include <cstddef>
#include <cstdint>

namespace rscert {

/// Closed real interval [lo, hi] known to contain a quantity.
struct Enclosure {
    double lo = 0.0;
    double hi = 0.0;

    double width() const noexcept { return hi - lo; }
    double mid() const noexcept { return 0.5 * (lo + hi); }
    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
    bool overlaps(const Enclosure& o) const noexcept { return lo <= o.hi && o.lo <= hi; }
    /// Multiply both ends by a power of two (exact).
    Enclosure scaled_pow2(int e) const noexcept;
};

/// Enclosure of sup over the circle of a non-negative trigonometric polynomial
/// of degree `degree` from its maximum on N equispaced points. The sampled
/// values are square norms of vectors whose components each carry absolute
/// error <= `value_error`. Off-grid growth uses the stationary-point bound
/// S <= M + (1/2) D^2 (pi/N)^2 S. Throws PreconditionError if the grid is too
/// coarse for that bound to be useful.
Enclosure enclose_grid_max(double grid_max, double value_error, double degree, std::size_t N);

/// ||P_seg||_inf^2. Requires N a power of two with N >= 4 (n - m).
Enclosure sup_norm_sq(const Segment& seg, std::size_t N);

/// ||P_seg||_L^2 = sup (|P(z)|^2 + |P(-z)|^2). Same preconditions.
Enclosure l_norm_sq(const Segment& seg, std::size_t N);

/// L-norm square of a precomputed half grid of `degree + 1` terms.
Enclosure l_norm_sq_of(const HalfGrid& h);

/// ||P_{<n} - P_{<m}||_L^2 from two prefix grids on the same N.
Enclosure l_norm_sq_of_difference(const HalfGrid& upper, const HalfGrid& lower);

/// f(x) = 2^{-k} ||P_{<u}||_L^2 for x = u / 2^k.
Enclosure f_dyadic(const DyadicPoint& x, std::size_t N);

/// f(x, y) = ||P_{[m,n)}||_L^2 scaled from the common denominator. x <= y.
Enclosure f2_dyadic(const DyadicPoint& x, const DyadicPoint& y, std::size_t N);
Enclosure f2_dyadic(const DyadicPoint& x, const DyadicPoint& y, PrefixGridCache& cache);

/// g(r, s) via the phase-free formula
///   sup_z |A(z)|^2 + |A(-z)|^2 + |B(z)|^2 + |B(-z)|^2 + 2 |B(z) A(-z) - B(-z) A(z)|
/// with A = P_{<r}, B = P_{<s}. Requires N >= 4 max(r, s).
Enclosure g_int(std::uint64_t r, std::uint64_t s, std::size_t N);
Enclosure g_int(std::uint64_t r, std::uint64_t s, PrefixGridCache& cache);
Enclosure g_of(const HalfGrid& a, const HalfGrid& b);

/// g(x, y) = 2^{-k} g(2^k x, 2^k y).
Enclosure g_dyadic(const DyadicPoint& x, const DyadicPoint& y, std::size_t N);
Enclosure g_dyadic(const DyadicPoint& x, const DyadicPoint& y, PrefixGridCache& cache);

/// Result of trying to prove ||P_seg||_inf^2 <= threshold.
struct SupCertificate {
    bool ok = false;
    Enclosure enclosure;      ///< hi is the best proven upper bound
    std::size_t refined = 0;  ///< off-grid point evaluations used
    double failed_at = -1.0;  ///< angle of an unresolved interval, if any
};

struct RefineOptions {
    int max_depth = 60;
    std::size_t max_evaluations = 4'000'000;
};

/// Proves sup_{|z|=1} |P_seg(z)|^2 <= threshold. Starts from the grid
/// enclosure; if that is not enough, bounds each grid interval by a second
/// order Taylor estimate from its endpoints (values and derivatives) with
/// Bernstein's inequality on the remainder, bisecting until every piece is
/// below the threshold. At z = +-1 the derivative vanishes exactly and the
/// exact integer value and curvature give a third order estimate, so a
/// threshold attained there can still be certified.
SupCertificate refine_sup_norm_sq(const Segment& seg, std::size_t N, double threshold,
                                  const RefineOptions& opts = {});

} // namespace rscert
