#pragma once

#include "rscert/eval.hpp"
#include "rscert/norms.hpp"
#include "rscert/sequence.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace rscert {

/// m_k = (5 4^k + 1) / 3, n_k = (8 4^k + 1) / 3.
struct ExtremalPair {
    int k = 0;
    std::uint64_t m = 0;
    std::uint64_t n = 0;

    /// Requires 0 <= k <= 30.
    static ExtremalPair at(int k);
    Segment segment() const { return Segment(m, n); }
};

/// Exact (P_seg(1), P_seg(-1)) by summing block values in integers.
std::pair<std::int64_t, std::int64_t> exact_values_at_pm1(const Segment& seg);

/// Same by plain coefficient summation; O(n - m).
std::pair<std::int64_t, std::int64_t> summed_values_at_pm1(const Segment& seg);

struct ExtremalValues {
    int k = 0;
    std::int64_t at_one = 0;
    std::int64_t at_minus_one = 0;
    bool ok = false; ///< equal to 3 2^k - 2 and -2^k + 2
};

/// Requires 0 <= k <= 20.
ExtremalValues extremal_values(int k);

struct SharpPrefix {
    int k = 0;
    std::uint64_t n = 0;         ///< (2 4^k + 1) / 3
    std::int64_t at_one = 0;     ///< P_{<n}(1)
    bool ok = false;             ///< at_one == 2^{k+1} - 1 and (at_one + 1)^2 == 6n - 2
};

SharpPrefix sharp_prefix(int k);

/// P_{[m_k, n_k)}(z) from the four-fold recursion, starting at P_{[2,3)}(z) = z^2.
/// Needs both +-z^{4^j} at every level, so the work is O(k).
cplx extremal_eval_badrec(int k, cplx z);

/// z = exp(3 pi i / 4).
cplx montgomery_point();

/// 5 + 7 / sqrt(2).
double montgomery_limit();

struct MontgomeryReport {
    int k = 0;
    double point_ratio = 0.0;   ///< |P(e^{3 pi i/4})|^2 / 4^k
    bool exceeds_nine = false;
    /// ||P||_inf^2 / 4^k and the angle of the largest grid value; only when
    /// a valid grid fits in memory (k <= 12).
    std::optional<Enclosure> grid_sup_ratio;
    double grid_argmax = 0.0;
    std::size_t N = 0;          ///< grid actually used, 0 if none
};

/// Requires 0 <= k <= 14. The grid has at least N points and is enlarged
/// as needed for the segment length.
MontgomeryReport montgomery_counterexample(int k, std::size_t N);

/// max over k in [k_min, k_max] of |ratio(k) - limit| 2^k.
double montgomery_fitted_constant(int k_min, int k_max);

struct LRatioReport {
    int k = 0;
    double lower = 0.0;         ///< proven lower bound on ||P||_L^2 / 4^k
    Enclosure ratio;            ///< grid enclosure of ||P||_L^2 / 4^k
    double predicted_lower = 0.0; ///< 10 - 16 2^{-k} + 8 4^{-k}
    bool ok = false;            ///< lower >= predicted_lower and lower <= 10
};

/// Requires 0 <= k <= 12 (grid memory); N is enlarged as needed.
LRatioReport L_ratio_lower(int k, std::size_t N);

struct DenseRow {
    int k = 0;
    Enclosure ratio; ///< ||P_{[2^k m, 2^k n)}||_inf / 2^{k/2}
};

struct DenseReport {
    std::uint64_t m = 0;
    std::uint64_t n = 0;
    Enclosure target; ///< ||P_{[m,n)}||_L
    std::vector<DenseRow> rows;
    bool bounded = false;       ///< every ratio.lo <= target.hi
    double final_gap = 0.0;     ///< |last ratio - target| / target
    bool near_target = false;   ///< final_gap <= 5%
};

/// Ratios for k = 0..k_max. Each row uses a grid of at least N points,
/// enlarged as needed for its segment.
DenseReport dense_limit_empirical(std::uint64_t m, std::uint64_t n, int k_max, std::size_t N);

using SpherePoint = std::array<cplx, 2>;

struct SphereReport {
    int k = 0;
    std::size_t count = 0;
    double min_distance = 0.0;
    double max_norm_error = 0.0; ///< max | |P|^2 + |Q|^2 - 2^{k+1} | / 2^{k+1}
};

/// Samples `count` distinct solutions w of w^{2^k} = z, maps each to
/// (P_k(w), Q_k(w)) / 2^{(k+1)/2} and reports the closest distance to target.
SphereReport sphere_sampler(int k, cplx z, const SpherePoint& target, std::size_t count, std::uint64_t seed);

/// Uniform point on the unit sphere of C^2.
SpherePoint random_sphere_point(std::uint64_t seed);

} // namespace rscert
