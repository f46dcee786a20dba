#pragma once

#include "rscert/dyadic.hpp"
#include "rscert/eval.hpp"
#include "rscert/norms.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rscert {

/// [r / 2^k, (r + 1) / 2^k] x [s / 2^k, (s + 1) / 2^k].
struct DyadicSquare {
    std::uint64_t r = 0;
    std::uint64_t s = 0;
    int k = 0;

    DyadicPoint x_lo() const { return DyadicPoint(r, k); }
    DyadicPoint x_hi() const { return DyadicPoint(r + 1, k); }
    DyadicPoint y_lo() const { return DyadicPoint(s, k); }
    DyadicPoint y_hi() const { return DyadicPoint(s + 1, k); }
    double side() const;

    /// Children at scale k + 1, in order (2r, 2s), (2r+1, 2s), (2r, 2s+1), (2r+1, 2s+1).
    std::vector<DyadicSquare> children() const;

    friend bool operator==(const DyadicSquare&, const DyadicSquare&) = default;
    /// Canonical order: by k, then r, then s.
    friend std::strong_ordering operator<=>(const DyadicSquare& a, const DyadicSquare& b);
};

std::string to_string(const DyadicSquare& sq);

enum class SquareStatus { Certified, Subdivided, Bad, Skipped };

std::string_view status_name(SquareStatus s);

struct SquareRecord {
    DyadicSquare square;
    SquareStatus status = SquareStatus::Bad;
    /// For squares decided from a parent corner: that corner, its enclosure,
    /// and the infimum of the target over the square.
    std::optional<DyadicPoint> corner_x;
    std::optional<DyadicPoint> corner_y;
    Enclosure value;
    double target = 0.0;
};

enum class TwoDimBound { G, F2 };

std::string_view bound_name(TwoDimBound b);

struct CertTree {
    TwoDimBound bound = TwoDimBound::G;
    std::size_t N = 0;
    int max_scale = 6;
    std::vector<DyadicSquare> roots;
    std::vector<SquareRecord> squares; ///< canonical order
    std::size_t corner_evaluations = 0;

    std::vector<DyadicSquare> with_status(SquareStatus s) const;
    std::vector<DyadicSquare> bad() const { return with_status(SquareStatus::Bad); }
    std::vector<DyadicSquare> subdivided() const { return with_status(SquareStatus::Subdivided); }
};

/// Area bookkeeping in units of 4^{-max_scale}.
struct AreaReport {
    std::uint64_t certified = 0;
    std::uint64_t bad = 0;
    std::uint64_t skipped = 0;
    std::uint64_t region = 0;
    bool consistent = false; ///< certified + bad + skipped == region
};

AreaReport area_accounting(const CertTree& tree);

/// Infimum over the square of min{10(x + y), 40}, rounded down.
double g_target_min(const DyadicSquare& sq);
/// Infimum over the square of 10(y - x), rounded down (may be negative).
double f2_target_min(const DyadicSquare& sq);

/// True when sqrt(hi) + 3 2^{-k/2} <= sqrt(target) for a parent at scale k,
/// where hi already includes the safety margin.
bool corner_certifies(double hi, int parent_scale, double target);

/// Recursive certification of g(x, y) <= min{10(x + y), 40} below one square.
/// Each child is tested against the parent corner nearest to it; failures are
/// subdivided until scale max_scale, where they are marked bad.
CertTree certify_square_g(const DyadicSquare& sq, std::size_t N, int max_scale = 6, unsigned threads = 1);

/// The same over the 16 unit squares of [0, 4]^2.
CertTree certify_g(std::size_t N, int max_scale = 6, unsigned threads = 1);
CertTree certify_g(PrefixGridCache& cache, int max_scale = 6, unsigned threads = 1);

struct F2Result {
    CertTree tree;
    bool ok = false; ///< no bad squares outside [1, 2] x [2, 3]
};

/// Certification of f(x, y) <= 10(y - x) on ([0,2] x [2,4]) \ ([1,2] x [2,3]).
F2Result certify_f2(std::size_t N, int max_scale = 6, unsigned threads = 1);
F2Result certify_f2(PrefixGridCache& cache, int max_scale = 6, unsigned threads = 1);

struct ExclusionResult {
    bool ok = true;
    std::vector<DyadicSquare> offending;
    std::size_t bad_inside_region = 0;
};

/// Region B = ([0,2] x [0,4]) \ ([0,1] x [0,2]) \ ([0,2] x [0,1]).
bool inside_region_b(const DyadicSquare& sq);
/// Containment in [1, 3/2] x [2, 3].
bool inside_critical_box(const DyadicSquare& sq);

/// Every bad square inside B must lie in [1, 3/2] x [2, 3].
ExclusionResult check_exclusion_region(const CertTree& tree);
ExclusionResult check_exclusion_region(const std::vector<DyadicSquare>& bad);

struct ReflectionReport {
    int k = 0;
    std::size_t checked = 0;
    bool ok = true;
    std::optional<std::pair<std::uint64_t, std::uint64_t>> first_failure;
};

/// ||P_{[m,n)}||_L = ||P_{[2^{k+2}-n, 2^{k+2}-m)}||_L for 2^{k+1} <= m <= n <= 2^{k+2}.
/// Checks all pairs when there are at most `samples`, otherwise a seeded sample.
ReflectionReport reflection_reduction_check(int k, std::size_t samples, std::size_t N, std::uint64_t seed = 1);

struct BruteTwoDimReport {
    std::uint64_t n_max = 0;
    std::size_t N = 0;
    std::size_t pairs = 0;
    bool ok = false;
    double worst_ratio = 0.0; ///< max lower enclosure of ||P_{[m,n)}||_L^2 / (n - m)
    std::pair<std::uint64_t, std::uint64_t> worst{0, 0};
    std::vector<std::pair<std::uint64_t, std::uint64_t>> failures;
};

/// ||P_{[m,n)}||_L^2 <= 10 (n - m) for all 0 <= m < n <= n_max, tested on the
/// lower enclosures from differences of prefix grids. Requires N >= 4 n_max.
BruteTwoDimReport brute_twodim(std::uint64_t n_max, std::size_t N, unsigned threads = 1);

/// One "k r s" line per square, canonical order.
std::string format_square_list(const std::vector<DyadicSquare>& squares);
std::vector<DyadicSquare> parse_square_list(std::string_view text);

} // namespace rscert
