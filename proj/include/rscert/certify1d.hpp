#pragma once

#include "rscert/dyadic.hpp"
#include "rscert/norms.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rscert {

/// Which constraint stopped the certified radius from growing. The first
/// three name the piece of the scaled bound on f(r) that was in force; the
/// last is the half-step restriction |y - x| <= 2^{-k-1}.
enum class Binding { Case6x, Case8, Case9, HalfStep };

/// "1", "2", "3" or "*", as used in the interval tables.
std::string_view binding_label(Binding b);

enum class CertStatus { Certified, Failed };

/// Upper bound on f(d) for d > 0 obtained by scaling
///   f(x) <= 6x on [1, 4/3],  8 on [4/3, 25/16],  9 on [25/16, 2]
/// via f(d) = 2^{-t} f(2^t d), 2^t d in (1, 2]. Nondecreasing and
/// left-continuous; breakpoints take the smaller of the two applicable pieces.
double scaled_f_bound(double d);

struct RadiusChoice {
    double radius = 0.0;
    Binding binding = Binding::HalfStep;
};

/// Largest r <= limit with scaled_f_bound(r) <= cap. Returns nullopt for cap <= 0.
std::optional<RadiusChoice> largest_radius(double cap, double limit);

struct CertRecord1D {
    DyadicPoint center;
    int k = 0;            ///< scale of the center
    Enclosure f;          ///< enclosure of f(center)
    double target = 0.0;
    double margin = 0.0;  ///< slack withheld from the target
    double radius = 0.0;
    Binding binding = Binding::HalfStep;
    CertStatus status = CertStatus::Failed;

    bool certified() const noexcept { return status == CertStatus::Certified; }
    Rational left() const;
    Rational right() const;
};

/// Certify f(y) <= target for |y - center| <= radius using the continuity
/// bound |f(y)^{1/2} - f(x)^{1/2}| <= f(|y - x|)^{1/2}, with the inequality
/// required to hold with a margin of twice the enclosure width.
CertRecord1D max_radius_from(const DyadicPoint& center, const Enclosure& f_center, double target);
CertRecord1D max_radius(const DyadicPoint& center, double target, std::size_t N);

struct CoverageReport {
    DyadicPoint a;
    DyadicPoint b;
    double target = 0.0;
    std::vector<CertRecord1D> records;
    bool covered = false;
    std::optional<std::pair<Rational, Rational>> first_gap;
};

/// Certifies f <= target on [a, b] from the given centers. Coverage is
/// decided in exact rational arithmetic.
CoverageReport certify_cover(const DyadicPoint& a, const DyadicPoint& b, double target,
                             std::span<const DyadicPoint> centers, std::size_t N);

/// Exact union-cover test for already computed records.
bool covers(std::span<const CertRecord1D> records, const Rational& a, const Rational& b,
            std::optional<std::pair<Rational, Rational>>* gap = nullptr);

/// Center list: one binary dyadic per line; '#' starts a comment.
std::vector<DyadicPoint> read_center_table(std::istream& in);

/// Centers of the two published tables (bound 7.92 on [11/8, 25/16] and 9 on [25/16, 2]).
std::vector<DyadicPoint> table1_centers();
std::vector<DyadicPoint> table2_centers();

enum class SmallKKind { Midrange, Upper };

struct SmallKRecord {
    int k = 0;
    std::uint64_t n = 0;
    double bound = 0.0;         ///< bound on the norm (not squared)
    Enclosure l_sq;             ///< ||P_{<n}||_L^2
    bool l_ok = false;          ///< strict: ||.||_L < bound
    std::optional<Enclosure> sup_sq; ///< computed only when the L check fails
    bool sup_ok = false;        ///< ||.||_inf <= bound
};

struct SmallKReport {
    SmallKKind kind = SmallKKind::Midrange;
    std::vector<SmallKRecord> records;
    bool ok = false;     ///< every pair passes the sup-norm check
    bool l_all = false;  ///< every pair passes the strict L-norm check
};

/// Direct checks for small k. Midrange: k <= 12, 11/8 2^k <= n <= 25/16 2^k,
/// bound 2^{(k+3)/2} - 1. Upper: k <= 6, 25/16 2^k <= n <= 2^{k+1},
/// bound sqrt(6n - 2) - 1.
SmallKReport check_smallk(SmallKKind kind, std::size_t N, unsigned threads = 1);

struct BruteOneDimReport {
    std::uint64_t n_max = 0;
    std::size_t N = 0;
    bool ok = false;
    double worst_ratio = 0.0; ///< max_n (sup_hi^{1/2} + 1)^2 / (6n - 2)
    std::uint64_t worst_n = 0;
    std::vector<std::pair<std::uint64_t, double>> sharp_ratios; ///< at n = (2 4^k + 1)/3
    std::vector<std::uint64_t> failures;
    std::size_t refined_cases = 0;
};

/// ||P_{<n}||_inf <= sqrt(6n - 2) - 1 for all 1 <= n <= n_max.
BruteOneDimReport brute_onedim(std::uint64_t n_max, std::size_t N, unsigned threads = 1);

/// Square of sqrt(v) - 1, exact when v is a perfect square, else rounded down.
double square_of_root_minus_one(std::uint64_t v);

} // namespace rscert
