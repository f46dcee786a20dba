#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace rscert {

/// Rudin-Shapiro coefficient a_n in {-1,+1}: the parity of the number of
/// adjacent "11" pairs in the binary expansion of n.
constexpr int coeff(std::uint64_t n) noexcept
{
    std::uint64_t pairs = n & (n >> 1);
    int parity = 0;
    while (pairs != 0) {
        parity ^= 1;
        pairs &= pairs - 1;
    }
    return parity ? -1 : 1;
}

/// Half-open index range [m, n) naming the polynomial sum_{m<=i<n} a_i z^i.
struct Segment {
    std::uint64_t m = 0;
    std::uint64_t n = 0;

    Segment() = default;
    Segment(std::uint64_t begin, std::uint64_t end);

    static Segment prefix(std::uint64_t n) { return Segment(0, n); }

    std::uint64_t length() const noexcept { return n - m; }
    bool empty() const noexcept { return m == n; }

    friend bool operator==(const Segment&, const Segment&) = default;
};

std::string to_string(const Segment& seg);

/// Default ceiling on materialized coefficient vectors (2^28 signs).
inline constexpr std::uint64_t kDefaultCoeffLimit = std::uint64_t{1} << 28;

/// (a_m, ..., a_{n-1}). Throws CapacityError past `limit` entries.
std::vector<std::int8_t> coeff_range(const Segment& seg, std::uint64_t limit = kDefaultCoeffLimit);

enum class BlockKind { P, Q };

/// One aligned dyadic block sign * z^offset * K_t(z), K in {P_t, Q_t}.
/// Length-1 blocks are always kind P with the coefficient carried in `sign`.
struct Block {
    std::uint64_t offset = 0;
    int t = 0;
    BlockKind kind = BlockKind::P;
    int sign = 1;

    std::uint64_t length() const noexcept { return std::uint64_t{1} << t; }
    /// Coefficient of z^(offset + i) contributed by this block, 0 <= i < 2^t.
    int coeff_at(std::uint64_t i) const noexcept;

    friend bool operator==(const Block&, const Block&) = default;
};

struct BlockDecomposition {
    Segment seg;
    std::vector<Block> blocks;
};

/// Greedy aligned decomposition: from the left end, repeatedly take the
/// longest block 2^t whose offset is a multiple of 2^t and which still fits.
/// This peels ascending powers of two up to the coarsest dyadic point
/// 2^k r in [m, n] and descending powers after it.
BlockDecomposition block_decompose(const Segment& seg);

} // namespace rscert
