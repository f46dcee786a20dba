#include "rscert/sequence.hpp"

#include "rscert/errors.hpp"

#include <bit>

namespace rscert {

Segment::Segment(std::uint64_t begin, std::uint64_t end) : m(begin), n(end)
{
    if (begin > end)
        throw PreconditionError("segment [" + std::to_string(begin) + "," + std::to_string(end) +
                                ") has m > n");
}

std::string to_string(const Segment& seg)
{
    return "[" + std::to_string(seg.m) + "," + std::to_string(seg.n) + ")";
}

std::vector<std::int8_t> coeff_range(const Segment& seg, std::uint64_t limit)
{
    if (seg.length() > limit)
        throw CapacityError("coefficient range " + to_string(seg) + " exceeds limit of " +
                            std::to_string(limit) + " entries");
    std::vector<std::int8_t> out;
    out.reserve(seg.length());
    for (std::uint64_t i = seg.m; i < seg.n; ++i)
        out.push_back(static_cast<std::int8_t>(coeff(i)));
    return out;
}

int Block::coeff_at(std::uint64_t i) const noexcept
{
    int c = sign * coeff(i);
    // Q_t is P_t with its upper half negated.
    if (kind == BlockKind::Q && t > 0 && ((i >> (t - 1)) & 1))
        c = -c;
    return c;
}

BlockDecomposition block_decompose(const Segment& seg)
{
    BlockDecomposition out{seg, {}};
    std::uint64_t cursor = seg.m;
    while (cursor < seg.n) {
        const std::uint64_t room = seg.n - cursor;
        int t = cursor == 0 ? 63 : std::countr_zero(cursor);
        const int fit = 63 - std::countl_zero(room); // floor(log2(room))
        if (t > fit)
            t = fit;
        const std::uint64_t q = cursor >> t;
        Block b;
        b.offset = cursor;
        b.t = t;
        b.kind = (t > 0 && (q & 1)) ? BlockKind::Q : BlockKind::P;
        b.sign = coeff(q);
        out.blocks.push_back(b);
        cursor += std::uint64_t{1} << t;
    }
    return out;
}

} // namespace rscert
