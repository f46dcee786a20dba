#include "rscert/errors.hpp"
#include "rscert/sequence.hpp"

#include <doctest.h>

#include <random>
#include <vector>

using namespace rscert;

namespace {

// a_0 = 1, a_{2n} = a_n, a_{2n+1} = (-1)^n a_n.
std::vector<int> recurrence_coeffs(std::size_t count)
{
    std::vector<int> a(count);
    a[0] = 1;
    for (std::size_t i = 1; i < count; ++i) {
        const std::size_t half = i / 2;
        a[i] = (i % 2 == 0 || half % 2 == 0) ? a[half] : -a[half];
    }
    return a;
}

// Coefficients of P_t and Q_t from the paired recursion.
std::pair<std::vector<int>, std::vector<int>> pq_coeffs(int t)
{
    std::vector<int> p{1};
    std::vector<int> q{1};
    for (int i = 0; i < t; ++i) {
        std::vector<int> np = p;
        std::vector<int> nq = p;
        for (int c : q) {
            np.push_back(c);
            nq.push_back(-c);
        }
        p = std::move(np);
        q = std::move(nq);
    }
    return {p, q};
}

} // namespace

TEST_SUITE("sequence")
{
    TEST_CASE("coefficients match the recurrence up to 2^20")
    {
        const auto a = recurrence_coeffs(std::size_t{1} << 20);
        for (std::size_t i = 0; i < a.size(); ++i)
            REQUIRE(coeff(i) == a[i]);
    }

    TEST_CASE("coefficients match the P/Q construction")
    {
        const auto [p, q] = pq_coeffs(12);
        for (std::size_t i = 0; i < p.size(); ++i)
            REQUIRE(coeff(i) == p[i]);
    }

    TEST_CASE("first sixteen coefficients")
    {
        const std::vector<int> expected{1, 1, 1, -1, 1, 1, -1, 1, 1, 1, 1, -1, -1, -1, 1, -1};
        const auto got = coeff_range(Segment(0, 16));
        REQUIRE(got.size() == expected.size());
        for (std::size_t i = 0; i < expected.size(); ++i)
            CHECK(got[i] == expected[i]);
    }

    TEST_CASE("segment validation and capacity")
    {
        CHECK_THROWS_AS(Segment(5, 3), PreconditionError);
        CHECK(Segment(4, 4).empty());
        CHECK(coeff_range(Segment(7, 7)).empty());
        CHECK_THROWS_AS(coeff_range(Segment(0, 1000), 999), CapacityError);
        CHECK(to_string(Segment(2, 5)) == "[2,5)");
    }

    TEST_CASE("block decomposition reconstructs the segment")
    {
        std::mt19937_64 rng(11);
        std::uniform_int_distribution<std::uint64_t> pick(0, 5000);
        for (int trial = 0; trial < 300; ++trial) {
            std::uint64_t m = pick(rng);
            std::uint64_t n = pick(rng);
            if (n < m)
                std::swap(m, n);
            const auto d = block_decompose(Segment(m, n));
            std::uint64_t cursor = m;
            for (const Block& b : d.blocks) {
                REQUIRE(b.offset == cursor);
                REQUIRE(b.offset % b.length() == 0);
                for (std::uint64_t i = 0; i < b.length(); ++i)
                    REQUIRE(b.coeff_at(i) == coeff(b.offset + i));
                cursor += b.length();
            }
            REQUIRE(cursor == n);
        }
    }

    TEST_CASE("blocks alternate P and Q by parity of the block index")
    {
        const auto d = block_decompose(Segment(0, 1u << 10));
        REQUIRE(d.blocks.size() == 1);
        CHECK(d.blocks[0].kind == BlockKind::P);
        const auto e = block_decompose(Segment(3 * 64, 4 * 64));
        REQUIRE(e.blocks.size() == 1);
        CHECK(e.blocks[0].kind == BlockKind::Q);
        CHECK(e.blocks[0].sign == coeff(3));
    }

    TEST_CASE("block decomposition is logarithmic")
    {
        const auto d = block_decompose(Segment(12345, 987654321));
        CHECK(d.blocks.size() <= 2 * 30);
    }
}
