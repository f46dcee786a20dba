#include "rscert/errors.hpp"
#include "rscert/experiments.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace rscert;

TEST_SUITE("experiments")
{
    TEST_CASE("extremal pairs: closed forms and recurrences")
    {
        CHECK(ExtremalPair::at(0).m == 2);
        CHECK(ExtremalPair::at(0).n == 3);
        for (int k = 1; k <= 20; ++k) {
            const auto a = ExtremalPair::at(k - 1);
            const auto b = ExtremalPair::at(k);
            CHECK(b.m == 4 * a.m - 1);
            CHECK(b.n == 4 * a.n - 1);
            CHECK(b.n - b.m == std::uint64_t{1} << (2 * k));
            CHECK(coeff(b.m) == 1);
            CHECK(coeff(b.n) == -1);
        }
        CHECK_THROWS_AS(ExtremalPair::at(31), PreconditionError);
    }

    TEST_CASE("extremal values at +-1")
    {
        CHECK(extremal_values(0).at_one == 1);
        CHECK(extremal_values(0).at_minus_one == 1);
        CHECK(extremal_values(1).at_one == 4);
        CHECK(extremal_values(1).at_minus_one == 0);
        CHECK(extremal_values(5).at_one == 94);
        CHECK(extremal_values(5).at_minus_one == -30);
        for (int k = 0; k <= 20; ++k)
            CHECK(extremal_values(k).ok);
        CHECK_THROWS_AS(extremal_values(21), PreconditionError);
    }

    TEST_CASE("block sums agree with plain summation")
    {
        for (int k = 0; k <= 8; ++k)
            CHECK(exact_values_at_pm1(ExtremalPair::at(k).segment()) == summed_values_at_pm1(ExtremalPair::at(k).segment()));
        std::mt19937_64 rng(71);
        std::uniform_int_distribution<std::uint64_t> pick(0, 100000);
        for (int trial = 0; trial < 100; ++trial) {
            std::uint64_t m = pick(rng);
            std::uint64_t n = pick(rng);
            if (n < m)
                std::swap(m, n);
            CHECK(exact_values_at_pm1(Segment(m, n)) == summed_values_at_pm1(Segment(m, n)));
        }
    }

    TEST_CASE("sharpness at z = 1")
    {
        for (int k = 0; k <= 10; ++k) {
            const SharpPrefix s = sharp_prefix(k);
            CHECK(s.ok);
            CHECK(summed_values_at_pm1(Segment::prefix(s.n)).first == s.at_one);
        }
        CHECK(sharp_prefix(1).n == 3);
        CHECK(sharp_prefix(1).at_one == 3);
    }

    TEST_CASE("four-fold recursion equals direct evaluation")
    {
        std::mt19937_64 rng(72);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        for (int k = 0; k <= 10; ++k)
            for (int trial = 0; trial < 100; ++trial) {
                const cplx z = std::polar(1.0, angle(rng));
                const cplx a = extremal_eval_badrec(k, z);
                const cplx b = eval_point(ExtremalPair::at(k).segment(), z);
                // Relative to the natural size 2^k of the values.
                REQUIRE(std::abs(a - b) / std::ldexp(1.0, k) < 1e-8);
            }
    }

    TEST_CASE("Montgomery point")
    {
        CHECK(std::abs(unit_pow(montgomery_point(), 4) + 1.0) < 1e-15);
        CHECK(montgomery_limit() == doctest::Approx(9.949747).epsilon(1e-6));
        const MontgomeryReport r0 = montgomery_counterexample(0, 64);
        CHECK(r0.point_ratio == doctest::Approx(1.0));
        CHECK_FALSE(r0.exceeds_nine);
        const MontgomeryReport r10 = montgomery_counterexample(10, 1 << 16);
        CHECK(r10.exceeds_nine);
        REQUIRE(r10.grid_sup_ratio);
        CHECK(r10.grid_sup_ratio->lo > 9.0);
        CHECK(r10.N >= (std::size_t{4} << 20));
        // The ratio approaches the limit at rate O(2^-k).
        const double c = montgomery_fitted_constant(4, 14);
        CHECK(c < 100.0);
        const MontgomeryReport r14 = montgomery_counterexample(14, 1 << 16);
        CHECK_FALSE(r14.grid_sup_ratio);
        CHECK(std::abs(r14.point_ratio - montgomery_limit()) <= c * std::ldexp(1.0, -14));
    }

    TEST_CASE("L-norm ratio lower bounds")
    {
        const LRatioReport r1 = L_ratio_lower(1, 64);
        CHECK(r1.lower >= 4.0);
        CHECK(r1.ratio.lo <= 10.0);
        CHECK(r1.ok);
        const LRatioReport r5 = L_ratio_lower(5, 1 << 12);
        CHECK(r5.predicted_lower == doctest::Approx(9.5078125));
        CHECK(r5.ok);
        for (int k = 0; k <= 8; ++k)
            CHECK(L_ratio_lower(k, 1 << 12).ok);
    }

    TEST_CASE("dense limit ratios")
    {
        const DenseReport a = dense_limit_empirical(0, 1, 8, 1 << 10);
        CHECK(a.target.contains(std::sqrt(2.0)));
        CHECK(a.bounded);
        for (const auto& row : a.rows)
            CHECK(row.ratio.lo <= std::sqrt(2.0) + 1e-9);
        const DenseReport b = dense_limit_empirical(0, 2, 3, 1 << 10);
        CHECK(b.target.contains(2.0));
        CHECK_THROWS_AS(dense_limit_empirical(3, 3, 2, 1 << 10), PreconditionError);
    }

    TEST_CASE("sphere sampler")
    {
        const double r = std::sqrt(0.5);
        const SphereReport s0 = sphere_sampler(0, 1.0, {cplx{r, 0.0}, cplx{r, 0.0}}, 1, 1);
        CHECK(s0.min_distance < 1e-12);
        const SphereReport s = sphere_sampler(10, std::polar(1.0, 0.7), random_sphere_point(3), 512, 4);
        CHECK(s.max_norm_error < 1e-9);
        CHECK(s.count == 512);
        const SpherePoint p = random_sphere_point(5);
        CHECK(std::norm(p[0]) + std::norm(p[1]) == doctest::Approx(1.0));
        CHECK(random_sphere_point(5) == p);
        CHECK_THROWS_AS(sphere_sampler(3, 1.0, p, 9, 1), PreconditionError);
        CHECK_THROWS_AS(sphere_sampler(3, 2.0, p, 4, 1), DomainError);
        // Same seed, same samples.
        CHECK(sphere_sampler(8, 1.0, p, 100, 7).min_distance == sphere_sampler(8, 1.0, p, 100, 7).min_distance);
    }
}
