#include "rscert/certify1d.hpp"
#include "rscert/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace rscert;

namespace {

// Independent evaluation of the scaled bound in exact rationals.
Rational scaled_bound_exact(const Rational& d)
{
    Rational x = d;
    Rational scale = 1;
    while (x <= 1) {
        x *= 2;
        scale /= 2;
    }
    while (x > 2) {
        x /= 2;
        scale *= 2;
    }
    Rational piece;
    if (3 * x <= 4)
        piece = 6 * x;
    else if (16 * x <= 25)
        piece = 8;
    else
        piece = 9;
    return piece * scale;
}

} // namespace

TEST_SUITE("certify1d")
{
    TEST_CASE("scaled bound examples")
    {
        CHECK(scaled_f_bound(1.25) == 7.5);
        CHECK(scaled_f_bound(4.0 / 3.0) == doctest::Approx(8.0));
        CHECK(scaled_f_bound(1.5) == 8.0);
        CHECK(scaled_f_bound(25.0 / 16.0) == 8.0);
        CHECK(scaled_f_bound(1.6) == 9.0);
        CHECK(scaled_f_bound(2.0) == 9.0);
        CHECK(scaled_f_bound(1.0) == 4.5);
        CHECK(scaled_f_bound(0.5) == 2.25);
        CHECK(scaled_f_bound(0.0) == 0.0);
    }

    TEST_CASE("scaled bound matches an exact evaluation and is nondecreasing")
    {
        std::mt19937_64 rng(61);
        std::uniform_real_distribution<double> pick(1e-6, 4.0);
        for (int trial = 0; trial < 2000; ++trial) {
            const double a = pick(rng);
            const double b = pick(rng);
            CHECK(scaled_f_bound(std::min(a, b)) <= scaled_f_bound(std::max(a, b)));
            const double v = scaled_f_bound(a);
            CHECK(std::abs(v - to_double(scaled_bound_exact(exact_rational(a)))) <= 1e-15 * v);
        }
    }

    TEST_CASE("largest radius picks the right piece")
    {
        // cap >= B(limit): limited by the half step.
        auto r = largest_radius(10.0, 0.03125);
        REQUIRE(r);
        CHECK(r->binding == Binding::HalfStep);
        CHECK(r->radius == 0.03125);
        // Linear piece.
        r = largest_radius(0.1, 0.0625);
        REQUIRE(r);
        CHECK(r->binding == Binding::Case6x);
        CHECK(r->radius == doctest::Approx(0.1 / 6.0));
        CHECK(scaled_f_bound(r->radius) <= 0.1);
        // Flat pieces.
        r = largest_radius(8.0 / 64.0, 0.0625);
        REQUIRE(r);
        CHECK(r->binding == Binding::Case8);
        CHECK(r->radius == 25.0 / 16.0 / 64.0);
        r = largest_radius(9.0 / 64.0, 0.0625);
        REQUIRE(r);
        CHECK(r->binding == Binding::Case9);
        CHECK(r->radius == 2.0 / 64.0);
        CHECK_FALSE(largest_radius(0.0, 0.5));
    }

    TEST_CASE("largest radius is maximal among dyadic probes")
    {
        std::mt19937_64 rng(62);
        std::uniform_real_distribution<double> cap_pick(1e-4, 5.0);
        for (int trial = 0; trial < 500; ++trial) {
            const double cap = cap_pick(rng);
            const double limit = std::ldexp(1.0, -std::uniform_int_distribution<int>(1, 8)(rng));
            const auto r = largest_radius(cap, limit);
            REQUIRE(r);
            CHECK(r->radius <= limit);
            CHECK(scaled_f_bound(r->radius) <= cap);
            // Nothing noticeably larger is admissible.
            const double probe = r->radius * (1.0 + 1e-9);
            if (probe <= limit)
                CHECK(scaled_f_bound(probe) > cap);
        }
    }

    TEST_CASE("max radius reproduces table rows")
    {
        const std::size_t N = 1 << 18;
        const auto rec = max_radius(DyadicPoint::parse_binary("1.01101"), 7.92, N);
        CHECK(rec.certified());
        CHECK(rec.binding == Binding::HalfStep);
        CHECK(to_double(rec.left()) == 1.390625);
        CHECK(to_double(rec.right()) == 1.421875);

        const auto two = max_radius(DyadicPoint::integer(2), 9.0, N);
        CHECK(two.binding == Binding::Case6x);
        CHECK(to_double(two.left()) == doctest::Approx(1.833333).epsilon(1e-6));

        const auto third = max_radius(DyadicPoint::parse_binary("1.011011"), 7.92, N);
        CHECK(third.binding == Binding::Case8);
        CHECK(to_double(third.left()) == doctest::Approx(1.415772).epsilon(1e-6));
    }

    TEST_CASE("max radius fails when f exceeds the target")
    {
        const auto rec = max_radius(DyadicPoint::parse_binary("1.011011"), 6.9, 1 << 16);
        CHECK_FALSE(rec.certified());
        CHECK(rec.radius == 0.0);
    }

    TEST_CASE("coverage in exact arithmetic")
    {
        const std::size_t N = 1 << 18;
        auto centers = table2_centers();
        const auto rep = certify_cover(DyadicPoint(25, 4), DyadicPoint(2, 0), 9.0, centers, N);
        CHECK(rep.covered);
        CHECK_FALSE(rep.first_gap);

        // Dropping 1.1011 opens a gap just above 1.6875.
        centers.erase(centers.begin() + 1);
        const auto holed = certify_cover(DyadicPoint(25, 4), DyadicPoint(2, 0), 9.0, centers, N);
        CHECK_FALSE(holed.covered);
        REQUIRE(holed.first_gap);
        CHECK(holed.first_gap->first == Rational(27, 16));

        CHECK_THROWS_AS(certify_cover(DyadicPoint(2, 0), DyadicPoint(1, 0), 9.0, centers, N), PreconditionError);
    }

    TEST_CASE("touching intervals cover, a single missing point does not")
    {
        CertRecord1D a;
        a.center = DyadicPoint(1, 1);
        a.radius = 0.5;
        a.status = CertStatus::Certified;
        CertRecord1D b = a;
        b.center = DyadicPoint(3, 1);
        const CertRecord1D both[] = {a, b};
        CHECK(covers(both, 0, 2));
        b.center = DyadicPoint(13, 3); // [1.125, 2.125]
        const CertRecord1D split[] = {a, b};
        std::optional<std::pair<Rational, Rational>> gap;
        CHECK_FALSE(covers(split, 0, 2, &gap));
        REQUIRE(gap);
        CHECK(gap->first == 1);
        CHECK(gap->second == Rational(9, 8));
    }

    TEST_CASE("center tables")
    {
        std::istringstream in("# centers\n1.011\n  1.01101  # half step\n\n10.\n");
        const auto c = read_center_table(in);
        REQUIRE(c.size() == 3);
        CHECK(c[2] == DyadicPoint::integer(2));
        CHECK(table1_centers().size() == 5);
        CHECK(table2_centers().size() == 6);
    }

    TEST_CASE("root thresholds")
    {
        CHECK(square_of_root_minus_one(16) == 9.0);
        CHECK(square_of_root_minus_one(64) == 49.0);
        const double v = square_of_root_minus_one(10);
        CHECK(v <= (std::sqrt(10.0L) - 1) * (std::sqrt(10.0L) - 1));
        CHECK(v == doctest::Approx(4.675445).epsilon(1e-6));
    }

    TEST_CASE("small k: upper range passes the strict L check")
    {
        const auto rep = check_smallk(SmallKKind::Upper, 1 << 12);
        CHECK(rep.ok);
        CHECK(rep.l_all);
        CHECK(rep.records.size() == 60);
    }

    TEST_CASE("small k: midrange needs the sup check only at attained points")
    {
        const auto rep = check_smallk(SmallKKind::Midrange, 1 << 16);
        CHECK(rep.ok);
        CHECK_FALSE(rep.l_all);
        std::vector<std::uint64_t> fallback;
        for (const auto& r : rep.records)
            if (!r.l_ok) {
                fallback.push_back(r.n);
                CHECK(r.sup_ok);
            }
        CHECK(fallback == std::vector<std::uint64_t>{3, 11});
    }

    TEST_CASE("brute force one-dimensional bound, small range")
    {
        const auto rep = brute_onedim(300, 1 << 12);
        CHECK(rep.ok);
        CHECK(rep.failures.empty());
        CHECK(rep.worst_ratio == doctest::Approx(1.0));
        for (const auto& [n, ratio] : rep.sharp_ratios)
            CHECK_MESSAGE(ratio == doctest::Approx(1.0).epsilon(1e-12), n);
        CHECK_THROWS_AS(brute_onedim(0, 1 << 12), PreconditionError);
    }
}
