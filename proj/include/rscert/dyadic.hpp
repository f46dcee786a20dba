#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace rscert {

using Rational = boost::multiprecision::cpp_rational;

/// Non-negative dyadic rational u / 2^k, kept in canonical form (u odd or k == 0).
class DyadicPoint {
public:
    DyadicPoint() = default;
    DyadicPoint(std::uint64_t u, int k);

    static DyadicPoint integer(std::uint64_t n) { return DyadicPoint(n, 0); }

    /// Parse a binary string such as "1.011011", "10." or "0.1".
    static DyadicPoint parse_binary(std::string_view text);

    std::uint64_t numerator() const noexcept { return u_; }
    int scale() const noexcept { return k_; }

    /// Numerator after rescaling to denominator 2^k; k must be >= scale().
    std::uint64_t numerator_at(int k) const;

    double to_double() const noexcept;
    Rational to_rational() const;
    std::string to_binary() const;

    friend bool operator==(const DyadicPoint&, const DyadicPoint&) = default;
    friend std::strong_ordering operator<=>(const DyadicPoint& a, const DyadicPoint& b);

private:
    std::uint64_t u_ = 0;
    int k_ = 0;
};

/// Exact value of a finite double as a rational.
Rational exact_rational(double x);

/// Nearest double, for display only.
double to_double(const Rational& q);

} // namespace rscert
