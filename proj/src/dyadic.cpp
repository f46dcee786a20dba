#include "rscert/dyadic.hpp"

#include "rscert/errors.hpp"

#include <bit>
#include <cmath>

namespace rscert {

DyadicPoint::DyadicPoint(std::uint64_t u, int k) : u_(u), k_(k)
{
    if (k < 0 || k > 62)
        throw PreconditionError("dyadic scale must lie in [0, 62]");
    if (u_ == 0) {
        k_ = 0;
        return;
    }
    const int shift = std::min(k_, std::countr_zero(u_));
    u_ >>= shift;
    k_ -= shift;
}

DyadicPoint DyadicPoint::parse_binary(std::string_view text)
{
    if (text.empty())
        throw PreconditionError("empty binary string");
    std::uint64_t u = 0;
    int k = 0;
    bool seen_point = false;
    bool seen_digit = false;
    for (char c : text) {
        if (c == '.') {
            if (seen_point)
                throw PreconditionError("binary string '" + std::string(text) + "' has two points");
            seen_point = true;
            continue;
        }
        if (c != '0' && c != '1')
            throw PreconditionError("binary string '" + std::string(text) + "' has a non-binary digit");
        if (u >> 62)
            throw PreconditionError("binary string '" + std::string(text) + "' is too long");
        u = (u << 1) | static_cast<std::uint64_t>(c - '0');
        seen_digit = true;
        if (seen_point)
            ++k;
    }
    if (!seen_digit)
        throw PreconditionError("binary string '" + std::string(text) + "' has no digits");
    return DyadicPoint(u, k);
}

std::uint64_t DyadicPoint::numerator_at(int k) const
{
    if (k < k_)
        throw PreconditionError("cannot rescale dyadic to a coarser denominator");
    const int shift = k - k_;
    if (shift >= 64 || (shift > 0 && (u_ >> (64 - shift)) != 0))
        throw CapacityError("dyadic numerator overflows 64 bits");
    return u_ << shift;
}

double DyadicPoint::to_double() const noexcept
{
    return std::ldexp(static_cast<double>(u_), -k_);
}

Rational DyadicPoint::to_rational() const
{
    Rational q(u_);
    return q / Rational(boost::multiprecision::cpp_int(1) << k_);
}

std::string DyadicPoint::to_binary() const
{
    std::string digits;
    std::uint64_t u = u_;
    do {
        digits.insert(digits.begin(), static_cast<char>('0' + (u & 1)));
        u >>= 1;
    } while (u != 0);
    if (static_cast<int>(digits.size()) <= k_)
        digits.insert(0, static_cast<std::size_t>(k_ + 1) - digits.size(), '0');
    digits.insert(digits.size() - static_cast<std::size_t>(k_), ".");
    return digits;
}

std::strong_ordering operator<=>(const DyadicPoint& a, const DyadicPoint& b)
{
    const auto qa = a.to_rational();
    const auto qb = b.to_rational();
    if (qa < qb)
        return std::strong_ordering::less;
    if (qb < qa)
        return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Rational exact_rational(double x)
{
    if (!std::isfinite(x))
        throw DomainError("non-finite value has no rational form");
    int exp = 0;
    const double mant = std::frexp(x, &exp); // x = mant * 2^exp, |mant| in [0.5, 1)
    const auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
    exp -= 53;
    Rational q(scaled);
    if (exp >= 0)
        q *= Rational(boost::multiprecision::cpp_int(1) << exp);
    else
        q /= Rational(boost::multiprecision::cpp_int(1) << -exp);
    return q;
}

double to_double(const Rational& q)
{
    return q.convert_to<double>();
}

} // namespace rscert
