#pragma once

// Independent reference computations for the tests: plain summation in
// long double, no FFT and no block structure.

#include "rscert/sequence.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace oracle {

using lcplx = std::complex<long double>;

inline lcplx direct_sum(std::uint64_t m, std::uint64_t n, long double theta)
{
    lcplx acc{0.0L, 0.0L};
    for (std::uint64_t i = m; i < n; ++i) {
        const long double a = static_cast<long double>(i) * theta;
        acc += static_cast<long double>(rscert::coeff(i)) * lcplx{std::cos(a), std::sin(a)};
    }
    return acc;
}

/// sum a_{m+i} e^{i i theta}, the segment without its z^m twist.
inline lcplx direct_sum_unshifted(std::uint64_t m, std::uint64_t n, long double theta)
{
    lcplx acc{0.0L, 0.0L};
    for (std::uint64_t i = m; i < n; ++i) {
        const long double a = static_cast<long double>(i - m) * theta;
        acc += static_cast<long double>(rscert::coeff(i)) * lcplx{std::cos(a), std::sin(a)};
    }
    return acc;
}

/// max over `points` equispaced angles of |P|^2 (and of |P(z)|^2 + |P(-z)|^2).
struct FineMax {
    long double sup_sq = 0.0L;
    long double l_sq = 0.0L;
};

inline FineMax fine_grid_max(std::uint64_t m, std::uint64_t n, std::size_t points)
{
    FineMax r;
    const long double pi = std::numbers::pi_v<long double>;
    for (std::size_t j = 0; j < points; ++j) {
        const long double theta = 2.0L * pi * static_cast<long double>(j) / static_cast<long double>(points);
        const long double a = std::norm(direct_sum(m, n, theta));
        const long double b = std::norm(direct_sum(m, n, theta + pi));
        r.sup_sq = std::max(r.sup_sq, a);
        r.l_sq = std::max(r.l_sq, a + b);
    }
    return r;
}

} // namespace oracle
