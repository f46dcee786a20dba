#include "rscert/norms.hpp"

#include "rscert/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace rscert {
namespace {

constexpr double u = kUnitRoundoff;

double round_up(double x)
{
    return std::nextafter(x * (1.0 + 4.0 * u), HUGE_VAL);
}

void require_norm_grid(std::uint64_t len, std::size_t N)
{
    if (!is_power_of_two(N) || N < 4)
        throw PreconditionError("grid size " + std::to_string(N) + " must be a power of two >= 4");
    if (N / 4 < len)
        throw PreconditionError("grid size " + std::to_string(N) + " is below 4 x length " +
                                std::to_string(len));
}

double l_grid_max(const HalfGrid& h)
{
    const std::size_t half = h.N / 2;
    double best = 0.0;
    for (std::size_t j = 0; j < half; ++j)
        best = std::max(best, std::norm(h.values[j]) + std::norm(h.values[half - j]));
    return best;
}

struct Rescaled {
    std::uint64_t a;
    std::uint64_t b;
    int k;
};

Rescaled common_scale(const DyadicPoint& x, const DyadicPoint& y)
{
    const int k = std::max(x.scale(), y.scale());
    return {x.numerator_at(k), y.numerator_at(k), k};
}

} // namespace

Enclosure Enclosure::scaled_pow2(int e) const noexcept
{
    return {std::ldexp(lo, e), std::ldexp(hi, e)};
}

Enclosure enclose_grid_max(double grid_max, double value_error, double degree, std::size_t N)
{
    const double e = value_error;
    const double slack = 2.0 * std::numbers::sqrt2 * e * std::sqrt(grid_max) + 2.0 * e * e + 8.0 * u * grid_max;
    const double step = std::numbers::pi / static_cast<double>(N);
    const double corr = 0.5 * degree * degree * step * step;
    if (!(corr < 0.5))
        throw PreconditionError("grid size " + std::to_string(N) + " too coarse for degree " +
                                std::to_string(degree));
    Enclosure out;
    out.lo = std::max(0.0, grid_max - slack);
    out.hi = round_up((grid_max + slack) / (1.0 - round_up(corr)));
    return out;
}

Enclosure sup_norm_sq(const Segment& seg, std::size_t N)
{
    require_norm_grid(seg.length(), N);
    if (seg.empty())
        return {};
    const HalfGrid h = half_grid(seg, N);
    double best = 0.0;
    for (const cplx& v : h.values)
        best = std::max(best, std::norm(v));
    return enclose_grid_max(best, h.error_bound, static_cast<double>(seg.length() - 1), N);
}

Enclosure l_norm_sq_of(const HalfGrid& h)
{
    if (h.length == 0)
        return {};
    return enclose_grid_max(l_grid_max(h), h.error_bound, static_cast<double>(h.length - 1), h.N);
}

Enclosure l_norm_sq(const Segment& seg, std::size_t N)
{
    require_norm_grid(seg.length(), N);
    if (seg.empty())
        return {};
    return l_norm_sq_of(half_grid(seg, N));
}

Enclosure l_norm_sq_of_difference(const HalfGrid& upper, const HalfGrid& lower)
{
    if (upper.N != lower.N)
        throw PreconditionError("prefix grids differ in size");
    if (lower.length > upper.length)
        throw PreconditionError("prefix difference with m > n");
    const std::uint64_t len = upper.length - lower.length;
    if (len == 0)
        return {};
    const std::size_t half = upper.N / 2;
    double best = 0.0;
    for (std::size_t j = 0; j < half; ++j) {
        const cplx here = upper.values[j] - lower.values[j];
        const cplx there = upper.values[half - j] - lower.values[half - j];
        best = std::max(best, std::norm(here) + std::norm(there));
    }
    return enclose_grid_max(best, upper.error_bound + lower.error_bound, static_cast<double>(len - 1),
                            upper.N);
}

Enclosure f_dyadic(const DyadicPoint& x, std::size_t N)
{
    return l_norm_sq(Segment::prefix(x.numerator()), N).scaled_pow2(-x.scale());
}

Enclosure f2_dyadic(const DyadicPoint& x, const DyadicPoint& y, std::size_t N)
{
    if (y < x)
        throw PreconditionError("f(x, y) requires x <= y");
    const Rescaled c = common_scale(x, y);
    return l_norm_sq(Segment(c.a, c.b), N).scaled_pow2(-c.k);
}

Enclosure f2_dyadic(const DyadicPoint& x, const DyadicPoint& y, PrefixGridCache& cache)
{
    if (y < x)
        throw PreconditionError("f(x, y) requires x <= y");
    const Rescaled c = common_scale(x, y);
    require_norm_grid(c.b, cache.grid_size());
    const auto upper = cache.get(c.b);
    const auto lower = cache.get(c.a);
    return l_norm_sq_of_difference(*upper, *lower).scaled_pow2(-c.k);
}

Enclosure g_of(const HalfGrid& a, const HalfGrid& b)
{
    if (a.N != b.N)
        throw PreconditionError("g grids differ in size");
    if (a.length == 0 && b.length == 0)
        return {};
    const std::size_t half = a.N / 2;
    double best = 0.0;
    for (std::size_t j = 0; j < half; ++j) {
        const cplx a0 = a.values[j];
        const cplx a1 = std::conj(a.values[half - j]); // A(-z_j)
        const cplx b0 = b.values[j];
        const cplx b1 = std::conj(b.values[half - j]);
        const double v = std::norm(a0) + std::norm(a1) + std::norm(b0) + std::norm(b1) +
                         2.0 * std::abs(b0 * a1 - b1 * a0);
        best = std::max(best, v);
    }
    // For each fixed phase the sampled quantity is |.|^2 + |.|^2 of a Laurent
    // polynomial spanning r + s - 1 exponents; degree r + s is a safe cap.
    const double degree = static_cast<double>(a.length + b.length);
    return enclose_grid_max(best, a.error_bound + b.error_bound, degree, a.N);
}

Enclosure g_int(std::uint64_t r, std::uint64_t s, std::size_t N)
{
    require_norm_grid(std::max(r, s), N);
    return g_of(half_grid(Segment::prefix(r), N), half_grid(Segment::prefix(s), N));
}

Enclosure g_int(std::uint64_t r, std::uint64_t s, PrefixGridCache& cache)
{
    require_norm_grid(std::max(r, s), cache.grid_size());
    const auto a = cache.get(r);
    const auto b = cache.get(s);
    return g_of(*a, *b);
}

Enclosure g_dyadic(const DyadicPoint& x, const DyadicPoint& y, std::size_t N)
{
    const Rescaled c = common_scale(x, y);
    return g_int(c.a, c.b, N).scaled_pow2(-c.k);
}

Enclosure g_dyadic(const DyadicPoint& x, const DyadicPoint& y, PrefixGridCache& cache)
{
    const Rescaled c = common_scale(x, y);
    return g_int(c.a, c.b, cache).scaled_pow2(-c.k);
}

// ---------------------------------------------------------------------------
// Adaptive sup certification

namespace {

// Value and angular derivative of F(theta) = |P(e^{i theta})|^2 with bounds.
struct Sample {
    double theta = 0.0;
    double F = 0.0;
    double eF = 0.0;
    double dF = 0.0;
    double edF = 0.0;
    bool symmetric = false; ///< theta in {0, pi}: F' = 0 exactly
};

struct ExactEndpoint {
    double value = 0.0;     ///< F exactly
    double curvature = 0.0; ///< F'' exactly
};

ExactEndpoint exact_endpoint(const std::vector<double>& c, bool alternate)
{
    __int128 s0 = 0, s1 = 0, s2 = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        __int128 ci = static_cast<__int128>(c[i]);
        if (alternate && (i & 1))
            ci = -ci;
        const __int128 ii = static_cast<__int128>(i);
        s0 += ci;
        s1 += ii * ci;
        s2 += ii * ii * ci;
    }
    ExactEndpoint e;
    e.value = static_cast<double>(s0 * s0);
    e.curvature = static_cast<double>(-2 * (s0 * s2 - s1 * s1));
    return e;
}

Sample sample_from_values(double theta, cplx p, cplx p1, double ep, double ep1)
{
    Sample s;
    s.theta = theta;
    s.F = std::norm(p);
    s.dF = -2.0 * std::imag(std::conj(p) * p1);
    const double ap = std::abs(p);
    const double ap1 = std::abs(p1);
    s.eF = 2.0 * ap * ep + ep * ep + 4.0 * u * s.F;
    s.edF = 2.0 * (ap * ep1 + ap1 * ep + ep * ep1) + 8.0 * u * ap * ap1;
    return s;
}

Sample sample_direct(double theta, const std::vector<double>& c)
{
    const cplx w{std::cos(theta), std::sin(theta)};
    cplx p{0.0, 0.0};
    cplx p1{0.0, 0.0};
    for (std::size_t i = c.size(); i-- > 0;) {
        p = p * w + c[i];
        p1 = p1 * w + static_cast<double>(i) * c[i];
    }
    const double len = static_cast<double>(c.size());
    const double ep = 8.0 * (len * len + 1.0) * u;
    const double ep1 = 8.0 * (len * len * len + 1.0) * u;
    return sample_from_values(theta, p, p1, ep, ep1);
}

} // namespace

SupCertificate refine_sup_norm_sq(const Segment& seg, std::size_t N, double threshold, const RefineOptions& opts)
{
    SupCertificate cert;
    if (seg.length() < 2) {
        // A single monomial (or nothing) has constant modulus.
        const double v = static_cast<double>(seg.length());
        cert.enclosure = {v, v};
        cert.ok = v <= threshold;
        return cert;
    }
    const Enclosure coarse = sup_norm_sq(seg, N);
    cert.enclosure = coarse;
    if (coarse.hi <= threshold) {
        cert.ok = true;
        return cert;
    }
    if (coarse.lo > threshold)
        return cert;

    const std::uint64_t len = seg.length();
    std::vector<double> c(len);
    std::vector<double> ic(len);
    for (std::uint64_t i = 0; i < len; ++i) {
        c[i] = static_cast<double>(coeff(seg.m + i));
        ic[i] = static_cast<double>(i) * c[i];
    }
    const HalfGrid h = half_grid(seg, N);
    const HalfGrid h1 = half_grid_of(ic, N, h.error_bound * static_cast<double>(len));

    const double degree = static_cast<double>(len - 1);
    const double sup_bound = coarse.hi;
    const double m2 = round_up(degree * degree * sup_bound);
    const double m3 = round_up(degree * m2);
    const ExactEndpoint at_zero = exact_endpoint(c, false);
    const ExactEndpoint at_pi = exact_endpoint(c, true);

    const std::size_t half = N / 2;
    const double step = 2.0 * std::numbers::pi / static_cast<double>(N);
    auto grid_sample = [&](std::size_t j) {
        if (j == 0 || j == half) {
            Sample s;
            s.theta = j == 0 ? 0.0 : std::numbers::pi;
            s.F = j == 0 ? at_zero.value : at_pi.value;
            s.symmetric = true;
            return s;
        }
        return sample_from_values(static_cast<double>(j) * step, h.values[j], h1.values[j], h.error_bound,
                                  h1.error_bound);
    };

    // Endpoint angles are doubles approximating exact grid angles; pad the
    // half-width to absorb that and the pi rounding.
    constexpr double pad = 1e-15;

    auto third_order_ok = [&](const Sample& s, double width) {
        if (!s.symmetric)
            return false;
        const double curv = s.theta == 0.0 ? at_zero.curvature : at_pi.curvature;
        return curv < 0.0 && m3 * (width + pad) <= 3.0 * -curv * (1.0 - 1e-12);
    };

    auto upper_bound = [&](const Sample& a, const Sample& b) {
        const double width = b.theta - a.theta;
        // Within reach of the curvature at +-1, F never exceeds its exact value there.
        if (third_order_ok(a, width))
            return a.F;
        if (third_order_ok(b, width))
            return b.F;
        const double hw = 0.5 * width + pad;
        const double quad = 0.5 * m2 * hw * hw;
        const double left = a.F + a.eF + std::max(0.0, (a.dF + a.edF) * hw + quad);
        const double right = b.F + b.eF + std::max(0.0, (-b.dF + b.edF) * hw + quad);
        return round_up(std::max(left, right));
    };

    struct Piece {
        Sample a;
        Sample b;
        int depth;
    };
    std::vector<Piece> stack;
    double proven = 0.0;
    bool ok = true;
    for (std::size_t j = 0; j < half && ok; ++j) {
        stack.push_back({grid_sample(j), grid_sample(j + 1), 0});
        while (!stack.empty()) {
            Piece piece = stack.back();
            stack.pop_back();
            const double ub = upper_bound(piece.a, piece.b);
            if (ub <= threshold) {
                proven = std::max(proven, ub);
                continue;
            }
            if (piece.depth >= opts.max_depth || cert.refined >= opts.max_evaluations) {
                ok = false;
                cert.failed_at = piece.a.theta;
                proven = std::max(proven, ub);
                stack.clear();
                break;
            }
            const double midpoint = 0.5 * (piece.a.theta + piece.b.theta);
            const Sample m = sample_direct(midpoint, c);
            ++cert.refined;
            stack.push_back({m, piece.b, piece.depth + 1});
            stack.push_back({piece.a, m, piece.depth + 1});
        }
    }

    cert.ok = ok;
    if (ok)
        cert.enclosure.hi = std::min(coarse.hi, proven);
    return cert;
}

} // namespace rscert
