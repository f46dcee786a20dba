#include "rscert/experiments.hpp"

#include "rscert/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <unordered_set>

namespace rscert {
namespace {

// (K_t(1), K_t(-1)) for K = P, Q.
struct PmOne {
    std::int64_t p1, pm1, q1, qm1;
};

PmOne pq_at_pm1(int t)
{
    PmOne v{1, 1, 1, 1};
    for (int i = 0; i < t; ++i) {
        // K_{i+1}(z) = P_i(z) +- z^{2^i} Q_i(z); z^{2^i} = -1 at z = -1 only for i = 0.
        const std::int64_t w = i == 0 ? -1 : 1;
        v = {v.p1 + v.q1, v.pm1 + w * v.qm1, v.p1 - v.q1, v.pm1 - w * v.qm1};
    }
    return v;
}

// Power-of-two grid of at least N points, preferably 16 points per term
// (keeps the off-grid correction under 2%), at minimum 4.
std::optional<std::size_t> grid_for(std::uint64_t len, std::size_t N)
{
    std::size_t g = std::max<std::size_t>(N, 16);
    while (g < 16 * len && g < kMaxGridSize)
        g *= 2;
    if (g < 4 * len)
        return std::nullopt;
    return g;
}

std::size_t require_grid(std::uint64_t len, std::size_t N)
{
    const auto g = grid_for(len, N);
    if (!g)
        throw CapacityError("segment too long for grid evaluation");
    return *g;
}

} // namespace

ExtremalPair ExtremalPair::at(int k)
{
    if (k < 0 || k > 30)
        throw PreconditionError("extremal pair requires 0 <= k <= 30");
    const std::uint64_t p = std::uint64_t{1} << (2 * k);
    return {k, (5 * p + 1) / 3, (8 * p + 1) / 3};
}

std::pair<std::int64_t, std::int64_t> exact_values_at_pm1(const Segment& seg)
{
    std::int64_t at1 = 0;
    std::int64_t atm1 = 0;
    for (const Block& b : block_decompose(seg).blocks) {
        const PmOne v = pq_at_pm1(b.t);
        const bool q = b.kind == BlockKind::Q;
        const std::int64_t shift = (b.offset & 1) ? -1 : 1;
        at1 += b.sign * (q ? v.q1 : v.p1);
        atm1 += b.sign * shift * (q ? v.qm1 : v.pm1);
    }
    return {at1, atm1};
}

std::pair<std::int64_t, std::int64_t> summed_values_at_pm1(const Segment& seg)
{
    std::int64_t at1 = 0;
    std::int64_t atm1 = 0;
    for (std::uint64_t i = seg.m; i < seg.n; ++i) {
        const int a = coeff(i);
        at1 += a;
        atm1 += (i & 1) ? -a : a;
    }
    return {at1, atm1};
}

ExtremalValues extremal_values(int k)
{
    if (k < 0 || k > 20)
        throw PreconditionError("extremal_values requires 0 <= k <= 20");
    ExtremalValues v;
    v.k = k;
    std::tie(v.at_one, v.at_minus_one) = exact_values_at_pm1(ExtremalPair::at(k).segment());
    const std::int64_t p = std::int64_t{1} << k;
    v.ok = v.at_one == 3 * p - 2 && v.at_minus_one == -p + 2;
    return v;
}

SharpPrefix sharp_prefix(int k)
{
    if (k < 0 || k > 30)
        throw PreconditionError("sharp_prefix requires 0 <= k <= 30");
    SharpPrefix s;
    s.k = k;
    s.n = ((std::uint64_t{2} << (2 * k)) + 1) / 3;
    s.at_one = exact_values_at_pm1(Segment::prefix(s.n)).first;
    const std::int64_t expected = (std::int64_t{2} << k) - 1;
    const std::int64_t root = s.at_one + 1;
    s.ok = s.at_one == expected && static_cast<std::uint64_t>(root * root) == 6 * s.n - 2;
    return s;
}

cplx extremal_eval_badrec(int k, cplx z)
{
    if (k < 0 || k > 30)
        throw PreconditionError("extremal_eval_badrec requires 0 <= k <= 30");
    std::vector<cplx> w(k + 1);
    w[k] = z;
    for (int j = k; j > 0; --j)
        w[j - 1] = unit_pow(w[j], 4);
    // Values at +w[j] and -w[j].
    cplx plus = w[0] * w[0];
    cplx minus = plus;
    for (int j = 1; j <= k; ++j) {
        const ExtremalPair e = ExtremalPair::at(j);
        auto step = [&](cplx v) {
            const cplx v2 = v * v;
            return (1.0 + v) * plus + (v2 - v2 * v) * minus + unit_pow(v, e.m) + unit_pow(v, e.n);
        };
        const cplx np = step(w[j]);
        const cplx nm = step(-w[j]);
        plus = np;
        minus = nm;
    }
    return plus;
}

cplx montgomery_point()
{
    return {-std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0};
}

double montgomery_limit()
{
    return 5.0 + 7.0 / std::numbers::sqrt2;
}

MontgomeryReport montgomery_counterexample(int k, std::size_t N)
{
    if (k < 0 || k > 14)
        throw PreconditionError("montgomery_counterexample requires 0 <= k <= 14");
    const ExtremalPair e = ExtremalPair::at(k);
    const double scale = std::ldexp(1.0, -2 * k);
    MontgomeryReport rep;
    rep.k = k;
    rep.point_ratio = std::norm(extremal_eval_badrec(k, montgomery_point())) * scale;
    rep.exceeds_nine = rep.point_ratio > 9.0;

    const double len = static_cast<double>(e.n - e.m);
    const auto grid = grid_for(e.n - e.m, N);
    if (!grid)
        return rep;
    rep.N = *grid;
    const HalfGrid h = half_grid(e.segment(), rep.N);
    std::size_t best = 0;
    double grid_max = 0.0;
    for (std::size_t j = 0; j < h.values.size(); ++j) {
        const double v = std::norm(h.values[j]);
        if (v > grid_max) {
            grid_max = v;
            best = j;
        }
    }
    rep.grid_sup_ratio = enclose_grid_max(grid_max, h.error_bound, len - 1.0, rep.N).scaled_pow2(-2 * k);
    rep.grid_argmax = 2.0 * std::numbers::pi * static_cast<double>(best) / static_cast<double>(rep.N);
    return rep;
}

double montgomery_fitted_constant(int k_min, int k_max)
{
    double c = 0.0;
    for (int k = k_min; k <= k_max; ++k) {
        const double ratio = std::norm(extremal_eval_badrec(k, montgomery_point())) * std::ldexp(1.0, -2 * k);
        c = std::max(c, std::abs(ratio - montgomery_limit()) * std::ldexp(1.0, k));
    }
    return c;
}

LRatioReport L_ratio_lower(int k, std::size_t N)
{
    if (k < 0 || k > 14)
        throw PreconditionError("L_ratio_lower requires 0 <= k <= 14");
    const ExtremalPair e = ExtremalPair::at(k);
    LRatioReport rep;
    rep.k = k;
    rep.ratio = l_norm_sq(e.segment(), require_grid(e.n - e.m, N)).scaled_pow2(-2 * k);
    // z = 1 is a grid point; its exact value is a lower bound on the L-norm.
    const auto [a, b] = exact_values_at_pm1(e.segment());
    const double exact = std::ldexp(static_cast<double>(a * a + b * b), -2 * k);
    rep.lower = std::max(rep.ratio.lo, exact);
    rep.predicted_lower = 10.0 - 16.0 * std::ldexp(1.0, -k) + 8.0 * std::ldexp(1.0, -2 * k);
    rep.ok = rep.lower >= rep.predicted_lower && rep.lower <= 10.0;
    return rep;
}

DenseReport dense_limit_empirical(std::uint64_t m, std::uint64_t n, int k_max, std::size_t N)
{
    if (m >= n)
        throw PreconditionError("dense_limit_empirical requires m < n");
    if (k_max < 0 || k_max > 20)
        throw PreconditionError("dense_limit_empirical requires 0 <= k_max <= 20");
    DenseReport rep;
    rep.m = m;
    rep.n = n;
    const Enclosure l = l_norm_sq(Segment(m, n), require_grid(n - m, N));
    rep.target = {std::sqrt(l.lo), std::nextafter(std::sqrt(l.hi), HUGE_VAL)};
    rep.bounded = true;
    for (int k = 0; k <= k_max; ++k) {
        const Segment seg(m << k, n << k);
        const Enclosure s = sup_norm_sq(seg, require_grid(seg.length(), N));
        DenseRow row;
        row.k = k;
        const double half = std::sqrt(std::ldexp(1.0, -k));
        row.ratio = {std::sqrt(std::max(s.lo, 0.0)) * half * (1.0 - 4 * kUnitRoundoff),
                     std::sqrt(s.hi) * half * (1.0 + 4 * kUnitRoundoff)};
        if (row.ratio.lo > rep.target.hi)
            rep.bounded = false;
        rep.rows.push_back(row);
    }
    const double last = rep.rows.back().ratio.mid();
    rep.final_gap = std::abs(last - rep.target.mid()) / rep.target.mid();
    rep.near_target = rep.final_gap <= 0.05;
    return rep;
}

SpherePoint random_sphere_point(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::array<double, 4> v{};
    double norm = 0.0;
    while (norm < 1e-6) {
        for (double& c : v)
            c = g(rng);
        norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
    }
    return {cplx{v[0] / norm, v[1] / norm}, cplx{v[2] / norm, v[3] / norm}};
}

SphereReport sphere_sampler(int k, cplx z, const SpherePoint& target, std::size_t count, std::uint64_t seed)
{
    if (k < 0 || k > 30)
        throw PreconditionError("sphere_sampler requires 0 <= k <= 30");
    const std::uint64_t roots = std::uint64_t{1} << k;
    if (count == 0 || count > roots)
        throw PreconditionError("sphere_sampler requires 1 <= count <= 2^k");
    if (std::abs(std::abs(z) - 1.0) > 1e-12)
        throw DomainError("sphere_sampler requires |z| = 1");

    // Floyd's sampling of `count` distinct root indices.
    std::mt19937_64 rng(seed);
    std::unordered_set<std::uint64_t> chosen;
    for (std::uint64_t j = roots - count; j < roots; ++j) {
        const std::uint64_t pick = std::uniform_int_distribution<std::uint64_t>(0, j)(rng);
        if (!chosen.insert(pick).second)
            chosen.insert(j);
    }
    std::vector<std::uint64_t> order(chosen.begin(), chosen.end());
    std::sort(order.begin(), order.end());

    SphereReport rep;
    rep.k = k;
    rep.count = count;
    rep.min_distance = HUGE_VAL;
    const double base = std::arg(z);
    const double norm = std::pow(2.0, 0.5 * (k + 1));
    for (const std::uint64_t j : order) {
        const double theta = (base + 2.0 * std::numbers::pi * static_cast<double>(j)) / static_cast<double>(roots);
        const cplx w = std::polar(1.0, theta);
        const auto [p, q] = eval_pq(k, w);
        const cplx a = p / norm;
        const cplx b = q / norm;
        rep.max_norm_error = std::max(rep.max_norm_error, std::abs(std::norm(a) + std::norm(b) - 1.0));
        const double d = std::sqrt(std::norm(a - target[0]) + std::norm(b - target[1]));
        rep.min_distance = std::min(rep.min_distance, d);
    }
    return rep;
}

} // namespace rscert
