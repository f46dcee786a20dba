#include "rscert/certify1d.hpp"

#include "rscert/errors.hpp"
#include "rscert/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <string>

namespace rscert {
namespace {

constexpr double u = kUnitRoundoff;

double round_down(double x)
{
    return std::nextafter(x * (1.0 - 4.0 * u), -HUGE_VAL);
}

// Piece of the unscaled bound containing x in (1, 2].
double base_bound(double x)
{
    const long double lx = x;
    if (3.0L * lx <= 4.0L)
        return 6.0 * x;
    if (16.0 * x <= 25.0)
        return 8.0;
    return 9.0;
}

// (2^{e/2} - 1)^2, rounded down when irrational.
double pow2_half_minus_one_sq(int e)
{
    if (e % 2 == 0) {
        const double b = std::ldexp(1.0, e / 2) - 1.0;
        return b * b;
    }
    const long double b = std::sqrt(2.0L) * std::ldexp(1.0L, (e - 1) / 2) - 1.0L;
    return round_down(static_cast<double>(b * b));
}

std::uint64_t ceil_scaled(std::uint64_t num, std::uint64_t den_log2, int k)
{
    // ceil(num * 2^k / 2^den_log2)
    const std::uint64_t v = num << k;
    const std::uint64_t d = std::uint64_t{1} << den_log2;
    return (v + d - 1) / d;
}

std::uint64_t floor_scaled(std::uint64_t num, std::uint64_t den_log2, int k)
{
    return (num << k) >> den_log2;
}

} // namespace

std::string_view binding_label(Binding b)
{
    switch (b) {
    case Binding::Case6x: return "1";
    case Binding::Case8: return "2";
    case Binding::Case9: return "3";
    case Binding::HalfStep: return "*";
    }
    return "?";
}

double scaled_f_bound(double d)
{
    if (!(d > 0.0))
        return 0.0;
    int e = 0;
    const double mant = std::frexp(d, &e); // d = mant 2^e, mant in [0.5, 1)
    // Choose t with 2^t d in (1, 2].
    const double x = mant == 0.5 ? 2.0 : 2.0 * mant;
    const int t = mant == 0.5 ? 2 - e : 1 - e;
    return std::ldexp(base_bound(x), -t);
}

std::optional<RadiusChoice> largest_radius(double cap, double limit)
{
    if (!(cap > 0.0) || !(limit > 0.0))
        return std::nullopt;
    if (scaled_f_bound(limit) <= cap)
        return RadiusChoice{limit, Binding::HalfStep};

    int e = 0;
    const double mant = std::frexp(limit, &e);
    int t = mant == 0.5 ? 2 - e : 1 - e; // limit in (2^{-t}, 2^{1-t}]
    for (;; ++t) {
        const double unit = std::ldexp(1.0, -t);
        // Pieces beyond `limit` are out of reach; B(limit) > cap already
        // rules out the piece containing it.
        if (9.0 * unit <= cap && 25.0 / 16.0 * unit < limit)
            return RadiusChoice{2.0 * unit, Binding::Case9};
        if (8.0 * unit <= cap && 4.0 / 3.0 * unit < limit)
            return RadiusChoice{25.0 / 16.0 * unit, Binding::Case8};
        const double linear = round_down(cap / 6.0);
        if (linear > unit)
            return RadiusChoice{std::min(linear, limit), Binding::Case6x};
    }
}

Rational CertRecord1D::left() const
{
    return center.to_rational() - exact_rational(radius);
}

Rational CertRecord1D::right() const
{
    return center.to_rational() + exact_rational(radius);
}

CertRecord1D max_radius_from(const DyadicPoint& center, const Enclosure& f_center, double target)
{
    CertRecord1D rec;
    rec.center = center;
    rec.k = center.scale();
    rec.f = f_center;
    rec.target = target;
    rec.margin = 2.0 * f_center.width();

    const double usable = target - rec.margin;
    if (!(f_center.hi < usable))
        return rec;
    const double root_gap = round_down(std::sqrt(round_down(usable))) - std::nextafter(std::sqrt(f_center.hi), HUGE_VAL);
    if (!(root_gap > 0.0))
        return rec;
    const double cap = round_down(root_gap * root_gap);
    const double limit = std::ldexp(1.0, -rec.k - 1);
    const auto choice = largest_radius(cap, limit);
    if (!choice)
        return rec;
    rec.radius = choice->radius;
    rec.binding = choice->binding;
    rec.status = CertStatus::Certified;
    return rec;
}

CertRecord1D max_radius(const DyadicPoint& center, double target, std::size_t N)
{
    return max_radius_from(center, f_dyadic(center, N), target);
}

bool covers(std::span<const CertRecord1D> records, const Rational& a, const Rational& b,
            std::optional<std::pair<Rational, Rational>>* gap)
{
    std::vector<std::pair<Rational, Rational>> spans;
    for (const auto& r : records)
        if (r.certified())
            spans.emplace_back(r.left(), r.right());
    std::sort(spans.begin(), spans.end());
    Rational reach = a;
    for (const auto& [lo, hi] : spans) {
        if (reach >= b)
            break;
        if (lo > reach) {
            if (gap)
                *gap = std::make_pair(reach, std::min(lo, b));
            return false;
        }
        reach = std::max(reach, hi);
    }
    if (reach < b) {
        if (gap)
            *gap = std::make_pair(reach, b);
        return false;
    }
    return true;
}

CoverageReport certify_cover(const DyadicPoint& a, const DyadicPoint& b, double target,
                             std::span<const DyadicPoint> centers, std::size_t N)
{
    if (b < a)
        throw PreconditionError("certify_cover requires a <= b");
    if (!std::is_sorted(centers.begin(), centers.end()))
        throw PreconditionError("centers must be sorted ascending");
    CoverageReport rep;
    rep.a = a;
    rep.b = b;
    rep.target = target;
    for (const auto& c : centers)
        rep.records.push_back(max_radius(c, target, N));
    std::optional<std::pair<Rational, Rational>> gap;
    rep.covered = covers(rep.records, a.to_rational(), b.to_rational(), &gap);
    rep.first_gap = gap;
    return rep;
}

std::vector<DyadicPoint> read_center_table(std::istream& in)
{
    std::vector<DyadicPoint> out;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos)
            continue;
        const auto last = line.find_first_of(" \t\r", first);
        out.push_back(DyadicPoint::parse_binary(line.substr(first, last - first)));
    }
    return out;
}

std::vector<DyadicPoint> table1_centers()
{
    return {DyadicPoint::parse_binary("1.011"), DyadicPoint::parse_binary("1.01101"),
            DyadicPoint::parse_binary("1.011011"), DyadicPoint::parse_binary("1.0111"),
            DyadicPoint::parse_binary("1.1")};
}

std::vector<DyadicPoint> table2_centers()
{
    return {DyadicPoint::parse_binary("1.101"), DyadicPoint::parse_binary("1.1011"),
            DyadicPoint::parse_binary("1.10111"), DyadicPoint::parse_binary("1.11"),
            DyadicPoint::parse_binary("1.1101"), DyadicPoint::parse_binary("10.")};
}

double square_of_root_minus_one(std::uint64_t v)
{
    const auto root = static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(v))));
    for (std::uint64_t r = root > 0 ? root - 1 : 0; r <= root + 1; ++r)
        if (r * r == v) {
            const double b = static_cast<double>(r) - 1.0;
            return b * b;
        }
    const long double b = std::sqrt(static_cast<long double>(v)) - 1.0L;
    return round_down(static_cast<double>(b * b));
}

SmallKReport check_smallk(SmallKKind kind, std::size_t N, unsigned threads)
{
    SmallKReport rep;
    rep.kind = kind;
    const int k_max = kind == SmallKKind::Midrange ? 12 : 6;
    std::vector<SmallKRecord> todo;
    for (int k = 0; k <= k_max; ++k) {
        std::uint64_t lo = 0;
        std::uint64_t hi = 0;
        if (kind == SmallKKind::Midrange) {
            lo = ceil_scaled(11, 3, k);
            hi = floor_scaled(25, 4, k);
        } else {
            lo = ceil_scaled(25, 4, k);
            hi = std::uint64_t{2} << k;
        }
        for (std::uint64_t n = lo; n <= hi; ++n) {
            SmallKRecord r;
            r.k = k;
            r.n = n;
            todo.push_back(r);
        }
    }

    parallel_for(todo.size(), threads, [&](std::size_t i) {
        SmallKRecord& r = todo[i];
        double threshold = 0.0;
        if (kind == SmallKKind::Midrange) {
            r.bound = std::pow(2.0, 0.5 * (r.k + 3)) - 1.0;
            threshold = pow2_half_minus_one_sq(r.k + 3);
        } else {
            r.bound = std::sqrt(6.0 * static_cast<double>(r.n) - 2.0) - 1.0;
            threshold = square_of_root_minus_one(6 * r.n - 2);
        }
        r.l_sq = l_norm_sq(Segment::prefix(r.n), N);
        r.l_ok = r.l_sq.hi < threshold;
        if (r.l_ok) {
            r.sup_ok = true;
            return;
        }
        const SupCertificate cert = refine_sup_norm_sq(Segment::prefix(r.n), N, threshold);
        r.sup_sq = cert.enclosure;
        r.sup_ok = cert.ok;
    });

    rep.records = std::move(todo);
    rep.ok = std::all_of(rep.records.begin(), rep.records.end(), [](const auto& r) { return r.sup_ok; });
    rep.l_all = std::all_of(rep.records.begin(), rep.records.end(), [](const auto& r) { return r.l_ok; });
    return rep;
}

BruteOneDimReport brute_onedim(std::uint64_t n_max, std::size_t N, unsigned threads)
{
    if (n_max < 1)
        throw PreconditionError("brute_onedim requires n_max >= 1");
    BruteOneDimReport rep;
    rep.n_max = n_max;
    rep.N = N;

    struct Row {
        SupCertificate cert;
        double ratio = 0.0;
    };
    std::vector<Row> rows(n_max);
    parallel_for(n_max, threads, [&](std::size_t i) {
        const std::uint64_t n = i + 1;
        const double threshold = square_of_root_minus_one(6 * n - 2);
        Row& row = rows[i];
        row.cert = refine_sup_norm_sq(Segment::prefix(n), N, threshold);
        const double root = std::sqrt(row.cert.enclosure.hi) + 1.0;
        row.ratio = root * root / (6.0 * static_cast<double>(n) - 2.0);
    });

    rep.ok = true;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        const Row& row = rows[n - 1];
        if (!row.cert.ok) {
            rep.ok = false;
            rep.failures.push_back(n);
        }
        if (row.cert.refined > 0)
            ++rep.refined_cases;
        if (row.ratio > rep.worst_ratio) {
            rep.worst_ratio = row.ratio;
            rep.worst_n = n;
        }
    }
    for (std::uint64_t p = 1; (2 * p + 1) / 3 <= n_max; p *= 4) {
        const std::uint64_t n = (2 * p + 1) / 3;
        rep.sharp_ratios.emplace_back(n, rows[n - 1].ratio);
    }
    return rep;
}

} // namespace rscert
