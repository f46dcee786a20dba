#include "rscert/certify2d.hpp"

#include "rscert/errors.hpp"
#include "rscert/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <map>
#include <random>
#include <sstream>
#include <utility>

namespace rscert {
namespace {

constexpr double u = kUnitRoundoff;

using Corner = std::pair<DyadicPoint, DyadicPoint>;
using CornerEval = std::function<Enclosure(const DyadicPoint&, const DyadicPoint&)>;
using TargetFn = double (*)(const DyadicSquare&);

std::uint64_t pow2(int e) { return std::uint64_t{1} << e; }

void require_in_box(const DyadicSquare& sq, int max_scale)
{
    if (sq.k < 0 || sq.k > 40)
        throw PreconditionError("square scale out of range: " + to_string(sq));
    if (sq.r + 1 > 4 * pow2(sq.k) || sq.s + 1 > 4 * pow2(sq.k))
        throw PreconditionError("square not inside [0,4]^2: " + to_string(sq));
    if (sq.k >= max_scale)
        throw PreconditionError("square scale must be below max_scale: " + to_string(sq));
}

CertTree run_tree(TwoDimBound bound, const std::vector<DyadicSquare>& roots,
                  const std::vector<DyadicSquare>& skipped, std::size_t N, int max_scale, unsigned threads,
                  const CornerEval& eval, TargetFn target_min)
{
    if (max_scale < 1 || max_scale > 30)
        throw PreconditionError("max_scale must be in 1..30");
    CertTree tree;
    tree.bound = bound;
    tree.N = N;
    tree.max_scale = max_scale;
    tree.roots = roots;
    tree.roots.insert(tree.roots.end(), skipped.begin(), skipped.end());
    std::sort(tree.roots.begin(), tree.roots.end());

    for (const auto& sq : skipped) {
        SquareRecord rec;
        rec.square = sq;
        rec.status = SquareStatus::Skipped;
        tree.squares.push_back(rec);
    }

    std::map<Corner, Enclosure> memo;
    std::vector<DyadicSquare> frontier = roots;
    for (const auto& sq : roots) {
        SquareRecord rec;
        rec.square = sq;
        rec.status = SquareStatus::Subdivided;
        tree.squares.push_back(rec);
    }

    while (!frontier.empty()) {
        std::sort(frontier.begin(), frontier.end());
        std::vector<Corner> needed;
        for (const auto& sq : frontier)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    Corner c{DyadicPoint(sq.r + i, sq.k), DyadicPoint(sq.s + j, sq.k)};
                    if (!memo.contains(c))
                        needed.push_back(c);
                }
        std::sort(needed.begin(), needed.end());
        needed.erase(std::unique(needed.begin(), needed.end()), needed.end());
        std::vector<Enclosure> values(needed.size());
        parallel_for(needed.size(), threads, [&](std::size_t i) { values[i] = eval(needed[i].first, needed[i].second); });
        for (std::size_t i = 0; i < needed.size(); ++i)
            memo.emplace(needed[i], values[i]);
        tree.corner_evaluations += needed.size();

        std::vector<DyadicSquare> next;
        for (const auto& parent : frontier) {
            for (const auto& child : parent.children()) {
                // Nearest parent corner: the one sharing the child's outer vertex.
                const std::uint64_t cx = parent.r + (child.r & 1);
                const std::uint64_t cy = parent.s + (child.s & 1);
                const Corner c{DyadicPoint(cx, parent.k), DyadicPoint(cy, parent.k)};
                const Enclosure& e = memo.at(c);
                SquareRecord rec;
                rec.square = child;
                rec.corner_x = c.first;
                rec.corner_y = c.second;
                rec.value = e;
                rec.target = target_min(child);
                const double hi = std::nextafter(e.hi + 2.0 * e.width(), HUGE_VAL);
                if (corner_certifies(hi, parent.k, rec.target)) {
                    rec.status = SquareStatus::Certified;
                } else if (child.k >= max_scale) {
                    rec.status = SquareStatus::Bad;
                } else {
                    rec.status = SquareStatus::Subdivided;
                    next.push_back(child);
                }
                tree.squares.push_back(rec);
            }
        }
        frontier = std::move(next);
    }

    std::sort(tree.squares.begin(), tree.squares.end(),
              [](const SquareRecord& a, const SquareRecord& b) { return a.square < b.square; });
    return tree;
}

std::vector<DyadicSquare> unit_squares(std::uint64_t x0, std::uint64_t x1, std::uint64_t y0, std::uint64_t y1)
{
    std::vector<DyadicSquare> out;
    for (std::uint64_t r = x0; r < x1; ++r)
        for (std::uint64_t s = y0; s < y1; ++s)
            out.push_back({r, s, 0});
    return out;
}

CornerEval g_evaluator(PrefixGridCache& cache)
{
    return [&cache](const DyadicPoint& x, const DyadicPoint& y) { return g_dyadic(x, y, cache); };
}

CornerEval f2_evaluator(PrefixGridCache& cache)
{
    return [&cache](const DyadicPoint& x, const DyadicPoint& y) { return f2_dyadic(x, y, cache); };
}

} // namespace

double DyadicSquare::side() const { return std::ldexp(1.0, -k); }

std::vector<DyadicSquare> DyadicSquare::children() const
{
    return {{2 * r, 2 * s, k + 1}, {2 * r + 1, 2 * s, k + 1}, {2 * r, 2 * s + 1, k + 1}, {2 * r + 1, 2 * s + 1, k + 1}};
}

std::strong_ordering operator<=>(const DyadicSquare& a, const DyadicSquare& b)
{
    if (auto c = a.k <=> b.k; c != 0)
        return c;
    if (auto c = a.r <=> b.r; c != 0)
        return c;
    return a.s <=> b.s;
}

std::string to_string(const DyadicSquare& sq)
{
    std::ostringstream os;
    os << "[" << sq.x_lo().to_binary() << "," << sq.x_hi().to_binary() << "]x[" << sq.y_lo().to_binary() << ","
       << sq.y_hi().to_binary() << "]";
    return os.str();
}

std::string_view status_name(SquareStatus s)
{
    switch (s) {
    case SquareStatus::Certified: return "certified";
    case SquareStatus::Subdivided: return "subdivided";
    case SquareStatus::Bad: return "bad";
    case SquareStatus::Skipped: return "skipped";
    }
    return "?";
}

std::string_view bound_name(TwoDimBound b)
{
    return b == TwoDimBound::G ? "g" : "f2";
}

std::vector<DyadicSquare> CertTree::with_status(SquareStatus s) const
{
    std::vector<DyadicSquare> out;
    for (const auto& rec : squares)
        if (rec.status == s)
            out.push_back(rec.square);
    return out;
}

AreaReport area_accounting(const CertTree& tree)
{
    AreaReport a;
    auto units = [&](const DyadicSquare& sq) { return pow2(2 * (tree.max_scale - sq.k)); };
    for (const auto& root : tree.roots)
        a.region += units(root);
    for (const auto& rec : tree.squares) {
        if (rec.status == SquareStatus::Certified)
            a.certified += units(rec.square);
        else if (rec.status == SquareStatus::Bad)
            a.bad += units(rec.square);
        else if (rec.status == SquareStatus::Skipped)
            a.skipped += units(rec.square);
    }
    a.consistent = a.certified + a.bad + a.skipped == a.region;
    return a;
}

double g_target_min(const DyadicSquare& sq)
{
    const double v = std::ldexp(10.0 * static_cast<double>(sq.r + sq.s), -sq.k);
    return std::min(v, 40.0);
}

double f2_target_min(const DyadicSquare& sq)
{
    const double diff = static_cast<double>(static_cast<std::int64_t>(sq.s) - static_cast<std::int64_t>(sq.r + 1));
    return std::ldexp(10.0 * diff, -sq.k);
}

bool corner_certifies(double hi, int parent_scale, double target)
{
    if (!(target > 0.0) || !(hi >= 0.0))
        return false;
    double step = std::ldexp(3.0, -(parent_scale / 2));
    if (parent_scale % 2 != 0)
        step *= std::sqrt(0.5);
    const double lhs = (std::sqrt(hi) + step) * (1.0 + 4.0 * u);
    const double rhs = std::sqrt(target) * (1.0 - 4.0 * u);
    return lhs <= rhs;
}

CertTree certify_square_g(const DyadicSquare& sq, std::size_t N, int max_scale, unsigned threads)
{
    require_in_box(sq, max_scale);
    PrefixGridCache cache(N);
    return run_tree(TwoDimBound::G, {sq}, {}, N, max_scale, threads, g_evaluator(cache), g_target_min);
}

CertTree certify_g(std::size_t N, int max_scale, unsigned threads)
{
    PrefixGridCache cache(N);
    return certify_g(cache, max_scale, threads);
}

CertTree certify_g(PrefixGridCache& cache, int max_scale, unsigned threads)
{
    return run_tree(TwoDimBound::G, unit_squares(0, 4, 0, 4), {}, cache.grid_size(), max_scale, threads,
                    g_evaluator(cache), g_target_min);
}

F2Result certify_f2(std::size_t N, int max_scale, unsigned threads)
{
    PrefixGridCache cache(N);
    return certify_f2(cache, max_scale, threads);
}

F2Result certify_f2(PrefixGridCache& cache, int max_scale, unsigned threads)
{
    const DyadicSquare analytic{1, 2, 0};
    std::vector<DyadicSquare> roots;
    for (const auto& sq : unit_squares(0, 2, 2, 4))
        if (sq != analytic)
            roots.push_back(sq);
    F2Result res;
    res.tree = run_tree(TwoDimBound::F2, roots, {analytic}, cache.grid_size(), max_scale, threads,
                        f2_evaluator(cache), f2_target_min);
    res.ok = res.tree.bad().empty();
    return res;
}

bool inside_region_b(const DyadicSquare& sq)
{
    // B is a union of unit cells, so an aligned square of side <= 1 lies in
    // it exactly when its unit cell does.
    const std::uint64_t cx = sq.r >> sq.k;
    const std::uint64_t cy = sq.s >> sq.k;
    if (cx >= 2 || cy >= 4 || cy < 1)
        return false;
    return !(cx == 0 && cy < 2);
}

bool inside_critical_box(const DyadicSquare& sq)
{
    // 1 <= r/2^k, (r+1)/2^k <= 3/2, 2 <= s/2^k, (s+1)/2^k <= 3.
    const std::uint64_t one = pow2(sq.k);
    return sq.r >= one && 2 * (sq.r + 1) <= 3 * one && sq.s >= 2 * one && sq.s + 1 <= 3 * one;
}

ExclusionResult check_exclusion_region(const std::vector<DyadicSquare>& bad)
{
    ExclusionResult res;
    for (const auto& sq : bad) {
        if (!inside_region_b(sq))
            continue;
        ++res.bad_inside_region;
        if (!inside_critical_box(sq)) {
            res.ok = false;
            res.offending.push_back(sq);
        }
    }
    return res;
}

ExclusionResult check_exclusion_region(const CertTree& tree)
{
    return check_exclusion_region(tree.bad());
}

ReflectionReport reflection_reduction_check(int k, std::size_t samples, std::size_t N, std::uint64_t seed)
{
    if (k < 0 || k > 24)
        throw PreconditionError("reflection check requires 0 <= k <= 24");
    ReflectionReport rep;
    rep.k = k;
    const std::uint64_t lo = pow2(k + 1);
    const std::uint64_t top = pow2(k + 2);
    auto check = [&](std::uint64_t m, std::uint64_t n) {
        ++rep.checked;
        if (m == n)
            return;
        const Enclosure a = l_norm_sq(Segment(m, n), N);
        const Enclosure b = l_norm_sq(Segment(top - n, top - m), N);
        if (!a.overlaps(b) && rep.ok) {
            rep.ok = false;
            rep.first_failure = std::make_pair(m, n);
        }
    };
    const std::uint64_t span = top - lo + 1;
    if (span * (span + 1) / 2 <= samples) {
        for (std::uint64_t m = lo; m <= top; ++m)
            for (std::uint64_t n = m; n <= top; ++n)
                check(m, n);
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::uint64_t> pick(lo, top);
        for (std::size_t i = 0; i < samples; ++i) {
            std::uint64_t m = pick(rng);
            std::uint64_t n = pick(rng);
            if (n < m)
                std::swap(m, n);
            check(m, n);
        }
    }
    return rep;
}

BruteTwoDimReport brute_twodim(std::uint64_t n_max, std::size_t N, unsigned threads)
{
    if (n_max < 1)
        throw PreconditionError("brute_twodim requires n_max >= 1");
    if (!is_power_of_two(N) || N < 4 * n_max)
        throw PreconditionError("brute_twodim requires N a power of two with N >= 4 n_max");
    std::vector<std::shared_ptr<const HalfGrid>> prefix(n_max + 1);
    PrefixGridCache cache(N, std::numeric_limits<std::size_t>::max());
    parallel_for(n_max + 1, threads, [&](std::size_t n) { prefix[n] = cache.get(n); });

    BruteTwoDimReport rep;
    rep.n_max = n_max;
    rep.N = N;
    // Row n holds every m < n; rows are independent.
    std::vector<std::vector<double>> ratios(n_max + 1);
    parallel_for(n_max, threads, [&](std::size_t i) {
        const std::uint64_t n = i + 1;
        auto& row = ratios[n];
        row.resize(n);
        for (std::uint64_t m = 0; m < n; ++m)
            row[m] = l_norm_sq_of_difference(*prefix[n], *prefix[m]).lo / static_cast<double>(n - m);
    });
    rep.ok = true;
    for (std::uint64_t n = 1; n <= n_max; ++n)
        for (std::uint64_t m = 0; m < n; ++m) {
            ++rep.pairs;
            const double r = ratios[n][m];
            if (r > rep.worst_ratio) {
                rep.worst_ratio = r;
                rep.worst = {m, n};
            }
            if (!(r <= 10.0)) {
                rep.ok = false;
                rep.failures.emplace_back(m, n);
            }
        }
    return rep;
}

std::string format_square_list(const std::vector<DyadicSquare>& squares)
{
    std::vector<DyadicSquare> sorted = squares;
    std::sort(sorted.begin(), sorted.end());
    std::ostringstream os;
    for (const auto& sq : sorted)
        os << sq.k << ' ' << sq.r << ' ' << sq.s << '\n';
    return os.str();
}

std::vector<DyadicSquare> parse_square_list(std::string_view text)
{
    std::vector<DyadicSquare> out;
    std::istringstream is{std::string(text)};
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream ls(line);
        DyadicSquare sq;
        if (!(ls >> sq.k >> sq.r >> sq.s))
            throw PreconditionError("malformed square line: " + line);
        out.push_back(sq);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace rscert
