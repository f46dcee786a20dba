#include "rscert/eval.hpp"

#include "fft.hpp"
#include "rscert/errors.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

namespace rscert {
namespace {

void require_unimodular(cplx z)
{
    if (!(std::abs(std::abs(z) - 1.0) <= 1e-12))
        throw DomainError("point (" + std::to_string(z.real()) + "," + std::to_string(z.imag()) +
                          ") is not on the unit circle");
}

void require_grid(std::size_t N, std::uint64_t len)
{
    if (!is_power_of_two(N) || N < 4)
        throw PreconditionError("grid size " + std::to_string(N) + " must be a power of two >= 4");
    if (N > kMaxGridSize)
        throw CapacityError("grid size " + std::to_string(N) + " exceeds the limit 2^26");
    if (len > N)
        throw PreconditionError("segment length " + std::to_string(len) + " exceeds grid size " +
                                std::to_string(N));
}

// exp(2 pi i p / N) with the angle reduced to the first octant.
cplx root_of_unity(std::uint64_t p, std::size_t N)
{
    p &= N - 1;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(p) / static_cast<double>(N);
    return {std::cos(angle), std::sin(angle)};
}

} // namespace

int log2_exact(std::uint64_t power_of_two)
{
    return std::countr_zero(power_of_two);
}

double fft_error_bound(std::uint64_t len, std::size_t N)
{
    return kFftErrorConstant * static_cast<double>(len) * log2_exact(N) * kUnitRoundoff;
}

UnitGrid::UnitGrid(std::size_t N) : N_(N)
{
    require_grid(N, 0);
}

cplx UnitGrid::point(std::uint64_t j) const
{
    return root_of_unity(j, N_);
}

cplx unit_pow(cplx z, std::uint64_t e)
{
    cplx result{1.0, 0.0};
    cplx base = z;
    while (e != 0) {
        if (e & 1) {
            result *= base;
            result /= std::abs(result);
        }
        e >>= 1;
        if (e != 0) {
            base *= base;
            base /= std::abs(base);
        }
    }
    return result;
}

std::pair<cplx, cplx> eval_pq(int t, cplx z)
{
    if (t < 0)
        throw PreconditionError("eval_pq requires t >= 0");
    require_unimodular(z);
    const double r = std::numbers::sqrt2 / 2.0;
    cplx p{r, 0.0};
    cplx q{r, 0.0};
    cplx w = z;
    for (int i = 0; i < t; ++i) {
        const cplx wq = w * q;
        const cplx np = r * (p + wq);
        const cplx nq = r * (p - wq);
        p = np;
        q = nq;
        w *= w;
        w /= std::abs(w);
    }
    const double scale = std::pow(2.0, 0.5 * (t + 1));
    return {scale * p, scale * q};
}

cplx eval_point(const Segment& seg, cplx z)
{
    require_unimodular(z);
    if (seg.empty())
        return {0.0, 0.0};
    if (seg.length() <= kHornerLimit) {
        cplx acc{0.0, 0.0};
        for (std::uint64_t i = seg.n; i-- > seg.m;)
            acc = acc * z + static_cast<double>(coeff(i));
        return acc * unit_pow(z, seg.m);
    }

    const BlockDecomposition dec = block_decompose(seg);
    std::vector<std::pair<cplx, cplx>> pq_cache(64);
    std::vector<bool> have(64, false);
    cplx acc{0.0, 0.0};
    for (const Block& b : dec.blocks) {
        if (!have[b.t]) {
            pq_cache[b.t] = eval_pq(b.t, z);
            have[b.t] = true;
        }
        const cplx k = b.kind == BlockKind::P ? pq_cache[b.t].first : pq_cache[b.t].second;
        acc += static_cast<double>(b.sign) * unit_pow(z, b.offset) * k;
    }
    return acc;
}

HalfGrid half_grid_of(std::span<const double> coeffs, std::size_t N, double error_bound)
{
    require_grid(N, coeffs.size());
    HalfGrid out;
    out.N = N;
    out.length = coeffs.size();
    out.error_bound = error_bound;
    out.values = detail::real_dft(coeffs, N);
    // FFTW's forward sign gives P(conj z_j); conjugate to get P(z_j).
    for (cplx& v : out.values)
        v = std::conj(v);
    return out;
}

HalfGrid half_grid(const Segment& seg, std::size_t N)
{
    require_grid(N, seg.length());
    std::vector<double> c(seg.length());
    for (std::uint64_t i = 0; i < seg.length(); ++i)
        c[i] = static_cast<double>(coeff(seg.m + i));
    return half_grid_of(c, N, fft_error_bound(seg.length(), N));
}

GridValues eval_grid(const Segment& seg, std::size_t N)
{
    const HalfGrid h = half_grid(seg, N);
    GridValues out;
    out.seg = seg;
    out.N = N;
    out.error_bound = h.error_bound;
    out.values.resize(N);

    std::vector<cplx> twiddle(N);
    for (std::size_t p = 0; p < N; ++p)
        twiddle[p] = root_of_unity(p, N);
    const std::uint64_t shift = seg.m & (N - 1);
    for (std::size_t j = 0; j < N; ++j)
        out.values[j] = h.at(j) * twiddle[(shift * j) & (N - 1)];
    return out;
}

PrefixGridCache::PrefixGridCache(std::size_t N, std::size_t budget_bytes) : N_(N), budget_(budget_bytes)
{
    require_grid(N, 0);
}

std::shared_ptr<const HalfGrid> PrefixGridCache::get(std::uint64_t n)
{
    {
        std::lock_guard lock(mutex_);
        auto it = index_.find(n);
        if (it != index_.end()) {
            lru_.splice(lru_.begin(), lru_, it->second);
            return it->second->second;
        }
    }
    auto grid = std::make_shared<const HalfGrid>(half_grid(Segment::prefix(n), N_));
    const std::size_t bytes = grid->values.size() * sizeof(cplx);
    if (bytes > budget_)
        throw CapacityError("a single prefix grid exceeds the cache budget");

    std::lock_guard lock(mutex_);
    auto it = index_.find(n);
    if (it != index_.end())
        return it->second->second;
    ++computed_;
    while (bytes_ + bytes > budget_ && !lru_.empty()) {
        bytes_ -= lru_.back().second->values.size() * sizeof(cplx);
        index_.erase(lru_.back().first);
        lru_.pop_back();
    }
    lru_.emplace_front(n, grid);
    index_[n] = lru_.begin();
    bytes_ += bytes;
    return grid;
}

std::size_t PrefixGridCache::computed() const
{
    std::lock_guard lock(mutex_);
    return computed_;
}

} // namespace rscert
