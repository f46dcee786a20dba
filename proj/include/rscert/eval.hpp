#pragma once

#include "rscert/sequence.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace rscert {

using cplx = std::complex<double>;

inline constexpr double kUnitRoundoff = 0x1p-53;

/// Constant c in the per-value rounding bound c * len * log2(N) * u for
/// FFT grid values. Validated against extended-precision Horner in the tests.
inline constexpr double kFftErrorConstant = 8.0;

/// Largest grid accepted by the batch evaluators.
inline constexpr std::size_t kMaxGridSize = std::size_t{1} << 26;

/// Segments longer than this are evaluated per block instead of by Horner.
inline constexpr std::uint64_t kHornerLimit = std::uint64_t{1} << 26;

constexpr bool is_power_of_two(std::uint64_t x) noexcept { return x != 0 && (x & (x - 1)) == 0; }

int log2_exact(std::uint64_t power_of_two);

/// Absolute error bound for one FFT-computed value of a +-1 polynomial with
/// `len` terms on a grid of size N.
double fft_error_bound(std::uint64_t len, std::size_t N);

/// The N-th roots of unity z_j = exp(2 pi i j / N).
class UnitGrid {
public:
    explicit UnitGrid(std::size_t N);

    std::size_t size() const noexcept { return N_; }
    cplx point(std::uint64_t j) const;
    std::size_t antipode(std::size_t j) const noexcept { return (j + N_ / 2) & (N_ - 1); }

private:
    std::size_t N_;
};

struct GridValues {
    Segment seg;
    std::size_t N = 0;
    std::vector<cplx> values; ///< values[j] = P_seg(z_j)
    double error_bound = 0.0; ///< per-value absolute bound
};

/// Values of sum_{i < len} c_i z_j^i for j = 0..N/2 of a real coefficient
/// vector; the rest of the circle follows by conjugate symmetry.
struct HalfGrid {
    std::size_t N = 0;
    std::uint64_t length = 0;
    double error_bound = 0.0;
    std::vector<cplx> values;

    /// Value at any grid index 0 <= j < N.
    cplx at(std::size_t j) const noexcept
    {
        return j <= N / 2 ? values[j] : std::conj(values[N - j]);
    }
};

/// sum_{m<=i<n} a_i z^i by Horner (per-block for very long segments).
/// Throws DomainError unless ||z| - 1| <= 1e-12.
cplx eval_point(const Segment& seg, cplx z);

/// P_seg at every N-th root of unity via a zero-padded real FFT.
GridValues eval_grid(const Segment& seg, std::size_t N);

/// (P_t(z), Q_t(z)) from the product G(z^{2^{t-1}}) ... G(z) applied to
/// (2^{-1/2}, 2^{-1/2}), G(w) = 2^{-1/2} [[1, w], [1, -w]].
std::pair<cplx, cplx> eval_pq(int t, cplx z);

/// Unshifted segment values sum_i a_{m+i} z_j^i on the half grid. The moduli
/// equal |P_seg(z_j)|; the z^m twist is dropped.
HalfGrid half_grid(const Segment& seg, std::size_t N);

/// Half-grid transform of an arbitrary real coefficient vector.
HalfGrid half_grid_of(std::span<const double> coeffs, std::size_t N, double error_bound);

/// z^e for unimodular z by repeated squaring with renormalization.
cplx unit_pow(cplx z, std::uint64_t e);

/// Memoized prefix grids P_{<n}(z_j) at a fixed N, bounded by a byte budget
/// with least-recently-used eviction. Safe for concurrent use.
class PrefixGridCache {
public:
    explicit PrefixGridCache(std::size_t N, std::size_t budget_bytes = std::size_t{2} << 30);

    std::size_t grid_size() const noexcept { return N_; }
    std::shared_ptr<const HalfGrid> get(std::uint64_t n);
    std::size_t computed() const;

private:
    using Entry = std::pair<std::uint64_t, std::shared_ptr<const HalfGrid>>;

    std::size_t N_;
    std::size_t budget_;
    std::size_t bytes_ = 0;
    std::size_t computed_ = 0;
    mutable std::mutex mutex_;
    std::list<Entry> lru_;
    std::unordered_map<std::uint64_t, std::list<Entry>::iterator> index_;
};

} // namespace rscert
