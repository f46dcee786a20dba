#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace rscert::detail {

/// Forward real-to-complex DFT of `input` zero padded to N; returns the
/// N/2 + 1 outputs sum_i x_i exp(-2 pi i i j / N). Thread-safe.
std::vector<std::complex<double>> real_dft(std::span<const double> input, std::size_t N);

} // namespace rscert::detail
