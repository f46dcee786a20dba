#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

namespace rscert::detail {
namespace {

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

// Plans are created once per size on scratch buffers and executed through
// the new-array interface, which FFTW documents as thread-safe.
class PlanRegistry {
public:
    fftw_plan r2c(std::size_t N)
    {
        std::lock_guard lock(mutex_);
        auto it = plans_.find(N);
        if (it != plans_.end())
            return it->second;
        std::unique_ptr<double, FftwFree> in(fftw_alloc_real(N));
        std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(N / 2 + 1));
        fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(N), in.get(), out.get(), FFTW_ESTIMATE);
        plans_.emplace(N, plan);
        return plan;
    }

    ~PlanRegistry()
    {
        for (auto& [n, plan] : plans_)
            fftw_destroy_plan(plan);
    }

private:
    std::mutex mutex_;
    std::map<std::size_t, fftw_plan> plans_;
};

PlanRegistry& registry()
{
    static PlanRegistry instance;
    return instance;
}

} // namespace

std::vector<std::complex<double>> real_dft(std::span<const double> input, std::size_t N)
{
    fftw_plan plan = registry().r2c(N);
    std::unique_ptr<double, FftwFree> in(fftw_alloc_real(N));
    std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(N / 2 + 1));
    std::fill_n(in.get(), N, 0.0);
    std::copy(input.begin(), input.end(), in.get());
    fftw_execute_dft_r2c(plan, in.get(), out.get());

    std::vector<std::complex<double>> result(N / 2 + 1);
    const fftw_complex* o = out.get();
    for (std::size_t j = 0; j <= N / 2; ++j)
        result[j] = {o[j][0], o[j][1]};
    return result;
}

} // namespace rscert::detail
