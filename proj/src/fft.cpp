#include "pmcw/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "pmcw/error.hpp"

namespace pmcw::fft {
namespace {

struct FftwFree {
    void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using AlignedBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

AlignedBuffer make_buffer(std::size_t n)
{
    auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (p == nullptr) {
        throw Error("fftw_malloc failed");
    }
    return AlignedBuffer(p);
}

// Planning is not thread-safe in FFTW; execution on new arrays is, provided
// the arrays share the planning alignment (guaranteed by fftw_malloc).
class PlanCache {
public:
    fftw_plan get(std::size_t n, Direction dir)
    {
        std::lock_guard lock(mutex_);
        const auto key = std::make_pair(n, dir);
        if (auto it = plans_.find(key); it != plans_.end()) {
            return it->second;
        }
        auto buf = make_buffer(n);
        const int sign = dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buf.get(), buf.get(), sign,
                                          FFTW_ESTIMATE);
        if (plan == nullptr) {
            throw Error("fftw planning failed");
        }
        plans_.emplace(key, plan);
        return plan;
    }

    ~PlanCache()
    {
        for (auto& [key, plan] : plans_) {
            fftw_destroy_plan(plan);
        }
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, Direction>, fftw_plan> plans_;
};

PlanCache& cache()
{
    static PlanCache instance;
    return instance;
}

} // namespace

void transform(std::span<std::complex<double>> data, Direction dir)
{
    const std::size_t n = data.size();
    if (n == 0) {
        return;
    }
    fftw_plan plan = cache().get(n, dir);

    thread_local AlignedBuffer scratch;
    thread_local std::size_t scratch_len = 0;
    if (scratch_len < n) {
        scratch = make_buffer(n);
        scratch_len = n;
    }
    static_assert(sizeof(fftw_complex) == sizeof(std::complex<double>));
    std::memcpy(scratch.get(), data.data(), n * sizeof(fftw_complex));
    fftw_execute_dft(plan, scratch.get(), scratch.get());
    std::memcpy(static_cast<void*>(data.data()), scratch.get(), n * sizeof(fftw_complex));
}

} // namespace pmcw::fft
