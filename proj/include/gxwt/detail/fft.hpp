#pragma once

#include <complex>
#include <cstddef>
#include <mutex>
#include <span>

#include <fftw3.h>

namespace gxwt::detail {

// FFTW planning is not thread-safe; execution with the new-array API is.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

/// Unnormalized complex DFT of a fixed length, usable from several threads at once.
class FftPlan {
public:
    FftPlan(std::size_t length, bool inverse) : length_(length) {
        std::lock_guard lock(fftw_planner_mutex());
        auto* scratch = fftw_alloc_complex(length);
        plan_ = fftw_plan_dft_1d(static_cast<int>(length), scratch, scratch, inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(scratch);
    }
    ~FftPlan() {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan_);
    }
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    std::size_t length() const noexcept { return length_; }

    /// In-place transform; `data.size()` must equal length().
    void execute(std::span<std::complex<double>> data) const {
        auto* p = reinterpret_cast<fftw_complex*>(data.data());
        fftw_execute_dft(plan_, p, p);
    }

private:
    std::size_t length_;
    fftw_plan plan_ = nullptr;
};

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace gxwt::detail
