#pragma once

#include <complex>
#include <cstddef>

namespace sedcat::detail {

// In-place complex FFT on an owned, aligned buffer. Plans use FFTW_ESTIMATE
// so that the chosen algorithm, and therefore every rounding, is fixed for
// a given build. Plan creation is serialized internally; execution of
// distinct plans is thread-safe.
class FftPlan {
public:
    enum class Direction { forward, backward };

    FftPlan(std::size_t n, Direction dir);
    ~FftPlan();
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    std::size_t size() const noexcept { return n_; }
    std::complex<double>* data() noexcept { return buf_; }
    const std::complex<double>* data() const noexcept { return buf_; }

    // Unnormalized: forward computes sum_j a_j e^{-2 pi i jk/n}, backward
    // uses e^{+2 pi i jk/n}.
    void execute() noexcept;

private:
    std::size_t n_;
    std::complex<double>* buf_;
    void* plan_;
};

}  // namespace sedcat::detail
