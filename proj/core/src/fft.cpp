#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <new>

namespace sedcat::detail {

namespace {

std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

}  // namespace

FftPlan::FftPlan(std::size_t n, Direction dir) : n_(n), buf_(nullptr), plan_(nullptr)
{
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto* raw = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (raw == nullptr) {
        throw std::bad_alloc();
    }
    buf_ = reinterpret_cast<std::complex<double>*>(raw);
    for (std::size_t i = 0; i < n; ++i) {
        buf_[i] = 0.0;
    }
    const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), raw, raw, sign, FFTW_ESTIMATE);
    if (p == nullptr) {
        fftw_free(raw);
        throw std::bad_alloc();
    }
    plan_ = p;
}

FftPlan::~FftPlan()
{
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    fftw_free(reinterpret_cast<fftw_complex*>(buf_));
}

void FftPlan::execute() noexcept
{
    fftw_execute(static_cast<fftw_plan>(plan_));
}

}  // namespace sedcat::detail
