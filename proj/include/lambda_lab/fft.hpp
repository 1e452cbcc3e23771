#pragma once

#include <complex>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace lambda_lab::fft {

using cplx = std::complex<double>;

namespace detail {
inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

inline std::vector<cplx> run(std::vector<cplx> data, int sign) {
    const int n = static_cast<int>(data.size());
    if (n == 0) return data;
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        // fftw's planner is not re-entrant; execution is.
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return data;
}
}  // namespace detail

/// X_m = sum_j x_j exp(-2 pi i j m / n), unnormalized.
inline std::vector<cplx> forward(std::vector<cplx> data) {
    return detail::run(std::move(data), FFTW_FORWARD);
}

/// x_j = sum_m X_m exp(+2 pi i j m / n), unnormalized.
inline std::vector<cplx> backward(std::vector<cplx> data) {
    return detail::run(std::move(data), FFTW_BACKWARD);
}

}  // namespace lambda_lab::fft
