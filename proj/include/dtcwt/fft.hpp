// SPDX-License-Identifier: Apache-2.0
//
// Thin FFTW3 wrapper plus the continuous-convention Fourier transform
//   fhat(xi) = integral f(x) exp(-i xi x) dx
// approximated on the discrete frequency grid xi_m = 2*pi*m / (n*dx),
// m = -floor(n/2) .. ceil(n/2)-1. Scaled so Parseval holds in the continuous
// convention: sum |fhat|^2 dxi = 2*pi * sum |f|^2 dx.

#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include <fftw3.h>

#include "dtcwt/signal.hpp"

namespace dtcwt {

namespace detail {

// FFTW plan creation is not thread-safe; executions on distinct arrays are.
class FftPlanCache {
public:
    static FftPlanCache& instance() {
        static FftPlanCache cache;
        return cache;
    }

    void execute(std::vector<cplx>& data, int sign) {
        fftw_plan plan = nullptr;
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto key = std::make_pair(data.size(), sign);
            auto it = plans_.find(key);
            if (it == plans_.end()) {
                // Plan on a scratch buffer so `data` is not clobbered by planning.
                scratch_.assign(data.size(), cplx{0.0, 0.0});
                plan = fftw_plan_dft_1d(static_cast<int>(data.size()),
                                        reinterpret_cast<fftw_complex*>(scratch_.data()),
                                        reinterpret_cast<fftw_complex*>(scratch_.data()),
                                        sign, FFTW_ESTIMATE);
                plans_.emplace(key, plan);
            } else {
                plan = it->second;
            }
        }
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data.data()),
                         reinterpret_cast<fftw_complex*>(data.data()));
    }

    ~FftPlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

private:
    FftPlanCache() = default;
    std::mutex mu_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
    std::vector<cplx> scratch_;
};

}  // namespace detail

// Unnormalized DFT: X[m] = sum_n x[n] exp(-2*pi*i*m*n/N).
inline std::vector<cplx> fft(std::vector<cplx> x) {
    detail::FftPlanCache::instance().execute(x, FFTW_FORWARD);
    return x;
}

// Inverse with 1/N normalization: x[n] = (1/N) sum_m X[m] exp(+2*pi*i*m*n/N).
inline std::vector<cplx> ifft(std::vector<cplx> x) {
    detail::FftPlanCache::instance().execute(x, FFTW_BACKWARD);
    const double inv = 1.0 / static_cast<double>(x.size());
    for (auto& v : x) v *= inv;
    return x;
}

// Signed frequency index for DFT bin m of an n-point transform.
inline long signed_bin(std::size_t m, std::size_t n) {
    const long half = static_cast<long>(n) / 2;
    long sm = static_cast<long>(m);
    if (sm > (static_cast<long>(n) - 1) / 2) sm -= static_cast<long>(n);
    (void)half;
    return sm;
}

// Angular frequency of DFT bin m (signed convention).
inline double bin_frequency(std::size_t m, const GridSpec& g) {
    return 2.0 * std::numbers::pi * static_cast<double>(signed_bin(m, g.n)) /
           (static_cast<double>(g.n) * g.dx);
}

// Continuous-convention Fourier transform, returned on the fftshifted
// frequency grid (x0 = -pi/dx for even n).
inline SampledSignal fourier_transform(const SampledSignal& f) {
    const GridSpec& g = f.grid();
    const std::size_t n = g.n;
    std::vector<cplx> spec = fft(f.samples());

    // Continuous scaling and the phase carrying the grid origin:
    //   fhat(xi_m) = dx * exp(-i xi_m x0) * DFT[f]_m
    for (std::size_t m = 0; m < n; ++m) {
        const double xi = bin_frequency(m, g);
        spec[m] *= g.dx * std::exp(cplx{0.0, -xi * g.x0});
    }

    // fftshift so the output grid is monotone in xi.
    const std::size_t neg = n / 2;  // number of negative-frequency bins
    std::vector<cplx> shifted(n);
    for (std::size_t m = 0; m < n; ++m) {
        const long sm = signed_bin(m, n);
        shifted[static_cast<std::size_t>(sm + static_cast<long>(neg))] = spec[m];
    }

    const double dxi = 2.0 * std::numbers::pi / (static_cast<double>(n) * g.dx);
    GridSpec fgrid{n, -static_cast<double>(neg) * dxi, dxi, false};
    return SampledSignal(fgrid, std::move(shifted), f.label().empty() ? "" : f.label() + "_hat");
}

}  // namespace dtcwt
