// SPDX-License-Identifier: Apache-2.0
//
// FFT-based signal operators: Hilbert transform, fractional Hilbert transform,
// translation, band-limited resampling and the translation-dilation operator
// for tabulated wavelets.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "dtcwt/fft.hpp"
#include "dtcwt/signal.hpp"

namespace dtcwt {

// Frequency-domain multiplication by -i*sign(xi). The DC bin (and the unpaired
// Nyquist bin for even lengths) maps to 0, which keeps H skew-adjoint and
// H^2 = -I on the zero-mean subspace.
inline SampledSignal hilbert_transform(const SampledSignal& f) {
    const std::size_t n = f.size();
    std::vector<cplx> spec = fft(f.samples());
    for (std::size_t m = 0; m < n; ++m) {
        const long sm = signed_bin(m, n);
        if (sm == 0 || (n % 2 == 0 && m == n / 2)) {
            spec[m] = cplx{0.0, 0.0};
        } else if (sm > 0) {
            spec[m] *= cplx{0.0, -1.0};
        } else {
            spec[m] *= cplx{0.0, 1.0};
        }
    }
    std::vector<cplx> out = ifft(std::move(spec));
    if (f.is_real())
        for (auto& v : out) v = cplx{v.real(), 0.0};
    return f.with_samples(std::move(out));
}

// H_tau = cos(pi*tau) I - sin(pi*tau) H. tau = -1/2 recovers H; tau = 0 is I.
inline SampledSignal fractional_hilbert(const SampledSignal& f, double tau) {
    const double c = std::cos(std::numbers::pi * tau);
    const double s = std::sin(std::numbers::pi * tau);
    SampledSignal hf = hilbert_transform(f);
    std::vector<cplx> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = c * f[i] - s * hf[i];
    return f.with_samples(std::move(out));
}

namespace detail {

inline bool near_integer(double v, double tol, long& out) {
    const double r = std::round(v);
    if (std::abs(v - r) <= tol) {
        out = static_cast<long>(r);
        return true;
    }
    return false;
}

}  // namespace detail

// f^h = f(.+h). Exact circular shift when h is an integer number of samples on
// a periodic grid; spectral shift otherwise. Zero-extended grids shift in
// integer samples with zero fill, and fall back to a padded spectral shift for
// fractional h (callers are expected to leave headroom at the edges).
inline SampledSignal translate(const SampledSignal& f, double h) {
    if (h == 0.0) return f;
    const GridSpec& g = f.grid();
    long p = 0;
    const bool integer_shift = detail::near_integer(h / g.dx, 1e-9, p);

    if (integer_shift) {
        const long n = static_cast<long>(g.n);
        std::vector<cplx> out(g.n);
        for (long i = 0; i < n; ++i) {
            long src = i + p;
            if (g.periodic) {
                src %= n;
                if (src < 0) src += n;
                out[static_cast<std::size_t>(i)] = f[static_cast<std::size_t>(src)];
            } else {
                out[static_cast<std::size_t>(i)] =
                    (src >= 0 && src < n) ? f[static_cast<std::size_t>(src)] : cplx{0.0, 0.0};
            }
        }
        return f.with_samples(std::move(out));
    }

    if (g.periodic) {
        std::vector<cplx> spec = fft(f.samples());
        for (std::size_t m = 0; m < g.n; ++m) {
            if (g.n % 2 == 0 && m == g.n / 2) {
                // Keep real signals real: the unpaired Nyquist bin gets the
                // real part of its phase factor.
                spec[m] *= std::cos(bin_frequency(m, g) * h);
            } else {
                spec[m] *= std::exp(cplx{0.0, bin_frequency(m, g) * h});
            }
        }
        std::vector<cplx> out = ifft(std::move(spec));
        if (f.is_real())
            for (auto& v : out) v = cplx{v.real(), 0.0};
        return f.with_samples(std::move(out));
    }

    // Zero-extended fractional shift: pad to double length, shift spectrally,
    // crop. Content within h of the far edge wraps; callers keep headroom.
    GridSpec padded{2 * g.n, g.x0, g.dx, true};
    std::vector<cplx> ps(2 * g.n, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < g.n; ++i) ps[i] = f[i];
    SampledSignal shifted = translate(SampledSignal(padded, std::move(ps)), h);
    std::vector<cplx> out(shifted.samples().begin(), shifted.samples().begin() + static_cast<long>(g.n));
    if (f.is_real())
        for (auto& v : out) v = cplx{v.real(), 0.0};
    return f.with_samples(std::move(out));
}

// Band-limited upsampling by an integer factor via spectral zero padding.
inline SampledSignal upsample_fft(const SampledSignal& f, std::size_t factor) {
    if (factor < 1) throw std::invalid_argument("upsample_fft: factor must be >= 1");
    if (factor == 1) return f;
    const std::size_t n = f.size();
    const std::size_t nn = n * factor;
    std::vector<cplx> spec = fft(f.samples());
    std::vector<cplx> big(nn, cplx{0.0, 0.0});
    for (std::size_t m = 0; m < n; ++m) {
        const long sm = signed_bin(m, n);
        if (n % 2 == 0 && m == n / 2) {
            // Split the Nyquist bin across +/-N/2 to stay Hermitian.
            big[n / 2] = 0.5 * spec[m];
            big[nn - n / 2] = 0.5 * spec[m];
        } else {
            const std::size_t dst = sm >= 0 ? static_cast<std::size_t>(sm)
                                            : nn - static_cast<std::size_t>(-sm);
            big[dst] = spec[m];
        }
    }
    const double scale = static_cast<double>(factor);
    for (auto& v : big) v *= scale;
    std::vector<cplx> out = ifft(std::move(big));
    if (f.is_real())
        for (auto& v : out) v = cplx{v.real(), 0.0};
    GridSpec fine{nn, f.grid().x0, f.grid().dx / scale, f.grid().periodic};
    return SampledSignal(fine, std::move(out), f.label());
}

// Catmull-Rom evaluation of a tabulated signal at an arbitrary abscissa;
// zero outside the table.
class CubicTable {
public:
    explicit CubicTable(const SampledSignal& s) : grid_(s.grid()), re_(s.real_part()), im_(s.imag_part()) {}

    cplx operator()(double x) const {
        const double t = (x - grid_.x0) / grid_.dx;
        if (t < 0.0 || t > static_cast<double>(grid_.n - 1)) return cplx{0.0, 0.0};
        const long i1 = std::min(static_cast<long>(t), static_cast<long>(grid_.n) - 2);
        const double u = t - static_cast<double>(i1);
        const long n = static_cast<long>(grid_.n);
        const long i0 = std::max(i1 - 1, 0L);
        const long i2 = i1 + 1;
        const long i3 = std::min(i1 + 2, n - 1);
        return cplx{catmull(re_[static_cast<std::size_t>(i0)], re_[static_cast<std::size_t>(i1)],
                            re_[static_cast<std::size_t>(i2)], re_[static_cast<std::size_t>(i3)], u),
                    catmull(im_[static_cast<std::size_t>(i0)], im_[static_cast<std::size_t>(i1)],
                            im_[static_cast<std::size_t>(i2)], im_[static_cast<std::size_t>(i3)], u)};
    }

    double lo() const { return grid_.x0; }
    double hi() const { return grid_.x0 + static_cast<double>(grid_.n - 1) * grid_.dx; }

private:
    static double catmull(double p0, double p1, double p2, double p3, double u) {
        const double a = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
        const double b = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
        const double c = -0.5 * p0 + 0.5 * p2;
        return ((a * u + b) * u + c) * u + p1;
    }

    GridSpec grid_;
    std::vector<double> re_, im_;
};

// Xi_{j,k}[psi](x) = 2^{j/2} psi(2^j x - k) for a tabulated psi, sampled on the
// target grid. The table is FFT-upsampled once and read through cubic
// interpolation; values outside the table are zero. On periodic targets the
// transported function is wrapped over the period.
inline SampledSignal dilate_translate(const SampledSignal& psi, int j, long k, const GridSpec& target,
                                      std::size_t upsample_factor = 16,
                                      std::string* warning = nullptr) {
    target.validate();
    const double scale = std::exp2(static_cast<double>(j));
    const double amp = std::sqrt(scale);

    // A target grid coarser than the transported Nyquist content is reported,
    // not fatal: the resampled atom is still the best band-limited read-out.
    if (warning) {
        const double content = scale * std::numbers::pi / psi.grid().dx;
        const double nyquist = std::numbers::pi / target.dx;
        if (content > nyquist)
            *warning = "dilate_translate: transported content up to " + std::to_string(content) +
                       " rad exceeds the target Nyquist " + std::to_string(nyquist) + " rad";
    }
    SampledSignal fine = upsample_fft(psi, upsample_factor);
    CubicTable table(fine);

    std::vector<cplx> out(target.n, cplx{0.0, 0.0});
    const double period_y = scale * target.extent();  // period in the argument of psi
    for (std::size_t i = 0; i < target.n; ++i) {
        const double y = scale * target.x_at(i) - static_cast<double>(k);
        if (!target.periodic) {
            out[i] = amp * table(y);
        } else {
            // Wrap: sum psi(y + m * 2^j * T) over the copies that hit the table.
            const double mlo = std::floor((table.lo() - y) / period_y);
            const double mhi = std::ceil((table.hi() - y) / period_y);
            cplx acc{0.0, 0.0};
            for (double m = mlo; m <= mhi; m += 1.0) acc += table(y + m * period_y);
            out[i] = amp * acc;
        }
    }
    SampledSignal result(target, std::move(out));
    if (psi.is_real()) {
        std::vector<cplx> re(result.size());
        for (std::size_t i = 0; i < result.size(); ++i) re[i] = cplx{result[i].real(), 0.0};
        result = SampledSignal(target, std::move(re));
    }
    return result;
}

}  // namespace dtcwt
