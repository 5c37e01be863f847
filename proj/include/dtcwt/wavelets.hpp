// SPDX-License-Identifier: Apache-2.0
//
// Modulated wavelets psi(x) = w(x) cos(omega0 x + xi0) and their Hilbert-pair
// partners psi' = H psi.
//
// Three constructions:
//   - Shannon: w = sinc(x/2), omega0 = 3*pi/2. Strictly band-limited window,
//     Bedrosian identity exact, orthonormal system.
//   - Gabor: Gaussian window. psi' computed numerically as H psi; the pair is
//     approximately analytic with spectral leakage exp(-sigma^2 omega0^2 / 2).
//   - Raised cosine: compactly supported C^1 window with known Lipschitz
//     constant, for shift-error decay-rate experiments.
//
// Pairs are normalized to ||psi||_2 = 1. The window *shape* keeps peak 1; the
// normalization lives in `amplitude`, and the recorded Lipschitz constant
// refers to the actual window amplitude*shape.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dtcwt/fft.hpp"
#include "dtcwt/operators.hpp"
#include "dtcwt/signal.hpp"

namespace dtcwt {

enum class WindowKind { shannon_sinc, gaussian, raised_cosine, tabulated };

inline const char* window_kind_name(WindowKind k) {
    switch (k) {
        case WindowKind::shannon_sinc: return "shannon_sinc";
        case WindowKind::gaussian: return "gaussian";
        case WindowKind::raised_cosine: return "raised_cosine";
        case WindowKind::tabulated: return "tabulated";
    }
    return "?";
}

struct WindowSpec {
    WindowKind kind = WindowKind::gaussian;
    double sigma = 1.0;          // gaussian
    double p = 0.0, q = 0.0;     // raised_cosine support
    double shape_lipschitz = 0;  // max |d shape / dx| when known analytically
    bool derivative_available = false;

    // Peak-1 window shape.
    double shape(double x) const {
        switch (kind) {
            case WindowKind::gaussian:
                return std::exp(-x * x / (2.0 * sigma * sigma));
            case WindowKind::raised_cosine: {
                if (x < p || x > q) return 0.0;
                const double c = 0.5 * (p + q);
                return 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * (x - c) / (q - p)));
            }
            case WindowKind::shannon_sinc: {
                const double t = 0.5 * std::numbers::pi * x;
                return t == 0.0 ? 1.0 : std::sin(t) / t;
            }
            case WindowKind::tabulated:
                throw std::logic_error("WindowSpec: tabulated windows have no closed-form shape");
        }
        return 0.0;
    }

    double shape_derivative(double x) const {
        switch (kind) {
            case WindowKind::gaussian:
                return -x / (sigma * sigma) * shape(x);
            case WindowKind::raised_cosine: {
                if (x < p || x > q) return 0.0;
                const double c = 0.5 * (p + q);
                const double L = q - p;
                return -std::numbers::pi / L * std::sin(2.0 * std::numbers::pi * (x - c) / L);
            }
            case WindowKind::shannon_sinc: {
                const double t = 0.5 * std::numbers::pi * x;
                if (std::abs(t) < 1e-8) return -t * std::numbers::pi / 6.0;  // series at 0
                return 0.5 * std::numbers::pi * (std::cos(t) - std::sin(t) / t) / t;
            }
            case WindowKind::tabulated:
                throw std::logic_error("WindowSpec: tabulated windows have no closed-form derivative");
        }
        return 0.0;
    }

    // Support of the shape, as used for wrap sums; Gaussian support is the
    // radius past which the shape is below ~1e-18.
    double support_lo() const {
        switch (kind) {
            case WindowKind::gaussian: return -9.1 * sigma;
            case WindowKind::raised_cosine: return p;
            default: throw std::logic_error("WindowSpec: unbounded support");
        }
    }
    double support_hi() const {
        switch (kind) {
            case WindowKind::gaussian: return 9.1 * sigma;
            case WindowKind::raised_cosine: return q;
            default: throw std::logic_error("WindowSpec: unbounded support");
        }
    }
    bool compact() const { return kind == WindowKind::gaussian || kind == WindowKind::raised_cosine; }
};

struct ModulatedWavelet {
    WindowSpec window;
    double omega0 = 0.0;     // carrier frequency (rad/unit), > 0
    double xi0 = 0.0;        // carrier phase (rad)
    double band_limit = 0.0; // measured window bandwidth Omega (0 = unknown)
    double amplitude = 1.0;  // normalization of the window

    void validate() const {
        if (!(omega0 > 0.0)) throw std::invalid_argument("ModulatedWavelet: omega0 must be positive");
        if (band_limit > 0.0 && band_limit >= omega0)
            throw std::invalid_argument("ModulatedWavelet: window band limit " +
                                        std::to_string(band_limit) + " must stay below omega0 " +
                                        std::to_string(omega0));
    }

    double window_value(double x) const { return amplitude * window.shape(x); }
    double window_derivative(double x) const { return amplitude * window.shape_derivative(x); }
    double value(double x) const { return window_value(x) * std::cos(omega0 * x + xi0); }
};

class WaveletPair {
public:
    ModulatedWavelet psi;
    bool orthonormal = false;
    bool exactly_modulated = false;  // psi has the closed modulated form
    bool psi_prime_analytic = false; // psi' = w sin(omega0 x + xi0) exactly (Shannon)
    double bedrosian_defect = 0.0;   // ||psi'_num - w sin||_2 / ||psi||_2
    double lipschitz = 0.0;          // max |dw/dx| of the actual window, when known
    std::string label;
    GridSpec tab_grid;               // tabulation grid (lazy for Shannon)

    double psi_value(double x) const { return psi.value(x); }

    double psi_prime_value(double x) const {
        if (psi_prime_analytic)
            return psi.window_value(x) * std::sin(psi.omega0 * x + psi.xi0);
        if (!prime_interp_) throw std::logic_error("WaveletPair: psi' table missing");
        return (*prime_interp_)(x).real();
    }

    bool has_prime_table() const { return static_cast<bool>(prime_table_); }
    const SampledSignal& prime_table() const {
        if (!prime_table_) throw std::logic_error("WaveletPair: psi' table missing");
        return *prime_table_;
    }
    // Interval outside which psi' is treated as zero.
    double prime_support_lo() const {
        return psi_prime_analytic ? psi.window.support_lo() : prime_interp_->lo();
    }
    double prime_support_hi() const {
        return psi_prime_analytic ? psi.window.support_hi() : prime_interp_->hi();
    }

    // 32x band-limited upsampling keeps the Catmull-Rom readout error of psi'
    // well below the pair's Bedrosian defect, which dominates downstream.
    void attach_prime_table(SampledSignal table, std::size_t upsample_factor = 32) {
        prime_table_ = std::make_shared<SampledSignal>(std::move(table));
        prime_interp_ = std::make_shared<CubicTable>(upsample_fft(*prime_table_, upsample_factor));
    }

    // Tabulate psi on its grid (or a caller-supplied one).
    SampledSignal tabulate_psi(std::optional<GridSpec> grid = std::nullopt) const {
        const GridSpec g = grid.value_or(tab_grid);
        return SampledSignal::sample_real(g, [this](double x) { return psi_value(x); },
                                          label + "_psi");
    }
    SampledSignal tabulate_psi_prime(std::optional<GridSpec> grid = std::nullopt) const {
        const GridSpec g = grid.value_or(tab_grid);
        return SampledSignal::sample_real(g, [this](double x) { return psi_prime_value(x); },
                                          label + "_psi_prime");
    }

private:
    std::shared_ptr<const SampledSignal> prime_table_;
    std::shared_ptr<const CubicTable> prime_interp_;
};

namespace detail {

// 99.99%-energy half-width of the window shape's spectrum, measured on a grid.
inline double measure_band_limit(const WindowSpec& w, const GridSpec& g) {
    SampledSignal shape = SampledSignal::sample_real(g, [&](double x) { return w.shape(x); });
    std::vector<cplx> spec = fft(shape.samples());
    const std::size_t n = g.n;
    std::vector<double> energy_at(n / 2 + 1, 0.0);
    double total = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        const long sm = signed_bin(m, n);
        const double e = std::norm(spec[m]);
        energy_at[static_cast<std::size_t>(std::labs(sm))] += e;
        total += e;
    }
    double acc = 0.0;
    for (std::size_t m = 0; m < energy_at.size(); ++m) {
        acc += energy_at[m];
        if (acc >= 0.9999 * total)
            return 2.0 * std::numbers::pi * static_cast<double>(m) / (static_cast<double>(n) * g.dx);
    }
    return 2.0 * std::numbers::pi / g.dx;  // not band-limited at this resolution
}

inline double quadrature_norm(const GridSpec& g, const std::function<double(double)>& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        const double v = f(g.x_at(i));
        acc += v * v;
    }
    return std::sqrt(acc * g.dx);
}

}  // namespace detail

// Shannon pair: psi = sinc(x/2) cos(3*pi/2 x), psi' = sinc(x/2) sin(3*pi/2 x).
// Everything is analytic; the grid is a descriptor for (lazy) tabulation and
// must cover enough support that the truncated tail energy stays below 1e-6
// (the 1/x tails give tail ~ 2/(pi^2 L) for half-width L).
inline WaveletPair make_shannon_pair(const GridSpec& grid) {
    grid.validate();
    const double L = std::min(-grid.x0, grid.x0 + grid.extent());
    if (!(L > 0.0)) throw std::invalid_argument("make_shannon_pair: grid must straddle the origin");
    const double tail = 2.0 / (std::numbers::pi * std::numbers::pi * L);
    if (tail > 1e-6)
        throw std::invalid_argument("make_shannon_pair: truncated tail energy " + std::to_string(tail) +
                                    " exceeds 1e-6; enlarge the grid (half-width " + std::to_string(L) + ")");
    if (grid.dx > 0.25)
        throw std::invalid_argument("make_shannon_pair: dx must resolve the carrier (dx <= 1/4)");

    WaveletPair pair;
    pair.psi.window.kind = WindowKind::shannon_sinc;
    pair.psi.window.derivative_available = true;
    pair.psi.omega0 = 1.5 * std::numbers::pi;
    pair.psi.xi0 = 0.0;
    pair.psi.band_limit = 0.5 * std::numbers::pi;  // shape spectrum is 2*1_{|xi|<pi/2}
    pair.psi.amplitude = 1.0;                      // ||psi||_2 = 1 analytically
    pair.psi.validate();
    pair.orthonormal = true;
    pair.exactly_modulated = true;
    pair.psi_prime_analytic = true;
    pair.bedrosian_defect = 0.0;
    pair.lipschitz = 0.0;  // derivative exists but is not Lipschitz-relevant here
    pair.label = "shannon";
    pair.tab_grid = grid;
    return pair;
}

inline GridSpec shannon_default_grid() {
    // Half-width 2^18 keeps the truncated tail energy (~2/(pi^2 L)) below 1e-6.
    const double L = 262144.0;
    const double dx = 0.25;
    return GridSpec{static_cast<std::size_t>(2.0 * L / dx), -L, dx, false};
}

inline GridSpec pair_default_grid() { return GridSpec{4096, -16.0, 32.0 / 4096.0, false}; }

// Gabor pair: Gaussian window, psi' = H psi computed numerically on the grid.
inline WaveletPair make_gabor_pair(double omega0, double xi0, double sigma, const GridSpec& grid) {
    grid.validate();
    if (!(sigma > 0.0)) throw std::invalid_argument("make_gabor_pair: sigma must be positive");
    const double leakage = std::exp(-0.5 * sigma * sigma * omega0 * omega0);
    if (leakage > 1e-6)
        throw std::invalid_argument(
            "make_gabor_pair: spectral leakage " + std::to_string(leakage) +
            " violates the Bedrosian condition (omega0*sigma too small)");
    const double L = std::min(-grid.x0, grid.x0 + grid.extent());
    if (std::erfc(L / sigma) > 1e-6)
        throw std::invalid_argument("make_gabor_pair: grid too short for the window tails");

    WaveletPair pair;
    pair.psi.window.kind = WindowKind::gaussian;
    pair.psi.window.sigma = sigma;
    pair.psi.window.derivative_available = true;
    pair.psi.omega0 = omega0;
    pair.psi.xi0 = xi0;
    pair.label = "gabor";
    pair.tab_grid = grid;
    pair.exactly_modulated = true;
    pair.orthonormal = false;

    const double raw_norm = detail::quadrature_norm(
        grid, [&](double x) { return pair.psi.window.shape(x) * std::cos(omega0 * x + xi0); });
    pair.psi.amplitude = 1.0 / raw_norm;
    pair.psi.band_limit = detail::measure_band_limit(pair.psi.window, grid);
    pair.psi.validate();

    SampledSignal psi_tab = pair.tabulate_psi();
    SampledSignal prime = hilbert_transform(psi_tab);
    // Bedrosian defect: || H psi - w sin ||_2 (pair has unit norm).
    SampledSignal model = SampledSignal::sample_real(grid, [&](double x) {
        return pair.psi.window_value(x) * std::sin(omega0 * x + xi0);
    });
    pair.bedrosian_defect = norm_l2(prime - model);
    pair.lipschitz = 0.0;  // Gaussian windows are Lipschitz but unused downstream
    pair.attach_prime_table(std::move(prime));
    return pair;
}

// Raised-cosine pair: w(x) = (1 + cos(2 pi (x - (p+q)/2) / (q-p))) / 2 on [p,q].
inline WaveletPair make_raised_cosine_pair(double omega0, double xi0, double p, double q,
                                           const GridSpec& grid) {
    grid.validate();
    if (!(p < q)) throw std::invalid_argument("make_raised_cosine_pair: need p < q");
    if (grid.x0 > p || grid.x0 + grid.extent() < q)
        throw std::invalid_argument("make_raised_cosine_pair: grid must contain the support [p,q]");

    WaveletPair pair;
    pair.psi.window.kind = WindowKind::raised_cosine;
    pair.psi.window.p = p;
    pair.psi.window.q = q;
    pair.psi.window.shape_lipschitz = std::numbers::pi / (q - p);
    pair.psi.window.derivative_available = true;
    pair.psi.omega0 = omega0;
    pair.psi.xi0 = xi0;
    pair.label = "raised_cosine";
    pair.tab_grid = grid;
    pair.exactly_modulated = true;
    pair.orthonormal = false;

    const double raw_norm = detail::quadrature_norm(
        grid, [&](double x) { return pair.psi.window.shape(x) * std::cos(omega0 * x + xi0); });
    pair.psi.amplitude = 1.0 / raw_norm;
    pair.psi.band_limit = detail::measure_band_limit(pair.psi.window, grid);
    pair.psi.validate();
    pair.lipschitz = pair.psi.amplitude * std::numbers::pi / (q - p);

    SampledSignal psi_tab = pair.tabulate_psi();
    SampledSignal prime = hilbert_transform(psi_tab);
    SampledSignal model = SampledSignal::sample_real(grid, [&](double x) {
        return pair.psi.window_value(x) * std::sin(omega0 * x + xi0);
    });
    pair.bedrosian_defect = norm_l2(prime - model);
    pair.attach_prime_table(std::move(prime));
    return pair;
}

// ---------------------------------------------------------------------------
// Modulation-parameter estimation: w = sqrt(psi^2 + psi'^2) pointwise, and
// (omega0, xi0) from a weighted linear regression of the unwrapped phase of
// (psi + i psi')^2 at half slope. Squaring makes the phase immune to sign
// changes of the window (the Shannon sinc), at the cost of a mod-pi ambiguity
// in xi0, resolved against the sign of psi at the window peak.
// ---------------------------------------------------------------------------

struct ModulationEstimate {
    SampledSignal window;
    double omega0 = 0.0;
    double xi0 = 0.0;
    bool ok = true;
    std::string note;
};

inline ModulationEstimate extract_modulation(const WaveletPair& pair,
                                             std::optional<GridSpec> analysis_grid = std::nullopt) {
    GridSpec g = analysis_grid.value_or(pair.tab_grid);
    if (g.n > (1u << 20)) {
        // Lazy pairs (Shannon) carry enormous descriptor grids; analyze a
        // central section instead. The regression masks low-window samples
        // anyway.
        g = GridSpec{8192, -64.0, 128.0 / 8192.0, false};
    }

    std::vector<double> wv(g.n);
    std::vector<cplx> z(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        const double x = g.x_at(i);
        const double a = pair.psi_value(x);
        const double b = pair.psi_prime_value(x);
        wv[i] = std::sqrt(a * a + b * b);
        z[i] = cplx{a, b};
    }
    double wmax = 0.0;
    for (double v : wv) wmax = std::max(wmax, v);

    ModulationEstimate est;
    est.window = SampledSignal::from_real(g, wv, pair.label + "_window");

    // Unwrap arg(z^2) through the whole masked region.
    std::vector<double> phase(g.n, 0.0);
    std::vector<bool> usable(g.n, false);
    double prev = 0.0;
    bool have_prev = false;
    for (std::size_t i = 0; i < g.n; ++i) {
        if (std::abs(z[i]) < 1e-12 * wmax) continue;
        double ph = std::arg(z[i] * z[i]);
        if (have_prev) {
            double d = ph - std::fmod(prev, 2.0 * std::numbers::pi);
            d -= 2.0 * std::numbers::pi * std::round(d / (2.0 * std::numbers::pi));
            ph = prev + d;
        }
        phase[i] = ph;
        usable[i] = true;
        prev = ph;
        have_prev = true;
    }

    // Weighted least squares over samples with window above 1% of peak.
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < g.n; ++i) {
        if (!usable[i] || wv[i] < 0.01 * wmax) continue;
        const double weight = wv[i];
        const double x = g.x_at(i), y = phase[i];
        sw += weight;
        sx += weight * x;
        sy += weight * y;
        sxx += weight * x * x;
        sxy += weight * x * y;
        ++count;
    }
    if (count < 8 || sw * sxx - sx * sx <= 0.0) {
        est.ok = false;
        est.note = "phase regression failed: window support too small";
        return est;
    }
    const double slope = (sw * sxy - sx * sy) / (sw * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / sw;

    est.omega0 = 0.5 * slope;
    double xi = 0.5 * intercept;  // determined mod pi
    const double two_pi = 2.0 * std::numbers::pi;
    xi = std::fmod(xi, std::numbers::pi);
    if (xi < 0) xi += std::numbers::pi;
    // Resolve the pi ambiguity at the window peak.
    std::size_t ipeak = 0;
    for (std::size_t i = 0; i < g.n; ++i)
        if (wv[i] > wv[ipeak]) ipeak = i;
    const double xpk = g.x_at(ipeak);
    const double want = pair.psi_value(xpk);
    const double have = wv[ipeak] * std::cos(est.omega0 * xpk + xi);
    if (want * have < 0.0) xi += std::numbers::pi;
    xi = std::fmod(xi, two_pi);
    if (xi < 0) xi += two_pi;
    est.xi0 = xi;
    return est;
}

}  // namespace dtcwt
