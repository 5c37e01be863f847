// SPDX-License-Identifier: Apache-2.0
//
// Forward DTCWT coefficients over a finite (j,k) window, dyadic shift
// prediction, orthonormal synthesis, and the amplitude-phase reconstruction.
//
// Coefficients are direct quadrature inner products against the transported
// atoms (no filter banks): a_j[k] = <f, psi_{j,k}>, b_j[k] = <f, psi'_{j,k}>,
// c_j[k] = (a_j[k] - i b_j[k]) / 2.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "dtcwt/atoms.hpp"
#include "dtcwt/signal.hpp"
#include "dtcwt/wavelets.hpp"

namespace dtcwt {

// Scale window with optional per-scale k ranges (inclusive); scales without an
// explicit entry get the basis default.
struct JkWindow {
    int j_min = 0;
    int j_max = 0;
    std::map<int, std::pair<long, long>> k_ranges;

    static JkWindow scales(int j_min, int j_max) {
        if (j_min > j_max) throw std::invalid_argument("JkWindow: empty scale range");
        return JkWindow{j_min, j_max, {}};
    }
};

class CoeffGrid {
public:
    struct Row {
        long k_min = 0;
        std::vector<double> a;
        std::vector<double> b;
        std::vector<cplx> c;
        long k_max() const { return k_min + static_cast<long>(a.size()) - 1; }
    };

    CoeffGrid() = default;
    CoeffGrid(std::map<int, Row> rows, GridSpec grid, std::string pair_label, bool periodic_k)
        : rows_(std::move(rows)), grid_(grid), pair_label_(std::move(pair_label)),
          periodic_k_(periodic_k) {}

    const GridSpec& grid() const { return grid_; }
    const std::string& pair_label() const { return pair_label_; }
    bool periodic_k() const { return periodic_k_; }

    std::vector<int> scales() const {
        std::vector<int> js;
        for (const auto& [j, row] : rows_) js.push_back(j);
        return js;
    }
    bool has_scale(int j) const { return rows_.count(j) > 0; }
    const Row& row(int j) const {
        auto it = rows_.find(j);
        if (it == rows_.end())
            throw std::out_of_range("CoeffGrid: scale " + std::to_string(j) + " not stored");
        return it->second;
    }
    long k_min(int j) const { return row(j).k_min; }
    long k_max(int j) const { return row(j).k_max(); }

    // Number of scale-j lattice sites per period (periodic grids).
    long k_period(int j) const {
        return static_cast<long>(std::llround(std::exp2(j) * grid_.extent()));
    }

    double a(int j, long k) const { return row(j).a[index(j, k)]; }
    double b(int j, long k) const { return row(j).b[index(j, k)]; }
    cplx c(int j, long k) const { return row(j).c[index(j, k)]; }
    double abs_c(int j, long k) const { return std::abs(c(j, k)); }

    // Phase in ]-pi, pi]; 0 for a zero coefficient.
    double phase(int j, long k) const {
        const cplx v = c(j, k);
        if (v == cplx{0.0, 0.0}) return 0.0;
        double w = std::arg(v);
        if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
        return w;
    }

    std::size_t record_count() const {
        std::size_t n = 0;
        for (const auto& [j, row] : rows_) n += row.a.size();
        return n;
    }

    double scale_max_abs_c(int j) const {
        double m = 0.0;
        for (const auto& v : row(j).c) m = std::max(m, std::abs(v));
        return m;
    }

private:
    std::size_t index(int j, long k) const {
        const Row& r = row(j);
        long kk = k;
        if (periodic_k_) {
            const long period = k_period(j);
            kk = (k - r.k_min) % period;
            if (kk < 0) kk += period;
            if (kk < static_cast<long>(r.a.size())) return static_cast<std::size_t>(kk);
            throw std::out_of_range("CoeffGrid: k=" + std::to_string(k) + " outside stored row at j=" +
                                    std::to_string(j));
        }
        if (kk < r.k_min || kk > r.k_max())
            throw std::out_of_range("CoeffGrid: k=" + std::to_string(k) + " outside stored range [" +
                                    std::to_string(r.k_min) + "," + std::to_string(r.k_max()) +
                                    "] at j=" + std::to_string(j));
        return static_cast<std::size_t>(kk - r.k_min);
    }

    std::map<int, Row> rows_;
    GridSpec grid_;
    std::string pair_label_;
    bool periodic_k_ = false;
};

namespace detail {

inline double dot_real(const std::vector<cplx>& f, const std::vector<double>& g, double dx) {
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += f[i].real() * g[i];
    return acc * dx;
}

}  // namespace detail

inline CoeffGrid analyze(const SampledSignal& f, const WaveletPair& pair, const JkWindow& win) {
    if (!f.is_real()) throw std::invalid_argument("analyze: signal must be real-valued");
    if (win.j_min > win.j_max) throw std::invalid_argument("analyze: empty scale range");
    AtomBasis basis(pair, f.grid());
    std::map<int, CoeffGrid::Row> rows;
    for (int j = win.j_min; j <= win.j_max; ++j) {
        auto range = basis.default_k_range(j);
        if (auto it = win.k_ranges.find(j); it != win.k_ranges.end()) range = it->second;
        if (range.second < range.first)
            throw std::invalid_argument("analyze: empty k range at scale " + std::to_string(j));
        CoeffGrid::Row row;
        row.k_min = range.first;
        const std::size_t count = static_cast<std::size_t>(range.second - range.first + 1);
        row.a.resize(count);
        row.b.resize(count);
        row.c.resize(count);
        for (std::size_t idx = 0; idx < count; ++idx) {
            const long k = range.first + static_cast<long>(idx);
            row.a[idx] = detail::dot_real(f.samples(), basis.psi_atom(j, k), f.dx());
            row.b[idx] = detail::dot_real(f.samples(), basis.psi_prime_atom(j, k), f.dx());
            row.c[idx] = 0.5 * cplx{row.a[idx], -row.b[idx]};
        }
        rows.emplace(j, std::move(row));
    }
    return CoeffGrid(std::move(rows), f.grid(), pair.label, f.grid().periodic);
}

// Level-j coefficients of f(. + 2^{-j} m) predicted by re-indexing:
// c_j^{2^{-j} m}[k] = c_j[k + m]. Periodic grids wrap; otherwise requesting a
// k + m outside the stored range is an error listing the clipped indices.
inline std::vector<cplx> predict_dyadic_shift(const CoeffGrid& coeffs, int j, long m) {
    const CoeffGrid::Row& row = coeffs.row(j);
    const long k_lo = row.k_min, k_hi = row.k_max();
    std::vector<cplx> out;
    out.reserve(row.c.size());
    if (!coeffs.periodic_k()) {
        std::string clipped;
        for (long k = k_lo; k <= k_hi; ++k) {
            if (k + m < k_lo || k + m > k_hi) clipped += (clipped.empty() ? "" : ",") + std::to_string(k);
        }
        if (!clipped.empty())
            throw std::out_of_range("predict_dyadic_shift: k+m leaves the stored range for k in {" +
                                    clipped + "}");
    }
    for (long k = k_lo; k <= k_hi; ++k) out.push_back(coeffs.c(j, k + m));
    return out;
}

enum class Branch { real, imaginary };

// Sum a_j[k] psi_{j,k} (real branch) or b_j[k] psi'_{j,k} (imaginary branch)
// over the stored window. Orthonormal pairs only (the dual system equals the
// primal one).
inline SampledSignal synthesize(const CoeffGrid& coeffs, const WaveletPair& pair, Branch branch) {
    if (!pair.orthonormal)
        throw std::invalid_argument("synthesize: unsupported for non-orthonormal pair '" + pair.label +
                                    "' (dual wavelets unavailable)");
    AtomBasis basis(pair, coeffs.grid());
    std::vector<double> acc(coeffs.grid().n, 0.0);
    for (int j : coeffs.scales()) {
        const CoeffGrid::Row& row = coeffs.row(j);
        for (long k = row.k_min; k <= row.k_max(); ++k) {
            const double w = branch == Branch::real ? coeffs.a(j, k) : coeffs.b(j, k);
            std::vector<double> atom =
                branch == Branch::real ? basis.psi_atom(j, k) : basis.psi_prime_atom(j, k);
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * atom[i];
        }
    }
    return SampledSignal::from_real(coeffs.grid(), acc, "synth");
}

// Amplitude-phase reconstruction: sum |c_j[k]| Xi_{j,k}[w C(omega_j[k])],
// C(omega)(x) = cos(omega0 x + xi0 + omega). Requires an exactly modulated
// orthonormal pair.
inline SampledSignal amplitude_phase_synthesize(const CoeffGrid& coeffs, const WaveletPair& pair) {
    if (!pair.exactly_modulated)
        throw std::invalid_argument("amplitude_phase_synthesize: pair '" + pair.label +
                                    "' is not exactly modulated");
    if (!pair.orthonormal)
        throw std::invalid_argument("amplitude_phase_synthesize: unsupported for non-orthonormal pair '" +
                                    pair.label + "'");
    AtomBasis basis(pair, coeffs.grid());
    std::vector<double> acc(coeffs.grid().n, 0.0);
    for (int j : coeffs.scales()) {
        const CoeffGrid::Row& row = coeffs.row(j);
        for (long k = row.k_min; k <= row.k_max(); ++k) {
            const double mag = coeffs.abs_c(j, k);
            if (mag == 0.0) continue;
            std::vector<double> atom = basis.phase_shifted_atom(j, k, coeffs.phase(j, k));
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += mag * atom[i];
        }
    }
    return SampledSignal::from_real(coeffs.grid(), acc, "ap_synth");
}

struct ParsevalReport {
    double coefficient_energy = 0.0;  // sum a_j[k]^2
    double signal_energy = 0.0;       // ||f||_2^2
    double zero_mean_energy = 0.0;    // ||f - mean||_2^2 (wavelets cannot see DC)
    double ratio = 0.0;               // coefficient_energy / signal_energy
    double captured_fraction = 0.0;   // coefficient_energy / zero_mean_energy
};

inline ParsevalReport parseval_check(const CoeffGrid& coeffs, const SampledSignal& f) {
    ParsevalReport r;
    for (int j : coeffs.scales()) {
        const CoeffGrid::Row& row = coeffs.row(j);
        for (double v : row.a) r.coefficient_energy += v * v;
    }
    r.signal_energy = norm_sq(f);
    const double mean = mean_value(f);
    double zm = 0.0;
    for (const auto& v : f.samples()) zm += std::norm(v - cplx{mean, 0.0});
    r.zero_mean_energy = zm * f.dx();
    r.ratio = r.signal_energy > 0.0 ? r.coefficient_energy / r.signal_energy : 0.0;
    r.captured_fraction = r.zero_mean_energy > 0.0 ? r.coefficient_energy / r.zero_mean_energy : 0.0;
    return r;
}

}  // namespace dtcwt
