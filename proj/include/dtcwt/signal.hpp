// SPDX-License-Identifier: Apache-2.0
//
// Uniform-grid sampled signals and quadrature inner products.
//
// A SampledSignal is an immutable value: complex samples on a uniform grid
// [x0, x0 + n*dx), optionally flagged periodic (the grid then represents one
// period) and/or real (imaginary parts exactly zero). All binary operations
// require identical grid geometry and reject mismatches with a diagnostic.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dtcwt {

using cplx = std::complex<double>;

struct GridSpec {
    std::size_t n = 0;       // number of samples, >= 2
    double x0 = 0.0;         // abscissa of sample 0
    double dx = 1.0;         // grid spacing, > 0
    bool periodic = false;   // one period of a periodic signal vs zero-extended

    double x_at(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }

    // Length of the covered interval; the period when periodic.
    double extent() const { return static_cast<double>(n) * dx; }

    bool same_geometry(const GridSpec& o) const {
        return n == o.n && std::abs(x0 - o.x0) <= 1e-12 * std::max(1.0, std::abs(x0)) &&
               std::abs(dx - o.dx) <= 1e-15 * dx;
    }

    std::string describe() const {
        std::ostringstream os;
        os << "grid{n=" << n << ", x0=" << x0 << ", dx=" << dx
           << (periodic ? ", periodic" : ", zero-extended") << "}";
        return os.str();
    }

    void validate() const {
        if (n < 2) throw std::invalid_argument("GridSpec: need at least 2 samples, got " + std::to_string(n));
        if (!(dx > 0.0)) throw std::invalid_argument("GridSpec: dx must be positive");
    }
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
    if (!a.same_geometry(b)) {
        throw std::invalid_argument(std::string(where) + ": grid mismatch between " + a.describe() +
                                    " and " + b.describe());
    }
}

class SampledSignal {
public:
    SampledSignal() = default;

    SampledSignal(GridSpec grid, std::vector<cplx> samples, std::string label = {})
        : grid_(grid), samples_(std::move(samples)), label_(std::move(label)) {
        grid_.validate();
        if (samples_.size() != grid_.n)
            throw std::invalid_argument("SampledSignal: sample count " + std::to_string(samples_.size()) +
                                        " does not match " + grid_.describe());
        update_real_flag();
    }

    static SampledSignal zeros(const GridSpec& grid, std::string label = {}) {
        return SampledSignal(grid, std::vector<cplx>(grid.n, cplx{0.0, 0.0}), std::move(label));
    }

    static SampledSignal from_real(const GridSpec& grid, const std::vector<double>& values,
                                   std::string label = {}) {
        std::vector<cplx> s(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) s[i] = cplx{values[i], 0.0};
        return SampledSignal(grid, std::move(s), std::move(label));
    }

    // Pointwise sampling of a real-valued function on the grid.
    static SampledSignal sample_real(const GridSpec& grid, const std::function<double(double)>& f,
                                     std::string label = {}) {
        std::vector<cplx> s(grid.n);
        for (std::size_t i = 0; i < grid.n; ++i) s[i] = cplx{f(grid.x_at(i)), 0.0};
        return SampledSignal(grid, std::move(s), std::move(label));
    }

    static SampledSignal sample_complex(const GridSpec& grid, const std::function<cplx(double)>& f,
                                        std::string label = {}) {
        std::vector<cplx> s(grid.n);
        for (std::size_t i = 0; i < grid.n; ++i) s[i] = f(grid.x_at(i));
        return SampledSignal(grid, std::move(s), std::move(label));
    }

    const GridSpec& grid() const { return grid_; }
    std::size_t size() const { return grid_.n; }
    double dx() const { return grid_.dx; }
    bool periodic() const { return grid_.periodic; }
    bool is_real() const { return real_; }
    const std::string& label() const { return label_; }
    void set_label(std::string l) { label_ = std::move(l); }

    const std::vector<cplx>& samples() const { return samples_; }
    const cplx& operator[](std::size_t i) const { return samples_[i]; }

    std::vector<double> real_part() const {
        std::vector<double> r(samples_.size());
        for (std::size_t i = 0; i < samples_.size(); ++i) r[i] = samples_[i].real();
        return r;
    }
    std::vector<double> imag_part() const {
        std::vector<double> r(samples_.size());
        for (std::size_t i = 0; i < samples_.size(); ++i) r[i] = samples_[i].imag();
        return r;
    }

    SampledSignal with_samples(std::vector<cplx> s) const {
        return SampledSignal(grid_, std::move(s), label_);
    }

    SampledSignal conjugated() const {
        std::vector<cplx> s(samples_);
        for (auto& v : s) v = std::conj(v);
        return with_samples(std::move(s));
    }

    SampledSignal scaled(cplx factor) const {
        std::vector<cplx> s(samples_);
        for (auto& v : s) v *= factor;
        return with_samples(std::move(s));
    }

    friend SampledSignal operator+(const SampledSignal& a, const SampledSignal& b) {
        require_same_grid(a.grid_, b.grid_, "operator+");
        std::vector<cplx> s(a.samples_);
        for (std::size_t i = 0; i < s.size(); ++i) s[i] += b.samples_[i];
        return SampledSignal(a.grid_, std::move(s));
    }
    friend SampledSignal operator-(const SampledSignal& a, const SampledSignal& b) {
        require_same_grid(a.grid_, b.grid_, "operator-");
        std::vector<cplx> s(a.samples_);
        for (std::size_t i = 0; i < s.size(); ++i) s[i] -= b.samples_[i];
        return SampledSignal(a.grid_, std::move(s));
    }

private:
    void update_real_flag() {
        real_ = std::all_of(samples_.begin(), samples_.end(),
                            [](const cplx& v) { return v.imag() == 0.0; });
    }

    GridSpec grid_;
    std::vector<cplx> samples_;
    bool real_ = false;
    std::string label_;
};

// Riemann-sum inner product with conjugation on the second argument:
//   sum_n f[n] * conj(g[n]) * dx
// (left-endpoint rule; equals the trapezoid rule on periodic grids).
inline cplx inner_product(const SampledSignal& f, const SampledSignal& g) {
    require_same_grid(f.grid(), g.grid(), "inner_product");
    cplx acc{0.0, 0.0};
    const auto& fs = f.samples();
    const auto& gs = g.samples();
    for (std::size_t i = 0; i < fs.size(); ++i) acc += fs[i] * std::conj(gs[i]);
    return acc * f.dx();
}

inline double norm_sq(const SampledSignal& f) {
    double acc = 0.0;
    for (const auto& v : f.samples()) acc += std::norm(v);
    return acc * f.dx();
}

inline double norm_l2(const SampledSignal& f) { return std::sqrt(norm_sq(f)); }

inline double sup_norm(const SampledSignal& f) {
    double m = 0.0;
    for (const auto& v : f.samples()) m = std::max(m, std::abs(v));
    return m;
}

inline double mean_value(const SampledSignal& f) {
    cplx acc{0.0, 0.0};
    for (const auto& v : f.samples()) acc += v;
    return acc.real() / static_cast<double>(f.size());
}

}  // namespace dtcwt
