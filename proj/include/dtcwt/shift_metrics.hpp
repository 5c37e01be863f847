// SPDX-License-Identifier: Apache-2.0
//
// Shift-error metrics and the numerical verification of the shift-invariance
// analysis: the four named error metrics, phase compensation, the ratio R_h,
// translation sensitivity (B_a, B_b, Phi), the window/carrier split (E_h, W_h)
// with its closed forms, the |W_h/E_h| limit, the K_h bound, the epsilon
// identity, and the Lipschitz decay-rate bound.
//
// Conventions:
//   theta_j = 2^j * omega0 * h   (carrier phase advance per cell shift)
//   E_h = integral f * Xi[w (e^{-i w0 y} - e^{-i w0 (y-delta)})],  delta = 2^j h
//   W_h = integral f * Xi[(w - w(.-delta)) e^{-i w0 (y-delta)}]
// W_h carries the carrier at the shifted argument so that
//   E_h + W_h = 2 e^{i xi0} (c_j[k] - c_j^h[k])
// holds exactly; its magnitude equals the plain-carrier variant.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dtcwt/atoms.hpp"
#include "dtcwt/dtcwt.hpp"
#include "dtcwt/signal.hpp"
#include "dtcwt/wavelets.hpp"

namespace dtcwt {

// Compensation-angle policy: "carrier" uses phi_h = 2^j omega0 h; "corrected"
// adds sign(beta_h) alpha_h from the window/carrier split.
enum class PhiPolicy { carrier, corrected };

inline const char* phi_policy_name(PhiPolicy p) {
    return p == PhiPolicy::carrier ? "carrier" : "corrected";
}

// ---------------------------------------------------------------------------
// Small shared pieces
// ---------------------------------------------------------------------------

struct BoundCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool passed = false;
    double margin = 0.0;  // rhs - lhs
    bool applicable = true;
    std::string note;  // hypothesis failures, degeneracies
    int j = 0;
    long k = 0;
    double h = 0.0;
    std::string pair_label;

    static BoundCheck make(std::string name, double lhs, double rhs, int j, long k, double h,
                           std::string pair_label) {
        BoundCheck b;
        b.name = std::move(name);
        b.lhs = lhs;
        b.rhs = rhs;
        b.passed = lhs <= rhs * (1.0 + 1e-9);
        b.margin = rhs - lhs;
        b.j = j;
        b.k = k;
        b.h = h;
        b.pair_label = std::move(pair_label);
        return b;
    }

    static BoundCheck not_applicable(std::string name, std::string why, int j, long k, double h,
                                     std::string pair_label) {
        BoundCheck b;
        b.name = std::move(name);
        b.applicable = false;
        b.passed = false;
        b.note = std::move(why);
        b.j = j;
        b.k = k;
        b.h = h;
        b.pair_label = std::move(pair_label);
        return b;
    }
};

namespace detail {

inline cplx plain_integral(const SampledSignal& f, const std::vector<cplx>& kernel) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * kernel[i];
    return acc * f.dx();
}

inline cplx conj_dot(const std::vector<cplx>& f, const std::vector<cplx>& g, double dx) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * std::conj(g[i]);
    return acc * dx;
}

inline double wrap_to_pi(double a) {
    // reduce into ]-pi, pi]
    const double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    if (a <= -std::numbers::pi) a += two_pi;
    if (a > std::numbers::pi) a -= two_pi;
    return a;
}

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// optimal phase
// ---------------------------------------------------------------------------

struct OptimalPhase {
    double phi_star = 0.0;
    double err = 0.0;
    bool degenerate = false;  // c = 0
};

// argmin over phi of |e^{i phi} c - c_h|: phi* = arg(c_h) - arg(c), with the
// residual | |c| - |c_h| |.
inline OptimalPhase optimal_phase(cplx c, cplx c_h) {
    OptimalPhase r;
    if (c == cplx{0.0, 0.0}) {
        r.degenerate = true;
        r.err = std::abs(c_h);
        return r;
    }
    r.phi_star = detail::wrap_to_pi(std::arg(c_h) - std::arg(c));
    r.err = std::abs(std::abs(c) - std::abs(c_h));
    return r;
}

// ---------------------------------------------------------------------------
// window/carrier split
// ---------------------------------------------------------------------------

struct WindowCarrierSplit {
    cplx E{0.0, 0.0};
    cplx W{0.0, 0.0};
};

inline WindowCarrierSplit window_carrier_split(const SampledSignal& f, const AtomBasis& basis, int j,
                                               long k, double h) {
    if (!basis.modulation_consistent())
        throw std::invalid_argument("window_carrier_split: pair '" + basis.pair().label +
                                    "' has no modulation-consistent atoms on this grid");
    WindowCarrierSplit s;
    if (h == 0.0) return s;
    s.E = detail::plain_integral(f, basis.carrier_diff_atom(j, k, h));
    s.W = detail::plain_integral(f, basis.window_diff_atom(j, k, h));
    return s;
}

struct AlphaBeta {
    double alpha = 0.0;  // in [0, pi[
    double beta = 0.0;   // in ]-pi, pi]
};

// alpha solves |W| = 2 |e^{i alpha} - 1| |c|; beta = 2^{j+1} omega0 h mod 2pi.
inline AlphaBeta alpha_beta(cplx /*E*/, cplx W, cplx c, int j, double omega0, double h) {
    AlphaBeta r;
    const double mag_c = std::abs(c);
    if (mag_c == 0.0) throw std::invalid_argument("alpha_beta: zero coefficient");
    const double s = std::abs(W) / (4.0 * mag_c);
    if (s >= 1.0)
        throw std::domain_error("alpha_beta: |W_h| = " + std::to_string(std::abs(W)) +
                                " >= 4|c|; no angle alpha in [0,pi[ solves the magnitude equation");
    r.alpha = 2.0 * std::asin(s);
    r.beta = detail::wrap_to_pi(std::exp2(j + 1) * omega0 * h);
    return r;
}

// ---------------------------------------------------------------------------
// per-record shift metrics
// ---------------------------------------------------------------------------

struct ShiftRecord {
    int j = 0;
    long k = 0;
    cplx c{0.0, 0.0}, c_h{0.0, 0.0};
    double a = 0, b = 0, a_h = 0, b_h = 0;
    double abs_c = 0;

    double phi = 0;  // compensation angle actually used
    double complex_optimal = 0;
    double complex_phasecomp = 0;
    double real_err = 0;  // 2 |Re c - Re c^h| = |a - a^h|
    double imag_err = 0;  // 2 |Im c - Im c^h| = |b - b^h|

    cplx R{0.0, 0.0};
    bool degenerate_R = false;  // zero denominator
    bool degenerate_c = false;  // |c| = 0
    bool significant = false;

    // Measured per-branch sensitivity at the tested shift, |a - a^h| / |h a|,
    // and the degeneracy flags for the division-by-zero policy: a branch whose
    // sensitivity falls below branch_floor * 2^j omega0 is accidentally
    // stationary at this h, the regime where the (1 + Phi/B) factor of the
    // ratio bounds blows up and the theory claims nothing small.
    double sens_a_at_h = 0.0;
    double sens_b_at_h = 0.0;
    bool real_branch_degenerate = false;
    bool imag_branch_degenerate = false;

    bool split_available = false;
    cplx E{0.0, 0.0}, W{0.0, 0.0};
    double alpha = 0, beta = 0;
    bool alpha_solvable = false;
};

struct ShiftErrorReport {
    std::vector<ShiftRecord> records;
    double h = 0.0;
    PhiPolicy policy = PhiPolicy::carrier;
    double compensation_omega0 = 0.0;  // frequency used in phi
    double significance_floor = 0.25;
    double branch_floor = 0.25;  // branch-degeneracy cutoff, fraction of 2^j omega0
    std::string pair_label;
    bool modulation_consistent = false;
    std::vector<std::string> warnings;
    std::size_t degenerate_count = 0;

    const ShiftRecord* find(int j, long k) const {
        for (const auto& r : records)
            if (r.j == j && r.k == k) return &r;
        return nullptr;
    }

    std::vector<const ShiftRecord*> scale_records(int j) const {
        std::vector<const ShiftRecord*> out;
        for (const auto& r : records)
            if (r.j == j) out.push_back(&r);
        return out;
    }
};

// All per-(j,k) shift-error metrics of f vs f(.+h) in one pass.
inline ShiftErrorReport shift_errors(const SampledSignal& f, const WaveletPair& pair,
                                     const JkWindow& win, double h, PhiPolicy policy,
                                     double significance_floor = 0.25,
                                     double compensation_omega0 = 0.0,
                                     double branch_floor = 0.25) {
    ShiftErrorReport report;
    report.h = h;
    report.policy = policy;
    report.significance_floor = significance_floor;
    report.branch_floor = branch_floor;
    report.pair_label = pair.label;
    report.compensation_omega0 = compensation_omega0 != 0.0 ? compensation_omega0 : pair.psi.omega0;

    AtomBasis basis(pair, f.grid());
    report.modulation_consistent = basis.modulation_consistent();
    if (policy == PhiPolicy::corrected && !report.modulation_consistent)
        throw std::invalid_argument("shift_errors: corrected phi policy needs the window/carrier "
                                    "split, unavailable for pair '" + pair.label + "' on this grid");

    for (int j = win.j_min; j <= win.j_max; ++j) {
        if (std::abs(h) >= std::exp2(-j))
            report.warnings.push_back("|h| >= 2^-" + std::to_string(j) +
                                      ": the per-cell analysis assumes |h| < 2^-j");
    }

    CoeffGrid coeffs = analyze(f, pair, win);
    CoeffGrid coeffs_h = analyze(translate(f, h), pair, win);

    for (int j : coeffs.scales()) {
        const double floor_abs = significance_floor * coeffs.scale_max_abs_c(j);
        for (long k = coeffs.k_min(j); k <= coeffs.k_max(j); ++k) {
            ShiftRecord r;
            r.j = j;
            r.k = k;
            r.a = coeffs.a(j, k);
            r.b = coeffs.b(j, k);
            r.a_h = coeffs_h.a(j, k);
            r.b_h = coeffs_h.b(j, k);
            r.c = coeffs.c(j, k);
            r.c_h = coeffs_h.c(j, k);
            r.abs_c = std::abs(r.c);
            r.degenerate_c = r.abs_c == 0.0;
            r.significant = r.abs_c >= floor_abs && !r.degenerate_c;

            const double theta = std::exp2(j) * report.compensation_omega0 * h;

            if (report.modulation_consistent && h != 0.0) {
                WindowCarrierSplit split = window_carrier_split(f, basis, j, k, h);
                r.E = split.E;
                r.W = split.W;
                r.split_available = true;
                if (!r.degenerate_c && std::abs(r.W) < 4.0 * r.abs_c) {
                    AlphaBeta ab = alpha_beta(r.E, r.W, r.c, j, pair.psi.omega0, h);
                    r.alpha = ab.alpha;
                    r.beta = ab.beta;
                    r.alpha_solvable = true;
                }
            }

            r.phi = theta;
            if (policy == PhiPolicy::corrected && r.alpha_solvable) {
                const double beta_sign = r.beta > 0 ? 1.0 : (r.beta < 0 ? -1.0 : 0.0);
                r.phi = std::exp2(j) * pair.psi.omega0 * h + beta_sign * r.alpha;
            }

            const cplx rot = std::exp(cplx{0.0, r.phi});
            r.complex_optimal = optimal_phase(r.c, r.c_h).err;
            r.complex_phasecomp = std::abs(rot * r.c - r.c_h);
            r.real_err = std::abs(r.a - r.a_h);
            r.imag_err = std::abs(r.b - r.b_h);

            if (h != 0.0) {
                const double carrier_rate = std::exp2(j) * pair.psi.omega0;
                r.sens_a_at_h = r.a != 0.0 ? r.real_err / std::abs(h * r.a) : 0.0;
                r.sens_b_at_h = r.b != 0.0 ? r.imag_err / std::abs(h * r.b) : 0.0;
                r.real_branch_degenerate = r.sens_a_at_h < branch_floor * carrier_rate;
                r.imag_branch_degenerate = r.sens_b_at_h < branch_floor * carrier_rate;
            }

            const cplx num = rot * r.a - r.a_h;
            const cplx den = rot * r.b - r.b_h;
            if (std::abs(den) == 0.0) {
                r.degenerate_R = true;
            } else {
                r.R = num / den;
            }
            if (r.degenerate_c || r.degenerate_R) ++report.degenerate_count;
            report.records.push_back(std::move(r));
        }
    }
    return report;
}

// R_h from branch coefficients; throws on a vanishing denominator.
inline cplx ratio_R(double a, double b, double a_h, double b_h, double phi) {
    const cplx rot = std::exp(cplx{0.0, phi});
    const cplx num = rot * a - a_h;
    const cplx den = rot * b - b_h;
    if (std::abs(den) == 0.0)
        throw std::domain_error("ratio_R: vanishing denominator; numerator = (" +
                                std::to_string(num.real()) + ", " + std::to_string(num.imag()) + ")");
    return num / den;
}

// Standalone ratio R_h for one coefficient of f.
inline cplx ratio_R(const SampledSignal& f, const WaveletPair& pair, int j, long k, double h,
                    double phi) {
    AtomBasis basis(pair, f.grid());
    std::vector<double> pa = basis.psi_atom(j, k);
    std::vector<double> pb = basis.psi_prime_atom(j, k);
    SampledSignal fh = translate(f, h);
    const double a = detail::dot_real(f.samples(), pa, f.dx());
    const double b = detail::dot_real(f.samples(), pb, f.dx());
    const double a_h = detail::dot_real(fh.samples(), pa, f.dx());
    const double b_h = detail::dot_real(fh.samples(), pb, f.dx());
    try {
        return ratio_R(a, b, a_h, b_h, phi);
    } catch (const std::domain_error&) {
        throw std::domain_error("ratio_R: vanishing denominator at (j=" + std::to_string(j) +
                                ", k=" + std::to_string(k) + ")");
    }
}

// ---------------------------------------------------------------------------
// translation sensitivity
// ---------------------------------------------------------------------------

struct SensitivityEstimate {
    double B_a = 0.0;
    double B_b = 0.0;
    double Phi = 0.0;
    std::vector<double> h_grid;
    int j = 0;
    long k = 0;
    bool degenerate = false;  // zero coefficient, or exact periodic coincidence
    std::string note;
};

// The documented h grid: 32 logarithmically spaced magnitudes per sign,
// spanning [2^-j/512, 2^-j (1 - 1e-6)], augmented with +-h_extra so bound
// checks at the experiment shift stay airtight.
inline std::vector<double> sensitivity_h_grid(int j, double h_extra = 0.0, std::size_t count = 32) {
    const double cell = std::exp2(-j);
    const double lo = cell / 512.0, hi = cell * (1.0 - 1e-6);
    std::vector<double> grid;
    for (std::size_t i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0
                                    : static_cast<double>(i) / static_cast<double>(count - 1);
        const double mag = lo * std::pow(hi / lo, t);
        grid.push_back(mag);
        grid.push_back(-mag);
    }
    if (h_extra != 0.0 && std::abs(h_extra) < cell) {
        grid.push_back(std::abs(h_extra));
        grid.push_back(-std::abs(h_extra));
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

inline SensitivityEstimate sensitivity(const SampledSignal& f, const WaveletPair& pair, int j, long k,
                                       const std::vector<double>& h_grid,
                                       double compensation_omega0 = 0.0) {
    SensitivityEstimate est;
    est.j = j;
    est.k = k;
    est.h_grid = h_grid;
    AtomBasis basis(pair, f.grid());
    std::vector<double> pa = basis.psi_atom(j, k);
    std::vector<double> pb = basis.psi_prime_atom(j, k);
    const double a = detail::dot_real(f.samples(), pa, f.dx());
    const double b = detail::dot_real(f.samples(), pb, f.dx());
    if (a == 0.0 || b == 0.0) {
        est.degenerate = true;
        est.note = "zero coefficient: infinite sensitivity";
        return est;
    }
    const double w0 = compensation_omega0 != 0.0 ? compensation_omega0 : pair.psi.omega0;
    double Ba = std::numeric_limits<double>::infinity();
    double Bb = std::numeric_limits<double>::infinity();
    double Phi = 0.0;
    for (double h : h_grid) {
        if (h == 0.0) continue;
        SampledSignal fh = translate(f, h);
        const double a_h = detail::dot_real(fh.samples(), pa, f.dx());
        const double b_h = detail::dot_real(fh.samples(), pb, f.dx());
        Ba = std::min(Ba, std::abs(a - a_h) / std::abs(h * a));
        Bb = std::min(Bb, std::abs(b - b_h) / std::abs(h * b));
        const double phi = std::exp2(j) * w0 * h;
        Phi = std::max(Phi, std::abs(std::exp(cplx{0.0, phi}) - 1.0) / std::abs(h));
    }
    est.B_a = Ba;
    est.B_b = Bb;
    est.Phi = Phi;
    if (Ba == 0.0 || Bb == 0.0) {
        est.degenerate = true;
        est.note = "periodic coincidence: vanishing branch shift error on the grid";
    }
    return est;
}

// Proposition 3.2 bounds for one record, given its sensitivity estimate.
inline std::vector<BoundCheck> error_ratio_bounds(const ShiftRecord& r, const SensitivityEstimate& sens,
                                                  double h, const std::string& pair_label) {
    std::vector<BoundCheck> checks;
    if (sens.degenerate || sens.B_a <= 0.0 || sens.B_b <= 0.0) {
        checks.push_back(BoundCheck::not_applicable("prop32_real", "degenerate sensitivity: " + sens.note,
                                                    r.j, r.k, h, pair_label));
        checks.push_back(BoundCheck::not_applicable("prop32_imag", "degenerate sensitivity: " + sens.note,
                                                    r.j, r.k, h, pair_label));
        return checks;
    }
    if (r.degenerate_R || r.real_err == 0.0 || r.imag_err == 0.0) {
        checks.push_back(BoundCheck::not_applicable("prop32_real", "zero branch error or undefined R",
                                                    r.j, r.k, h, pair_label));
        checks.push_back(BoundCheck::not_applicable("prop32_imag", "zero branch error or undefined R",
                                                    r.j, r.k, h, pair_label));
        return checks;
    }
    const cplx i_unit{0.0, 1.0};
    const double rhs_real = (1.0 + sens.Phi / sens.B_a) * 0.5 * std::abs(1.0 - i_unit / r.R);
    const double rhs_imag = (1.0 + sens.Phi / sens.B_b) * 0.5 * std::abs(r.R - i_unit);
    checks.push_back(BoundCheck::make("prop32_real", r.complex_phasecomp / r.real_err, rhs_real, r.j,
                                      r.k, h, pair_label));
    checks.push_back(BoundCheck::make("prop32_imag", r.complex_phasecomp / r.imag_err, rhs_imag, r.j,
                                      r.k, h, pair_label));
    return checks;
}

// ---------------------------------------------------------------------------
// |W_h / E_h| limit (Proposition 3.3)
// ---------------------------------------------------------------------------

struct WhEhLimit {
    double limit = 0.0;           // derivative formula
    double cs_bound = 0.0;        // ||f|| * ||Xi[w' e]||_grid / (2 w0 |c|): exact discrete C-S
    double mother_deriv_norm = 0.0;  // ||dw/dx||_2 on the pair grid
    double cs_bound_mother = 0.0;    // ||f|| * ||w'|| / (2 w0 |c|), the continuum form
    bool degenerate = false;
};

inline WhEhLimit wh_eh_limit(const SampledSignal& f, const WaveletPair& pair, int j, long k) {
    AtomBasis basis(pair, f.grid());
    WhEhLimit out;
    std::vector<cplx> deriv_atom = basis.window_deriv_atom(j, k);
    std::vector<double> pa = basis.psi_atom(j, k);
    std::vector<double> pb = basis.psi_prime_atom(j, k);
    const double a = detail::dot_real(f.samples(), pa, f.dx());
    const double b = detail::dot_real(f.samples(), pb, f.dx());
    const cplx c = 0.5 * cplx{a, -b};
    if (std::abs(c) == 0.0) {
        out.degenerate = true;
        return out;
    }
    const double w0 = pair.psi.omega0;
    out.limit = std::abs(detail::plain_integral(f, deriv_atom)) / (2.0 * w0 * std::abs(c));
    double atom_norm_sq = 0.0;
    for (const auto& v : deriv_atom) atom_norm_sq += std::norm(v);
    atom_norm_sq *= f.dx();
    out.cs_bound = norm_l2(f) * std::sqrt(atom_norm_sq) / (2.0 * w0 * std::abs(c));
    out.mother_deriv_norm = detail::quadrature_norm(
        pair.tab_grid.n <= (1u << 20) ? pair.tab_grid : GridSpec{65536, -64.0, 128.0 / 65536.0, false},
        [&](double x) { return pair.psi.window_derivative(x); });
    out.cs_bound_mother = norm_l2(f) * out.mother_deriv_norm / (2.0 * w0 * std::abs(c));
    return out;
}

// |W_h/E_h| at a given h, for extrapolation sweeps.
inline double wh_eh_ratio(const SampledSignal& f, const AtomBasis& basis, int j, long k, double h) {
    WindowCarrierSplit s = window_carrier_split(f, basis, j, k, h);
    const double e = std::abs(s.E);
    if (e == 0.0) throw std::domain_error("wh_eh_ratio: |E_h| = 0");
    return std::abs(s.W) / e;
}

// Richardson extrapolation of |W_h/E_h| to h -> 0 from the three-point stencil
// {h, h/2, h/4}: quadratic Lagrange evaluated at 0.
inline double richardson_wh_eh(const SampledSignal& f, const AtomBasis& basis, int j, long k,
                               double h) {
    const double r1 = wh_eh_ratio(f, basis, j, k, h);
    const double r2 = wh_eh_ratio(f, basis, j, k, 0.5 * h);
    const double r4 = wh_eh_ratio(f, basis, j, k, 0.25 * h);
    return (8.0 * r4 - 6.0 * r2 + r1) / 3.0;
}

// ---------------------------------------------------------------------------
// K_h (Proposition 3.5)
// ---------------------------------------------------------------------------

struct KhResult {
    bool applicable = false;
    std::string note;
    double alpha = 0.0, beta = 0.0, rho = 0.0;  // rho = |W/E|
    double phi = 0.0;                           // corrected compensation angle
    cplx K{0.0, 0.0};
    double K_bound = 0.0;
    cplx R_from_K{0.0, 0.0};
    cplx R_direct{0.0, 0.0};
    BoundCheck bound_check;       // |K| <= bound
    double R_identity_error = 0;  // |R_direct - i(1+K)/(1-K)|
};

inline KhResult kh_bound_check(const SampledSignal& f, const WaveletPair& pair, int j, long k,
                               double h) {
    KhResult out;
    AtomBasis basis(pair, f.grid());
    if (!basis.modulation_consistent()) {
        out.note = "window/carrier split unavailable for this pair/grid";
        out.bound_check = BoundCheck::not_applicable("prop35_kh", out.note, j, k, h, pair.label);
        return out;
    }
    std::vector<double> pa = basis.psi_atom(j, k);
    std::vector<double> pb = basis.psi_prime_atom(j, k);
    const double a = detail::dot_real(f.samples(), pa, f.dx());
    const double b = detail::dot_real(f.samples(), pb, f.dx());
    const cplx c = 0.5 * cplx{a, -b};
    if (std::abs(c) == 0.0) {
        out.note = "zero coefficient";
        out.bound_check = BoundCheck::not_applicable("prop35_kh", out.note, j, k, h, pair.label);
        return out;
    }

    WindowCarrierSplit split = window_carrier_split(f, basis, j, k, h);
    const double absE = std::abs(split.E);
    if (absE == 0.0) {
        out.note = "|E_h| = 0";
        out.bound_check = BoundCheck::not_applicable("prop35_kh", out.note, j, k, h, pair.label);
        return out;
    }
    out.rho = std::abs(split.W) / absE;
    if (std::abs(split.W) >= 4.0 * std::abs(c)) {
        out.note = "alpha unsolvable: |W| >= 4|c|";
        out.bound_check = BoundCheck::not_applicable("prop35_kh", out.note, j, k, h, pair.label);
        return out;
    }
    AlphaBeta ab = alpha_beta(split.E, split.W, c, j, pair.psi.omega0, h);
    out.alpha = ab.alpha;
    out.beta = ab.beta;

    // Hypotheses of the proposition.
    if (!(out.alpha < std::numbers::pi - std::abs(out.beta))) {
        out.note = "hypothesis alpha < pi - |beta| fails";
        out.bound_check = BoundCheck::not_applicable("prop35_kh", out.note, j, k, h, pair.label);
        return out;
    }
    if (!(out.rho < 1.0)) {
        out.note = "hypothesis |W/E| < 1 fails";
        out.bound_check = BoundCheck::not_applicable("prop35_kh", out.note, j, k, h, pair.label);
        return out;
    }
    const double theta = std::exp2(j) * pair.psi.omega0 * h;
    const double denom = std::abs(std::exp(cplx{0.0, theta}) + 1.0) - out.rho;
    if (denom <= 0.0) {
        out.note = "bound denominator |e^{i theta} + 1| - |W/E| not positive";
        out.bound_check = BoundCheck::not_applicable("prop35_kh", out.note, j, k, h, pair.label);
        return out;
    }

    const double beta_sign = out.beta > 0 ? 1.0 : (out.beta < 0 ? -1.0 : 0.0);
    out.phi = theta + beta_sign * out.alpha;

    // K_h from the Delta inner products, exactly as defined.
    SampledSignal fh = translate(f, h);
    const cplx rot = std::exp(cplx{0.0, out.phi});
    std::vector<cplx> delta(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) delta[i] = rot * f[i] - fh[i];
    std::vector<cplx> Psi = basis.complex_atom(j, k);
    std::vector<cplx> Psi_conj(Psi.size());
    for (std::size_t i = 0; i < Psi.size(); ++i) Psi_conj[i] = std::conj(Psi[i]);
    const cplx num = detail::conj_dot(delta, Psi, f.dx());
    const cplx den = detail::conj_dot(delta, Psi_conj, f.dx());
    if (std::abs(den) == 0.0) {
        out.note = "<Delta, conj Psi> = 0";
        out.bound_check = BoundCheck::not_applicable("prop35_kh", out.note, j, k, h, pair.label);
        return out;
    }
    out.K = num / den;
    out.K_bound = 2.0 * out.rho / denom;
    out.applicable = true;
    out.bound_check = BoundCheck::make("prop35_kh", std::abs(out.K), out.K_bound, j, k, h, pair.label);

    const cplx i_unit{0.0, 1.0};
    out.R_from_K = i_unit * (1.0 + out.K) / (1.0 - out.K);
    out.R_direct = ratio_R(f, pair, j, k, h, out.phi);
    out.R_identity_error = std::abs(out.R_direct - out.R_from_K);
    return out;
}

// ---------------------------------------------------------------------------
// phi equivalence (eq. before the R_h plot): phi_corrected / (2^j w0 h) - 1
// is of the order |W_h/E_h| for small h.
// ---------------------------------------------------------------------------

struct PhiEquivalence {
    bool applicable = false;
    std::string note;
    double deviation = 0.0;  // |phi_corrected/(2^j w0 h) - 1|
    double rho = 0.0;        // |W/E|
    bool passed = false;
};

inline PhiEquivalence phi_equivalence_check(const SampledSignal& f, const WaveletPair& pair, int j,
                                            long k, double h) {
    PhiEquivalence out;
    AtomBasis basis(pair, f.grid());
    if (!basis.modulation_consistent()) {
        out.note = "window/carrier split unavailable for this pair/grid";
        return out;
    }
    const double theta = std::exp2(j) * pair.psi.omega0 * h;
    if (theta == 0.0) {
        out.note = "h = 0";
        return out;
    }
    std::vector<double> pa = basis.psi_atom(j, k);
    std::vector<double> pb = basis.psi_prime_atom(j, k);
    const double a = detail::dot_real(f.samples(), pa, f.dx());
    const double b = detail::dot_real(f.samples(), pb, f.dx());
    const cplx c = 0.5 * cplx{a, -b};
    if (std::abs(c) == 0.0) {
        out.note = "zero coefficient";
        return out;
    }
    WindowCarrierSplit split = window_carrier_split(f, basis, j, k, h);
    if (std::abs(split.E) == 0.0) {
        out.note = "|E_h| = 0";
        return out;
    }
    if (std::abs(split.W) >= 4.0 * std::abs(c)) {
        out.note = "alpha unsolvable: |W| >= 4|c|";
        return out;
    }
    AlphaBeta ab = alpha_beta(split.E, split.W, c, j, pair.psi.omega0, h);
    const double beta_sign = ab.beta > 0 ? 1.0 : (ab.beta < 0 ? -1.0 : 0.0);
    const double phi_corrected = theta + beta_sign * ab.alpha;
    out.applicable = true;
    out.rho = std::abs(split.W) / std::abs(split.E);
    out.deviation = std::abs(phi_corrected / theta - 1.0);
    out.passed = out.deviation <= 1.5 * out.rho + 1e-6;
    return out;
}

// ---------------------------------------------------------------------------
// epsilon identity (Proposition 4.2)
// ---------------------------------------------------------------------------

struct EpsilonReport {
    double lhs = 0.0;   // sum |e^{i theta_j} c - c^h|^2
    double eps1 = 0.0;
    double eps2 = 0.0;
    double rhs = 0.0;              // (eps1^2 + eps2^2) / 2
    double relative_error = 0.0;   // |lhs - rhs| / lhs
    double sqrt_form = 0.0;        // sqrt((eps1^2 + eps2^2)/2), the displayed variant
    double sqrt_form_factor = 0.0; // lhs / sqrt_form: discrepancy against the display
    std::size_t terms = 0;
};

// Selection of (j,k) cells; empty = every stored cell.
using JkSelection = std::vector<std::pair<int, long>>;

inline EpsilonReport epsilon_identity(const SampledSignal& f, const WaveletPair& pair,
                                      const CoeffGrid& coeffs, const CoeffGrid& coeffs_h, double h,
                                      const JkSelection& selection = {}) {
    if (!pair.orthonormal || !pair.exactly_modulated)
        throw std::invalid_argument("epsilon_identity: needs an orthonormal exactly modulated pair");
    AtomBasis basis(pair, f.grid());

    JkSelection sel = selection;
    if (sel.empty()) {
        for (int j : coeffs.scales())
            for (long k = coeffs.k_min(j); k <= coeffs.k_max(j); ++k) sel.emplace_back(j, k);
    }

    EpsilonReport rep;
    rep.terms = sel.size();
    const std::size_t n = f.size();
    std::vector<double> f1t(n, 0.0), f2t(n, 0.0), f1h(n, 0.0), f2h(n, 0.0);
    const double w0 = pair.psi.omega0;

    for (auto [j, k] : sel) {
        const double theta = std::exp2(j) * w0 * h;
        const cplx c = coeffs.c(j, k);
        const cplx ch = coeffs_h.c(j, k);
        rep.lhs += std::norm(std::exp(cplx{0.0, theta}) * c - ch);

        const double mag = std::abs(c);
        const double omega = coeffs.phase(j, k);
        const double a_tilde = 2.0 * mag * std::cos(omega + theta);
        const double b_tilde = -2.0 * mag * std::sin(omega + theta);
        std::vector<double> pa = basis.psi_atom(j, k);
        std::vector<double> pb = basis.psi_prime_atom(j, k);
        const double a_h = coeffs_h.a(j, k);
        const double b_h = coeffs_h.b(j, k);
        for (std::size_t i = 0; i < n; ++i) {
            f1t[i] += a_tilde * pa[i];
            f2t[i] += b_tilde * pb[i];
            f1h[i] += a_h * pa[i];
            f2h[i] += b_h * pb[i];
        }
    }

    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d1 = 0.5 * (f1t[i] + f2t[i]) - 0.5 * (f1h[i] + f2h[i]);
        const double d2 = 0.5 * (f1t[i] - f2t[i]) - 0.5 * (f1h[i] - f2h[i]);
        s1 += d1 * d1;
        s2 += d2 * d2;
    }
    rep.eps1 = std::sqrt(s1 * f.dx());
    rep.eps2 = std::sqrt(s2 * f.dx());
    rep.rhs = 0.5 * (rep.eps1 * rep.eps1 + rep.eps2 * rep.eps2);
    rep.relative_error = rep.lhs > 0.0 ? std::abs(rep.lhs - rep.rhs) / rep.lhs
                                       : std::abs(rep.lhs - rep.rhs);
    rep.sqrt_form = std::sqrt(rep.rhs);
    rep.sqrt_form_factor = rep.sqrt_form > 0.0 ? rep.lhs / rep.sqrt_form : 0.0;
    return rep;
}

// ---------------------------------------------------------------------------
// decay-rate bound (Theorem 4.3)
// ---------------------------------------------------------------------------

struct DecayBoundReport {
    std::vector<BoundCheck> checks;
    double orthonormality_defect = 0.0;  // max |Gram - I| over sampled atom pairs
    std::size_t skipped_insignificant = 0;
};

inline DecayBoundReport decay_bound_check(const SampledSignal& f, const WaveletPair& pair,
                                          const JkWindow& win, const std::vector<double>& h_list,
                                          double significance_floor = 0.25) {
    if (pair.psi.window.kind != WindowKind::raised_cosine)
        throw std::invalid_argument("decay_bound_check: needs the compactly supported raised-cosine "
                                    "window with a known Lipschitz constant");
    DecayBoundReport out;
    AtomBasis basis(pair, f.grid());
    CoeffGrid coeffs = analyze(f, pair, win);
    const double w0 = pair.psi.omega0;
    const double ell = pair.lipschitz;
    const double support = pair.psi.window.q - pair.psi.window.p;

    for (double h : h_list) {
        CoeffGrid coeffs_h = analyze(translate(f, h), pair, win);
        for (int j : coeffs.scales()) {
            const double floor_abs = significance_floor * coeffs.scale_max_abs_c(j);
            for (long k = coeffs.k_min(j); k <= coeffs.k_max(j); ++k) {
                const cplx c = coeffs.c(j, k);
                if (std::abs(c) < floor_abs || std::abs(c) == 0.0) {
                    ++out.skipped_insignificant;
                    continue;
                }
                const double theta = std::exp2(j) * w0 * h;
                const double lhs =
                    std::abs(std::exp(cplx{0.0, theta}) * c - coeffs_h.c(j, k)) /
                    std::abs(h * std::abs(c));
                // support of w - w(. + 2^j h) is [p - 2^j h, q] for h > 0
                const double width = support + std::exp2(j) * std::abs(h);
                const double rhs = std::exp2(j) * ell * width;
                out.checks.push_back(
                    BoundCheck::make("thm43_decay", lhs, rhs, j, k, h, pair.label));
            }
        }
    }

    // Orthonormality defect of the actual discrete family, sampled.
    double defect = 0.0;
    std::vector<std::pair<int, long>> probe;
    for (int j : coeffs.scales()) {
        probe.emplace_back(j, coeffs.k_min(j));
        const long mid = (coeffs.k_min(j) + coeffs.k_max(j)) / 2;
        if (mid != coeffs.k_min(j)) probe.emplace_back(j, mid);
    }
    for (std::size_t x = 0; x < probe.size(); ++x) {
        std::vector<double> ax = basis.psi_atom(probe[x].first, probe[x].second);
        for (std::size_t y = x; y < probe.size(); ++y) {
            std::vector<double> ay = basis.psi_atom(probe[y].first, probe[y].second);
            double dot = 0.0;
            for (std::size_t i = 0; i < ax.size(); ++i) dot += ax[i] * ay[i];
            dot *= f.dx();
            const double want = (x == y) ? 1.0 : 0.0;
            defect = std::max(defect, std::abs(dot - want));
        }
    }
    out.orthonormality_defect = defect;
    return out;
}

}  // namespace dtcwt
