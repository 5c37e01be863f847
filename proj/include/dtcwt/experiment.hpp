// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration shared by the CLI and the acceptance suite:
// the piecewise-constant test signal, pair selection, defaults mirroring the
// reference setup (n = 512, h = 1/512, Gabor(5.3, 5.2), j = 3 for the ratio
// plot), and named thresholds.

#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dtcwt/shift_metrics.hpp"
#include "dtcwt/signal.hpp"
#include "dtcwt/wavelets.hpp"

namespace dtcwt {

struct BlockSignalSpec {
    std::vector<double> breakpoints{0.30, 0.55, 0.80};  // strictly increasing, within (0,1)
    std::vector<double> levels{0.0, 1.0, -0.5, 0.0};    // one more than breakpoints

    void validate() const {
        if (levels.size() != breakpoints.size() + 1)
            throw std::invalid_argument("block signal: need exactly one more level than breakpoints");
        double prev = 0.0;
        for (double b : breakpoints) {
            if (b <= prev || b >= 1.0)
                throw std::invalid_argument("block signal: breakpoints must increase strictly within (0,1)");
            prev = b;
        }
    }

    double value(double x) const {
        std::size_t region = 0;
        while (region < breakpoints.size() && x >= breakpoints[region]) ++region;
        return levels[region];
    }
};

// n uniform samples of the block function on [0,1), periodic.
inline SampledSignal make_block_signal(const BlockSignalSpec& spec, std::size_t n) {
    spec.validate();
    GridSpec g{n, 0.0, 1.0 / static_cast<double>(n), true};
    return SampledSignal::sample_real(g, [&](double x) { return spec.value(x); }, "block");
}

enum class PairKind { shannon, gabor, raised_cosine };

inline const char* pair_kind_name(PairKind k) {
    switch (k) {
        case PairKind::shannon: return "shannon";
        case PairKind::gabor: return "gabor";
        case PairKind::raised_cosine: return "raised_cosine";
    }
    return "?";
}

enum class SignalKind { block, atom, file };

struct ExperimentConfig {
    SignalKind signal = SignalKind::block;
    BlockSignalSpec block;
    int atom_j = 3;      // atom source: f = psi_{j,k} of the configured pair
    long atom_k = 4;
    std::string signal_path;  // file source: CSV with columns x, re, im
    std::size_t n_samples = 512;
    double h = 1.0 / 512.0;
    std::vector<double> h_sweep;  // optional extra shifts

    PairKind pair = PairKind::gabor;
    double omega0 = 5.3;
    double xi0 = 5.2;
    double sigma = 1.3755;       // gabor window width
    double rc_p = -12.0;         // raised-cosine support
    double rc_q = 12.0;

    int j_min = 1;
    int j_max = 6;
    int ratio_j = 3;             // scale of the R_h plot

    double significance_floor = 0.25;
    double branch_floor = 0.25;  // branch-degeneracy cutoff, fraction of 2^j omega0
    PhiPolicy phi = PhiPolicy::carrier;
    double omega0_override = 0.0;  // nonzero: compensation frequency != pair carrier
    unsigned long long seed = 20260809ULL;

    std::map<std::string, double> thresholds{
        {"fig2_median_ratio", 0.2},   // median phasecomp / max(real, imag)
        {"fig2_optimal_fit", 0.15},   // max (phasecomp - optimal) / real
        {"thm31_ratio", 0.25},        // phasecomp/real and phasecomp/imag, significant records
        {"fig3_dist_i", 0.5},         // |R_h - i| for significant records
    };

    double compensation_omega0() const { return omega0_override != 0.0 ? omega0_override : omega0; }

    WaveletPair make_pair() const {
        switch (pair) {
            case PairKind::shannon: return make_shannon_pair(shannon_default_grid());
            case PairKind::gabor: return make_gabor_pair(omega0, xi0, sigma, pair_default_grid());
            case PairKind::raised_cosine: {
                const double span = std::max(16.0, std::max(std::abs(rc_p), std::abs(rc_q)) + 4.0);
                const std::size_t n = 8192;
                GridSpec g{n, -span, 2.0 * span / static_cast<double>(n), false};
                return make_raised_cosine_pair(omega0, xi0, rc_p, rc_q, g);
            }
        }
        throw std::logic_error("make_pair: unreachable");
    }

    // The analyzed signal. Atom sources draw the configured pair's own
    // discrete atom; file sources are read by the caller (needs io).
    SampledSignal make_signal(const WaveletPair& p) const {
        switch (signal) {
            case SignalKind::block: return make_block_signal(block, n_samples);
            case SignalKind::atom: {
                GridSpec g{n_samples, 0.0, 1.0 / static_cast<double>(n_samples), true};
                AtomBasis basis(p, g);
                return SampledSignal::from_real(g, basis.psi_atom(atom_j, atom_k),
                                                "atom_" + std::to_string(atom_j) + "_" +
                                                    std::to_string(atom_k));
            }
            case SignalKind::file:
                throw std::invalid_argument("make_signal: file sources are loaded by the CLI");
        }
        throw std::logic_error("make_signal: unreachable");
    }
};

// ---------------------------------------------------------------------------
// Figure-level property checks over a ShiftErrorReport. Thresholds are the
// configurable artifact stand-ins for the published plots.
// ---------------------------------------------------------------------------

struct Fig2Result {
    double median_ratio = 0.0;  // median phasecomp / max(real, imag), significant records
    double max_optimal_fit = 0.0;  // max (phasecomp - optimal) / real, significant records
    std::size_t significant_count = 0;
    std::size_t degenerate_count = 0;
    bool pass_median = false;
    bool pass_optimal_fit = false;
    bool pass() const { return pass_median && pass_optimal_fit; }
};

inline Fig2Result evaluate_fig2(const ShiftErrorReport& report, double median_threshold,
                                double optfit_threshold) {
    Fig2Result out;
    std::vector<double> ratios;
    std::size_t optfit_count = 0;
    for (const ShiftRecord& r : report.records) {
        if (!r.significant) continue;
        const double branch_max = std::max(r.real_err, r.imag_err);
        if (branch_max == 0.0) {
            ++out.degenerate_count;
            continue;
        }
        ++out.significant_count;
        ratios.push_back(r.complex_phasecomp / branch_max);
        // The optimal-fit statistic divides by the real branch alone; records
        // whose real branch is accidentally stationary at this h are counted
        // as degenerate per the division-by-zero policy.
        if (r.real_branch_degenerate || r.real_err == 0.0) {
            ++out.degenerate_count;
            continue;
        }
        ++optfit_count;
        out.max_optimal_fit =
            std::max(out.max_optimal_fit, (r.complex_phasecomp - r.complex_optimal) / r.real_err);
    }
    out.median_ratio = detail::median(std::move(ratios));
    // Vacuously true when no record qualifies (e.g. h = 0 zeroes every
    // metric); the counts expose that case.
    out.pass_median = out.significant_count == 0 || out.median_ratio < median_threshold;
    out.pass_optimal_fit = optfit_count == 0 || out.max_optimal_fit < optfit_threshold;
    return out;
}

struct Thm31Result {
    double max_real_ratio = 0.0;
    double max_imag_ratio = 0.0;
    std::size_t significant_count = 0;
    std::size_t degenerate_count = 0;
    bool pass_real = false;
    bool pass_imag = false;
    bool pass() const { return pass_real && pass_imag; }
};

inline Thm31Result evaluate_thm31(const ShiftErrorReport& report, double threshold) {
    Thm31Result out;
    std::size_t real_count = 0, imag_count = 0;
    for (const ShiftRecord& r : report.records) {
        if (!r.significant) continue;
        ++out.significant_count;
        if (r.real_branch_degenerate || r.real_err == 0.0) {
            ++out.degenerate_count;
        } else {
            ++real_count;
            out.max_real_ratio = std::max(out.max_real_ratio, r.complex_phasecomp / r.real_err);
        }
        if (r.imag_branch_degenerate || r.imag_err == 0.0) {
            ++out.degenerate_count;
        } else {
            ++imag_count;
            out.max_imag_ratio = std::max(out.max_imag_ratio, r.complex_phasecomp / r.imag_err);
        }
    }
    out.pass_real = real_count == 0 || out.max_real_ratio < threshold;
    out.pass_imag = imag_count == 0 || out.max_imag_ratio < threshold;
    return out;
}

struct Fig3Result {
    double max_dist_i = 0.0;   // over significant records at the chosen scale
    double correlation = 0.0;  // Pearson corr of (|c|, -|R - i|) over the scale
    std::size_t significant_count = 0;
    std::size_t record_count = 0;
    bool pass_dist = false;
    bool pass_correlation = false;
    bool pass() const { return pass_dist && pass_correlation; }
};

inline Fig3Result evaluate_fig3(const ShiftErrorReport& report, int j, double dist_threshold) {
    Fig3Result out;
    const cplx i_unit{0.0, 1.0};
    std::vector<double> mags, neg_dists;
    for (const ShiftRecord* r : report.scale_records(j)) {
        if (r->degenerate_R || r->degenerate_c) continue;
        const double dist = std::abs(r->R - i_unit);
        ++out.record_count;
        mags.push_back(r->abs_c);
        neg_dists.push_back(-dist);
        if (r->significant) {
            ++out.significant_count;
            out.max_dist_i = std::max(out.max_dist_i, dist);
        }
    }
    if (mags.size() >= 3) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < mags.size(); ++i) {
            mx += mags[i];
            my += neg_dists[i];
        }
        mx /= static_cast<double>(mags.size());
        my /= static_cast<double>(mags.size());
        double sxy = 0, sxx = 0, syy = 0;
        for (std::size_t i = 0; i < mags.size(); ++i) {
            sxy += (mags[i] - mx) * (neg_dists[i] - my);
            sxx += (mags[i] - mx) * (mags[i] - mx);
            syy += (neg_dists[i] - my) * (neg_dists[i] - my);
        }
        if (sxx > 0 && syy > 0) out.correlation = sxy / std::sqrt(sxx * syy);
    }
    out.pass_dist = out.significant_count == 0 || out.max_dist_i < dist_threshold;
    out.pass_correlation = out.record_count < 3 || out.correlation > 0.0;
    return out;
}

}  // namespace dtcwt
