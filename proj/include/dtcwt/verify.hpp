// SPDX-License-Identifier: Apache-2.0
//
// The aggregated verification suite: every bound, identity and qualitative
// figure check on a configured experiment, with applicability routing per
// pair. Exit contract: a suite passes when every applicable check passes.

#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "dtcwt/experiment.hpp"
#include "dtcwt/io.hpp"
#include "dtcwt/operators.hpp"
#include "dtcwt/shift_metrics.hpp"

namespace dtcwt {

struct VerifyResult {
    std::vector<BoundCheck> checks;
    std::vector<std::string> notes;

    bool all_passed() const {
        for (const BoundCheck& c : checks)
            if (c.applicable && !c.passed) return false;
        return true;
    }
    std::size_t applicable_count() const {
        std::size_t n = 0;
        for (const BoundCheck& c : checks)
            if (c.applicable) ++n;
        return n;
    }
    const BoundCheck* find(const std::string& name) const {
        for (const BoundCheck& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

namespace detail {

inline BoundCheck summary_check(std::string name, double lhs, double rhs,
                                const std::string& pair_label, double h = 0.0) {
    return BoundCheck::make(std::move(name), lhs, rhs, 0, 0, h, pair_label);
}

}  // namespace detail

// Operator identities on an N-point periodic grid: H(Hf) = -f, <f, Hf> = 0,
// H_0 = I, H_{-1/2} = H, H_tau[cos] = cos(. + pi tau); returns the worst error.
inline double operator_identities_worst_error(std::size_t n = 512) {
    using std::numbers::pi;
    GridSpec g{n, 0.0, 1.0 / static_cast<double>(n), true};
    SampledSignal f = SampledSignal::sample_real(g, [&](double x) {
        return std::cos(2.0 * pi * 7.0 * x) + 0.5 * std::sin(2.0 * pi * 19.0 * x) -
               0.25 * std::cos(2.0 * pi * 53.0 * x);
    });
    double worst = 0.0;
    auto max_diff = [&](const SampledSignal& a, const SampledSignal& b) {
        double m = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
        return m;
    };
    worst = std::max(worst, max_diff(hilbert_transform(hilbert_transform(f)), f.scaled(-1.0)));
    worst = std::max(worst, std::abs(inner_product(f, hilbert_transform(f))));
    worst = std::max(worst, max_diff(fractional_hilbert(f, 0.0), f));
    worst = std::max(worst, max_diff(fractional_hilbert(f, -0.5), hilbert_transform(f)));
    const double w0 = 2.0 * pi * 11.0, tau = 0.25;
    SampledSignal carrier = SampledSignal::sample_real(g, [&](double x) { return std::cos(w0 * x); });
    SampledSignal shifted =
        SampledSignal::sample_real(g, [&](double x) { return std::cos(w0 * x + pi * tau); });
    worst = std::max(worst, max_diff(fractional_hilbert(carrier, tau), shifted));
    return worst;
}

// Worst dyadic-covariance discrepancy over all stored scales and |m| <= 2.
inline double dyadic_covariance_worst(const SampledSignal& f, const WaveletPair& pair,
                                      const JkWindow& win) {
    CoeffGrid coeffs = analyze(f, pair, win);
    double worst = 0.0;
    for (int j : coeffs.scales()) {
        for (long m = -2; m <= 2; ++m) {
            const double s = std::ldexp(static_cast<double>(m), -j);
            CoeffGrid shifted = analyze(translate(f, s), pair, JkWindow::scales(j, j));
            for (long k = coeffs.k_min(j); k <= coeffs.k_max(j); ++k) {
                worst = std::max(worst, std::abs(shifted.c(j, k) - coeffs.c(j, k + m)));
            }
        }
    }
    return worst;
}

// Signal source resolution, including CSV files.
inline SampledSignal load_signal(const ExperimentConfig& cfg, const WaveletPair& pair) {
    if (cfg.signal == SignalKind::file)
        return signal_from_csv(detail::read_file(cfg.signal_path), /*periodic=*/true, "file");
    return cfg.make_signal(pair);
}

inline VerifyResult run_verify(const ExperimentConfig& cfg) {
    VerifyResult out;
    const WaveletPair pair = cfg.make_pair();
    const SampledSignal f = load_signal(cfg, pair);
    const JkWindow win = JkWindow::scales(cfg.j_min, cfg.j_max);
    AtomBasis basis(pair, f.grid());
    const std::string& pl = pair.label;
    const double h = cfg.h;

    // 1. operator identities
    out.checks.push_back(
        detail::summary_check("operator_identities", operator_identities_worst_error(cfg.n_samples),
                              1e-9, pl));

    // 2. dyadic shift covariance
    out.checks.push_back(detail::summary_check(
        "dyadic_covariance", dyadic_covariance_worst(f, pair, win), 1e-8, pl));

    // Shift-error report drives the figure checks.
    ShiftErrorReport rep = shift_errors(f, pair, win, h, cfg.phi, cfg.significance_floor,
                                        cfg.omega0_override, cfg.branch_floor);

    // 3. Fig. 2 qualitative reproduction. The max-based clauses are
    // calibrated for the Gabor surrogate experiment; for other pairs they are
    // reported but do not gate the suite.
    {
        const bool calibrated = cfg.pair == PairKind::gabor;
        const char* scope_note = "threshold calibrated for the Gabor surrogate experiment";
        Fig2Result fig2 = evaluate_fig2(rep, cfg.thresholds.at("fig2_median_ratio"),
                                        cfg.thresholds.at("fig2_optimal_fit"));
        out.checks.push_back(detail::summary_check("fig2_median_ratio", fig2.median_ratio,
                                                   cfg.thresholds.at("fig2_median_ratio"), pl, h));
        Thm31Result t31 = evaluate_thm31(rep, cfg.thresholds.at("thm31_ratio"));
        BoundCheck optfit = detail::summary_check("fig2_optimal_fit", fig2.max_optimal_fit,
                                                  cfg.thresholds.at("fig2_optimal_fit"), pl, h);
        BoundCheck t31r = detail::summary_check("thm31_real_ratio", t31.max_real_ratio,
                                                cfg.thresholds.at("thm31_ratio"), pl, h);
        BoundCheck t31i = detail::summary_check("thm31_imag_ratio", t31.max_imag_ratio,
                                                cfg.thresholds.at("thm31_ratio"), pl, h);
        if (!calibrated) {
            optfit.applicable = t31r.applicable = t31i.applicable = false;
            optfit.note = t31r.note = t31i.note = scope_note;
        }
        out.checks.push_back(optfit);
        out.checks.push_back(t31r);
        out.checks.push_back(t31i);
        out.notes.push_back("fig2_qualitative: " +
                            std::string(fig2.pass() && t31.pass() ? "pass" : "fail"));
    }

    // 4. Fig. 3 qualitative reproduction at the configured scale
    {
        Fig3Result fig3 = evaluate_fig3(rep, cfg.ratio_j, cfg.thresholds.at("fig3_dist_i"));
        out.checks.push_back(detail::summary_check("fig3_dist_i", fig3.max_dist_i,
                                                   cfg.thresholds.at("fig3_dist_i"), pl, h));
        out.checks.push_back(
            detail::summary_check("fig3_correlation", -fig3.correlation, 0.0, pl, h));
    }

    // 5. Proposition 3.2 bounds on every non-degenerate record
    {
        double worst_quotient = 0.0;
        std::size_t applicable = 0, skipped = 0;
        for (const ShiftRecord& r : rep.records) {
            SensitivityEstimate est =
                sensitivity(f, pair, r.j, r.k, sensitivity_h_grid(r.j, h), cfg.omega0_override);
            for (const BoundCheck& c : error_ratio_bounds(r, est, h, pl)) {
                if (!c.applicable) {
                    ++skipped;
                    continue;
                }
                ++applicable;
                if (c.rhs > 0.0) worst_quotient = std::max(worst_quotient, c.lhs / c.rhs);
            }
        }
        BoundCheck c = detail::summary_check("prop32_bounds", worst_quotient, 1.0, pl, h);
        c.note = std::to_string(applicable) + " applicable, " + std::to_string(skipped) +
                 " degenerate records skipped";
        out.checks.push_back(c);
    }

    const bool split_ok = basis.modulation_consistent();
    const bool defect_ok = pair.bedrosian_defect <= 1e-9;

    // 6. Eheq closed form + sum identity
    if (split_ok && defect_ok) {
        CoeffGrid coeffs = analyze(f, pair, win);
        CoeffGrid coeffs_h = analyze(translate(f, h), pair, win);
        const double floor = 10.0 * pair.bedrosian_defect * norm_l2(f) + 1e-13;
        double worst_eheq = 0.0, worst_sum = 0.0;
        for (int j : coeffs.scales()) {
            const double theta = std::exp2(j) * pair.psi.omega0 * h;
            for (long k = coeffs.k_min(j); k <= coeffs.k_max(j); ++k) {
                WindowCarrierSplit s = window_carrier_split(f, basis, j, k, h);
                const double want_e =
                    2.0 * std::abs(std::exp(cplx{0.0, theta}) - 1.0) * coeffs.abs_c(j, k);
                if (want_e > 0.0)
                    worst_eheq = std::max(
                        worst_eheq, std::max(0.0, std::abs(std::abs(s.E) - want_e) - floor) / want_e);
                const cplx want_sum = 2.0 * std::exp(cplx{0.0, pair.psi.xi0}) *
                                      (coeffs.c(j, k) - coeffs_h.c(j, k));
                if (std::abs(want_sum) > 0.0)
                    worst_sum = std::max(worst_sum, std::max(0.0, std::abs(s.E + s.W - want_sum) -
                                                                      floor) /
                                                        std::abs(want_sum));
            }
        }
        BoundCheck e = detail::summary_check("eheq_closed_form", worst_eheq, 1e-8, pl, h);
        e.note = "absolute floor " + detail::shortest(floor);
        out.checks.push_back(e);
        BoundCheck sum = detail::summary_check("sum_identity", worst_sum, 1e-8, pl, h);
        sum.note = e.note;
        out.checks.push_back(sum);
    } else {
        const std::string why = split_ok
                                    ? "Bedrosian defect " + detail::shortest(pair.bedrosian_defect) +
                                          " exceeds the identity resolution"
                                    : "window/carrier split unavailable for this pair/grid";
        out.checks.push_back(BoundCheck::not_applicable("eheq_closed_form", why, 0, 0, h, pl));
        out.checks.push_back(BoundCheck::not_applicable("sum_identity", why, 0, 0, h, pl));
    }

    // 7. Proposition 3.3: Richardson limit + Cauchy-Schwarz. The 1e-3
    // extrapolation match presumes the model coefficients; pairs whose
    // Bedrosian defect exceeds that resolution report it as not applicable.
    if (split_ok && pair.psi.window.derivative_available) {
        std::size_t tested = 0, good = 0;
        double worst_cs = 0.0;
        for (const ShiftRecord& r : rep.records) {
            if (!r.significant) continue;
            WhEhLimit lim = wh_eh_limit(f, pair, r.j, r.k);
            if (lim.degenerate) continue;
            if (lim.cs_bound > 0.0) worst_cs = std::max(worst_cs, lim.limit / lim.cs_bound);
            if (lim.limit < 1e-9 || !defect_ok) continue;
            const double h0 = 1e-3 * std::exp2(-r.j);
            const double extrap = richardson_wh_eh(f, basis, r.j, r.k, h0);
            ++tested;
            if (std::abs(extrap - lim.limit) < 1e-3 * lim.limit) ++good;
        }
        if (defect_ok) {
            const double fail_fraction =
                tested > 0 ? 1.0 - static_cast<double>(good) / static_cast<double>(tested) : 0.0;
            BoundCheck rich = detail::summary_check("prop33_richardson", fail_fraction, 0.05, pl, h);
            rich.note = std::to_string(good) + "/" + std::to_string(tested) +
                        " significant records within 1e-3";
            out.checks.push_back(rich);
        } else {
            out.checks.push_back(BoundCheck::not_applicable(
                "prop33_richardson",
                "Bedrosian defect " + detail::shortest(pair.bedrosian_defect) +
                    " exceeds the 1e-3 extrapolation resolution",
                0, 0, h, pl));
        }
        out.checks.push_back(detail::summary_check("prop33_cauchy_schwarz", worst_cs, 1.0, pl, h));
    } else {
        out.checks.push_back(BoundCheck::not_applicable(
            "prop33_richardson", "window/carrier split or derivative unavailable", 0, 0, h, pl));
        out.checks.push_back(BoundCheck::not_applicable(
            "prop33_cauchy_schwarz", "window/carrier split or derivative unavailable", 0, 0, h, pl));
    }

    // 8. Proposition 3.5: K_h bound and the R identity
    if (split_ok) {
        double worst_quotient = 0.0, worst_identity = 0.0;
        std::size_t applicable = 0, hypothesis_failures = 0;
        for (const ShiftRecord& r : rep.records) {
            if (!r.significant) continue;
            KhResult kh = kh_bound_check(f, pair, r.j, r.k, h);
            if (!kh.applicable) {
                ++hypothesis_failures;
                continue;
            }
            ++applicable;
            if (kh.K_bound > 0.0)
                worst_quotient = std::max(worst_quotient, std::abs(kh.K) / kh.K_bound);
            worst_identity = std::max(worst_identity,
                                      kh.R_identity_error / (1.0 + std::abs(kh.R_direct)));
        }
        BoundCheck bc = detail::summary_check("prop35_kh_bound", worst_quotient, 1.0, pl, h);
        bc.note = std::to_string(applicable) + " applicable, " +
                  std::to_string(hypothesis_failures) + " outside the hypotheses";
        out.checks.push_back(bc);
        out.checks.push_back(
            detail::summary_check("prop35_R_identity", worst_identity, 1e-8, pl, h));
    } else {
        out.checks.push_back(BoundCheck::not_applicable(
            "prop35_kh_bound", "window/carrier split unavailable", 0, 0, h, pl));
        out.checks.push_back(BoundCheck::not_applicable(
            "prop35_R_identity", "window/carrier split unavailable", 0, 0, h, pl));
    }

    // 9. phi equivalence on significant records
    if (split_ok) {
        std::size_t applicable = 0, failed = 0;
        for (const ShiftRecord& r : rep.records) {
            if (!r.significant) continue;
            PhiEquivalence pe = phi_equivalence_check(f, pair, r.j, r.k, h);
            if (!pe.applicable) continue;
            ++applicable;
            if (!pe.passed) ++failed;
        }
        BoundCheck pe = detail::summary_check("phi_equivalence_failures",
                                              static_cast<double>(failed), 0.0, pl, h);
        pe.note = std::to_string(applicable) + " applicable";
        out.checks.push_back(pe);
    } else {
        out.checks.push_back(BoundCheck::not_applicable(
            "phi_equivalence_failures", "window/carrier split unavailable", 0, 0, h, pl));
    }

    // 10. Proposition 4.2 epsilon identity (orthonormal pairs)
    if (pair.orthonormal && pair.exactly_modulated) {
        CoeffGrid coeffs = analyze(f, pair, win);
        CoeffGrid coeffs_h = analyze(translate(f, h), pair, win);
        EpsilonReport full = epsilon_identity(f, pair, coeffs, coeffs_h, h);
        out.checks.push_back(
            detail::summary_check("prop42_full_grid", full.relative_error, 1e-4, pl, h));
        double worst_single = 0.0;
        std::size_t singles = 0;
        for (int j : coeffs.scales()) {
            const long k = (coeffs.k_min(j) + coeffs.k_max(j)) / 2;
            if (coeffs.abs_c(j, k) == 0.0) continue;
            EpsilonReport single = epsilon_identity(f, pair, coeffs, coeffs_h, h, {{j, k}});
            worst_single = std::max(worst_single, single.relative_error);
            ++singles;
        }
        BoundCheck sc = detail::summary_check("prop42_singletons", worst_single, 1e-6, pl, h);
        sc.note = std::to_string(singles) + " singleton cells; sqrt-form factor " +
                  detail::shortest(full.sqrt_form_factor);
        out.checks.push_back(sc);
        // Energy-capture oracle: widen the window to every scale the grid
        // supports before asking for the 99.9% capture.
        const int j_wide = static_cast<int>(std::floor(
            std::log2(static_cast<double>(cfg.n_samples) / (2.0 * f.grid().extent()))));
        CoeffGrid wide = analyze(f, pair, JkWindow::scales(0, j_wide));
        ParsevalReport pr = parseval_check(wide, f);
        BoundCheck cap =
            detail::summary_check("parseval_capture", 0.999 - pr.captured_fraction, 0.0, pl, h);
        cap.note = "captured " + detail::shortest(pr.captured_fraction) + " of the AC energy over j in [0," +
                   std::to_string(j_wide) + "]";
        out.checks.push_back(cap);
    } else {
        out.checks.push_back(BoundCheck::not_applicable(
            "prop42_full_grid", "needs an orthonormal exactly modulated pair", 0, 0, h, pl));
        out.checks.push_back(BoundCheck::not_applicable(
            "prop42_singletons", "needs an orthonormal exactly modulated pair", 0, 0, h, pl));
        out.checks.push_back(BoundCheck::not_applicable(
            "parseval_capture", "needs an orthonormal pair", 0, 0, h, pl));
    }

    // 11. Theorem 4.3 decay bound (raised-cosine pair only)
    if (pair.psi.window.kind == WindowKind::raised_cosine) {
        std::vector<double> hs = cfg.h_sweep.empty()
                                     ? std::vector<double>{1.0 / 512.0, 1.0 / 1024.0, 1.0 / 2048.0}
                                     : cfg.h_sweep;
        DecayBoundReport rep43 = decay_bound_check(f, pair, win, hs, cfg.significance_floor);
        double worst = 0.0;
        for (const BoundCheck& c : rep43.checks)
            if (c.rhs > 0.0) worst = std::max(worst, c.lhs / c.rhs);
        BoundCheck c = detail::summary_check("thm43_decay", worst, 1.0, pl, h);
        c.note = std::to_string(rep43.checks.size()) + " records; orthonormality defect " +
                 detail::shortest(rep43.orthonormality_defect);
        out.checks.push_back(c);
    } else {
        out.checks.push_back(BoundCheck::not_applicable(
            "thm43_decay", "needs the raised-cosine (compact Lipschitz) window", 0, 0, h, pl));
    }

    return out;
}

inline json verify_to_json(const VerifyResult& result, const ExperimentConfig& cfg) {
    json checks = json::array();
    for (const BoundCheck& c : result.checks) checks.push_back(bound_check_to_json(c));
    return json{{"schema", 1},
                {"pair", pair_kind_name(cfg.pair)},
                {"all_passed", result.all_passed()},
                {"applicable_checks", result.applicable_count()},
                {"checks", checks},
                {"notes", result.notes}};
}

// --- experiment configuration <-> JSON ----------------------------------------

inline const char* signal_kind_name(SignalKind k) {
    switch (k) {
        case SignalKind::block: return "block";
        case SignalKind::atom: return "atom";
        case SignalKind::file: return "file";
    }
    return "?";
}

inline json config_to_json(const ExperimentConfig& cfg) {
    return json{{"schema", 1},
                {"signal",
                 {{"kind", signal_kind_name(cfg.signal)},
                  {"breakpoints", cfg.block.breakpoints},
                  {"levels", cfg.block.levels},
                  {"atom_j", cfg.atom_j},
                  {"atom_k", cfg.atom_k},
                  {"path", cfg.signal_path}}},
                {"n", cfg.n_samples},
                {"h", cfg.h},
                {"h_sweep", cfg.h_sweep},
                {"pair", pair_kind_name(cfg.pair)},
                {"omega0", cfg.omega0},
                {"xi0", cfg.xi0},
                {"sigma", cfg.sigma},
                {"p", cfg.rc_p},
                {"q", cfg.rc_q},
                {"j_min", cfg.j_min},
                {"j_max", cfg.j_max},
                {"ratio_j", cfg.ratio_j},
                {"floor", cfg.significance_floor},
                {"branch_floor", cfg.branch_floor},
                {"phi", phi_policy_name(cfg.phi)},
                {"omega0_override", cfg.omega0_override},
                {"seed", cfg.seed},
                {"thresholds", cfg.thresholds}};
}

inline ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig cfg;
    if (j.contains("schema") && j["schema"] != 1)
        throw std::invalid_argument("config: unsupported schema");
    if (j.contains("signal")) {
        const auto& s = j["signal"];
        if (s.contains("kind")) {
            const std::string k = s["kind"].get<std::string>();
            if (k == "block") cfg.signal = SignalKind::block;
            else if (k == "atom") cfg.signal = SignalKind::atom;
            else if (k == "file") cfg.signal = SignalKind::file;
            else throw std::invalid_argument("config: unknown signal kind '" + k + "'");
        }
        if (s.contains("breakpoints")) cfg.block.breakpoints = s["breakpoints"].get<std::vector<double>>();
        if (s.contains("levels")) cfg.block.levels = s["levels"].get<std::vector<double>>();
        if (s.contains("atom_j")) cfg.atom_j = s["atom_j"].get<int>();
        if (s.contains("atom_k")) cfg.atom_k = s["atom_k"].get<long>();
        if (s.contains("path")) cfg.signal_path = s["path"].get<std::string>();
    }
    if (j.contains("n")) cfg.n_samples = j["n"].get<std::size_t>();
    if (j.contains("h")) cfg.h = j["h"].get<double>();
    if (j.contains("h_sweep")) cfg.h_sweep = j["h_sweep"].get<std::vector<double>>();
    if (j.contains("pair")) {
        const std::string p = j["pair"].get<std::string>();
        if (p == "shannon") cfg.pair = PairKind::shannon;
        else if (p == "gabor") cfg.pair = PairKind::gabor;
        else if (p == "raised_cosine") cfg.pair = PairKind::raised_cosine;
        else throw std::invalid_argument("config: unknown pair '" + p + "'");
    }
    if (j.contains("omega0")) cfg.omega0 = j["omega0"].get<double>();
    if (j.contains("xi0")) cfg.xi0 = j["xi0"].get<double>();
    if (j.contains("sigma")) cfg.sigma = j["sigma"].get<double>();
    if (j.contains("p")) cfg.rc_p = j["p"].get<double>();
    if (j.contains("q")) cfg.rc_q = j["q"].get<double>();
    if (j.contains("j_min")) cfg.j_min = j["j_min"].get<int>();
    if (j.contains("j_max")) cfg.j_max = j["j_max"].get<int>();
    if (j.contains("ratio_j")) cfg.ratio_j = j["ratio_j"].get<int>();
    if (j.contains("floor")) cfg.significance_floor = j["floor"].get<double>();
    if (j.contains("branch_floor")) cfg.branch_floor = j["branch_floor"].get<double>();
    if (j.contains("phi")) {
        const std::string p = j["phi"].get<std::string>();
        if (p == "carrier") cfg.phi = PhiPolicy::carrier;
        else if (p == "corrected") cfg.phi = PhiPolicy::corrected;
        else throw std::invalid_argument("config: unknown phi policy '" + p + "'");
    }
    if (j.contains("omega0_override")) cfg.omega0_override = j["omega0_override"].get<double>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<unsigned long long>();
    if (j.contains("thresholds")) {
        for (const auto& [name, value] : j["thresholds"].items()) {
            cfg.thresholds[name] = value.get<double>();
        }
    }
    return cfg;
}

}  // namespace dtcwt
