// SPDX-License-Identifier: Apache-2.0
//
// Experiment harness around the dual-tree complex wavelet shift analysis.
//
// Subcommands: block-signal, shift-analysis, ratio-plot, verify, wavelet-info.
// Outputs are CSV + JSON + gnuplot scripts; every command also writes the
// exact configuration it ran with. Exit codes: 0 = all applicable checks
// pass, 1 = a check failed, 2 = usage or configuration error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dtcwt/experiment.hpp"
#include "dtcwt/io.hpp"
#include "dtcwt/verify.hpp"

namespace fs = std::filesystem;
using namespace dtcwt;

namespace {

// Accepts "0.001953125" or "1/512".
double parse_shift(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return std::stod(text);
    return std::stod(text.substr(0, slash)) / std::stod(text.substr(slash + 1));
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto comma = text.find(',', pos);
        const std::string item = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (!item.empty()) out.push_back(parse_shift(item));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

struct CliOptions {
    std::string config_path;
    std::string out_dir = "dtcwt_out";
    std::string pair;
    std::optional<std::size_t> n;
    std::string h_text;
    std::string j_text;  // "3" or "1:6"
    std::string phi;
    std::optional<double> floor;
    std::optional<unsigned long long> seed;
    std::optional<double> omega0, xi0, sigma, rc_p, rc_q, omega0_override, branch_floor;
    std::string breakpoints, levels;
    std::string h_sweep;
    std::string signal;  // block|atom|file
    std::optional<int> atom_j;
    std::optional<long> atom_k;
    std::string signal_file;
};

ExperimentConfig build_config(const CliOptions& opt) {
    ExperimentConfig cfg;
    if (!opt.config_path.empty()) {
        cfg = config_from_json(json::parse(detail::read_file(opt.config_path)));
    }
    if (!opt.pair.empty()) {
        if (opt.pair == "shannon") cfg.pair = PairKind::shannon;
        else if (opt.pair == "gabor") cfg.pair = PairKind::gabor;
        else if (opt.pair == "raised_cosine") cfg.pair = PairKind::raised_cosine;
        else throw CLI::ValidationError("--pair", "unknown pair '" + opt.pair + "'");
    }
    if (opt.n) cfg.n_samples = *opt.n;
    if (!opt.h_text.empty()) cfg.h = parse_shift(opt.h_text);
    if (!opt.j_text.empty()) {
        const auto colon = opt.j_text.find(':');
        if (colon == std::string::npos) {
            cfg.ratio_j = std::stoi(opt.j_text);
            if (cfg.ratio_j < cfg.j_min || cfg.ratio_j > cfg.j_max) {
                cfg.j_min = std::min(cfg.j_min, cfg.ratio_j);
                cfg.j_max = std::max(cfg.j_max, cfg.ratio_j);
            }
        } else {
            cfg.j_min = std::stoi(opt.j_text.substr(0, colon));
            cfg.j_max = std::stoi(opt.j_text.substr(colon + 1));
            cfg.ratio_j = std::min(std::max(cfg.ratio_j, cfg.j_min), cfg.j_max);
        }
    }
    if (!opt.phi.empty()) {
        if (opt.phi == "carrier") cfg.phi = PhiPolicy::carrier;
        else if (opt.phi == "corrected") cfg.phi = PhiPolicy::corrected;
        else throw CLI::ValidationError("--phi", "expected carrier|corrected");
    }
    if (opt.floor) cfg.significance_floor = *opt.floor;
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.omega0) cfg.omega0 = *opt.omega0;
    if (opt.xi0) cfg.xi0 = *opt.xi0;
    if (opt.sigma) cfg.sigma = *opt.sigma;
    if (opt.rc_p) cfg.rc_p = *opt.rc_p;
    if (opt.rc_q) cfg.rc_q = *opt.rc_q;
    if (opt.omega0_override) cfg.omega0_override = *opt.omega0_override;
    if (opt.branch_floor) cfg.branch_floor = *opt.branch_floor;
    if (!opt.breakpoints.empty()) cfg.block.breakpoints = parse_list(opt.breakpoints);
    if (!opt.levels.empty()) cfg.block.levels = parse_list(opt.levels);
    if (!opt.h_sweep.empty()) cfg.h_sweep = parse_list(opt.h_sweep);
    if (!opt.signal.empty()) {
        if (opt.signal == "block") cfg.signal = SignalKind::block;
        else if (opt.signal == "atom") cfg.signal = SignalKind::atom;
        else if (opt.signal == "file") cfg.signal = SignalKind::file;
        else throw CLI::ValidationError("--signal", "expected block|atom|file");
    }
    if (opt.atom_j) cfg.atom_j = *opt.atom_j;
    if (opt.atom_k) cfg.atom_k = *opt.atom_k;
    if (!opt.signal_file.empty()) {
        cfg.signal_path = opt.signal_file;
        cfg.signal = SignalKind::file;
    }
    if (cfg.signal == SignalKind::file && cfg.signal_path.empty())
        throw CLI::ValidationError("--signal-file", "file signal source needs a path");
    cfg.block.validate();
    return cfg;
}

fs::path prepare_out_dir(const CliOptions& opt) {
    fs::path dir(opt.out_dir);
    fs::create_directories(dir);
    return dir;
}

void write_config(const fs::path& dir, const ExperimentConfig& cfg) {
    detail::write_file(dir / "config.json", config_to_json(cfg).dump(2) + "\n");
}

// --- gnuplot emitters ---------------------------------------------------------

std::string block_signal_gp() {
    return "set datafile separator ','\n"
           "set key off\n"
           "set xlabel 'x'\n"
           "set ylabel 'f(x)'\n"
           "set title 'block test signal'\n"
           "plot 'signal.csv' using 1:2 with steps lw 2\n";
}

std::string fig2_gp(int j_min, int j_max, bool zoomed_out) {
    std::string gp = "set datafile separator ','\n"
                     "set key outside top\n"
                     "set xlabel 'k'\n";
    gp += "set multiplot layout " + std::to_string(j_max - j_min + 1) + ",1 title 'shift errors" +
          std::string(zoomed_out ? " (all branches)" : " (phase-compensated vs optimal)") + "'\n";
    for (int j = j_min; j <= j_max; ++j) {
        const std::string file = "shift_errors_j" + std::to_string(j) + ".csv";
        gp += "set ylabel 'j=" + std::to_string(j) + "'\n";
        gp += "plot '" + file + "' using 1:2 with linespoints title 'complex-optimal', \\\n";
        gp += "     '" + file + "' using 1:3 with linespoints title 'complex-phasecomp'";
        if (zoomed_out) {
            gp += ", \\\n     '" + file + "' using 1:4 with linespoints title 'real', \\\n";
            gp += "     '" + file + "' using 1:5 with linespoints title 'imag'";
        }
        gp += "\n";
    }
    gp += "unset multiplot\n";
    return gp;
}

std::string ratio_gp(int j) {
    return "set datafile separator ','\n"
           "set key outside top\n"
           "set xlabel 'Re R_h'\n"
           "set ylabel 'Im R_h'\n"
           "set size ratio -1\n"
           "set title 'ratio R_h at j=" + std::to_string(j) + "'\n"
           "plot 'ratio_j" + std::to_string(j) + ".csv' using 2:($7 > 0 ? $3 : 1/0) "
           "with points pt 7 title 'significant', \\\n"
           "     '' using 2:($7 > 0 ? 1/0 : $3) with points pt 6 title 'insignificant', \\\n"
           "     '-' with points pt 2 ps 2 lc rgb 'red' title 'i'\n0 1\ne\n";
}

// --- subcommand bodies ----------------------------------------------------------

int cmd_block_signal(const CliOptions& opt) {
    ExperimentConfig cfg = build_config(opt);
    fs::path dir = prepare_out_dir(opt);
    SampledSignal f = make_block_signal(cfg.block, cfg.n_samples);
    detail::write_file(dir / "signal.csv", signal_to_csv(f));
    detail::write_file(dir / "signal.gp", block_signal_gp());
    write_config(dir, cfg);
    std::cout << "block-signal: " << cfg.n_samples << " samples -> " << (dir / "signal.csv").string()
              << "\n";
    return 0;
}

int cmd_shift_analysis(const CliOptions& opt) {
    ExperimentConfig cfg = build_config(opt);
    fs::path dir = prepare_out_dir(opt);
    WaveletPair pair = cfg.make_pair();
    SampledSignal f = load_signal(cfg, pair);
    ShiftErrorReport rep = shift_errors(f, pair, JkWindow::scales(cfg.j_min, cfg.j_max), cfg.h,
                                        cfg.phi, cfg.significance_floor, cfg.omega0_override,
                                        cfg.branch_floor);

    for (int j = cfg.j_min; j <= cfg.j_max; ++j) {
        std::string csv = "k,complex-optimal,complex-phasecomp,real,imag,abs_c,significant\n";
        for (const ShiftRecord* r : rep.scale_records(j)) {
            csv += std::to_string(r->k);
            for (double v : {r->complex_optimal, r->complex_phasecomp, r->real_err, r->imag_err,
                             r->abs_c}) {
                csv += ',';
                csv += detail::shortest(v);
            }
            csv += ',';
            csv += r->significant ? '1' : '0';
            csv += '\n';
        }
        detail::write_file(dir / ("shift_errors_j" + std::to_string(j) + ".csv"), csv);
    }
    detail::write_file(dir / "report.csv", shift_report_to_csv(rep));
    detail::write_file(dir / "fig2_left.gp", fig2_gp(cfg.j_min, cfg.j_max, false));
    detail::write_file(dir / "fig2_right.gp", fig2_gp(cfg.j_min, cfg.j_max, true));

    Fig2Result fig2 = evaluate_fig2(rep, cfg.thresholds.at("fig2_median_ratio"),
                                    cfg.thresholds.at("fig2_optimal_fit"));
    Thm31Result t31 = evaluate_thm31(rep, cfg.thresholds.at("thm31_ratio"));
    const bool pass = fig2.pass() && t31.pass();
    json summary{{"schema", 1},
                 {"fig2_qualitative", pass ? "pass" : "fail"},
                 {"median_ratio", fig2.median_ratio},
                 {"max_optimal_fit", fig2.max_optimal_fit},
                 {"thm31_max_real_ratio", t31.max_real_ratio},
                 {"thm31_max_imag_ratio", t31.max_imag_ratio},
                 {"significant_records", fig2.significant_count},
                 {"degenerate_records", fig2.degenerate_count + t31.degenerate_count},
                 {"report", shift_report_to_json(rep)}};
    detail::write_file(dir / "summary.json", summary.dump(2) + "\n");
    write_config(dir, cfg);
    std::cout << "fig2_qualitative: " << (pass ? "pass" : "fail")
              << " (median " << fig2.median_ratio << ", optimal fit " << fig2.max_optimal_fit
              << ")\n";
    return pass ? 0 : 1;
}

int cmd_ratio_plot(const CliOptions& opt) {
    ExperimentConfig cfg = build_config(opt);
    fs::path dir = prepare_out_dir(opt);
    WaveletPair pair = cfg.make_pair();
    SampledSignal f = load_signal(cfg, pair);
    const int j = cfg.ratio_j;
    ShiftErrorReport rep = shift_errors(f, pair, JkWindow::scales(j, j), cfg.h, cfg.phi,
                                        cfg.significance_floor, cfg.omega0_override,
                                        cfg.branch_floor);

    std::string csv = "k,re_R,im_R,abs_c,dist_i,degenerate,significant\n";
    for (const ShiftRecord* r : rep.scale_records(j)) {
        const double dist = r->degenerate_R ? -1.0 : std::abs(r->R - cplx{0.0, 1.0});
        csv += std::to_string(r->k);
        for (double v : {r->R.real(), r->R.imag(), r->abs_c, dist}) {
            csv += ',';
            csv += detail::shortest(v);
        }
        csv += ',';
        csv += (r->degenerate_R || r->degenerate_c) ? '1' : '0';
        csv += ',';
        csv += r->significant ? '1' : '0';
        csv += '\n';
    }
    detail::write_file(dir / ("ratio_j" + std::to_string(j) + ".csv"), csv);
    detail::write_file(dir / "ratio.gp", ratio_gp(j));

    Fig3Result fig3 = evaluate_fig3(rep, j, cfg.thresholds.at("fig3_dist_i"));
    json summary{{"schema", 1},
                 {"j", j},
                 {"h", cfg.h},
                 {"max_dist_i_significant", fig3.max_dist_i},
                 {"correlation_absc_negdist", fig3.correlation},
                 {"pass", fig3.pass()}};
    detail::write_file(dir / "summary.json", summary.dump(2) + "\n");
    write_config(dir, cfg);
    std::cout << "ratio-plot j=" << j << ": max |R - i| over significant records "
              << fig3.max_dist_i << ", correlation " << fig3.correlation
              << (fig3.pass() ? " (pass)" : " (fail)") << "\n";
    return fig3.pass() ? 0 : 1;
}

int cmd_verify(const CliOptions& opt) {
    ExperimentConfig cfg = build_config(opt);
    fs::path dir = prepare_out_dir(opt);
    VerifyResult result = run_verify(cfg);
    for (const BoundCheck& c : result.checks) std::cout << bound_check_summary_line(c) << "\n";
    for (const std::string& note : result.notes) std::cout << note << "\n";
    detail::write_file(dir / "checks.json", verify_to_json(result, cfg).dump(2) + "\n");
    write_config(dir, cfg);
    const bool ok = result.all_passed();
    std::cout << (ok ? "verify: all applicable checks pass" : "verify: FAILURES present") << " ("
              << result.applicable_count() << " applicable)\n";
    return ok ? 0 : 1;
}

int cmd_wavelet_info(const CliOptions& opt) {
    ExperimentConfig cfg = build_config(opt);
    fs::path dir = prepare_out_dir(opt);
    WaveletPair pair = cfg.make_pair();
    json info = pair_to_json(pair);

    ModulationEstimate est = extract_modulation(pair);
    info["modulation_estimate"] = {{"omega0", est.omega0}, {"xi0", est.xi0}, {"ok", est.ok}};
    if (!est.note.empty()) info["modulation_estimate"]["note"] = est.note;

    // Tabulated preview on a bounded view grid (lazy pairs carry huge grids).
    GridSpec view = pair.tab_grid;
    if (view.n > (1u << 16)) view = GridSpec{8192, -32.0, 64.0 / 8192.0, false};
    detail::write_file(dir / "psi.csv", signal_to_csv(pair.tabulate_psi(view)));
    detail::write_file(dir / "psi_prime.csv", signal_to_csv(pair.tabulate_psi_prime(view)));
    detail::write_file(dir / "psi.dtsg", signal_to_binary(pair.tabulate_psi(view)));
    detail::write_file(dir / "psi_prime.dtsg", signal_to_binary(pair.tabulate_psi_prime(view)));
    detail::write_file(dir / "pair.json", info.dump(2) + "\n");
    write_config(dir, cfg);
    std::cout << "wavelet-info: " << pair.label << " omega0=" << pair.psi.omega0
              << " xi0=" << pair.psi.xi0 << " Omega=" << pair.psi.band_limit
              << " bedrosian_defect=" << pair.bedrosian_defect << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dual-tree complex wavelet shift-invariance experiments"};
    app.set_help_flag("--help", "print usage");  // frees -h; the shift flag is --h
    app.require_subcommand(1);
    app.fallthrough();

    CliOptions opt;
    app.add_option("--config", opt.config_path, "JSON configuration file");
    app.add_option("--out", opt.out_dir, "output directory");
    app.add_option("--pair", opt.pair, "wavelet pair: shannon|gabor|raised_cosine");
    app.add_option("--n", opt.n, "number of signal samples");
    app.add_option("--h", opt.h_text, "shift (plain number or fraction like 1/512)");
    app.add_option("--j", opt.j_text, "scale (e.g. 3) or scale range (e.g. 1:6)");
    app.add_option("--phi", opt.phi, "compensation policy: carrier|corrected");
    app.add_option("--floor", opt.floor, "significance floor in [0,1]");
    app.add_option("--seed", opt.seed, "seed recorded in outputs");
    app.add_option("--omega0", opt.omega0, "pair carrier frequency");
    app.add_option("--xi0", opt.xi0, "pair carrier phase");
    app.add_option("--sigma", opt.sigma, "gabor window width");
    app.add_option("--p", opt.rc_p, "raised-cosine support start");
    app.add_option("--q", opt.rc_q, "raised-cosine support end");
    app.add_option("--omega0-override", opt.omega0_override,
                   "compensate with this frequency instead of the pair carrier");
    app.add_option("--branch-floor", opt.branch_floor,
                   "branch-degeneracy cutoff as a fraction of 2^j omega0");
    app.add_option("--breakpoints", opt.breakpoints, "block signal breakpoints, comma separated");
    app.add_option("--levels", opt.levels, "block signal levels, comma separated");
    app.add_option("--h-sweep", opt.h_sweep, "comma-separated shifts for sweep checks");
    app.add_option("--signal", opt.signal, "signal source: block|atom|file");
    app.add_option("--atom-j", opt.atom_j, "atom signal scale");
    app.add_option("--atom-k", opt.atom_k, "atom signal translate");
    app.add_option("--signal-file", opt.signal_file, "CSV signal to analyze (implies --signal file)");

    auto* block = app.add_subcommand("block-signal", "emit the piecewise-constant test signal");
    auto* shift = app.add_subcommand("shift-analysis", "per-scale shift-error metrics and plots");
    auto* ratio = app.add_subcommand("ratio-plot", "the ratio R_h in the complex plane");
    auto* verify = app.add_subcommand("verify", "run the full bound/identity check suite");
    auto* winfo = app.add_subcommand("wavelet-info", "pair construction report and tabulation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (block->parsed()) return cmd_block_signal(opt);
        if (shift->parsed()) return cmd_shift_analysis(opt);
        if (ratio->parsed()) return cmd_ratio_plot(opt);
        if (verify->parsed()) return cmd_verify(opt);
        if (winfo->parsed()) return cmd_wavelet_info(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
