// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "dtcwt/experiment.hpp"
#include "dtcwt/io.hpp"
#include "dtcwt/verify.hpp"

using namespace dtcwt;

namespace {

SampledSignal random_signal(std::size_t n, bool periodic, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    std::vector<cplx> v(n);
    for (auto& s : v) s = cplx{dist(rng), dist(rng)};
    GridSpec g{n, dist(rng), std::abs(dist(rng)) + 0.25, periodic};
    return SampledSignal(g, std::move(v), "noise");
}

}  // namespace

TEST_CASE("signal CSV round trip is lossless") {
    // Shortest round-trip decimals: equality must be bitwise.
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        SampledSignal f = random_signal(64, seed % 2 == 0, seed);
        SampledSignal back = signal_from_csv(signal_to_csv(f), f.periodic(), f.label());
        REQUIRE(back.size() == f.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            CHECK(back[i].real() == f[i].real());
            CHECK(back[i].imag() == f[i].imag());
        }
        CHECK(back.grid().x0 == f.grid().x0);
    }
}

TEST_CASE("signal binary round trip is lossless") {
    SampledSignal f = random_signal(257, true, 99);
    std::string blob = signal_to_binary(f);
    CHECK(blob.compare(0, 4, "DTSG") == 0);
    SampledSignal back = signal_from_binary(blob);
    REQUIRE(back.size() == f.size());
    CHECK(back.grid().x0 == f.grid().x0);
    CHECK(back.grid().dx == f.grid().dx);
    CHECK(back.periodic() == f.periodic());
    CHECK(back.label() == f.label());
    for (std::size_t i = 0; i < f.size(); ++i) {
        CHECK(back[i] == f[i]);
    }
}

TEST_CASE("binary rejects corrupted streams") {
    SampledSignal f = random_signal(16, false, 7);
    std::string blob = signal_to_binary(f);
    SECTION("bad magic") {
        blob[0] = 'X';
        CHECK_THROWS_AS(signal_from_binary(blob), std::runtime_error);
    }
    SECTION("truncation") {
        blob.resize(blob.size() - 5);
        CHECK_THROWS_AS(signal_from_binary(blob), std::runtime_error);
    }
}

TEST_CASE("CSV parser validates the header") {
    CHECK_THROWS_AS(signal_from_csv("a,b,c\n1,2,3\n"), std::runtime_error);
}

TEST_CASE("coefficient grid serialization") {
    SampledSignal f = make_block_signal(BlockSignalSpec{}, 512);
    WaveletPair pair = make_gabor_pair(5.3, 5.2, 1.3755, pair_default_grid());
    CoeffGrid coeffs = analyze(f, pair, JkWindow::scales(2, 4));

    SECTION("CSV carries the documented columns") {
        std::string csv = coeffs_to_csv(coeffs);
        CHECK(csv.rfind("j,k,a,b,re_c,im_c,abs_c,phase_c\n", 0) == 0);
        // one row per stored cell plus header
        std::size_t rows = std::count(csv.begin(), csv.end(), '\n');
        CHECK(rows == coeffs.record_count() + 1);
    }

    SECTION("JSON is schema-versioned and complete") {
        json j = coeffs_to_json(coeffs);
        CHECK(j["schema"] == 1);
        CHECK(j["coefficients"].size() == coeffs.record_count());
        const auto& first = j["coefficients"][0];
        const int jj = first["j"];
        const long kk = first["k"];
        CHECK(first["a"] == coeffs.a(jj, kk));
    }
}

TEST_CASE("pair sidecar JSON") {
    GridSpec g{8192, -16.0, 32.0 / 8192.0, false};
    WaveletPair rc = make_raised_cosine_pair(5.3, 5.2, -12.0, 12.0, g);
    json j = pair_to_json(rc);
    CHECK(j["label"] == "raised_cosine");
    CHECK(j["p"] == -12.0);
    CHECK(j["q"] == 12.0);
    CHECK(j["orthonormal"] == false);
    CHECK(j["lipschitz"] == rc.lipschitz);
    CHECK(j["schema"] == 1);
}

TEST_CASE("shift report serialization") {
    SampledSignal f = make_block_signal(BlockSignalSpec{}, 512);
    WaveletPair pair = make_gabor_pair(5.3, 5.2, 1.3755, pair_default_grid());
    ShiftErrorReport rep =
        shift_errors(f, pair, JkWindow::scales(2, 4), 1.0 / 512.0, PhiPolicy::carrier);

    SECTION("CSV has one row per record") {
        std::string csv = shift_report_to_csv(rep);
        std::size_t rows = std::count(csv.begin(), csv.end(), '\n');
        CHECK(rows == rep.records.size() + 1);
        CHECK(csv.rfind("j,k,abs_c,complex_optimal,complex_phasecomp,real,imag", 0) == 0);
    }

    SECTION("JSON carries policy metadata") {
        json j = shift_report_to_json(rep);
        CHECK(j["phi_policy"] == "carrier");
        CHECK(j["h"] == 1.0 / 512.0);
        CHECK(j["significance_floor"] == 0.25);
        CHECK(j["records"].size() == rep.records.size());
    }
}

TEST_CASE("block signal construction") {
    SECTION("default: 512 samples, piecewise constant, changes only at breakpoints") {
        BlockSignalSpec spec;
        SampledSignal f = make_block_signal(spec, 512);
        REQUIRE(f.size() == 512);
        std::size_t changes = 0;
        for (std::size_t i = 1; i < f.size(); ++i) {
            if (f[i] != f[i - 1]) ++changes;
        }
        CHECK(changes == spec.breakpoints.size());
    }
    SECTION("translate by 1/512 is an exact one-sample circular shift") {
        SampledSignal f = make_block_signal(BlockSignalSpec{}, 512);
        SampledSignal t = translate(f, 1.0 / 512.0);
        for (std::size_t i = 0; i < f.size(); ++i) {
            CHECK(t[i] == f[(i + 1) % f.size()]);
        }
    }
    SECTION("single-level block is constant with vanishing wavelet coefficients") {
        BlockSignalSpec flat;
        flat.breakpoints = {};
        flat.levels = {0.7};
        SampledSignal f = make_block_signal(flat, 512);
        WaveletPair pair = make_gabor_pair(5.3, 5.2, 1.3755, pair_default_grid());
        CoeffGrid coeffs = analyze(f, pair, JkWindow::scales(2, 4));
        for (int j : coeffs.scales()) {
            for (long k = coeffs.k_min(j); k <= coeffs.k_max(j); ++k) {
                CHECK(std::abs(coeffs.c(j, k)) < 1e-9);
            }
        }
    }
    SECTION("malformed breakpoints are rejected") {
        BlockSignalSpec bad;
        bad.breakpoints = {0.5, 0.3};
        bad.levels = {0, 1, 0};
        CHECK_THROWS_AS(make_block_signal(bad, 64), std::invalid_argument);
        BlockSignalSpec mismatched;
        mismatched.breakpoints = {0.5};
        mismatched.levels = {0, 1, 2};
        CHECK_THROWS_AS(make_block_signal(mismatched, 64), std::invalid_argument);
    }
}

TEST_CASE("atom signal: its own cell dominates the ratio plot") {
    ExperimentConfig cfg;
    cfg.signal = SignalKind::atom;
    cfg.atom_j = 3;
    cfg.atom_k = 4;
    WaveletPair pair = cfg.make_pair();
    SampledSignal f = cfg.make_signal(pair);
    ShiftErrorReport rep = shift_errors(f, pair, JkWindow::scales(3, 3), cfg.h, PhiPolicy::carrier);
    const ShiftRecord* own = rep.find(3, 4);
    REQUIRE(own != nullptr);
    const cplx i_unit{0.0, 1.0};
    for (const ShiftRecord* r : rep.scale_records(3)) {
        if (r->k == 4 || r->degenerate_R) continue;
        CHECK(own->abs_c >= r->abs_c);
        if (r->significant) {
            CHECK(std::abs(own->R - i_unit) <= std::abs(r->R - i_unit) + 1e-12);
        }
    }
}

TEST_CASE("experiment configuration JSON round trip") {
    ExperimentConfig cfg;
    cfg.pair = PairKind::raised_cosine;
    cfg.signal = SignalKind::atom;
    cfg.atom_j = 2;
    cfg.atom_k = -3;
    cfg.n_samples = 1024;
    cfg.h = 1.0 / 1024.0;
    cfg.h_sweep = {0.001, 0.0005};
    cfg.j_min = 2;
    cfg.j_max = 5;
    cfg.ratio_j = 4;
    cfg.significance_floor = 0.3;
    cfg.branch_floor = 0.2;
    cfg.phi = PhiPolicy::corrected;
    cfg.omega0_override = 4.0;
    cfg.thresholds["fig3_dist_i"] = 0.4;

    ExperimentConfig back = config_from_json(config_to_json(cfg));
    CHECK(back.pair == cfg.pair);
    CHECK(back.signal == cfg.signal);
    CHECK(back.atom_j == cfg.atom_j);
    CHECK(back.atom_k == cfg.atom_k);
    CHECK(back.n_samples == cfg.n_samples);
    CHECK(back.h == cfg.h);
    CHECK(back.h_sweep == cfg.h_sweep);
    CHECK(back.j_min == cfg.j_min);
    CHECK(back.j_max == cfg.j_max);
    CHECK(back.ratio_j == cfg.ratio_j);
    CHECK(back.significance_floor == cfg.significance_floor);
    CHECK(back.branch_floor == cfg.branch_floor);
    CHECK(back.phi == cfg.phi);
    CHECK(back.omega0_override == cfg.omega0_override);
    CHECK(back.thresholds.at("fig3_dist_i") == 0.4);
    CHECK(back.block.breakpoints == cfg.block.breakpoints);
}

TEST_CASE("bound check summary lines") {
    BoundCheck ok = BoundCheck::make("demo", 1.0, 2.0, 3, 4, 0.5, "gabor");
    CHECK(bound_check_summary_line(ok).rfind("[ ok  ]", 0) == 0);
    BoundCheck bad = BoundCheck::make("demo", 3.0, 2.0, 3, 4, 0.5, "gabor");
    CHECK(bound_check_summary_line(bad).rfind("[FAIL ]", 0) == 0);
    BoundCheck na = BoundCheck::not_applicable("demo", "why", 1, 2, 0.25, "gabor");
    CHECK(bound_check_summary_line(na).rfind("[ n/a ]", 0) == 0);
    json j = bound_check_to_json(ok);
    CHECK(j["passed"] == true);
    CHECK(j["margin"] == 1.0);
}
