// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "dtcwt/dtcwt.hpp"
#include "dtcwt/experiment.hpp"
#include "dtcwt/operators.hpp"

using namespace dtcwt;
using std::numbers::pi;

namespace {

GridSpec unit_interval(std::size_t n) { return GridSpec{n, 0.0, 1.0 / static_cast<double>(n), true}; }

SampledSignal default_block() { return make_block_signal(BlockSignalSpec{}, 512); }

WaveletPair default_gabor() { return make_gabor_pair(5.3, 5.2, 1.3755, pair_default_grid()); }

}  // namespace

TEST_CASE("analyzing a basis atom of the orthonormal pair") {
    WaveletPair pair = make_shannon_pair(shannon_default_grid());
    GridSpec circle = unit_interval(512);
    AtomBasis basis(pair, circle);
    SampledSignal f = SampledSignal::from_real(circle, basis.psi_atom(0, 0));

    CoeffGrid coeffs = analyze(f, pair, JkWindow::scales(0, 4));
    CHECK(coeffs.a(0, 0) == Catch::Approx(1.0).margin(1e-6));
    CHECK(std::abs(coeffs.b(0, 0)) < 1e-6);
    for (int j = 1; j <= 4; ++j) {
        for (long k = coeffs.k_min(j); k <= coeffs.k_max(j); ++k) {
            CHECK(std::abs(coeffs.a(j, k)) < 1e-6);
        }
    }
    CHECK(coeffs.c(0, 0) == 0.5 * cplx{coeffs.a(0, 0), -coeffs.b(0, 0)});
}

TEST_CASE("coefficient invariants") {
    SampledSignal f = default_block();
    WaveletPair pair = default_gabor();
    CoeffGrid coeffs = analyze(f, pair, JkWindow::scales(1, 5));

    SECTION("c = (a - i b)/2 exactly on every cell") {
        for (int j : coeffs.scales()) {
            for (long k = coeffs.k_min(j); k <= coeffs.k_max(j); ++k) {
                CHECK(coeffs.c(j, k) == 0.5 * cplx{coeffs.a(j, k), -coeffs.b(j, k)});
            }
        }
    }

    SECTION("phase accessor stays in ]-pi, pi] and satisfies c = |c| e^{i w}") {
        for (int j : coeffs.scales()) {
            for (long k = coeffs.k_min(j); k <= coeffs.k_max(j); ++k) {
                const double w = coeffs.phase(j, k);
                CHECK(w > -pi);
                CHECK(w <= pi);
                const cplx rebuilt = coeffs.abs_c(j, k) * std::exp(cplx{0.0, w});
                CHECK(std::abs(rebuilt - coeffs.c(j, k)) < 1e-14);
            }
        }
    }

    SECTION("linearity") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        std::vector<double> gv(f.size());
        for (auto& v : gv) v = dist(rng);
        SampledSignal g = SampledSignal::from_real(f.grid(), gv);
        const double alpha = 1.7, beta = -0.4;
        std::vector<double> combo(f.size());
        for (std::size_t i = 0; i < f.size(); ++i)
            combo[i] = alpha * f[i].real() + beta * g[i].real();
        CoeffGrid cf = analyze(f, pair, JkWindow::scales(2, 4));
        CoeffGrid cg = analyze(g, pair, JkWindow::scales(2, 4));
        CoeffGrid cc = analyze(SampledSignal::from_real(f.grid(), combo), pair, JkWindow::scales(2, 4));
        for (int j : cc.scales()) {
            for (long k = cc.k_min(j); k <= cc.k_max(j); ++k) {
                CHECK(std::abs(cc.c(j, k) - (alpha * cf.c(j, k) + beta * cg.c(j, k))) < 1e-12);
            }
        }
    }

    SECTION("rejects complex signals and empty ranges") {
        std::vector<cplx> cv(f.size(), cplx{0.0, 1.0});
        SampledSignal fc(f.grid(), cv);
        CHECK_THROWS_AS(analyze(fc, pair, JkWindow::scales(1, 2)), std::invalid_argument);
        JkWindow bad = JkWindow::scales(1, 2);
        bad.k_ranges[1] = {5, 2};
        CHECK_THROWS_AS(analyze(f, pair, bad), std::invalid_argument);
    }
}

TEST_CASE("dyadic shift covariance on the block signal") {
    SampledSignal f = default_block();
    WaveletPair pair = default_gabor();
    CoeffGrid coeffs = analyze(f, pair, JkWindow::scales(1, 5));

    SECTION("m = 0 is the identity row") {
        for (int j : coeffs.scales()) {
            std::vector<cplx> row = predict_dyadic_shift(coeffs, j, 0);
            for (long k = coeffs.k_min(j); k <= coeffs.k_max(j); ++k)
                CHECK(row[static_cast<std::size_t>(k - coeffs.k_min(j))] == coeffs.c(j, k));
        }
    }

    SECTION("prediction matches recomputation for |m| <= 2") {
        for (int j : coeffs.scales()) {
            for (long m = -2; m <= 2; ++m) {
                const double s = std::ldexp(static_cast<double>(m), -j);  // 2^{-j} m
                CoeffGrid shifted = analyze(translate(f, s), pair, JkWindow::scales(j, j));
                std::vector<cplx> predicted = predict_dyadic_shift(coeffs, j, m);
                for (long k = coeffs.k_min(j); k <= coeffs.k_max(j); ++k) {
                    const cplx got = shifted.c(j, k);
                    const cplx want = predicted[static_cast<std::size_t>(k - coeffs.k_min(j))];
                    CHECK(std::abs(got - want) < 1e-8);
                }
            }
        }
    }

    SECTION("s = 2^{-j} m + h decomposition") {
        const int j = 3;
        const long m = 1;
        const double h = 1.0 / 512.0;
        const double s = std::ldexp(static_cast<double>(m), -j) + h;
        CoeffGrid cs = analyze(translate(f, s), pair, JkWindow::scales(j, j));
        CoeffGrid ch = analyze(translate(f, h), pair, JkWindow::scales(j, j));
        for (long k = cs.k_min(j); k <= cs.k_max(j); ++k) {
            CHECK(std::abs(cs.c(j, k) - ch.c(j, k + m)) < 1e-8);
        }
    }

    SECTION("out-of-range k+m on a non-periodic grid lists clipped indices") {
        GridSpec line{512, -2.0, 4.0 / 512.0, false};
        SampledSignal g = SampledSignal::sample_real(line, [](double x) {
            return std::exp(-8.0 * x * x) * std::cos(12.0 * x);
        });
        CoeffGrid c2 = analyze(g, pair, JkWindow::scales(2, 2));
        CHECK_THROWS_AS(predict_dyadic_shift(c2, 2, 1), std::out_of_range);
    }
}

TEST_CASE("orthonormal synthesis") {
    WaveletPair pair = make_shannon_pair(shannon_default_grid());
    GridSpec circle = unit_interval(512);
    AtomBasis basis(pair, circle);

    SECTION("single atom round trip") {
        SampledSignal f = SampledSignal::from_real(circle, basis.psi_atom(2, 3));
        CoeffGrid coeffs = analyze(f, pair, JkWindow::scales(0, 6));
        SampledSignal rec = synthesize(coeffs, pair, Branch::real);
        CHECK(norm_l2(rec - f) < 1e-5 * norm_l2(f));
    }

    SECTION("band-limited signal round trip via both branches") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        std::vector<double> amp(33, 0.0), phs(33, 0.0);
        for (std::size_t m = 2; m <= 32; ++m) {
            amp[m] = dist(rng);
            phs[m] = pi * dist(rng);
        }
        SampledSignal f = SampledSignal::sample_real(circle, [&](double x) {
            double acc = 0.0;
            for (std::size_t m = 2; m <= 32; ++m)
                acc += amp[m] * std::cos(2.0 * pi * static_cast<double>(m) * x + phs[m]);
            return acc;
        });
        CoeffGrid coeffs = analyze(f, pair, JkWindow::scales(1, 6));
        ParsevalReport cap = parseval_check(coeffs, f);
        REQUIRE(cap.captured_fraction >= 0.999);  // energy-capture oracle for the window
        SampledSignal rec_r = synthesize(coeffs, pair, Branch::real);
        SampledSignal rec_i = synthesize(coeffs, pair, Branch::imaginary);
        const double err_r = norm_l2(rec_r - f) / norm_l2(f);
        const double err_i = norm_l2(rec_i - f) / norm_l2(f);
        CHECK(err_r < 1e-3);
        CHECK(err_i < 1e-3);
        CHECK(norm_l2(rec_r - rec_i) <= 2.0 * (err_r + err_i) * norm_l2(f) + 1e-12);
    }

    SECTION("non-orthonormal pairs are rejected") {
        SampledSignal f = default_block();
        WaveletPair gabor = default_gabor();
        CoeffGrid coeffs = analyze(f, gabor, JkWindow::scales(1, 3));
        CHECK_THROWS_AS(synthesize(coeffs, gabor, Branch::real), std::invalid_argument);
    }
}

TEST_CASE("amplitude-phase synthesis") {
    WaveletPair pair = make_shannon_pair(shannon_default_grid());
    GridSpec circle = unit_interval(512);
    SampledSignal f = default_block();
    CoeffGrid coeffs = analyze(f, pair, JkWindow::scales(1, 6));

    SECTION("equals the half-sum of branch expansions pointwise") {
        SampledSignal ap = amplitude_phase_synthesize(coeffs, pair);
        SampledSignal r = synthesize(coeffs, pair, Branch::real);
        SampledSignal im = synthesize(coeffs, pair, Branch::imaginary);
        double max_err = 0.0;
        for (std::size_t i = 0; i < circle.n; ++i) {
            const double mean = 0.5 * (r[i].real() + im[i].real());
            max_err = std::max(max_err, std::abs(ap[i].real() - mean));
        }
        CHECK(max_err < 1e-8);
    }

    SECTION("single atom reproduction") {
        AtomBasis basis(pair, circle);
        SampledSignal atom = SampledSignal::from_real(circle, basis.psi_atom(0, 0));
        CoeffGrid ca = analyze(atom, pair, JkWindow::scales(0, 6));
        SampledSignal rec = amplitude_phase_synthesize(ca, pair);
        CHECK(norm_l2(rec - atom) < 1e-5 * norm_l2(atom));
    }

    SECTION("rejects non-modulated or non-orthonormal input") {
        WaveletPair gabor = default_gabor();
        CoeffGrid cg = analyze(f, gabor, JkWindow::scales(1, 3));
        CHECK_THROWS_AS(amplitude_phase_synthesize(cg, gabor), std::invalid_argument);
    }
}

TEST_CASE("parseval report") {
    WaveletPair pair = make_shannon_pair(shannon_default_grid());
    GridSpec circle = unit_interval(512);

    SECTION("single atom gives ratio 1") {
        AtomBasis basis(pair, circle);
        SampledSignal atom = SampledSignal::from_real(circle, basis.psi_atom(3, 4));
        CoeffGrid coeffs = analyze(atom, pair, JkWindow::scales(0, 7));
        ParsevalReport r = parseval_check(coeffs, atom);
        CHECK(r.ratio == Catch::Approx(1.0).margin(1e-6));
    }

    SECTION("block signal with a wide window captures >= 99.9% of the AC energy") {
        SampledSignal f = default_block();
        CoeffGrid coeffs = analyze(f, pair, JkWindow::scales(0, 8));
        ParsevalReport r = parseval_check(coeffs, f);
        CHECK(r.captured_fraction >= 0.999);
    }

    SECTION("empty coefficient window reports ratio 0") {
        SampledSignal f = default_block();
        ParsevalReport r = parseval_check(CoeffGrid{}, f);
        CHECK(r.ratio == 0.0);
        CHECK(r.coefficient_energy == 0.0);
    }
}
