// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "dtcwt/fft.hpp"
#include "dtcwt/signal.hpp"

using namespace dtcwt;
using std::numbers::pi;

namespace {

GridSpec unit_interval(std::size_t n) { return GridSpec{n, 0.0, 1.0 / static_cast<double>(n), true}; }

SampledSignal random_real(const GridSpec& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(g.n);
    for (auto& x : v) x = dist(rng);
    return SampledSignal::from_real(g, v);
}

}  // namespace

TEST_CASE("inner product of a unit-norm Gaussian with itself is 1") {
    GridSpec g{2048, -16.0, 32.0 / 2048.0, false};
    const double sigma = 1.0;
    SampledSignal f = SampledSignal::sample_real(g, [&](double x) {
        return std::exp(-x * x / (2.0 * sigma * sigma)) / std::sqrt(sigma * std::sqrt(pi));
    });
    CHECK(std::abs(inner_product(f, f).real() - 1.0) < 1e-9);
    CHECK(std::abs(inner_product(f, f).imag()) < 1e-15);
}

TEST_CASE("conjugation sits on the second inner-product argument") {
    GridSpec g = unit_interval(256);
    SampledSignal f = random_real(g, 7);
    SampledSignal fi = f.scaled(cplx{0.0, 1.0});
    cplx ip = inner_product(f, fi);
    const double e = norm_sq(f);
    CHECK(std::abs(ip - cplx{0.0, -e}) < 1e-12 * e);
}

TEST_CASE("sin and cos over a full period are orthogonal") {
    GridSpec g = unit_interval(512);
    SampledSignal s = SampledSignal::sample_real(g, [](double x) { return std::sin(2.0 * pi * x); });
    SampledSignal c = SampledSignal::sample_real(g, [](double x) { return std::cos(2.0 * pi * x); });
    CHECK(std::abs(inner_product(s, c)) < 1e-12);
}

TEST_CASE("inner product rejects grid mismatches with a diagnostic") {
    SampledSignal a = SampledSignal::zeros(unit_interval(64));
    SampledSignal b = SampledSignal::zeros(unit_interval(128));
    CHECK_THROWS_AS(inner_product(a, b), std::invalid_argument);
    try {
        (void)inner_product(a, b);
    } catch (const std::invalid_argument& err) {
        std::string msg = err.what();
        CHECK(msg.find("n=64") != std::string::npos);
        CHECK(msg.find("n=128") != std::string::npos);
    }
}

TEST_CASE("conjugate symmetry of the inner product") {
    GridSpec g = unit_interval(200);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<cplx> fv(g.n), gv(g.n);
        for (std::size_t i = 0; i < g.n; ++i) {
            fv[i] = cplx{dist(rng), dist(rng)};
            gv[i] = cplx{dist(rng), dist(rng)};
        }
        SampledSignal f(g, fv), h(g, gv);
        CHECK(std::abs(inner_product(f, h) - std::conj(inner_product(h, f))) < 1e-14);
    }
}

TEST_CASE("Fourier transform of a delta-like pulse has flat unit magnitude") {
    GridSpec g = unit_interval(512);
    std::vector<double> v(g.n, 0.0);
    v[100] = 1.0 / g.dx;
    SampledSignal f = SampledSignal::from_real(g, v);
    SampledSignal fhat = fourier_transform(f);
    for (std::size_t m = 0; m < fhat.size(); m += 17) {
        CHECK(std::abs(std::abs(fhat[m]) - 1.0) < 1e-12);
    }
}

TEST_CASE("Fourier transform of cos(w0 x) over full periods is two spectral lines") {
    GridSpec g = unit_interval(512);
    const int cycles = 9;
    const double w0 = 2.0 * pi * cycles;
    SampledSignal f = SampledSignal::sample_real(g, [&](double x) { return std::cos(w0 * x); });
    SampledSignal fhat = fourier_transform(f);
    // Peak bins sit at xi = +-w0; everything else is numerically zero.
    const double dxi = fhat.grid().dx;
    std::size_t hits = 0;
    for (std::size_t m = 0; m < fhat.size(); ++m) {
        const double xi = fhat.grid().x_at(m);
        const double mag = std::abs(fhat[m]);
        if (std::abs(std::abs(xi) - w0) < 0.5 * dxi) {
            CHECK(std::abs(mag - 0.5) < 1e-10);  // each line carries amplitude 1/2
            ++hits;
        } else {
            CHECK(mag < 1e-10);
        }
    }
    CHECK(hits == 2);
}

TEST_CASE("Parseval identity in the continuous convention") {
    GridSpec g = unit_interval(512);
    SampledSignal f = random_real(g, 2024);
    SampledSignal fhat = fourier_transform(f);
    // Oracle: direct summation of both sides.
    double lhs = 0.0;
    for (const auto& v : fhat.samples()) lhs += std::norm(v);
    lhs *= fhat.grid().dx;
    double rhs = 0.0;
    for (const auto& v : f.samples()) rhs += std::norm(v);
    rhs *= 2.0 * pi * f.dx();
    CHECK(std::abs(lhs - rhs) < 1e-10 * rhs);
}
