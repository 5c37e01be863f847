// SPDX-License-Identifier: Apache-2.0
//
// Serialization: signals to CSV (columns x, re, im) and a compact binary form
// (magic "DTSG", little-endian f64); coefficient grids and shift-error reports
// to CSV/JSON. CSV floats use the shortest round-trip decimal form.

#pragma once

#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dtcwt/dtcwt.hpp"
#include "dtcwt/shift_metrics.hpp"
#include "dtcwt/signal.hpp"
#include "dtcwt/wavelets.hpp"

namespace dtcwt {

using json = nlohmann::json;

namespace detail {

// Shortest decimal that round-trips to the same double.
inline std::string shortest(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("shortest: to_chars failed");
    return std::string(buf, ptr);
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <typename T>
void put_le(std::string& out, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));  // little-endian hosts only, which this targets
}

template <typename T>
T get_le(const std::string& in, std::size_t& off) {
    if (off + sizeof(T) > in.size()) throw std::runtime_error("DTSG: truncated stream");
    T v;
    std::memcpy(&v, in.data() + off, sizeof(T));
    off += sizeof(T);
    return v;
}

}  // namespace detail

// --- signal CSV -------------------------------------------------------------

inline std::string signal_to_csv(const SampledSignal& f) {
    std::string out = "x,re,im\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        out += detail::shortest(f.grid().x_at(i));
        out += ',';
        out += detail::shortest(f[i].real());
        out += ',';
        out += detail::shortest(f[i].imag());
        out += '\n';
    }
    return out;
}

inline SampledSignal signal_from_csv(const std::string& csv, bool periodic = false,
                                     std::string label = {}) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,re,im", 0) != 0)
        throw std::runtime_error("signal CSV: missing 'x,re,im' header");
    std::vector<double> xs;
    std::vector<cplx> samples;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double v[3];
        const char* p = line.c_str();
        const char* end = p + line.size();
        for (int c = 0; c < 3; ++c) {
            auto [next, ec] = std::from_chars(p, end, v[c]);
            if (ec != std::errc{}) throw std::runtime_error("signal CSV: bad number in: " + line);
            p = next;
            if (c < 2) {
                if (p == end || *p != ',') throw std::runtime_error("signal CSV: expected ',' in: " + line);
                ++p;
            }
        }
        xs.push_back(v[0]);
        samples.push_back(cplx{v[1], v[2]});
    }
    if (xs.size() < 2) throw std::runtime_error("signal CSV: need at least two rows");
    GridSpec g{xs.size(), xs.front(), (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1),
               periodic};
    return SampledSignal(g, std::move(samples), std::move(label));
}

// --- signal binary ("DTSG") ---------------------------------------------------

inline std::string signal_to_binary(const SampledSignal& f) {
    std::string out;
    out.reserve(32 + f.size() * 16 + f.label().size());
    out += "DTSG";
    detail::put_le<std::uint32_t>(out, 1);  // version
    std::uint32_t flags = 0;
    if (f.is_real()) flags |= 1u;
    if (f.periodic()) flags |= 2u;
    detail::put_le<std::uint32_t>(out, flags);
    detail::put_le<std::uint64_t>(out, f.size());
    detail::put_le<double>(out, f.grid().x0);
    detail::put_le<double>(out, f.grid().dx);
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(f.label().size()));
    out += f.label();
    for (const auto& v : f.samples()) {
        detail::put_le<double>(out, v.real());
        detail::put_le<double>(out, v.imag());
    }
    return out;
}

inline SampledSignal signal_from_binary(const std::string& blob) {
    if (blob.size() < 4 || blob.compare(0, 4, "DTSG") != 0)
        throw std::runtime_error("DTSG: bad magic");
    std::size_t off = 4;
    const auto version = detail::get_le<std::uint32_t>(blob, off);
    if (version != 1) throw std::runtime_error("DTSG: unsupported version " + std::to_string(version));
    const auto flags = detail::get_le<std::uint32_t>(blob, off);
    const auto n = detail::get_le<std::uint64_t>(blob, off);
    const double x0 = detail::get_le<double>(blob, off);
    const double dx = detail::get_le<double>(blob, off);
    const auto label_len = detail::get_le<std::uint32_t>(blob, off);
    if (off + label_len > blob.size()) throw std::runtime_error("DTSG: truncated label");
    std::string label = blob.substr(off, label_len);
    off += label_len;
    std::vector<cplx> samples(n);
    for (auto& v : samples) {
        const double re = detail::get_le<double>(blob, off);
        const double im = detail::get_le<double>(blob, off);
        v = cplx{re, im};
    }
    GridSpec g{static_cast<std::size_t>(n), x0, dx, (flags & 2u) != 0};
    return SampledSignal(g, std::move(samples), std::move(label));
}

// --- coefficient grid --------------------------------------------------------

inline std::string coeffs_to_csv(const CoeffGrid& coeffs) {
    std::string out = "j,k,a,b,re_c,im_c,abs_c,phase_c\n";
    for (int j : coeffs.scales()) {
        for (long k = coeffs.k_min(j); k <= coeffs.k_max(j); ++k) {
            const cplx c = coeffs.c(j, k);
            out += std::to_string(j);
            out += ',';
            out += std::to_string(k);
            out += ',';
            out += detail::shortest(coeffs.a(j, k));
            out += ',';
            out += detail::shortest(coeffs.b(j, k));
            out += ',';
            out += detail::shortest(c.real());
            out += ',';
            out += detail::shortest(c.imag());
            out += ',';
            out += detail::shortest(coeffs.abs_c(j, k));
            out += ',';
            out += detail::shortest(coeffs.phase(j, k));
            out += '\n';
        }
    }
    return out;
}

inline json coeffs_to_json(const CoeffGrid& coeffs) {
    json rows = json::array();
    for (int j : coeffs.scales()) {
        for (long k = coeffs.k_min(j); k <= coeffs.k_max(j); ++k) {
            const cplx c = coeffs.c(j, k);
            rows.push_back({{"j", j},
                            {"k", k},
                            {"a", coeffs.a(j, k)},
                            {"b", coeffs.b(j, k)},
                            {"re_c", c.real()},
                            {"im_c", c.imag()},
                            {"abs_c", coeffs.abs_c(j, k)},
                            {"phase_c", coeffs.phase(j, k)}});
        }
    }
    return json{{"schema", 1},
                {"pair", coeffs.pair_label()},
                {"periodic_k", coeffs.periodic_k()},
                {"coefficients", rows}};
}

// --- wavelet pair sidecar ------------------------------------------------------

inline json pair_to_json(const WaveletPair& pair) {
    json j{{"schema", 1},
           {"label", pair.label},
           {"window", window_kind_name(pair.psi.window.kind)},
           {"omega0", pair.psi.omega0},
           {"xi0", pair.psi.xi0},
           {"band_limit", pair.psi.band_limit},
           {"amplitude", pair.psi.amplitude},
           {"orthonormal", pair.orthonormal},
           {"exactly_modulated", pair.exactly_modulated},
           {"psi_prime_analytic", pair.psi_prime_analytic},
           {"bedrosian_defect", pair.bedrosian_defect}};
    if (pair.psi.window.kind == WindowKind::gaussian) j["sigma"] = pair.psi.window.sigma;
    if (pair.psi.window.kind == WindowKind::raised_cosine) {
        j["p"] = pair.psi.window.p;
        j["q"] = pair.psi.window.q;
        j["lipschitz"] = pair.lipschitz;
    }
    return j;
}

// --- shift-error report ----------------------------------------------------------

inline std::string shift_report_to_csv(const ShiftErrorReport& report) {
    std::string out =
        "j,k,abs_c,complex_optimal,complex_phasecomp,real,imag,phi,re_R,im_R,abs_R_minus_i,"
        "re_E,im_E,re_W,im_W,alpha,beta,significant,degenerate\n";
    for (const ShiftRecord& r : report.records) {
        const double dist_i = r.degenerate_R ? -1.0 : std::abs(r.R - cplx{0.0, 1.0});
        out += std::to_string(r.j);
        out += ',';
        out += std::to_string(r.k);
        for (double v : {r.abs_c, r.complex_optimal, r.complex_phasecomp, r.real_err, r.imag_err,
                         r.phi, r.R.real(), r.R.imag(), dist_i, r.E.real(), r.E.imag(), r.W.real(),
                         r.W.imag(), r.alpha, r.beta}) {
            out += ',';
            out += detail::shortest(v);
        }
        out += ',';
        out += r.significant ? '1' : '0';
        out += ',';
        out += (r.degenerate_c || r.degenerate_R) ? '1' : '0';
        out += '\n';
    }
    return out;
}

inline json shift_report_to_json(const ShiftErrorReport& report) {
    json records = json::array();
    for (const ShiftRecord& r : report.records) {
        records.push_back({{"j", r.j},
                           {"k", r.k},
                           {"abs_c", r.abs_c},
                           {"complex_optimal", r.complex_optimal},
                           {"complex_phasecomp", r.complex_phasecomp},
                           {"real", r.real_err},
                           {"imag", r.imag_err},
                           {"phi", r.phi},
                           {"re_R", r.R.real()},
                           {"im_R", r.R.imag()},
                           {"significant", r.significant},
                           {"sens_a_at_h", r.sens_a_at_h},
                           {"sens_b_at_h", r.sens_b_at_h},
                           {"real_branch_degenerate", r.real_branch_degenerate},
                           {"imag_branch_degenerate", r.imag_branch_degenerate},
                           {"degenerate_c", r.degenerate_c},
                           {"degenerate_R", r.degenerate_R}});
    }
    return json{{"schema", 1},
                {"pair", report.pair_label},
                {"h", report.h},
                {"phi_policy", phi_policy_name(report.policy)},
                {"compensation_omega0", report.compensation_omega0},
                {"significance_floor", report.significance_floor},
                {"branch_floor", report.branch_floor},
                {"modulation_consistent", report.modulation_consistent},
                {"degenerate_count", report.degenerate_count},
                {"warnings", report.warnings},
                {"records", records}};
}

// --- bound checks ----------------------------------------------------------------

inline json bound_check_to_json(const BoundCheck& c) {
    return json{{"name", c.name},       {"lhs", c.lhs},
                {"rhs", c.rhs},         {"passed", c.passed},
                {"margin", c.margin},   {"applicable", c.applicable},
                {"note", c.note},       {"j", c.j},
                {"k", c.k},             {"h", c.h},
                {"pair", c.pair_label}};
}

inline std::string bound_check_summary_line(const BoundCheck& c) {
    std::ostringstream os;
    if (!c.applicable) {
        os << "[ n/a ] " << c.name << " (j=" << c.j << ",k=" << c.k << ",h=" << c.h
           << "): " << c.note;
    } else {
        os << (c.passed ? "[ ok  ] " : "[FAIL ] ") << c.name << " (j=" << c.j << ",k=" << c.k
           << ",h=" << c.h << "): lhs=" << c.lhs << " rhs=" << c.rhs << " margin=" << c.margin;
    }
    return os.str();
}

}  // namespace dtcwt
