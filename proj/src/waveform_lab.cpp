// SPDX-License-Identifier: Apache-2.0
//
// amroc - analog MIMO radio-over-copper fronthaul simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#include "amroc/waveform_lab.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>

#include <fftw3.h>
#include <fmt/core.h>
#include <json.hpp>

#include "amroc/rng.hpp"

namespace amroc {

std::string_view to_string(Modulation m) {
    switch (m) {
        case Modulation::QPSK: return "qpsk";
        case Modulation::QAM16: return "16qam";
        case Modulation::QAM64: return "64qam";
    }
    return "?";
}

std::optional<Modulation> parse_modulation(std::string_view s) {
    for (auto m : {Modulation::QPSK, Modulation::QAM16, Modulation::QAM64})
        if (s == to_string(m)) return m;
    return std::nullopt;
}

int bits_per_symbol(Modulation m) {
    switch (m) {
        case Modulation::QPSK: return 2;
        case Modulation::QAM16: return 4;
        case Modulation::QAM64: return 6;
    }
    return 0;
}

WaveformSpec WaveformSpec::defaults(Rat rat) {
    WaveformSpec s;
    s.rat = rat;
    switch (rat) {
        case Rat::LTE:
            s.bandwidth_hz = 5.0e6;
            s.fft_size = 512;
            s.occupied = 300;
            s.cp_fraction = 36.0 / 512.0;
            s.subcarrier_spacing_hz = 15.0e3;
            s.modulation = Modulation::QAM16;
            break;
        case Rat::WiFi:
            s.bandwidth_hz = 20.0e6;
            s.fft_size = 64;
            s.occupied = 52;
            s.cp_fraction = 0.25;
            s.subcarrier_spacing_hz = 312.5e3;
            s.n_symbols = 64;
            s.modulation = Modulation::QAM16;
            break;
        case Rat::WiMAX:
        case Rat::Generic:
            break;
    }
    return s;
}

int WaveformSpec::cp_length() const {
    return static_cast<int>(std::lround(cp_fraction * ifft_size()));
}

void WaveformSpec::validate() const {
    auto fail = [](const std::string& m) { throw std::invalid_argument(m); };
    if (fft_size < 8) fail("waveform.fft_size must be >= 8");
    if (occupied < 1 || occupied >= fft_size) fail("waveform.occupied must be in [1, fft_size)");
    if (occupied % 2 != 0) fail("waveform.occupied must be even (symmetric around DC)");
    if (!(cp_fraction >= 0.0 && cp_fraction <= 0.5)) fail("waveform.cp_fraction must be in [0, 0.5]");
    if (n_symbols < 1) fail("waveform.n_symbols must be >= 1");
    if (oversample < 1) fail("waveform.oversample must be >= 1");
    if (pilot_spacing < 1) fail("waveform.pilot_spacing must be >= 1");
    if (!(subcarrier_spacing_hz > 0.0)) fail("waveform.subcarrier_spacing_hz must be > 0");
    if (!(bandwidth_hz > 0.0)) fail("waveform.bandwidth_hz must be > 0");
    if (code_rate.num < 1 || code_rate.den < code_rate.num) fail("waveform.code_rate must be in (0, 1]");
}

namespace {

// FFTW plan cache; planning is not thread-safe, execution on new arrays is.
class Fft {
public:
    explicit Fft(int n) : n_(n) {
        std::lock_guard<std::mutex> lock(planner_mutex());
        auto* in = fftw_alloc_complex(static_cast<std::size_t>(n));
        auto* out = fftw_alloc_complex(static_cast<std::size_t>(n));
        fwd_ = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
        inv_ = fftw_plan_dft_1d(n, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
        fftw_free(in);
        fftw_free(out);
    }
    ~Fft() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(inv_);
    }
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    // Unnormalized transforms.
    std::vector<cplx> forward(std::span<const cplx> x) const { return run(fwd_, x); }
    std::vector<cplx> inverse(std::span<const cplx> x) const { return run(inv_, x); }

private:
    static std::mutex& planner_mutex() {
        static std::mutex m;
        return m;
    }
    std::vector<cplx> run(fftw_plan p, std::span<const cplx> x) const {
        if (static_cast<int>(x.size()) != n_) throw std::logic_error("fft size mismatch");
        auto* in = fftw_alloc_complex(static_cast<std::size_t>(n_));
        auto* out = fftw_alloc_complex(static_cast<std::size_t>(n_));
        std::copy(x.begin(), x.end(), reinterpret_cast<cplx*>(in));
        fftw_execute_dft(p, in, out);
        const auto* o = reinterpret_cast<const cplx*>(out);
        std::vector<cplx> y(o, o + x.size());
        fftw_free(in);
        fftw_free(out);
        return y;
    }

    int n_;
    fftw_plan fwd_;
    fftw_plan inv_;
};

cplx qam_point(Modulation m, std::uint64_t bits) {
    // Gray-free square constellations, unit average power.
    const int k = bits_per_symbol(m) / 2;
    const int levels = 1 << k;
    const auto i = static_cast<int>(bits & static_cast<std::uint64_t>(levels - 1));
    const auto q = static_cast<int>((bits >> k) & static_cast<std::uint64_t>(levels - 1));
    const double norm = std::sqrt(2.0 * (levels * levels - 1) / 3.0);
    return {(2.0 * i - levels + 1) / norm, (2.0 * q - levels + 1) / norm};
}

std::size_t bin_of(int carrier, int n) {
    return static_cast<std::size_t>((carrier % n + n) % n);
}

double mean_power(std::span<const cplx> x) {
    double p = 0.0;
    for (const auto& v : x) p += std::norm(v);
    return x.empty() ? 0.0 : p / static_cast<double>(x.size());
}

}  // namespace

OfdmFrame gen_waveform(const WaveformSpec& spec) {
    spec.validate();
    OfdmFrame f;
    f.spec = spec;
    const int half = spec.occupied / 2;
    for (int k = -half; k <= half; ++k) {
        if (k == 0) continue;
        const auto slot = f.carriers.size();
        f.carriers.push_back(k);
        f.is_pilot.push_back(spec.all_pilot || slot % static_cast<std::size_t>(spec.pilot_spacing) == 0);
    }

    std::mt19937_64 payload(split_seed(spec.seed, "payload"));
    std::mt19937_64 pilots(split_seed(spec.seed, "pilots"));
    const int n = spec.ifft_size();
    const int cp = spec.cp_length();
    const Fft fft(n);
    std::vector<cplx> raw;
    raw.reserve(spec.frame_length());
    for (int s = 0; s < spec.n_symbols; ++s) {
        std::vector<cplx> pts(f.carriers.size());
        std::vector<cplx> grid(static_cast<std::size_t>(n), cplx{0.0, 0.0});
        for (std::size_t i = 0; i < pts.size(); ++i) {
            pts[i] = f.is_pilot[i] ? cplx{(pilots() & 1U) ? 1.0 : -1.0, 0.0} : qam_point(spec.modulation, payload());
            grid[bin_of(f.carriers[i], n)] = pts[i];
        }
        const auto body = fft.inverse(grid);
        raw.insert(raw.end(), body.end() - cp, body.end());
        raw.insert(raw.end(), body.begin(), body.end());
        f.symbols.push_back(std::move(pts));
    }
    f.scale = 1.0 / std::sqrt(mean_power(raw));
    for (auto& v : raw) v *= f.scale;
    f.samples = std::move(raw);
    return f;
}

std::vector<std::vector<cplx>> demodulate(const OfdmFrame& frame, std::span<const cplx> rx) {
    const auto& spec = frame.spec;
    if (rx.size() < spec.frame_length()) throw std::invalid_argument("demodulate: capture shorter than the frame");
    const int n = spec.ifft_size();
    const int cp = spec.cp_length();
    const Fft fft(n);
    std::vector<std::vector<cplx>> out;
    for (int s = 0; s < spec.n_symbols; ++s) {
        const auto start = static_cast<std::size_t>(s) * static_cast<std::size_t>(spec.symbol_length()) +
                           static_cast<std::size_t>(cp);
        const auto y = fft.forward(rx.subspan(start, static_cast<std::size_t>(n)));
        std::vector<cplx> pts(frame.carriers.size());
        for (std::size_t i = 0; i < pts.size(); ++i)
            pts[i] = y[bin_of(frame.carriers[i], n)] / (frame.scale * n);
        out.push_back(std::move(pts));
    }
    return out;
}

void ImpairmentChain::validate(double occupied_bandwidth_hz) const {
    if (!(sample_rate_hz >= 2.0 * occupied_bandwidth_hz))
        throw std::invalid_argument(fmt::format("chain.sample_rate_hz {} is below twice the occupied bandwidth {}",
                                                sample_rate_hz, occupied_bandwidth_hz));
    if (std::isnan(gain_db) || std::isnan(noise_psd_dbm_hz) || std::isnan(nonlin_clip_dbm) ||
        !std::isfinite(lo_detune_hz))
        throw std::invalid_argument("chain parameters must be numbers");
}

double rapp_saturation_amplitude(double p1db_dbm) {
    // |y/x|^2 = 1 / (1 + r^2) = 10^-0.1 at r = a_1dB / a_sat
    const double r = std::sqrt(std::pow(10.0, 0.1) - 1.0);
    return std::sqrt(dbm_to_mw(p1db_dbm)) / r;
}

std::vector<cplx> apply_chain(std::span<const cplx> x, const ImpairmentChain& chain, double input_power_dbm,
                              std::uint64_t noise_seed) {
    std::vector<cplx> y(x.begin(), x.end());
    for (const auto& v : y)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("apply_chain: non-finite input sample");
    const double p = mean_power(y);
    if (p > 0.0) {
        // An input already at the target power passes through bit-exact.
        const double s = std::sqrt(dbm_to_mw(input_power_dbm) / p);
        if (std::abs(s - 1.0) > 1e-12)
            for (auto& v : y) v *= s;
    }
    if (std::isfinite(chain.nonlin_clip_dbm)) {
        const double a_sat = rapp_saturation_amplitude(chain.nonlin_clip_dbm);
        for (auto& v : y) v /= std::sqrt(1.0 + std::norm(v) / (a_sat * a_sat));
    }
    const double g = db_to_lin_amp(chain.gain_db);
    for (auto& v : y) v *= g;
    if (std::isfinite(chain.noise_psd_dbm_hz)) {
        std::mt19937_64 rng(noise_seed);
        std::normal_distribution<double> n01(0.0, 1.0);
        const double sigma = std::sqrt(dbm_to_mw(chain.noise_psd_dbm_hz) * chain.sample_rate_hz / 2.0);
        for (auto& v : y) {
            const double re = n01(rng);
            const double im = n01(rng);
            v += sigma * cplx{re, im};
        }
    }
    if (chain.lo_detune_hz != 0.0) {
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] *= std::polar(1.0, 2.0 * kPi * chain.lo_detune_hz * static_cast<double>(i) / chain.sample_rate_hz);
    }
    return y;
}

double estimate_cfo_hz(std::span<const cplx> ref, std::span<const cplx> rx, double fs_hz) {
    if (ref.size() != rx.size() || ref.empty()) throw std::invalid_argument("estimate_cfo_hz: length mismatch");
    std::vector<cplx> z(ref.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = rx[i] * std::conj(ref[i]);

    std::size_t pad = 1;
    while (pad < 8 * z.size()) pad <<= 1;
    std::vector<cplx> zp(pad, cplx{0.0, 0.0});
    std::copy(z.begin(), z.end(), zp.begin());
    const Fft fft(static_cast<int>(pad));
    const auto spec = fft.forward(zp);
    std::size_t k = 0;
    for (std::size_t i = 1; i < pad; ++i)
        if (std::abs(spec[i]) > std::abs(spec[k])) k = i;
    if (std::abs(spec[k]) == 0.0) return 0.0;

    const double a = std::abs(spec[(k + pad - 1) % pad]);
    const double b = std::abs(spec[k]);
    const double c = std::abs(spec[(k + 1) % pad]);
    const double den = a - 2.0 * b + c;
    const double frac = den != 0.0 ? 0.5 * (a - c) / den : 0.0;
    double bin = static_cast<double>(k) + frac;
    if (bin > static_cast<double>(pad) / 2.0) bin -= static_cast<double>(pad);
    const double coarse = bin * fs_hz / static_cast<double>(pad);

    // Golden-section search of the continuous periodogram around the peak.
    auto power = [&](double f) {
        cplx acc{0.0, 0.0};
        const cplx step = std::polar(1.0, -2.0 * kPi * f / fs_hz);
        cplx rot{1.0, 0.0};
        for (std::size_t i = 0; i < z.size(); ++i) {
            acc += z[i] * rot;
            rot *= step;
            if ((i & 1023U) == 1023U) rot = std::polar(1.0, -2.0 * kPi * f * static_cast<double>(i + 1) / fs_hz);
        }
        return std::norm(acc);
    };
    const double width = fs_hz / static_cast<double>(pad);
    double lo = coarse - width;
    double hi = coarse + width;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double f1 = power(x1);
    double f2 = power(x2);
    for (int it = 0; it < 60 && hi - lo > 1e-6; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = power(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = power(x1);
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

struct Equalized {
    std::vector<std::vector<cplx>> y;  // equalized slots
    cplx h{1.0, 0.0};                  // pilot LS gain before equalization
    double cfo_hz = 0.0;
};

Equalized equalize(const OfdmFrame& ref, std::span<const cplx> rx) {
    if (rx.size() != ref.samples.size()) throw std::invalid_argument("capture and reference lengths differ");
    if (mean_power(ref.samples) == 0.0) throw std::invalid_argument("reference is all zero");
    Equalized e;
    const double fs = ref.spec.sample_rate_hz();
    e.cfo_hz = estimate_cfo_hz(ref.samples, rx, fs);
    std::vector<cplx> d(rx.begin(), rx.end());
    for (std::size_t i = 0; i < d.size(); ++i)
        d[i] *= std::polar(1.0, -2.0 * kPi * e.cfo_hz * static_cast<double>(i) / fs);
    e.y = demodulate(ref, d);

    cplx num{0.0, 0.0};
    double den = 0.0;
    for (std::size_t s = 0; s < e.y.size(); ++s)
        for (std::size_t i = 0; i < e.y[s].size(); ++i)
            if (ref.is_pilot[i]) {
                num += e.y[s][i] * std::conj(ref.symbols[s][i]);
                den += std::norm(ref.symbols[s][i]);
            }
    e.h = den > 0.0 ? num / den : cplx{0.0, 0.0};
    if (std::abs(e.h) > 0.0)
        for (auto& sym : e.y)
            for (auto& v : sym) v /= e.h;
    return e;
}

}  // namespace

double measure_evm(const OfdmFrame& ref, std::span<const cplx> rx) {
    const auto e = equalize(ref, rx);
    const bool any_data = std::find(ref.is_pilot.begin(), ref.is_pilot.end(), false) != ref.is_pilot.end();
    double err = 0.0;
    double sig = 0.0;
    for (std::size_t s = 0; s < e.y.size(); ++s)
        for (std::size_t i = 0; i < e.y[s].size(); ++i) {
            if (any_data && ref.is_pilot[i]) continue;
            err += std::norm(e.y[s][i] - ref.symbols[s][i]);
            sig += std::norm(ref.symbols[s][i]);
        }
    if (std::abs(e.h) == 0.0) return 0.0;
    if (err == 0.0) return kEvmFloorDb;
    return std::max(kEvmFloorDb, 10.0 * std::log10(err / sig));
}

double measure_crest_factor(std::span<const cplx> x) {
    const double p = mean_power(x);
    if (p == 0.0) throw std::invalid_argument("crest factor of an all-zero signal");
    double peak = 0.0;
    for (const auto& v : x) peak = std::max(peak, std::norm(v));
    return 10.0 * std::log10(peak / p);
}

PowerMetrics measure_power_metrics(const OfdmFrame& ref, std::span<const cplx> capture, std::size_t burst_begin) {
    const auto len = ref.samples.size();
    if (burst_begin + len > capture.size()) throw std::invalid_argument("burst exceeds the capture");
    const auto burst = capture.subspan(burst_begin, len);
    PowerMetrics m;
    m.rssi_dbm = mw_to_dbm(mean_power(capture));
    m.burst_power_dbm = mw_to_dbm(mean_power(burst));

    const auto e = equalize(ref, burst);
    double res = 0.0;
    double sig = 0.0;
    for (std::size_t s = 0; s < e.y.size(); ++s)
        for (std::size_t i = 0; i < e.y[s].size(); ++i)
            if (ref.is_pilot[i]) {
                res += std::norm(e.y[s][i] - ref.symbols[s][i]);
                sig += std::norm(ref.symbols[s][i]);
            }
    m.cinr_db = res > 0.0 ? std::min(kCinrCapDb, 10.0 * std::log10(sig / res)) : kCinrCapDb;
    return m;
}

double clock_error_ppm(double nominal_hz, double measured_hz) {
    if (!(nominal_hz > 0.0)) throw std::invalid_argument("nominal clock must be > 0");
    return 1e6 * (measured_hz - nominal_hz) / nominal_hz;
}

LinkMetrics analyze_capture(const OfdmFrame& ref, std::span<const cplx> capture, std::size_t burst_begin,
                            double nominal_clock_hz, double measured_clock_hz) {
    const auto burst = capture.subspan(burst_begin, ref.samples.size());
    const auto pm = measure_power_metrics(ref, capture, burst_begin);
    LinkMetrics m;
    m.evm_db = measure_evm(ref, burst);
    m.crest_factor_db = measure_crest_factor(burst);
    m.burst_power_dbm = pm.burst_power_dbm;
    m.rssi_dbm = pm.rssi_dbm;
    m.cinr_db = pm.cinr_db;
    m.cfe_hz = estimate_cfo_hz(ref.samples, burst, ref.spec.sample_rate_hz());
    m.clock_error_ppm = clock_error_ppm(nominal_clock_hz, measured_clock_hz);
    return m;
}

void write_waveform(const std::filesystem::path& base, std::span<const cplx> samples, double sample_rate_hz,
                    double center_hz) {
    auto bin_path = base;
    bin_path += ".bin";
    auto json_path = base;
    json_path += ".json";
    std::ofstream bin(bin_path, std::ios::binary);
    if (!bin) throw std::runtime_error(fmt::format("cannot open {}", bin_path.string()));
    for (const auto& v : samples) {
        for (const float f : {static_cast<float>(v.real()), static_cast<float>(v.imag())}) {
            auto u = std::bit_cast<std::uint32_t>(f);
            if constexpr (std::endian::native == std::endian::big)
                u = ((u & 0xFFU) << 24) | ((u & 0xFF00U) << 8) | ((u >> 8) & 0xFF00U) | (u >> 24);
            char bytes[4];
            std::memcpy(bytes, &u, 4);
            bin.write(bytes, 4);
        }
    }
    nlohmann::ordered_json j;
    j["sample_rate_hz"] = sample_rate_hz;
    j["center_hz"] = center_hz;
    j["length"] = samples.size();
    j["format"] = "cf32_le";
    std::ofstream js(json_path);
    if (!js) throw std::runtime_error(fmt::format("cannot open {}", json_path.string()));
    js << j.dump(2) << '\n';
}

}  // namespace amroc
