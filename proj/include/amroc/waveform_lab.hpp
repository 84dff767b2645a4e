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


#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "amroc/signal.hpp"
#include "amroc/units.hpp"

namespace amroc {

enum class Modulation { QPSK, QAM16, QAM64 };

std::string_view to_string(Modulation m);
std::optional<Modulation> parse_modulation(std::string_view s);
int bits_per_symbol(Modulation m);

struct CodeRate {
    int num = 3;
    int den = 4;
    double value() const { return static_cast<double>(num) / den; }
};

/// Simplified standard-like OFDM frame. The IFFT runs `oversample` times
/// wider than fft_size so the occupied band sits well inside the sample rate.
struct WaveformSpec {
    Rat rat = Rat::WiMAX;
    double bandwidth_hz = 7.0e6;
    Modulation modulation = Modulation::QAM16;
    CodeRate code_rate;
    int n_symbols = 16;
    int fft_size = 256;
    int occupied = 200;  ///< used subcarriers, DC excluded
    double cp_fraction = 0.25;
    double subcarrier_spacing_hz = 31.25e3;
    int oversample = 2;
    int pilot_spacing = 8;  ///< every k-th occupied carrier is a pilot
    bool all_pilot = false;
    std::uint64_t seed = 1;

    /// WiMAX 7 MHz (256/200, CP 1/4), LTE 5 MHz (512/300), WiFi 20 MHz (64/52).
    static WaveformSpec defaults(Rat rat);

    int ifft_size() const { return fft_size * oversample; }
    int cp_length() const;
    int symbol_length() const { return ifft_size() + cp_length(); }
    std::size_t frame_length() const { return static_cast<std::size_t>(symbol_length()) * n_symbols; }
    double sample_rate_hz() const { return subcarrier_spacing_hz * ifft_size(); }
    double occupied_bandwidth_hz() const { return subcarrier_spacing_hz * occupied; }
    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct OfdmFrame {
    WaveformSpec spec;
    std::vector<cplx> samples;                ///< unit average power
    std::vector<int> carriers;                ///< signed subcarrier index per slot
    std::vector<bool> is_pilot;               ///< per slot
    std::vector<std::vector<cplx>> symbols;   ///< [symbol][slot] transmitted points
    double scale = 1.0;                       ///< time-domain normalization
};

/// Seeded QAM payload with fixed BPSK pilots, normalized to unit power.
OfdmFrame gen_waveform(const WaveformSpec& spec);

/// Per-symbol frequency-domain slots of `rx`, on the same scale as
/// frame.symbols (loopback returns the transmitted points).
std::vector<std::vector<cplx>> demodulate(const OfdmFrame& frame, std::span<const cplx> rx);

/// Passive-chain impairments between the generator and the analyzer.
struct ImpairmentChain {
    double gain_db = 0.0;
    double noise_psd_dbm_hz = -std::numeric_limits<double>::infinity();  ///< -inf disables
    double nonlin_clip_dbm = std::numeric_limits<double>::infinity();    ///< input 1 dB compression
    double lo_detune_hz = 0.0;
    double sample_rate_hz = 16.0e6;
    /// Throws when the sample rate is below twice the occupied bandwidth.
    void validate(double occupied_bandwidth_hz) const;
};

/// Rapp (p = 1) limiter y = x / sqrt(1 + |x/a_sat|^2); this saturation
/// amplitude gives 1 dB compression at `p1db_dbm`. Samples are in sqrt(mW).
double rapp_saturation_amplitude(double p1db_dbm);

/// scale to input power -> soft limiter -> gain -> AWGN -> detune rotation.
/// Output samples are in sqrt(mW). The noise stream comes from `noise_seed`.
/// An input already at the target power is not rescaled, so the identity
/// chain returns x exactly.
std::vector<cplx> apply_chain(std::span<const cplx> x, const ImpairmentChain& chain, double input_power_dbm,
                              std::uint64_t noise_seed);

/// Floor reported for a perfect (or better than -100 dB) EVM.
inline constexpr double kEvmFloorDb = -100.0;
/// Ceiling reported for a noise-free CINR.
inline constexpr double kCinrCapDb = 100.0;

/// Data-aided carrier frequency error of rx against ref, Hz: periodogram
/// peak of rx * conj(ref), parabolic interpolation, then a golden-section
/// refinement. One "bin" is fs / length.
double estimate_cfo_hz(std::span<const cplx> ref, std::span<const cplx> rx, double fs_hz);

/// EVM in dB over the data carriers (pilots when the frame has no data).
/// The analyzer removes CFO and applies one complex gain per frame
/// estimated from the pilots before comparing. Throws std::invalid_argument
/// on length mismatch or an all-zero reference.
double measure_evm(const OfdmFrame& ref, std::span<const cplx> rx);

/// 20 log10(max|x| / rms|x|).
double measure_crest_factor(std::span<const cplx> x);

struct PowerMetrics {
    double rssi_dbm = 0.0;
    double burst_power_dbm = 0.0;
    double cinr_db = 0.0;
};

/// RSSI over the whole capture, burst power over [burst_begin, burst_begin +
/// frame length), CINR from the pilot residuals of the burst.
PowerMetrics measure_power_metrics(const OfdmFrame& ref, std::span<const cplx> capture,
                                   std::size_t burst_begin = 0);

/// 1e6 (measured - nominal) / nominal.
double clock_error_ppm(double nominal_hz, double measured_hz);

struct LinkMetrics {
    double evm_db = 0.0;
    double crest_factor_db = 0.0;
    double burst_power_dbm = 0.0;
    double rssi_dbm = 0.0;
    double cinr_db = 0.0;
    double cfe_hz = 0.0;
    double clock_error_ppm = 0.0;
};

/// Every lab metric for one capture. The burst starts at `burst_begin`;
/// the clock pair feeds the clock-error figure.
LinkMetrics analyze_capture(const OfdmFrame& ref, std::span<const cplx> capture, std::size_t burst_begin,
                            double nominal_clock_hz, double measured_clock_hz);

// ---------------------------------------------------------------------------
// Link abstraction: MCS -> throughput
// ---------------------------------------------------------------------------

struct McsEntry {
    int mcs = 0;
    Modulation modulation = Modulation::QPSK;
    double rate_mbps = 0.0;        ///< per spatial layer at the table bandwidth
    double snr_threshold_db = 0.0;
};

/// Version tag of the shipped tables (LTE 25-PRB TBS, 802.11n 20 MHz).
std::string_view throughput_table_version();

/// Table for a RAT: LTE MCS 0..28, WiFi (802.11n single stream) MCS 0..7.
/// Throws std::invalid_argument for RATs without a table.
std::span<const McsEntry> mcs_table(Rat rat);

struct ThroughputOptions {
    double rolloff_db = 3.0;  ///< BLER roll-off width below the threshold
};

/// Full rate x rank at or above the MCS threshold, linear-in-dB roll-off to
/// zero over `rolloff_db` below it. LTE rates scale with the PRB count of the
/// bandwidth; WiFi supports 20 and 40 MHz. Throws std::invalid_argument for
/// an unknown MCS, bandwidth or rank < 1.
double throughput_mbps(double snr_db, int mcs, Rat rat, double bandwidth_hz, int rank,
                       const ThroughputOptions& opt = {});

// ---------------------------------------------------------------------------
// Waveform dumps
// ---------------------------------------------------------------------------

/// Writes `<base>.bin` (interleaved re/im float32, little-endian) and
/// `<base>.json` with sample_rate_hz, center_hz and length.
void write_waveform(const std::filesystem::path& base, std::span<const cplx> samples, double sample_rate_hz,
                    double center_hz);

}  // namespace amroc
