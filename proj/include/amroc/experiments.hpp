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
#include <string>
#include <vector>

#include "amroc/channel_models.hpp"
#include "amroc/link_algebra.hpp"
#include "amroc/waveform_lab.hpp"

namespace amroc {

// ---------------------------------------------------------------------------
// Lab link: one signal over one pair, generator -> L2CC -> cable -> L2CC
// ---------------------------------------------------------------------------

struct LabLink {
    CableSpec cable;
    FrontEndSpec frontend;
    double rf_center_hz = 2.63e9;
    double if_hz = 140.0e6;
    double bandwidth_hz = 7.0e6;
    double lo_detune_hz = 0.0;  ///< f_U - f_D
    int pair = 0;
};

/// Mean |A(0,0)|^2 over the signal band, dB. Identical for either direction
/// of the link.
double lab_link_gain_db(const LabLink& link);

struct EvmSweepOptions {
    WaveformSpec waveform = WaveformSpec::defaults(Rat::WiMAX);
    double gain_db = -50.0;
    double analyzer_noise_dbm_hz = -150.0;
    double p1db_dbm = 5.0;
    double lo_detune_hz = 0.0;
    std::vector<double> input_power_dbm = default_power_grid();
    std::uint64_t seed = 1;
    /// Share of the capture with the burst off (RSSI vs burst power).
    double idle_fraction = 0.0;
    double clock_nominal_hz = 10.0e6;
    double clock_stability_ppm = 0.05;
    int threads = 1;

    static std::vector<double> default_power_grid();  ///< -30..+5 dBm, 1 dB
    void validate() const;
};

struct EvmSweepRow {
    double input_power_dbm = 0.0;
    double snr_db = 0.0;  ///< in-band SNR at the analyzer
    LinkMetrics metrics;
};

/// In-band SNR at the analyzer for a given input power, ignoring the limiter.
double in_band_snr_db(const EvmSweepOptions& opt, double input_power_dbm);

/// One capture per input power. The payload and the noise realization are
/// shared by every point (common random numbers); the clock drift of each
/// point is drawn from split_seed(seed, "clock", i) within the stability
/// bound. Rows come back in grid order for any thread count.
std::vector<EvmSweepRow> evm_sweep(const EvmSweepOptions& opt);

/// The reference frame every sweep point transmits.
OfdmFrame evm_sweep_reference(const EvmSweepOptions& opt);

/// Analyzer capture of sweep point i (idle prefix included), exactly as
/// measured by evm_sweep.
std::vector<cplx> evm_sweep_capture(const EvmSweepOptions& opt, const OfdmFrame& ref, std::size_t i);

/// CSV header "sweep_var,value,evm_db,cf_db,rssi_dbm,bp_dbm,cinr_db,cfe_hz,ce_ppm".
void write_evm_csv(std::span<const EvmSweepRow> rows, std::ostream& os);

// ---------------------------------------------------------------------------
// End-to-end LTE 2x2 over two pairs, optional WiFi coexistence
// ---------------------------------------------------------------------------

struct ThroughputStudyOptions {
    CableSpec cable;
    FrontEndSpec frontend;
    double lte_rf_hz = 2.595e9;
    double lte_bandwidth_hz = 5.0e6;
    double lte_power_dbm = -20.0;
    int lte_rank = 2;
    std::vector<double> lte_if_hz{75.0e6, 175.0e6, 400.0e6};
    std::vector<int> mcs = all_lte_mcs();
    double ue_noise_dbm_hz = -150.0;
    NoiseModel noise;  ///< cable noise seen through B

    bool wifi_case = true;
    double wifi_rf_hz = 2.412e9;
    double wifi_bandwidth_hz = 20.0e6;
    double wifi_power_dbm = 0.0;
    double wifi_if_hz = 175.0e6;
    int wifi_pair = 2;
    ThroughputOptions link;

    static std::vector<int> all_lte_mcs();  ///< 0..28
    void validate() const;
};

struct ThroughputRow {
    std::string scenario;  ///< "lte" or "lte+wifi"
    int mcs = 0;
    double if_hz = 0.0;
    double sinr_db = 0.0;
    double throughput_mbps = 0.0;
};

/// Post-equalization SINR of the weaker LTE layer, averaged over the LTE
/// band. Crosstalk between the two LTE pairs is part of the 2x2 channel;
/// a WiFi line on another pair at the same IF is interference, counted by
/// the share of its power inside the LTE occupied band.
double lte_sinr_db(const ThroughputStudyOptions& opt, double lte_if_hz, bool with_wifi);

/// Rows for every (IF, MCS) of the LTE-only case, then the LTE+WiFi case at
/// wifi_if_hz when enabled.
std::vector<ThroughputRow> throughput_study(const ThroughputStudyOptions& opt);

/// CSV header "scenario,mcs,if_hz,sinr_db,throughput_mbps".
void write_throughput_csv(std::span<const ThroughputRow> rows, std::ostream& os);

}  // namespace amroc
