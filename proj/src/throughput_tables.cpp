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


// MCS tables for the link abstraction. Bump kVersion whenever a value here
// changes; the version is written into every throughput summary.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

#include "amroc/waveform_lab.hpp"

namespace amroc {

namespace {

constexpr std::string_view kVersion = "amroc-mcs-tables/1 (lte-tbs-25prb, 80211n-20mhz-800ns)";

// Transport block size for 25 PRBs, indexed by ITBS 0..26.
constexpr std::array<int, 27> kLteTbs25{680,  904,  1096, 1416, 1800, 2216, 2600, 3112, 3496,
                                        4008, 4392, 4968, 5736, 6456, 7224, 7736, 7992, 9144,
                                        9912, 10680, 11448, 12576, 13536, 14112, 15264, 15840, 18336};

// MCS -> (modulation, ITBS).
struct LteMcs {
    Modulation mod;
    int itbs;
};
constexpr std::array<LteMcs, 29> kLteMcs{{
    {Modulation::QPSK, 0},   {Modulation::QPSK, 1},   {Modulation::QPSK, 2},   {Modulation::QPSK, 3},
    {Modulation::QPSK, 4},   {Modulation::QPSK, 5},   {Modulation::QPSK, 6},   {Modulation::QPSK, 7},
    {Modulation::QPSK, 8},   {Modulation::QPSK, 9},   {Modulation::QAM16, 9},  {Modulation::QAM16, 10},
    {Modulation::QAM16, 11}, {Modulation::QAM16, 12}, {Modulation::QAM16, 13}, {Modulation::QAM16, 14},
    {Modulation::QAM16, 15}, {Modulation::QAM64, 15}, {Modulation::QAM64, 16}, {Modulation::QAM64, 17},
    {Modulation::QAM64, 18}, {Modulation::QAM64, 19}, {Modulation::QAM64, 20}, {Modulation::QAM64, 21},
    {Modulation::QAM64, 22}, {Modulation::QAM64, 23}, {Modulation::QAM64, 24}, {Modulation::QAM64, 25},
    {Modulation::QAM64, 26},
}};

// 25 PRB x 12 carriers x 10 data symbols per 1 ms subframe.
constexpr double kLteResPerTti = 3000.0;

// 802.11n, one stream, 20 MHz, long guard interval.
struct WifiMcs {
    Modulation mod;
    double rate_mbps;
    double bits_per_carrier;  // coded bits x code rate
};
constexpr std::array<WifiMcs, 8> kWifi{{
    {Modulation::QPSK, 6.5, 0.5},  // BPSK 1/2; QPSK stands in for the lowest order
    {Modulation::QPSK, 13.0, 1.0},
    {Modulation::QPSK, 19.5, 1.5},
    {Modulation::QAM16, 26.0, 2.0},
    {Modulation::QAM16, 39.0, 3.0},
    {Modulation::QAM64, 52.0, 4.0},
    {Modulation::QAM64, 58.5, 4.5},
    {Modulation::QAM64, 65.0, 5.0},
}};

// Attenuated Shannon mapping: SE = 0.75 log2(1 + SNR).
double threshold_db(double spectral_efficiency) {
    return 10.0 * std::log10(std::exp2(spectral_efficiency / 0.75) - 1.0);
}

std::vector<McsEntry> build_lte() {
    std::vector<McsEntry> t;
    for (std::size_t m = 0; m < kLteMcs.size(); ++m) {
        const int tbs = kLteTbs25[static_cast<std::size_t>(kLteMcs[m].itbs)];
        t.push_back({static_cast<int>(m), kLteMcs[m].mod, tbs / 1000.0, threshold_db(tbs / kLteResPerTti)});
    }
    return t;
}

std::vector<McsEntry> build_wifi() {
    std::vector<McsEntry> t;
    for (std::size_t m = 0; m < kWifi.size(); ++m)
        t.push_back({static_cast<int>(m), kWifi[m].mod, kWifi[m].rate_mbps, threshold_db(kWifi[m].bits_per_carrier)});
    return t;
}

double lte_prb_scale(double bandwidth_hz) {
    constexpr std::array<std::pair<double, int>, 6> prb{
        {{1.4e6, 6}, {3.0e6, 15}, {5.0e6, 25}, {10.0e6, 50}, {15.0e6, 75}, {20.0e6, 100}}};
    for (const auto& [bw, n] : prb)
        if (std::abs(bandwidth_hz - bw) < 1.0) return n / 25.0;
    throw std::invalid_argument(fmt::format("no LTE PRB count for bandwidth {} Hz", bandwidth_hz));
}

double wifi_bw_scale(double bandwidth_hz) {
    if (std::abs(bandwidth_hz - 20.0e6) < 1.0) return 1.0;
    if (std::abs(bandwidth_hz - 40.0e6) < 1.0) return 108.0 / 52.0;
    throw std::invalid_argument(fmt::format("WiFi tables cover 20 and 40 MHz, not {} Hz", bandwidth_hz));
}

}  // namespace

std::string_view throughput_table_version() { return kVersion; }

std::span<const McsEntry> mcs_table(Rat rat) {
    static const std::vector<McsEntry> lte = build_lte();
    static const std::vector<McsEntry> wifi = build_wifi();
    switch (rat) {
        case Rat::LTE: return lte;
        case Rat::WiFi: return wifi;
        default: break;
    }
    throw std::invalid_argument(fmt::format("no MCS table for RAT {}", to_string(rat)));
}

double throughput_mbps(double snr_db, int mcs, Rat rat, double bandwidth_hz, int rank, const ThroughputOptions& opt) {
    const auto table = mcs_table(rat);
    if (mcs < 0 || mcs >= static_cast<int>(table.size()))
        throw std::invalid_argument(fmt::format("MCS {} outside 0..{}", mcs, table.size() - 1));
    if (rank < 1) throw std::invalid_argument("rank must be >= 1");
    if (!(opt.rolloff_db > 0.0)) throw std::invalid_argument("rolloff_db must be > 0");
    if (std::isnan(snr_db)) throw std::invalid_argument("SNR is NaN");
    const double scale = rat == Rat::LTE ? lte_prb_scale(bandwidth_hz) : wifi_bw_scale(bandwidth_hz);
    const auto& e = table[static_cast<std::size_t>(mcs)];
    const double frac = std::clamp((snr_db - (e.snr_threshold_db - opt.rolloff_db)) / opt.rolloff_db, 0.0, 1.0);
    return e.rate_mbps * scale * rank * frac;
}

}  // namespace amroc
