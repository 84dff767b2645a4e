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


#include "amroc/experiments.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <fmt/core.h>

#include "amroc/rng.hpp"
#include "parallel.hpp"

namespace amroc {

double lab_link_gain_db(const LabLink& link) {
    const std::vector<SignalSpec> sig{{0, link.rf_center_hz, link.bandwidth_hz, Rat::WiMAX, 0.0}};
    const std::vector<int> pair{link.pair};
    const double f_down = lo_for(link.rf_center_hz, link.if_hz, InjectionSide::High);
    Sf2sfMapping m{SpaceMap::from_assignment(link.cable.num_pairs, pair),
                   LoPlan{{f_down}, {f_down + link.lo_detune_hz}}, 2, link.lo_detune_hz != 0.0};
    const auto grid = baseband_grid(link.bandwidth_hz, 33);
    const auto ch = build_effective_channel(sig, m, link.cable, link.frontend, grid);
    double acc = 0.0;
    for (const auto& a : ch.a) acc += std::norm(a(0, 0));
    return lin_pow_to_db(acc / static_cast<double>(ch.a.size()));
}

std::vector<double> EvmSweepOptions::default_power_grid() {
    std::vector<double> g;
    for (int p = -30; p <= 5; ++p) g.push_back(p);
    return g;
}

void EvmSweepOptions::validate() const {
    waveform.validate();
    if (input_power_dbm.empty()) throw std::invalid_argument("sweep.input_power_dbm is empty");
    for (double p : input_power_dbm)
        if (!std::isfinite(p)) throw std::invalid_argument("sweep.input_power_dbm must be finite");
    if (!(idle_fraction >= 0.0 && idle_fraction < 1.0)) throw std::invalid_argument("sweep.idle_fraction must be in [0, 1)");
    if (!(clock_nominal_hz > 0.0)) throw std::invalid_argument("sweep.clock_nominal_hz must be > 0");
    if (!(clock_stability_ppm >= 0.0)) throw std::invalid_argument("sweep.clock_stability_ppm must be >= 0");
    if (std::isnan(gain_db) || std::isnan(analyzer_noise_dbm_hz) || std::isnan(p1db_dbm) || !std::isfinite(lo_detune_hz))
        throw std::invalid_argument("sweep chain parameters must be numbers");
}

double in_band_snr_db(const EvmSweepOptions& opt, double input_power_dbm) {
    return input_power_dbm + opt.gain_db -
           (opt.analyzer_noise_dbm_hz + lin_pow_to_db(opt.waveform.occupied_bandwidth_hz()));
}

OfdmFrame evm_sweep_reference(const EvmSweepOptions& opt) {
    auto spec = opt.waveform;
    spec.seed = split_seed(opt.seed, "payload");
    return gen_waveform(spec);
}

namespace {

std::size_t idle_samples(const EvmSweepOptions& opt, std::size_t burst) {
    return static_cast<std::size_t>(
        std::llround(opt.idle_fraction / (1.0 - opt.idle_fraction) * static_cast<double>(burst)));
}

}  // namespace

std::vector<cplx> evm_sweep_capture(const EvmSweepOptions& opt, const OfdmFrame& ref, std::size_t i) {
    ImpairmentChain chain;
    chain.gain_db = opt.gain_db;
    chain.noise_psd_dbm_hz = opt.analyzer_noise_dbm_hz;
    chain.nonlin_clip_dbm = opt.p1db_dbm;
    chain.lo_detune_hz = opt.lo_detune_hz;
    chain.sample_rate_hz = ref.spec.sample_rate_hz();
    chain.validate(ref.spec.occupied_bandwidth_hz());

    const std::size_t burst = ref.samples.size();
    std::vector<cplx> x(idle_samples(opt, burst), cplx{0.0, 0.0});
    x.insert(x.end(), ref.samples.begin(), ref.samples.end());
    // Burst power equals the requested input power; the idle prefix lowers the mean.
    const double duty_db = lin_pow_to_db(static_cast<double>(burst) / static_cast<double>(x.size()));
    return apply_chain(x, chain, opt.input_power_dbm.at(i) + duty_db, split_seed(opt.seed, "awgn"));
}

std::vector<EvmSweepRow> evm_sweep(const EvmSweepOptions& opt) {
    opt.validate();
    const auto frame = evm_sweep_reference(opt);
    const std::size_t idle = idle_samples(opt, frame.samples.size());
    std::vector<EvmSweepRow> rows(opt.input_power_dbm.size());
    detail::parallel_for(rows.size(), opt.threads, [&](std::size_t i) {
        const double pin = opt.input_power_dbm[i];
        const auto y = evm_sweep_capture(opt, frame, i);
        const double u = 2.0 * unit_interval(split_seed(opt.seed, "clock", i)) - 1.0;
        const double measured = opt.clock_nominal_hz * (1.0 + u * opt.clock_stability_ppm * 1e-6);
        rows[i] = {pin, in_band_snr_db(opt, pin), analyze_capture(frame, y, idle, opt.clock_nominal_hz, measured)};
    });
    return rows;
}

void write_evm_csv(std::span<const EvmSweepRow> rows, std::ostream& os) {
    os << "sweep_var,value,evm_db,cf_db,rssi_dbm,bp_dbm,cinr_db,cfe_hz,ce_ppm\n";
    for (const auto& r : rows) {
        const auto& m = r.metrics;
        os << fmt::format("input_power_dbm,{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.9f}\n",
                          r.input_power_dbm, m.evm_db, m.crest_factor_db, m.rssi_dbm, m.burst_power_dbm, m.cinr_db,
                          m.cfe_hz, m.clock_error_ppm);
    }
}

std::vector<int> ThroughputStudyOptions::all_lte_mcs() {
    std::vector<int> m;
    for (int i = 0; i <= 28; ++i) m.push_back(i);
    return m;
}

void ThroughputStudyOptions::validate() const {
    cable.validate();
    frontend.validate();
    noise.validate();
    if (cable.num_pairs < 2) throw std::invalid_argument("cable needs two pairs for 2x2 LTE");
    if (lte_rank < 1 || lte_rank > 2) throw std::invalid_argument("lte_rank must be 1 or 2");
    if (lte_if_hz.empty()) throw std::invalid_argument("sweep.lte_if_hz is empty");
    if (mcs.empty()) throw std::invalid_argument("sweep.mcs is empty");
    if (!std::isfinite(ue_noise_dbm_hz)) throw std::invalid_argument("ue_noise_dbm_hz must be finite");
    if (wifi_case && (wifi_pair < 2 || wifi_pair >= cable.num_pairs))
        throw std::invalid_argument("wifi_pair must be a pair other than the two LTE pairs");
}

namespace {

// LTE occupied band: 90% of the channel (25 PRB of 180 kHz in 5 MHz).
double lte_occupied_hz(double bandwidth_hz) { return 0.9 * bandwidth_hz; }

}  // namespace

double lte_sinr_db(const ThroughputStudyOptions& opt, double lte_if_hz, bool with_wifi) {
    std::vector<SignalSpec> sig{{0, opt.lte_rf_hz, opt.lte_bandwidth_hz, Rat::LTE, opt.lte_power_dbm},
                                {1, opt.lte_rf_hz, opt.lte_bandwidth_hz, Rat::LTE, opt.lte_power_dbm}};
    std::vector<int> pairs{0, 1};
    std::vector<double> ifs{lte_if_hz, lte_if_hz};
    if (with_wifi) {
        sig.push_back({2, opt.wifi_rf_hz, opt.wifi_bandwidth_hz, Rat::WiFi, opt.wifi_power_dbm});
        pairs.push_back(opt.wifi_pair);
        ifs.push_back(opt.wifi_if_hz);
    }
    const Sf2sfMapping m{SpaceMap::from_assignment(opt.cable.num_pairs, pairs),
                         lo_plan_from_ifs(sig, ifs, InjectionSide::High), 2, false};
    const auto grid = baseband_grid(lte_occupied_hz(opt.lte_bandwidth_hz), 33);
    const auto ch = build_effective_channel(sig, m, opt.cable, opt.frontend, grid);

    const double occ = lte_occupied_hz(opt.lte_bandwidth_hz);
    const double p_lte = dbm_to_mw(opt.lte_power_dbm);
    const double ue = dbm_to_mw(opt.ue_noise_dbm_hz) * occ;
    const double cab = dbm_to_mw(opt.noise.cable_noise_dbm_hz) * occ;
    const double p_wifi = with_wifi ? dbm_to_mw(opt.wifi_power_dbm) * occ / opt.wifi_bandwidth_hz : 0.0;

    // Per-layer SINR of a whitened zero-forcing receiver, averaged over the band.
    Eigen::Vector2d acc = Eigen::Vector2d::Zero();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const Eigen::MatrixXcd h = ch.a[k].topLeftCorner(2, 2);
        Eigen::MatrixXcd q = ue * Eigen::MatrixXcd::Identity(2, 2) + cab * cable_noise_gram(ch, k).topLeftCorner(2, 2);
        if (with_wifi) {
            const Eigen::VectorXcd aw = ch.a[k].block(0, 2, 2, 1);
            q += p_wifi * (aw * aw.adjoint());
        }
        const Eigen::MatrixXcd g = h.adjoint() * q.ldlt().solve(h);
        const Eigen::MatrixXcd gi = g.inverse();
        for (int l = 0; l < 2; ++l) acc(l) += p_lte / gi(l, l).real();
    }
    acc /= static_cast<double>(grid.size());
    return lin_pow_to_db(acc.minCoeff());
}

std::vector<ThroughputRow> throughput_study(const ThroughputStudyOptions& opt) {
    opt.validate();
    std::vector<ThroughputRow> rows;
    auto emit = [&](const std::string& scenario, double f_if, bool wifi) {
        const double sinr = lte_sinr_db(opt, f_if, wifi);
        for (int mcs : opt.mcs)
            rows.push_back({scenario, mcs, f_if, sinr,
                            throughput_mbps(sinr, mcs, Rat::LTE, opt.lte_bandwidth_hz, opt.lte_rank, opt.link)});
    };
    for (double f : opt.lte_if_hz) emit("lte", f, false);
    if (opt.wifi_case) emit("lte+wifi", opt.wifi_if_hz, true);
    return rows;
}

void write_throughput_csv(std::span<const ThroughputRow> rows, std::ostream& os) {
    os << "scenario,mcs,if_hz,sinr_db,throughput_mbps\n";
    for (const auto& r : rows)
        os << fmt::format("{},{},{:.1f},{:.6f},{:.6f}\n", r.scenario, r.mcs, r.if_hz, r.sinr_db, r.throughput_mbps);
}

}  // namespace amroc
