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


#include <doctest.h>

#include <sstream>

#include "amroc/experiments.hpp"

using namespace amroc;

namespace {

// Nonincreasing up to the minimum, nondecreasing after it.
bool quasi_convex(const std::vector<double>& y) {
    const auto k = static_cast<std::size_t>(std::min_element(y.begin(), y.end()) - y.begin());
    for (std::size_t i = 1; i <= k; ++i)
        if (y[i] > y[i - 1]) return false;
    for (std::size_t i = k + 1; i < y.size(); ++i)
        if (y[i] < y[i - 1]) return false;
    return true;
}

EvmSweepOptions lab_sweep(const char* preset, double detune) {
    const auto p = chain_preset(preset).value();
    LabLink l{p.cable, p.frontend};
    l.lo_detune_hz = detune;
    EvmSweepOptions o;
    o.gain_db = lab_link_gain_db(l);
    o.lo_detune_hz = detune;
    o.seed = 2024;
    return o;
}

std::vector<double> evm_of(const std::vector<EvmSweepRow>& rows) {
    std::vector<double> e;
    for (const auto& r : rows) e.push_back(r.metrics.evm_db);
    return e;
}

}  // namespace

TEST_CASE("lab link gain reproduces the calibrated attenuation") {
    for (auto [name, target] : {std::pair{"cat5e-50m", -50.0}, std::pair{"cat5-15m", -42.0}}) {
        const auto p = chain_preset(name).value();
        LabLink l{p.cable, p.frontend};
        CHECK(std::abs(lab_link_gain_db(l) - target) <= 1.0);
        l.lo_detune_hz = -4183.0;
        CHECK(lab_link_gain_db(l) == doctest::Approx(lab_link_gain_db(LabLink{p.cable, p.frontend})).epsilon(1e-9));
    }
}

TEST_CASE("EVM sweep on both lab chains") {
    for (auto [name, det, cross] : {std::tuple{"cat5e-50m", -4183.0, -7.0}, std::tuple{"cat5-15m", -3517.0, -15.0}}) {
        CAPTURE(name);
        const auto opt = lab_sweep(name, det);
        const auto rows = evm_sweep(opt);
        REQUIRE(rows.size() == 36);
        const auto evm = evm_of(rows);
        CHECK(quasi_convex(evm));
        CHECK(evm.front() > -25.0);
        CHECK(*std::min_element(evm.begin(), evm.end()) < -25.0);
        // First power at which the EVM meets the limit, within 2 dB of the lab value.
        std::size_t i = 0;
        while (evm[i] > -25.0) ++i;
        CHECK(std::abs(rows[i].input_power_dbm - cross) <= 2.0);
        const double bin = opt.waveform.sample_rate_hz() / static_cast<double>(opt.waveform.frame_length());
        for (const auto& r : rows) {
            CHECK(std::abs(r.metrics.cfe_hz - det) <= bin);
            CHECK(std::abs(r.metrics.clock_error_ppm) <= 0.05);
            if (r.input_power_dbm > opt.p1db_dbm - 15.0) continue;
            // AWGN-dominated: EVM = -SNR, RSSI = signal plus noise over the full sample rate.
            CHECK(std::abs(r.metrics.evm_db + r.snr_db) <= 0.5);
            const double noise_mw = dbm_to_mw(opt.analyzer_noise_dbm_hz) * opt.waveform.sample_rate_hz();
            const double rssi = mw_to_dbm(dbm_to_mw(r.input_power_dbm + opt.gain_db) + noise_mw);
            CHECK(std::abs(r.metrics.rssi_dbm - rssi) <= 0.1);
        }
    }
}

TEST_CASE("EVM sweep is deterministic and thread-count invariant") {
    auto opt = lab_sweep("cat5e-50m", -4183.0);
    opt.input_power_dbm = {-20.0, -5.0, 3.0};
    std::ostringstream a, b, c;
    write_evm_csv(evm_sweep(opt), a);
    write_evm_csv(evm_sweep(opt), b);
    opt.threads = 3;
    write_evm_csv(evm_sweep(opt), c);
    CHECK(a.str() == b.str());
    CHECK(a.str() == c.str());
    CHECK(a.str().starts_with("sweep_var,value,evm_db,cf_db,rssi_dbm,bp_dbm,cinr_db,cfe_hz,ce_ppm\n"));
    opt.seed = 7;
    std::ostringstream d;
    write_evm_csv(evm_sweep(opt), d);
    CHECK(a.str() != d.str());
}

TEST_CASE("idle time lowers RSSI by the duty cycle only") {
    auto opt = lab_sweep("cat5e-50m", 0.0);
    opt.input_power_dbm = {-10.0};
    opt.analyzer_noise_dbm_hz = -std::numeric_limits<double>::infinity();
    opt.p1db_dbm = std::numeric_limits<double>::infinity();
    opt.idle_fraction = 0.5;
    const auto r = evm_sweep(opt).at(0);
    CHECK(r.metrics.burst_power_dbm == doctest::Approx(-10.0 + opt.gain_db).epsilon(1e-3));
    CHECK(r.metrics.rssi_dbm - r.metrics.burst_power_dbm == doctest::Approx(-10.0 * std::log10(2.0)).epsilon(1e-3));
    opt.idle_fraction = 1.0;
    CHECK_THROWS_AS(evm_sweep(opt), std::invalid_argument);
}

TEST_CASE("throughput study: coexistence shape") {
    const auto p = chain_preset("cat5e-50m").value();
    ThroughputStudyOptions t;
    t.cable = p.cable;
    t.frontend = p.frontend;
    const auto rows = throughput_study(t);
    REQUIRE(rows.size() == 4 * 29);

    auto rate = [&](const std::string& sc, double f, int mcs) {
        for (const auto& r : rows)
            if (r.scenario == sc && r.if_hz == f && r.mcs == mcs) return r.throughput_mbps;
        FAIL("missing row");
        return 0.0;
    };
    // Low MCS are unaffected by WiFi; some high MCS lose throughput.
    int first_hit = -1;
    for (int m = 0; m <= 28; ++m) {
        const double base = rate("lte", 175e6, m);
        const double with = rate("lte+wifi", 175e6, m);
        CHECK(with <= base);
        if (first_hit < 0 && with < 0.95 * base) first_hit = m;
    }
    REQUIRE(first_hit > 0);
    for (int m = 0; m < first_hit; ++m) CHECK(rate("lte+wifi", 175e6, m) >= 0.95 * rate("lte", 175e6, m));
    MESSAGE("WiFi degrades from MCS " << first_hit);
    CHECK(first_hit >= 10);

    // Nondecreasing in MCS while the link is above threshold.
    for (double f : t.lte_if_hz) {
        const double sinr = lte_sinr_db(t, f, false);
        double last = 0.0;
        for (const auto& e : mcs_table(Rat::LTE)) {
            if (e.snr_threshold_db > sinr) break;
            CHECK(rate("lte", f, e.mcs) >= last);
            last = rate("lte", f, e.mcs);
        }
    }
}

TEST_CASE("LTE SINR: FEXT between the LTE pairs costs little") {
    const auto p = chain_preset("cat5e-50m").value();
    ThroughputStudyOptions t;
    t.cable = p.cable;
    t.frontend = p.frontend;
    const double with_fext = lte_sinr_db(t, 175e6, false);
    t.cable.fext_enabled = false;
    const double without = lte_sinr_db(t, 175e6, false);
    CHECK(std::abs(with_fext - without) <= 0.5);
    // No WiFi coupling without FEXT either.
    CHECK(lte_sinr_db(t, 175e6, true) == doctest::Approx(without).epsilon(1e-9));
}

TEST_CASE("throughput study validation") {
    ThroughputStudyOptions t;
    t.wifi_pair = 1;
    CHECK_THROWS_AS(throughput_study(t), std::invalid_argument);
    t = {};
    t.lte_if_hz.clear();
    CHECK_THROWS_AS(throughput_study(t), std::invalid_argument);
    t = {};
    t.mcs = {30};
    CHECK_THROWS_AS(throughput_study(t), std::invalid_argument);
}
