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

#include <cmath>
#include <random>

#include "amroc/channel_models.hpp"

using namespace amroc;

namespace {

double poly_loss_db(double f_hz, double k1, double k2, double k3, double length_m) {
    const double f = f_hz / 1e6;
    return (k1 * std::sqrt(f) + k2 * f + k3 / std::sqrt(f)) * length_m / 100.0;
}

}  // namespace

TEST_CASE("insertion loss follows the category polynomial") {
    const auto c = CableSpec::make(CableCategory::Cat5e, 50.0);
    for (double f : {1e6, 10e6, 100e6, 140e6, 400e6})
        CHECK(pair_insertion_loss_db(f, c) == doctest::Approx(poly_loss_db(f, 1.967, 0.023, 0.050, 50.0)).epsilon(1e-12));

    auto h = c;
    h.pair_loss_scale = {1.0, 1.2, 0.9, 1.0};
    CHECK(pair_insertion_loss_db(100e6, h, 1) == doctest::Approx(1.2 * pair_insertion_loss_db(100e6, c)));
    CHECK_THROWS_AS(pair_insertion_loss_db(100e6, h, 4), std::out_of_range);
    CHECK_THROWS_AS(pair_insertion_gain(-1.0, c), std::domain_error);
}

TEST_CASE("pair phase is the propagation delay") {
    const auto c = CableSpec::make(CableCategory::Cat6, 30.0);
    const double f = 123e6;
    const double expected = -2.0 * kPi * f * 30.0 / (0.69 * kSpeedOfLight);
    const double got = std::arg(pair_insertion_gain(f, c));
    CHECK(std::remainder(got - expected, 2.0 * kPi) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(pair_insertion_gain(0.0, c) == cplx{1.0, 0.0});
}

TEST_CASE("fext reference point and slope") {
    auto c = CableSpec::make(CableCategory::Cat5e, 100.0);
    c.atten = {0.0, 0.0, 0.0};
    CHECK(lin_amp_to_db(std::abs(fext_gain(c.fext_ref_hz, 0, 1, c))) == doctest::Approx(c.fext_ref_db).epsilon(1e-12));
    const double up = lin_amp_to_db(std::abs(fext_gain(2.0 * c.fext_ref_hz, 0, 1, c)));
    CHECK(up - c.fext_ref_db == doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-9));
    CHECK(fext_coupling_db(2.0 * c.fext_ref_hz, c) - c.fext_ref_db == doctest::Approx(6.0206).epsilon(1e-4));
}

TEST_CASE("fext is symmetric, seeded and switchable") {
    auto c = CableSpec::make(CableCategory::Cat5e, 50.0);
    c.pair_loss_scale = {0.8, 1.1, 1.3, 1.0};
    c.fext_seed = 77;
    for (double f : {50e6, 175e6, 400e6})
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                if (i == j) continue;
                CHECK(std::abs(fext_gain(f, i, j, c)) == doctest::Approx(std::abs(fext_gain(f, j, i, c))).epsilon(1e-14));
                CHECK(std::abs(fext_gain(f, i, j, c)) <= 1.0);
            }
    CHECK_THROWS_AS(fext_gain(1e8, 2, 2, c), std::domain_error);

    auto d = c;
    d.fext_seed = 78;
    CHECK(std::arg(fext_gain(1e8, 0, 1, c)) != doctest::Approx(std::arg(fext_gain(1e8, 0, 1, d))));
    CHECK(fext_gain(1e8, 0, 1, c) == fext_gain(1e8, 0, 1, c));
    d.fext_enabled = false;
    CHECK(fext_gain(1e8, 0, 1, d) == cplx{0.0, 0.0});
}

TEST_CASE("front-end passband center and skirt") {
    FrontEndSpec fe;
    fe.insertion_loss_db = 6.0;
    CHECK(std::abs(frontend_gain(fe.center_hz(), fe)) == doctest::Approx(0.501).epsilon(0.01));
    const double center = lin_amp_to_db(std::abs(frontend_gain(fe.center_hz(), fe)));
    const double far = lin_amp_to_db(std::abs(frontend_gain(10.0 * fe.passband_hi_hz, fe)));
    CHECK(center - far >= 20.0 * fe.edge_order);
    // -3 dB at both Butterworth edges
    CHECK(lin_amp_to_db(std::abs(frontend_skirt(fe.passband_lo_hz, fe))) == doctest::Approx(-3.0103).epsilon(1e-3));
    CHECK(lin_amp_to_db(std::abs(frontend_skirt(fe.passband_hi_hz, fe))) == doctest::Approx(-3.0103).epsilon(1e-3));
}

TEST_CASE("tilt-free front-end peaks at its center") {
    FrontEndSpec fe;
    const double g0 = std::abs(frontend_gain(fe.center_hz(), fe));
    for (double f = 1e6; f < 2e9; f *= 1.07) CHECK(std::abs(frontend_gain(f, fe)) <= g0 + 1e-15);
}

TEST_CASE("minimum-phase option keeps the magnitude") {
    FrontEndSpec a;
    FrontEndSpec b;
    b.phase = PhaseMode::MinimumPhase;
    for (double f : {30e6, 100e6, 300e6, 700e6}) {
        CHECK(std::abs(frontend_gain(f, a)) == doctest::Approx(std::abs(frontend_gain(f, b))).epsilon(1e-12));
        CHECK(std::arg(frontend_gain(f, a)) == 0.0);
    }
    CHECK(std::arg(frontend_gain(100e6, b)) != 0.0);
}

TEST_CASE("fitted equalizer flattens 50 m Cat5e to within 3 dB") {
    const auto c = CableSpec::make(CableCategory::Cat5e, 50.0);
    FrontEndSpec fe;
    fe.insertion_loss_db = 20.0;
    fe.equalizer_tilt_db_per_hz = fit_equalizer_tilt(c, 50e6, 400e6);
    CHECK(fe.equalizer_tilt_db_per_hz > 0.0);
    double lo = 1e9, hi = -1e9;
    for (double f = 50e6; f <= 400e6; f += 1e6) {
        const double e = end_to_end_loss_db(f, c, fe);
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    CHECK(hi - lo <= 3.0);
}

TEST_CASE("passivity of every model") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uf(0.0, 3e9);
    auto c = CableSpec::make(CableCategory::Cat5, 15.0);
    c.pair_loss_scale = {0.5, 1.0, 1.5, 2.0};
    const auto fe = default_frontend();
    for (int i = 0; i < 2000; ++i) {
        const double f = uf(rng);
        CHECK(std::abs(pair_insertion_gain(f, c, i % 4)) <= 1.0);
        CHECK(std::abs(fext_gain(f, i % 4, (i + 1) % 4, c)) <= 1.0);
        CHECK(std::abs(frontend_gain(f, fe)) <= 1.0);
    }
}

TEST_CASE("insertion loss is monotone in frequency and length") {
    const auto c = CableSpec::make(CableCategory::Cat5e, 50.0);
    double prev = pair_insertion_loss_db(2e6, c);
    for (double f = 3e6; f < 1e9; f += 1e6) {
        const double v = pair_insertion_loss_db(f, c);
        CHECK(v >= prev);
        prev = v;
    }
    auto longer = c;
    longer.length_m = 51.0;
    for (double f : {1e6, 1e8, 5e8}) CHECK(pair_insertion_loss_db(f, longer) > pair_insertion_loss_db(f, c));
}

TEST_CASE("cable validation names the field") {
    auto c = CableSpec::make(CableCategory::Cat5e, -1.0);
    try {
        c.validate();
        FAIL("expected throw");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("length_m") != std::string::npos);
    }
    c.length_m = 10.0;
    c.pair_loss_scale = {1.0};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("calibration hits the lab targets") {
    const auto targets = lab_calibration_targets();
    const auto cal = calibrate_chain(targets, CableSpec::make(CableCategory::Cat5e, 50.0), default_frontend());
    CHECK(cal.max_abs_residual_db() <= 1.0);
    for (const char* name : {"cat5e-50m", "cat5-15m"}) {
        const auto p = chain_preset(name);
        REQUIRE(p.has_value());
        const double want = p->cable.length_m > 30.0 ? 50.0 : 42.0;
        CHECK(end_to_end_loss_db(140e6, p->cable, p->frontend) == doctest::Approx(want).epsilon(1.0 / want));
    }
    CHECK_FALSE(chain_preset("cat9").has_value());
}

TEST_CASE("calibration round-trips synthetic constants") {
    auto cable = CableSpec::make(CableCategory::Cat6, 50.0);
    auto fe = default_frontend();
    const double il = 17.25, scale = 1.31;
    std::vector<CalibrationTarget> targets;
    for (auto [len, f] : {std::pair{10.0, 75e6}, {40.0, 140e6}, {90.0, 400e6}}) {
        auto c = cable;
        c.length_m = len;
        c.atten = c.atten.scaled(scale);
        auto f2 = fe;
        f2.insertion_loss_db = il;
        targets.push_back({len, f, end_to_end_loss_db(f, c, f2)});
    }
    const auto cal = calibrate_chain(targets, cable, fe);
    CHECK(cal.insertion_loss_db == doctest::Approx(il).epsilon(1e-6));
    CHECK(cal.cable_scale == doctest::Approx(scale).epsilon(1e-6));
}

TEST_CASE("calibration degenerate cases") {
    auto cable = CableSpec::make(CableCategory::Cat5e, 50.0);
    cable.atten = {0.0, 0.0, 0.0};
    FrontEndSpec fe;  // tilt-free, center at the target frequency
    const double fc = fe.center_hz();
    std::vector<CalibrationTarget> t{{15.0, fc, 44.0}, {50.0, fc, 44.0}};
    const auto cal = calibrate_chain(t, cable, fe);
    CHECK(cal.insertion_loss_db == doctest::Approx(22.0).epsilon(1e-9));

    std::vector<CalibrationTarget> same{{50.0, 140e6, 50.0}, {50.0, 175e6, 51.0}};
    CHECK_THROWS_AS(calibrate_chain(same, CableSpec::make(CableCategory::Cat5e, 50.0), fe), std::invalid_argument);
    std::vector<CalibrationTarget> one{{50.0, 140e6, 50.0}};
    CHECK_THROWS_AS(calibrate_chain(one, CableSpec::make(CableCategory::Cat5e, 50.0), fe), std::invalid_argument);
}

TEST_CASE("category parsing") {
    for (auto c : {CableCategory::Cat5, CableCategory::Cat5e, CableCategory::Cat6, CableCategory::Cat7})
        CHECK(parse_cable_category(to_string(c)) == c);
    CHECK_FALSE(parse_cable_category("cat8").has_value());
}
