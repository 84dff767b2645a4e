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

#include <algorithm>
#include <random>
#include <set>

#include "amroc/sf2sf.hpp"
#include "oracles/combinatorics.hpp"

using namespace amroc;
using Kind = MappingViolation::Kind;

namespace {

std::vector<SignalSpec> same_rf(int n, double rf = 2.63e9, double bw = 20e6) {
    std::vector<SignalSpec> s;
    for (int i = 0; i < n; ++i) s.push_back({i, rf, bw, Rat::LTE, -20.0});
    return s;
}

std::vector<int> assignment_of(const SpaceMap& m) {
    std::vector<int> v;
    for (int n = 0; n < m.signals(); ++n) v.push_back(*m.pair_of(n));
    return v;
}

FrontEndSpec passband(double lo, double hi) {
    FrontEndSpec fe;
    fe.passband_lo_hz = lo;
    fe.passband_hi_hz = hi;
    return fe;
}

bool has_kind(const std::vector<MappingViolation>& v, Kind k) {
    return std::any_of(v.begin(), v.end(), [&](const auto& x) { return x.kind == k; });
}

}  // namespace

TEST_CASE("IF conversion and band inversion") {
    auto c = if_of(2.63e9, 2.77e9);
    CHECK(c.if_center_hz == doctest::Approx(140e6));
    CHECK(c.inverted);
    c = if_of(2.77e9, 2.63e9);
    CHECK(c.if_center_hz == doctest::Approx(140e6));
    CHECK_FALSE(c.inverted);
    CHECK_THROWS_AS(if_of(1e9, 1e9), std::invalid_argument);
    CHECK(lo_for(2.63e9, 140e6, InjectionSide::High) == doctest::Approx(2.77e9));
    CHECK(lo_for(2.63e9, 140e6, InjectionSide::Low) == doctest::Approx(2.49e9));

    // Re-conversion with the same LO mirrors back: inversion twice is none.
    const double rf = 2.63e9, lo = 2.63e9 + 140e6;
    const double x = std::abs(rf + 1e6 - lo);  // a line 1 MHz above center
    const double back = lo - x;
    CHECK(back == doctest::Approx(rf + 1e6));
}

TEST_CASE("space map text round trip and ordering") {
    const auto m = SpaceMap::parse("1 0 1; 0 1 0");
    CHECK(m.pairs() == 2);
    CHECK(m.signals() == 3);
    CHECK(m.to_text() == "1 0 1; 0 1 0");
    CHECK(m.pair_of(2) == 0);
    CHECK(m.signals_on(0) == std::vector<int>{0, 2});
    CHECK(m.row_count(0) == 2);
    CHECK_THROWS(SpaceMap::parse("1 0; 1"));
    CHECK_THROWS(SpaceMap::parse("1 2"));
    const std::vector<int> a{1, 0, 1};
    CHECK(SpaceMap::from_assignment(2, a) == SpaceMap::parse("0 1 0; 1 0 1"));
}

TEST_CASE("validation: structural constraints") {
    const auto sig = same_rf(2);
    const auto fe = default_frontend();
    Sf2sfMapping m{SpaceMap::parse("1 1; 0 0"), lo_plan_from_ifs(sig, std::vector<double>{75e6, 75e6}), 2, false};
    auto v = validate_mapping(sig, m, fe);
    REQUIRE(v.size() >= 1);
    CHECK(v.front().kind == Kind::SameChainOverlap);
    CHECK(v.front().offenders == std::vector<int>{0, 1});

    m.space = SpaceMap::parse("1 0; 1 1");
    m.lo = lo_plan_from_ifs(sig, std::vector<double>{75e6, 175e6});
    v = validate_mapping(sig, m, fe);
    REQUIRE(v.size() == 1);
    CHECK(v.front().kind == Kind::ColumnCount);
    CHECK(v.front().offenders == std::vector<int>{0});

    m.space = SpaceMap::parse("1 1");
    m.per_pair = 1;
    v = validate_mapping(sig, m, fe);
    REQUIRE(v.size() == 1);
    CHECK(v.front().kind == Kind::RowCount);

    m.per_pair = 2;
    m.lo.f_up_hz[1] += 1000.0;
    v = validate_mapping(sig, m, fe);
    REQUIRE(v.size() == 1);
    CHECK(v.front().kind == Kind::NetInversion);
    m.allow_detune = true;
    CHECK(validate_mapping(sig, m, fe).empty());

    m.lo.f_down_hz.pop_back();
    CHECK_THROWS_AS(validate_mapping(sig, m, fe), std::invalid_argument);
}

TEST_CASE("validation: passband edge") {
    const auto sig = same_rf(1, 2.63e9, 20e6);
    const auto fe = passband(50e6, 450e6);
    Sf2sfMapping ok{SpaceMap::parse("1"), lo_plan_from_ifs(sig, std::vector<double>{60e6}), 2, false};
    CHECK(validate_mapping(sig, ok, fe).empty());
    Sf2sfMapping bad{SpaceMap::parse("1"), lo_plan_from_ifs(sig, std::vector<double>{60e6 - 1.0}), 2, false};
    const auto v = validate_mapping(sig, bad, fe);
    REQUIRE(v.size() == 1);
    CHECK(v.front().kind == Kind::OutOfBand);

    Sf2sfMapping zero{SpaceMap::parse("1"), LoPlan{{2.63e9}, {2.63e9}}, 2, false};
    CHECK(has_kind(validate_mapping(sig, zero, fe), Kind::OutOfBand));
}

TEST_CASE("validation: 8 signals over 4 pairs at 75/175 MHz is clean") {
    const auto sig = same_rf(8);
    const auto fe = passband(50e6, 450e6);
    const std::vector<double> slots{75e6, 175e6};
    for (const auto& space : enumerate_space_mappings(8, 4, 2)) {
        Sf2sfMapping m{space, canonical_frequency_plan(sig, space, slots), 2, false};
        CHECK(validate_mapping(sig, m, fe).empty());
    }
}

TEST_CASE("validation: shared-LO plans are image free") {
    // Mixers 0 and 1 share the 925 MHz LO and swap streams between ports;
    // neither emits the other's IF line into its own output band.
    std::vector<SignalSpec> sig{{0, 1.0e9, 10e6, Rat::Generic, -20.0}, {1, 1.075e9, 10e6, Rat::Generic, -20.0}};
    const LoPlan lo{{925e6, 925e6}, {925e6, 925e6}};
    Sf2sfMapping m{SpaceMap::parse("1 1"), lo, 2, false};
    CHECK(validate_mapping(sig, m, default_frontend()).empty());
}

TEST_CASE("validation: pair-mate image in the output band") {
    const auto fe = passband(5e6, 500e6);
    // Port 0: 60 MHz carrier, high-side LO 160 MHz (IF 100).
    // Port 1: 300 MHz carrier, low-side LO 80 MHz (IF 220).
    // Mixer 0 maps x_1 = 220 MHz to |160 - 220| = 60 MHz, port 0's band.
    std::vector<SignalSpec> sig{{0, 60e6, 10e6, Rat::Generic, -20.0}, {1, 300e6, 10e6, Rat::Generic, -20.0}};
    Sf2sfMapping c{SpaceMap::parse("1 1"), LoPlan{{160e6, 80e6}, {160e6, 80e6}}, 2, false};
    const auto v = validate_mapping(sig, c, fe);
    REQUIRE(v.size() == 1);
    CHECK(v.front().kind == Kind::ImageCollision);
    CHECK(v.front().offenders == std::vector<int>{0, 1});

    c.space = SpaceMap::parse("1 0; 0 1");
    CHECK(validate_mapping(sig, c, fe).empty());
}

TEST_CASE("validation: own unwanted sideband stays out of the port band") {
    const auto fe = passband(5e6, 500e6);
    // 40 MHz carrier, high-side LO 70 MHz: unwanted product at 100 MHz.
    std::vector<SignalSpec> hi{{0, 40e6, 4e6, Rat::Generic, -20.0}};
    CHECK(validate_mapping(hi, Sf2sfMapping{SpaceMap::parse("1"), LoPlan{{70e6}, {70e6}}, 2, false}, fe).empty());
    // 30 MHz carrier, low-side LO 20 MHz: unwanted product at 10 MHz.
    std::vector<SignalSpec> lo{{0, 30e6, 4e6, Rat::Generic, -20.0}};
    CHECK(validate_mapping(lo, Sf2sfMapping{SpaceMap::parse("1"), LoPlan{{20e6}, {20e6}}, 2, false}, fe).empty());
    // Both products coincide only at zero IF.
    const auto v = validate_mapping(lo, Sf2sfMapping{SpaceMap::parse("1"), LoPlan{{30e6}, {30e6}}, 2, false}, fe);
    CHECK(has_kind(v, Kind::OutOfBand));
}

TEST_CASE("space-mapping counts match brute force") {
    CHECK(enumerate_space_mappings(2, 2, 1).size() == 2);
    for (auto [n, l, m] : {std::tuple{8, 4, 2}, {4, 4, 2}, {3, 2, 2}, {5, 3, 2}, {6, 3, 2}, {4, 2, 3}}) {
        const auto got = enumerate_space_mappings(n, l, m);
        const auto want = oracle::brute_force_assignments(n, l, m);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(assignment_of(got[i]) == want[i]);
    }
    CHECK(enumerate_space_mappings(8, 4, 2).size() == 2520);
    CHECK(oracle::multinomial_count(2, 4) == 2520);
    CHECK(enumerate_space_mappings(4, 4, 2).size() == 204);
    CHECK_THROWS_AS(enumerate_space_mappings(9, 4, 2), std::invalid_argument);
}

TEST_CASE("count law (ML)!/(M!)^L") {
    for (auto [l, m] : {std::pair{2, 2}, {3, 2}, {4, 2}, {2, 3}, {3, 3}, {5, 1}})
        CHECK(enumerate_space_mappings(l * m, l, m).size() == oracle::multinomial_count(m, l));
}

TEST_CASE("frequency plan enumeration") {
    const auto fe = default_frontend();
    {
        const auto sig = same_rf(1);
        const std::vector<double> slots{140e6};
        CHECK(enumerate_frequency_plans(sig, SpaceMap::parse("1"), slots, fe, 2).size() == 1);
    }
    {
        const auto sig = same_rf(2);
        const std::vector<double> slots{75e6, 175e6};
        const auto plans = enumerate_frequency_plans(sig, SpaceMap::parse("1 1"), slots, fe, 2);
        CHECK(plans.size() == 2);
    }
}

TEST_CASE("frequency plans equal the brute-force filter over the Cartesian product") {
    const auto sig = same_rf(8);
    const auto fe = default_frontend();
    const std::vector<double> slots{50e6, 75e6, 175e6, 400e6};
    const auto spaces = enumerate_space_mappings(8, 4, 2);
    for (std::size_t pick : {std::size_t{0}, std::size_t{777}, spaces.size() - 1}) {
        const auto& space = spaces[pick];
        std::vector<LoPlan> brute;
        std::vector<std::size_t> idx(8, 0);
        for (;;) {
            std::vector<double> ifs;
            for (auto i : idx) ifs.push_back(slots[i]);
            Sf2sfMapping m{space, lo_plan_from_ifs(sig, ifs), 2, false};
            if (validate_mapping(sig, m, fe).empty()) brute.push_back(m.lo);
            std::size_t k = 8;
            while (k > 0 && ++idx[k - 1] == slots.size()) idx[--k] = 0;
            if (k == 0) break;
        }
        const auto plans = enumerate_frequency_plans(sig, space, slots, fe, 2);
        CHECK(plans.size() == brute.size());
        CHECK(plans == brute);
        CHECK(plans.size() == 20736);  // 12 ordered slot pairs per pair
    }
}

TEST_CASE("enumerators only emit valid mappings") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto inst = oracle::random_instance(rng);
        const std::vector<double> slots{50e6, 75e6, 175e6, 400e6};
        const auto plans = enumerate_frequency_plans(inst.signals, inst.mapping.space, slots, inst.fe, 2);
        for (const auto& p : plans)
            CHECK(validate_mapping(inst.signals, Sf2sfMapping{inst.mapping.space, p, 2, false}, inst.fe).empty());
    }
}

TEST_CASE("mapping order breaks ties on the space matrix first") {
    const auto sig = same_rf(2);
    const std::vector<double> slots{75e6, 175e6};
    const auto spaces = enumerate_space_mappings(2, 2, 1);
    Sf2sfMapping a{spaces[0], canonical_frequency_plan(sig, spaces[0], slots), 1, false};
    Sf2sfMapping b{spaces[1], canonical_frequency_plan(sig, spaces[1], slots), 1, false};
    CHECK(mapping_less(b, a, sig) != mapping_less(a, b, sig));
    CHECK_FALSE(mapping_less(a, a, sig));
}
