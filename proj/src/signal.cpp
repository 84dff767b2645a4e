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

#include "amroc/signal.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

namespace amroc {

std::string_view to_string(Rat r) {
    switch (r) {
        case Rat::LTE: return "lte";
        case Rat::WiMAX: return "wimax";
        case Rat::WiFi: return "wifi";
        case Rat::Generic: return "generic";
    }
    return "?";
}

std::optional<Rat> parse_rat(std::string_view s) {
    for (auto r : {Rat::LTE, Rat::WiMAX, Rat::WiFi, Rat::Generic})
        if (s == to_string(r)) return r;
    return std::nullopt;
}

std::string_view to_string(InjectionSide s) { return s == InjectionSide::High ? "high" : "low"; }

SignalCheck check_signal(const SignalSpec& s) {
    SignalCheck out;
    if (!(s.bandwidth_hz > 0.0))
        out.errors.push_back(fmt::format("signal {}: bandwidth_hz must be > 0", s.id));
    if (!(s.rf_center_hz > s.bandwidth_hz / 2.0))
        out.errors.push_back(fmt::format("signal {}: rf_center_hz must exceed bandwidth_hz/2", s.id));
    if (!std::isfinite(s.tx_power_dbm)) {
        out.errors.push_back(fmt::format("signal {}: power_dbm must be finite", s.id));
    } else if (s.tx_power_dbm > kMaxPortPowerDbm) {
        out.errors.push_back(fmt::format("signal {}: power_dbm {} exceeds the +{} dBm port maximum",
                                         s.id, s.tx_power_dbm, kMaxPortPowerDbm));
    } else if (s.tx_power_dbm > kRecommendedPortPowerDbm) {
        out.warnings.push_back(fmt::format(
            "signal {}: power_dbm {} above the recommended {} dBm (mixer compression)", s.id,
            s.tx_power_dbm, kRecommendedPortPowerDbm));
    }
    return out;
}

IfConversion if_of(double rf_center_hz, double f_lo_hz) {
    if (f_lo_hz == rf_center_hz)
        throw std::invalid_argument(
            fmt::format("LO equals RF ({} Hz): zero-IF is not supported", rf_center_hz));
    return {std::abs(f_lo_hz - rf_center_hz), f_lo_hz > rf_center_hz};
}

double lo_for(double rf_center_hz, double if_hz, InjectionSide side) {
    return side == InjectionSide::High ? rf_center_hz + if_hz : rf_center_hz - if_hz;
}

}  // namespace amroc
