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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace amroc {

enum class Rat { LTE, WiMAX, WiFi, Generic };

std::string_view to_string(Rat r);
std::optional<Rat> parse_rat(std::string_view s);

/// Absolute maximum RF port input power and the recommended ceiling.
inline constexpr double kMaxPortPowerDbm = 5.0;
inline constexpr double kRecommendedPortPowerDbm = 0.0;

/// Ideal cosine mixers are modeled with a 2*cos LO so one conversion has unit
/// amplitude gain; the real mixer loss is part of the front-end insertion loss.
inline constexpr double kMixerConversionGain = 1.0;

struct SignalSpec {
    int id = 0;
    double rf_center_hz = 0.0;
    double bandwidth_hz = 0.0;
    Rat rat = Rat::Generic;
    double tx_power_dbm = 0.0;
};

struct SignalCheck {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
};

/// Type invariants: bandwidth > 0, rf_center > bandwidth/2, power <= +5 dBm
/// (error) and <= 0 dBm (warning).
SignalCheck check_signal(const SignalSpec& s);

/// LO frequencies of the down-converting (f_D) and up-converting (f_U) ends,
/// one entry per signal.
struct LoPlan {
    std::vector<double> f_down_hz;
    std::vector<double> f_up_hz;

    std::size_t size() const { return f_down_hz.size(); }
    bool operator==(const LoPlan&) const = default;
};

struct IfConversion {
    double if_center_hz = 0.0;
    bool inverted = false;  ///< high-side injection mirrors the spectrum
};

/// Throws std::invalid_argument when lo == rf (zero IF is not supported).
IfConversion if_of(double rf_center_hz, double f_lo_hz);

enum class InjectionSide { High, Low };

std::string_view to_string(InjectionSide s);

/// LO that places `rf` at `if_hz` on the given side.
double lo_for(double rf_center_hz, double if_hz, InjectionSide side);

}  // namespace amroc
