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


#include <array>
#include <utility>

#include "amroc/cli/cli.hpp"

namespace amroc::cli {

namespace {

constexpr std::string_view kFig5 = R"(; 8-antenna uplink over one 50 m Cat5e cable, 2 signals per pair.
seed = 1
output_dir = out/fig5

[cable]
category = cat5e
length_m = 50
num_pairs = 4
calibrate = true
; twist-rate spread between the four pairs
pair_loss_scale = 0.7 1.0 1.3 1.6
fext_enabled = true

[mapping]
per_pair = 2
side = high
if_slots_hz = 75e6 400e6

[scenario]
n_antennas = 8
rf_center_hz = 2.63e9
bandwidth_hz = 20e6
desired_theta_deg = 0
interferer_thetas_deg = -40 25
desired_power_dbm = -20
theta_step_deg = 1
scalarization = mean
curves = support
)";

constexpr std::string_view kFig6_50 = R"(; WiMAX over one pair of a 50 m Cat5e cable at IF 140 MHz.
seed = 1
output_dir = out/fig6-50m

[cable]
category = cat5e
length_m = 50
num_pairs = 4
calibrate = true

[signal.0]
rf_center_hz = 2.63e9
bandwidth_hz = 7e6
rat = wimax
power_dbm = 0

[mapping]
space = 1; 0; 0; 0
if_hz = 140e6
side = high
lo_detune_hz = -4183

[waveform]
rat = wimax
modulation = 16qam
code_rate = 3/4

[sweep]
input_power_min_dbm = -30
input_power_max_dbm = 5
input_power_step_db = 1
analyzer_noise_dbm_hz = -150
p1db_dbm = 5
clock_stability_ppm = 0.05
)";

constexpr std::string_view kFig6_15 = R"(; WiMAX over one pair of a 15 m Cat5 cable at IF 140 MHz.
seed = 1
output_dir = out/fig6-15m

[cable]
category = cat5
length_m = 15
num_pairs = 4
calibrate = true

[signal.0]
rf_center_hz = 2.63e9
bandwidth_hz = 7e6
rat = wimax
power_dbm = 0

[mapping]
space = 1; 0; 0; 0
if_hz = 140e6
side = high
lo_detune_hz = -3517

[waveform]
rat = wimax
modulation = 16qam
code_rate = 3/4

[sweep]
input_power_min_dbm = -30
input_power_max_dbm = 5
input_power_step_db = 1
analyzer_noise_dbm_hz = -150
p1db_dbm = 5
clock_stability_ppm = 0.05
)";

constexpr std::string_view kFig7 = R"(; LTE 2x2 on pairs 0 and 1 at one IF, WiFi on pair 2 at the same IF.
seed = 1
output_dir = out/fig7

[cable]
category = cat5e
length_m = 50
num_pairs = 4
calibrate = true

[signal.0]
rf_center_hz = 2.595e9
bandwidth_hz = 5e6
rat = lte
power_dbm = -20

[signal.1]
rf_center_hz = 2.595e9
bandwidth_hz = 5e6
rat = lte
power_dbm = -20

[signal.2]
rf_center_hz = 2.412e9
bandwidth_hz = 20e6
rat = wifi
power_dbm = 0

[mapping]
space = 1 0 0; 0 1 0; 0 0 1; 0 0 0
if_hz = 175e6 175e6 175e6
side = high

[throughput]
lte_rf_hz = 2.595e9
lte_bandwidth_hz = 5e6
lte_power_dbm = -20
lte_rank = 2
lte_if_hz = 75e6 175e6 400e6
mcs_min = 0
mcs_max = 28
ue_noise_dbm_hz = -150
wifi_case = true
wifi_rf_hz = 2.412e9
wifi_bandwidth_hz = 20e6
wifi_power_dbm = 0
wifi_if_hz = 175e6
wifi_pair = 2
rolloff_db = 3
)";

constexpr std::array<std::pair<std::string_view, std::string_view>, 4> kPresets{{
    {"fig5", kFig5},
    {"fig6-50m", kFig6_50},
    {"fig6-15m", kFig6_15},
    {"fig7", kFig7},
}};

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& [name, text] : kPresets) out.emplace_back(name);
    return out;
}

std::optional<std::string_view> preset_text(std::string_view name) {
    for (const auto& [n, text] : kPresets)
        if (n == name) return text;
    return std::nullopt;
}

}  // namespace amroc::cli
