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
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "amroc/beamforming.hpp"
#include "amroc/channel_models.hpp"
#include "amroc/experiments.hpp"
#include "amroc/mapping_search.hpp"

namespace amroc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitConfig = 2;

/// Unreadable file, syntax error, unknown key or a value of the wrong type.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Section -> key -> raw value. Top-level keys live in section "".
using RawConfig = std::map<std::string, std::map<std::string, std::string>>;

RawConfig parse_ini(std::istream& in);
RawConfig load_raw(const std::string& path);

/// "section.key=value" or "key=value" for top-level keys. Sections may
/// contain dots ("signal.0.power_dbm=-3").
void apply_override(RawConfig& raw, std::string_view assignment);

struct MappingSection {
    std::optional<SpaceMap> space;
    std::vector<double> if_hz;
    InjectionSide side = InjectionSide::High;
    int per_pair = 2;
    double lo_detune_hz = 0.0;
    std::vector<double> if_slots_hz{50.0e6, 75.0e6, 175.0e6, 400.0e6};
};

enum class CurveSet { All, Support };

struct ExperimentConfig {
    std::optional<std::uint64_t> seed;
    std::string output_dir = "out";

    CableSpec cable;
    FrontEndSpec frontend = default_frontend();
    NoiseModel noise;
    bool calibrate = false;
    std::vector<CalibrationTarget> targets = lab_calibration_targets();

    std::vector<SignalSpec> signals;
    bool has_mapping = false;
    MappingSection mapping;

    BeamScenario scenario;
    double scenario_rf_hz = 2.63e9;
    double theta_step_deg = 1.0;
    SearchOptions search;
    CurveSet curves = CurveSet::Support;

    EvmSweepOptions evm;  ///< input_power_dbm is built from the three fields below
    double power_min_dbm = -30.0;
    double power_max_dbm = 5.0;
    double power_step_db = 1.0;
    std::optional<double> evm_gain_db;
    bool dump_waveforms = false;

    ThroughputStudyOptions throughput;  ///< mcs is built from mcs_min..mcs_max
    int mcs_min = 0;
    int mcs_max = 28;
};

/// Typed config from raw sections. Throws ConfigError naming the key on an
/// unknown section or key or an unparsable value.
ExperimentConfig build_config(const RawConfig& raw);

struct Diagnostic {
    std::string key;
    std::string message;
    bool error = true;  ///< false for warnings
};

/// Schema and physics checks without running anything. An empty list (or
/// warnings only) means the config is usable.
std::vector<Diagnostic> validate_config(const ExperimentConfig& cfg);

/// Cable and front-end after the optional lab calibration, with the
/// seed-derived FEXT phases.
struct Chain {
    CableSpec cable;
    FrontEndSpec frontend;
    std::optional<CalibrationResult> calibration;
};
Chain resolve_chain(const ExperimentConfig& cfg);

std::vector<std::string> preset_names();
std::optional<std::string_view> preset_text(std::string_view name);

struct RunRequest {
    std::string command;
    std::optional<std::string> config_path;
    std::optional<std::string> preset;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    int threads = 1;
    bool greedy = false;
    std::vector<std::string> overrides;
};

std::vector<std::string> command_names();

/// Runs one experiment and writes <out>/<command>.csv and
/// <command>.summary.json atomically. Returns the process exit code; nothing
/// is written unless it is kExitOk. Diagnostics go to `err`.
int run(const RunRequest& req, std::ostream& out, std::ostream& err);

/// Command-line entry point (flag parsing plus run()).
int main_entry(int argc, char** argv);

}  // namespace amroc::cli
