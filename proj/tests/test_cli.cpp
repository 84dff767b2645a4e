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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "amroc/cli/cli.hpp"

using namespace amroc::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
    int rc;
    std::string out;
    std::string err;
};

Result run_cmd(RunRequest req) {
    std::ostringstream out, err;
    const int rc = run(req, out, err);
    return {rc, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("amroc_test_cli_" + name);
    fs::remove_all(p);
    return p;
}

fs::path write_ini(const std::string& name, const std::string& body) {
    auto p = fs::temp_directory_path() / ("amroc_test_cli_" + name + ".ini");
    std::ofstream(p) << body;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream s;
    s << is.rdbuf();
    return s.str();
}

RunRequest preset_req(const std::string& command, const std::string& preset, const fs::path& out) {
    RunRequest r;
    r.command = command;
    r.preset = preset;
    r.out_dir = out.string();
    return r;
}

const char* kMinimal = R"(seed = 3
[cable]
category = cat5e
length_m = 50
[signal.0]
rf_center_hz = 2.63e9
bandwidth_hz = 7e6
power_dbm = -20
rat = wimax
[mapping]
space = 1; 0; 0; 0
if_hz = 140e6
)";

}  // namespace

TEST_CASE("every preset validates") {
    for (const auto& p : preset_names()) {
        CAPTURE(p);
        RunRequest r;
        r.command = "validate";
        r.preset = p;
        const auto res = run_cmd(r);
        CHECK(res.rc == kExitOk);
        CHECK(res.err.empty());
    }
}

TEST_CASE("missing config and unknown command are config errors") {
    RunRequest r;
    r.command = "validate";
    CHECK(run_cmd(r).rc == kExitConfig);
    r.command = "frobnicate";
    r.preset = "fig7";
    CHECK(run_cmd(r).rc == kExitConfig);
    r.command = "validate";
    r.preset = "no-such-preset";
    CHECK(run_cmd(r).rc == kExitConfig);
}

TEST_CASE("unknown key exits 2 and names it") {
    const auto ini = write_ini("unknown", std::string(kMinimal) + "[frontend]\nlenght_m = 10\n");
    RunRequest r;
    r.command = "validate";
    r.config_path = ini.string();
    const auto res = run_cmd(r);
    CHECK(res.rc == kExitConfig);
    CHECK(res.err.find("lenght_m") != std::string::npos);

    RunRequest o = preset_req("validate", "fig6-50m", scratch("unk"));
    o.overrides = {"cable.colour=red"};
    CHECK(run_cmd(o).rc == kExitConfig);
    o.overrides = {"nosection.key=1"};
    CHECK(run_cmd(o).rc == kExitConfig);
}

TEST_CASE("malformed values exit 2") {
    RunRequest r = preset_req("validate", "fig6-50m", scratch("malformed"));
    r.overrides = {"cable.length_m=fifty"};
    CHECK(run_cmd(r).rc == kExitConfig);
    r.overrides = {"cable.length_m"};
    CHECK(run_cmd(r).rc == kExitConfig);
}

TEST_CASE("signal power above 5 dBm is reported against its key") {
    RunRequest r = preset_req("validate", "fig6-50m", scratch("power"));
    r.overrides = {"signal.0.power_dbm=6"};
    const auto res = run_cmd(r);
    CHECK(res.rc == kExitValidation);
    CHECK(res.err.find("signal.0.power_dbm") != std::string::npos);
}

TEST_CASE("negative cable length names the key") {
    RunRequest r = preset_req("validate", "fig6-50m", scratch("neg"));
    r.overrides = {"cable.length_m=-5"};
    const auto res = run_cmd(r);
    CHECK(res.rc == kExitValidation);
    CHECK(res.err.find("cable.length_m") != std::string::npos);
}

TEST_CASE("nothing is written when the command fails") {
    const auto out = scratch("nothing");
    RunRequest r = preset_req("plan", "fig6-50m", out);
    r.overrides = {"mapping.if_hz=5e6"};  // below the passband
    const auto res = run_cmd(r);
    CHECK(res.rc == kExitValidation);
    CHECK(res.err.find("violation") != std::string::npos);
    CHECK(!fs::exists(out / "plan.csv"));
    CHECK(!fs::exists(out / "plan.summary.json"));

    RunRequest s = preset_req("evm-sweep", "fig6-50m", out);
    s.overrides = {"sweep.input_power_max_dbm=9"};
    CHECK(run_cmd(s).rc == kExitValidation);
    CHECK(!fs::exists(out / "evm-sweep.csv"));
}

TEST_CASE("seed is mandatory for stochastic commands") {
    const auto ini = write_ini("noseed", std::string(kMinimal).substr(std::string(kMinimal).find('\n') + 1));
    RunRequest r;
    r.command = "evm-sweep";
    r.config_path = ini.string();
    r.out_dir = scratch("noseed").string();
    r.overrides = {"sweep.input_power_min_dbm=-10", "sweep.input_power_max_dbm=-8"};
    CHECK(run_cmd(r).rc == kExitConfig);
    r.seed = 4;
    CHECK(run_cmd(r).rc == kExitOk);
    r.command = "plan";
    r.seed.reset();
    CHECK(run_cmd(r).rc == kExitOk);
}

TEST_CASE("fig6 plan echoes the IF and a valid row") {
    const auto out = scratch("plan");
    const auto res = run_cmd(preset_req("plan", "fig6-50m", out));
    REQUIRE(res.rc == kExitOk);
    const auto csv = slurp(out / "plan.csv");
    CHECK(csv.rfind("candidate_id,signal,pair,rf_center_hz,f_down_hz,f_up_hz,if_center_hz,inverted,valid\n", 0) == 0);
    CHECK(csv.find(",140000000.0,") != std::string::npos);
    const auto j = nlohmann::json::parse(slurp(out / "plan.summary.json"));
    CHECK(j["valid"] == true);
    CHECK(j["mapping"]["if_hz"][0].get<double>() == doctest::Approx(140e6));
}

TEST_CASE("fig5 plan enumerates 2520 valid candidates") {
    const auto out = scratch("plan5");
    REQUIRE(run_cmd(preset_req("plan", "fig5", out)).rc == kExitOk);
    const auto j = nlohmann::json::parse(slurp(out / "plan.summary.json"));
    CHECK(j["candidates"] == 2520);
    CHECK(j["valid_candidates"] == 2520);
}

TEST_CASE("optimize-mapping exhaustive covers every candidate and beats greedy") {
    const auto out = scratch("opt");
    RunRequest r = preset_req("optimize-mapping", "fig5", out);
    r.overrides = {"scenario.theta_step_deg=15"};
    r.threads = 2;
    REQUIRE(run_cmd(r).rc == kExitOk);
    const auto ex = nlohmann::json::parse(slurp(out / "optimize-mapping.summary.json"));
    CHECK(ex["candidates_evaluated"] == 2520);
    const auto csv = slurp(out / "optimize-mapping.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2521);

    r.greedy = true;
    REQUIRE(run_cmd(r).rc == kExitOk);
    const auto gr = nlohmann::json::parse(slurp(out / "optimize-mapping.summary.json"));
    CHECK(gr["mode"] == "greedy");
    CHECK(ex["best_objective_db"].get<double>() >= gr["best_objective_db"].get<double>());
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
    struct Case {
        const char* command;
        const char* preset;
        std::vector<std::string> overrides;
    };
    const std::vector<Case> cases{
        {"calibrate", "fig6-50m", {}},
        {"plan", "fig7", {}},
        {"channel", "fig7", {}},
        {"throughput", "fig7", {}},
        {"evm-sweep", "fig6-50m", {"sweep.input_power_min_dbm=-12", "sweep.input_power_max_dbm=-4"}},
        {"sinr-sweep", "fig5", {"scenario.theta_step_deg=30"}},
    };
    for (const auto& c : cases) {
        CAPTURE(c.command);
        std::string first;
        for (int threads : {1, 2}) {
            const auto out = scratch(std::string("det_") + c.command + std::to_string(threads));
            RunRequest r = preset_req(c.command, c.preset, out);
            r.overrides = c.overrides;
            r.threads = threads;
            REQUIRE(run_cmd(r).rc == kExitOk);
            const auto body = slurp(out / (std::string(c.command) + ".csv")) +
                              slurp(out / (std::string(c.command) + ".summary.json"));
            if (first.empty())
                first = body;
            else
                CHECK(body == first);
        }
    }
}

TEST_CASE("seed changes stochastic output") {
    const auto a = scratch("seed_a"), b = scratch("seed_b");
    RunRequest r = preset_req("evm-sweep", "fig6-50m", a);
    r.overrides = {"sweep.input_power_min_dbm=-10", "sweep.input_power_max_dbm=-10"};
    r.seed = 10;
    REQUIRE(run_cmd(r).rc == kExitOk);
    r.out_dir = b.string();
    r.seed = 11;
    REQUIRE(run_cmd(r).rc == kExitOk);
    CHECK(slurp(a / "evm-sweep.csv") != slurp(b / "evm-sweep.csv"));
}

TEST_CASE("overrides take effect") {
    const auto out = scratch("ovr");
    RunRequest r = preset_req("plan", "fig6-50m", out);
    r.overrides = {"mapping.if_hz=200e6"};
    REQUIRE(run_cmd(r).rc == kExitOk);
    CHECK(slurp(out / "plan.csv").find(",200000000.0,") != std::string::npos);
}

TEST_CASE("waveform dumps come with a sidecar") {
    const auto out = scratch("dump");
    RunRequest r = preset_req("evm-sweep", "fig6-50m", out);
    r.overrides = {"sweep.input_power_min_dbm=-10", "sweep.input_power_max_dbm=-9", "sweep.dump_waveforms=true"};
    REQUIRE(run_cmd(r).rc == kExitOk);
    const auto dir = out / "evm-sweep.waveforms";
    CHECK(fs::exists(dir / "tx.bin"));
    CHECK(fs::exists(dir / "rx_001.bin"));
    const auto j = nlohmann::json::parse(slurp(dir / "rx_001.json"));
    CHECK(j["format"] == "cf32_le");
    CHECK(fs::file_size(dir / "rx_001.bin") == 8 * j["length"].get<std::size_t>());
}

TEST_CASE("CSV headers are fixed per command") {
    const std::vector<std::pair<std::string, std::string>> expect{
        {"calibrate", "length_m,f_if_hz,target_db,model_db,residual_db"},
        {"plan", "candidate_id,signal,pair,rf_center_hz,f_down_hz,f_up_hz,if_center_hz,inverted,valid"},
        {"sinr-sweep", "candidate_id,theta_deg,sinr_db"},
        {"optimize-mapping", "candidate_id,space,if_hz,objective_db"},
        {"evm-sweep", "sweep_var,value,evm_db,cf_db,rssi_dbm,bp_dbm,cinr_db,cfe_hz,ce_ppm"},
        {"throughput", "scenario,mcs,if_hz,sinr_db,throughput_mbps"},
        {"channel", "delta_hz,n,m,re,im"},
    };
    for (const auto& [cmd, header] : expect) {
        CAPTURE(cmd);
        const auto out = scratch("hdr_" + cmd);
        const bool fig7 = cmd == "throughput" || cmd == "channel" || cmd == "plan";
        RunRequest r = preset_req(cmd, fig7 ? "fig7" : "fig6-50m", out);
        if (cmd == "sinr-sweep" || cmd == "optimize-mapping") {
            r.preset = "fig5";
            r.overrides = {"scenario.theta_step_deg=45"};
            r.greedy = true;
        }
        if (cmd == "evm-sweep") r.overrides = {"sweep.input_power_min_dbm=-10", "sweep.input_power_max_dbm=-10"};
        REQUIRE(run_cmd(r).rc == kExitOk);
        const auto csv = slurp(out / (cmd + ".csv"));
        CHECK(csv.substr(0, csv.find('\n')) == header);
    }
}
