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


#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <unistd.h>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <json.hpp>

#include "amroc/cli/cli.hpp"

namespace amroc::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

// Files produced by one command, written into a staging directory and moved
// into place only after the command succeeded.
class Staging {
public:
    Staging(fs::path out, const std::string& command)
        : out_(std::move(out)), dir_(out_ / fmt::format(".{}.staging.{}", command, ::getpid())) {}
    ~Staging() {
        std::error_code ec;
        fs::remove_all(dir_, ec);
    }
    Staging(const Staging&) = delete;
    Staging& operator=(const Staging&) = delete;

    fs::path path(const std::string& name) {
        fs::create_directories(dir_);
        return dir_ / name;
    }
    void text(const std::string& name, const std::string& body) {
        std::ofstream os(path(name), std::ios::binary);
        os << body;
        if (!os) throw std::runtime_error(fmt::format("cannot write {}", name));
        names_.push_back(name);
    }
    void add(const std::string& name) { names_.push_back(name); }

    std::vector<fs::path> commit() {
        std::vector<fs::path> done;
        for (const auto& n : names_) {
            const auto dst = out_ / n;
            if (fs::is_directory(dst)) fs::remove_all(dst);
            fs::rename(dir_ / n, dst);
            done.push_back(dst);
        }
        return done;
    }

private:
    fs::path out_;
    fs::path dir_;
    std::vector<std::string> names_;
};

std::string csv_list(std::span<const double> v, const char* fmt_spec = "{:.1f}") {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ' ';
        s += fmt::format(fmt::runtime(fmt_spec), v[i]);
    }
    return s;
}

std::vector<SignalSpec> signals_for(const ExperimentConfig& cfg) {
    if (!cfg.signals.empty()) return cfg.signals;
    return antenna_signals(cfg.scenario, cfg.scenario_rf_hz);
}

Sf2sfMapping explicit_mapping(const ExperimentConfig& cfg, std::span<const SignalSpec> signals) {
    if (!cfg.mapping.space) throw std::invalid_argument("mapping.space is required for this command");
    auto lo = lo_plan_from_ifs(signals, cfg.mapping.if_hz, cfg.mapping.side);
    for (auto& f : lo.f_up_hz) f += cfg.mapping.lo_detune_hz;
    return {*cfg.mapping.space, lo, cfg.mapping.per_pair, cfg.mapping.lo_detune_hz != 0.0};
}

std::vector<Sf2sfMapping> candidates_for(const ExperimentConfig& cfg, const Chain& chain,
                                         std::span<const SignalSpec> signals) {
    return canonical_candidates(signals, chain.cable.num_pairs, cfg.mapping.per_pair, cfg.mapping.if_slots_hz,
                                cfg.mapping.side);
}

std::vector<double> if_centers(const Sf2sfMapping& m, std::span<const SignalSpec> signals) {
    std::vector<double> v;
    for (const auto& c : m.if_plan(signals)) v.push_back(c.if_center_hz);
    return v;
}

Json mapping_json(const Sf2sfMapping& m, std::span<const SignalSpec> signals) {
    return Json{{"space", m.space.to_text()}, {"if_hz", if_centers(m, signals)}};
}

BeamScenario scenario_for(const ExperimentConfig& cfg, int n_ports) {
    auto sc = cfg.scenario;
    if (sc.n_antennas != n_ports)
        throw std::invalid_argument(
            fmt::format("scenario.n_antennas is {} but {} signals are defined", sc.n_antennas, n_ports));
    return sc;
}

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// ---------------------------------------------------------------------------

void cmd_calibrate(const ExperimentConfig& cfg, Staging& st, Json& sum) {
    auto tmpl = cfg.cable;
    tmpl.pair_loss_scale.clear();
    const auto r = calibrate_chain(cfg.targets, tmpl, cfg.frontend);
    std::string csv = "length_m,f_if_hz,target_db,model_db,residual_db\n";
    for (std::size_t i = 0; i < cfg.targets.size(); ++i) {
        const auto& t = cfg.targets[i];
        csv += fmt::format("{:.3f},{:.1f},{:.6f},{:.6f},{:.6f}\n", t.length_m, t.f_if_hz, t.end_to_end_db,
                           r.model_db[i], r.residual_db[i]);
    }
    st.text("calibrate.csv", csv);
    sum["insertion_loss_db"] = r.insertion_loss_db;
    sum["cable_scale"] = r.cable_scale;
    sum["max_abs_residual_db"] = r.max_abs_residual_db();
    sum["targets"] = cfg.targets.size();
}

int cmd_plan(const ExperimentConfig& cfg, const Chain& chain, Staging& st, Json& sum, std::ostream& err) {
    const auto signals = signals_for(cfg);
    std::string csv = "candidate_id,signal,pair,rf_center_hz,f_down_hz,f_up_hz,if_center_hz,inverted,valid\n";
    auto rows = [&](std::size_t id, const Sf2sfMapping& m, bool valid) {
        const auto conv = m.if_plan(signals);
        for (std::size_t n = 0; n < signals.size(); ++n)
            csv += fmt::format("{},{},{},{:.1f},{:.1f},{:.1f},{:.1f},{},{}\n", id, n,
                               m.space.pair_of(static_cast<int>(n)).value_or(-1), signals[n].rf_center_hz,
                               m.lo.f_down_hz[n], m.lo.f_up_hz[n], conv[n].if_center_hz, conv[n].inverted ? 1 : 0,
                               valid ? 1 : 0);
    };
    if (cfg.mapping.space) {
        const auto m = explicit_mapping(cfg, signals);
        const auto v = validate_mapping(signals, m, chain.frontend);
        if (!v.empty()) {
            for (const auto& x : v) err << fmt::format("violation: [{}] {}\n", to_string(x.kind), x.detail);
            return kExitValidation;
        }
        rows(0, m, true);
        sum["mode"] = "explicit";
        sum["valid"] = true;
        sum["violations"] = Json::array();
        sum["mapping"] = mapping_json(m, signals);
    } else {
        const auto cands = candidates_for(cfg, chain, signals);
        std::size_t ok = 0;
        for (std::size_t i = 0; i < cands.size(); ++i) {
            const bool valid = validate_mapping(signals, cands[i], chain.frontend).empty();
            ok += valid ? 1 : 0;
            rows(i, cands[i], valid);
        }
        sum["mode"] = "enumerate";
        sum["candidates"] = cands.size();
        sum["valid_candidates"] = ok;
    }
    st.text("plan.csv", csv);
    return kExitOk;
}

void cmd_optimize(const ExperimentConfig& cfg, const Chain& chain, bool greedy, int threads, Staging& st, Json& sum,
                  std::ostream& out) {
    const auto signals = signals_for(cfg);
    const auto sc = scenario_for(cfg, static_cast<int>(signals.size()));
    auto opt = cfg.search;
    opt.threads = threads;
    std::string csv = "candidate_id,space,if_hz,objective_db\n";
    sum["scalarization"] = std::string(to_string(opt.scalarization));
    if (greedy) {
        const GreedyOptions go{cfg.mapping.if_slots_hz, cfg.mapping.per_pair, cfg.mapping.side};
        const auto m = greedy_mapping(sc, signals, chain.cable, chain.frontend, go);
        const double obj = scalarize(sweep_theta(sc, signals, chain.cable, chain.frontend, m), opt);
        csv += fmt::format("greedy,{},{},{:.9f}\n", m.space.to_text(), csv_list(if_centers(m, signals)), obj);
        sum["mode"] = "greedy";
        sum["candidates_evaluated"] = 1;
        sum["best_candidate_id"] = "greedy";
        sum["best_objective_db"] = obj;
        sum["best_mapping"] = mapping_json(m, signals);
    } else {
        const auto cands = candidates_for(cfg, chain, signals);
        const auto t0 = Clock::now();
        const auto r = exhaustive_search(sc, signals, chain.cable, chain.frontend, cands, opt);
        out << fmt::format("optimize-mapping: {} candidates in {:.1f} s\n", cands.size(), since(t0));
        for (std::size_t i = 0; i < cands.size(); ++i)
            csv += fmt::format("{},{},{},{:.9f}\n", i, cands[i].space.to_text(), csv_list(if_centers(cands[i], signals)),
                               r.objective_db[i]);
        sum["mode"] = "exhaustive";
        sum["candidates_evaluated"] = cands.size();
        sum["best_candidate_id"] = std::to_string(r.best_index);
        sum["best_objective_db"] = r.best_objective_db;
        sum["worst_objective_db"] = *std::min_element(r.objective_db.begin(), r.objective_db.end());
        sum["best_mapping"] = mapping_json(r.best, signals);
        sum["dispersion_db"] = r.dispersion_db;
        sum["dispersion_theta_deg"] = r.dispersion_theta_deg;
    }
    st.text("optimize-mapping.csv", csv);
}

void cmd_sinr_sweep(const ExperimentConfig& cfg, const Chain& chain, int threads, Staging& st, Json& sum,
                    std::ostream& out) {
    const auto signals = signals_for(cfg);
    const auto sc = scenario_for(cfg, static_cast<int>(signals.size()));
    std::string csv = "candidate_id,theta_deg,sinr_db\n";
    auto emit = [&](const std::string& id, const SinrCurve& c) {
        for (std::size_t t = 0; t < c.theta_deg.size(); ++t)
            csv += fmt::format("{},{:.3f},{:.9f}\n", id, c.theta_deg[t], c.sinr_db[t]);
    };
    if (cfg.mapping.space) {
        const auto m = explicit_mapping(cfg, signals);
        const auto c = sweep_theta(sc, signals, chain.cable, chain.frontend, m);
        emit("0", c);
        sum["mode"] = "explicit";
        sum["candidates"] = 1;
        sum["objective_db"] = scalarize(c, cfg.search);
    } else {
        const auto cands = candidates_for(cfg, chain, signals);
        auto opt = cfg.search;
        opt.threads = threads;
        const auto t0 = Clock::now();
        const auto r = exhaustive_search(sc, signals, chain.cable, chain.frontend, cands, opt);
        out << fmt::format("sinr-sweep: {} candidates in {:.1f} s\n", cands.size(), since(t0));
        const auto worst = static_cast<std::size_t>(
            std::min_element(r.objective_db.begin(), r.objective_db.end()) - r.objective_db.begin());
        std::set<std::size_t> keep;
        if (cfg.curves == CurveSet::All) {
            for (std::size_t i = 0; i < cands.size(); ++i) keep.insert(i);
        } else {
            keep.insert(r.envelope_argmax.begin(), r.envelope_argmax.end());
            keep.insert(r.best_index);
            keep.insert(worst);
        }
        for (auto i : keep) emit(std::to_string(i), r.curves[i]);
        emit("envelope", r.envelope);
        sum["mode"] = "exhaustive";
        sum["candidates"] = cands.size();
        sum["curves_written"] = std::vector<std::size_t>(keep.begin(), keep.end());
        sum["best_candidate_id"] = std::to_string(r.best_index);
        sum["worst_candidate_id"] = std::to_string(worst);
        sum["best_objective_db"] = r.best_objective_db;
        sum["worst_objective_db"] = r.objective_db[worst];
        sum["dispersion_db"] = r.dispersion_db;
        sum["dispersion_theta_deg"] = r.dispersion_theta_deg;
    }
    sum["scalarization"] = std::string(to_string(cfg.search.scalarization));
    st.text("sinr-sweep.csv", csv);
}

void cmd_evm_sweep(const ExperimentConfig& cfg, const Chain& chain, int threads, Staging& st, Json& sum) {
    auto opt = cfg.evm;
    opt.seed = *cfg.seed;
    opt.threads = threads;
    opt.lo_detune_hz = cfg.mapping.lo_detune_hz;
    if (cfg.evm_gain_db) {
        opt.gain_db = *cfg.evm_gain_db;
    } else {
        if (cfg.signals.empty())
            throw std::invalid_argument("evm-sweep needs [signal.0] (or sweep.gain_db) to derive the link gain");
        LabLink link{chain.cable, chain.frontend};
        link.rf_center_hz = cfg.signals[0].rf_center_hz;
        link.bandwidth_hz = cfg.signals[0].bandwidth_hz;
        if (!cfg.mapping.if_hz.empty()) link.if_hz = cfg.mapping.if_hz[0];
        if (cfg.mapping.space) link.pair = cfg.mapping.space->pair_of(0).value_or(0);
        link.lo_detune_hz = cfg.mapping.lo_detune_hz;
        opt.gain_db = lab_link_gain_db(link);
    }
    const auto rows = evm_sweep(opt);
    std::ostringstream csv;
    write_evm_csv(rows, csv);
    st.text("evm-sweep.csv", csv.str());

    constexpr double kLimitDb = -25.0;
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].metrics.evm_db < rows[best].metrics.evm_db) best = i;
    Json meets = nullptr;
    for (const auto& r : rows)
        if (r.metrics.evm_db <= kLimitDb) {
            meets = r.input_power_dbm;
            break;
        }
    sum["gain_db"] = opt.gain_db;
    sum["lo_detune_hz"] = opt.lo_detune_hz;
    sum["sample_rate_hz"] = opt.waveform.sample_rate_hz();
    sum["frame_length"] = opt.waveform.frame_length();
    sum["evm_limit_db"] = kLimitDb;
    sum["lowest_power_meeting_limit_dbm"] = meets;
    sum["evm_min_db"] = rows[best].metrics.evm_db;
    sum["evm_min_at_dbm"] = rows[best].input_power_dbm;
    sum["points"] = rows.size();

    if (cfg.dump_waveforms) {
        const auto ref = evm_sweep_reference(opt);
        const std::string dir = "evm-sweep.waveforms";
        fs::create_directories(st.path(dir));
        write_waveform(st.path(dir) / "tx", ref.samples, ref.spec.sample_rate_hz(), 0.0);
        for (std::size_t i = 0; i < rows.size(); ++i)
            write_waveform(st.path(dir) / fmt::format("rx_{:03d}", i), evm_sweep_capture(opt, ref, i),
                           ref.spec.sample_rate_hz(), 0.0);
        st.add(dir);
        sum["waveform_dir"] = dir;
    }
}

void cmd_throughput(const ExperimentConfig& cfg, const Chain& chain, Staging& st, Json& sum) {
    auto opt = cfg.throughput;
    opt.cable = chain.cable;
    opt.frontend = chain.frontend;
    const auto rows = throughput_study(opt);
    std::ostringstream csv;
    write_throughput_csv(rows, csv);
    st.text("throughput.csv", csv.str());

    sum["table_version"] = std::string(throughput_table_version());
    Json cases = Json::array();
    for (double f : opt.lte_if_hz) cases.push_back({{"scenario", "lte"}, {"if_hz", f}, {"sinr_db", lte_sinr_db(opt, f, false)}});
    if (opt.wifi_case) {
        cases.push_back({{"scenario", "lte+wifi"}, {"if_hz", opt.wifi_if_hz}, {"sinr_db", lte_sinr_db(opt, opt.wifi_if_hz, true)}});
        // First MCS where coexistence costs more than 5 % against LTE alone at the same IF.
        Json first = nullptr;
        for (int mcs : opt.mcs) {
            const double base = lte_sinr_db(opt, opt.wifi_if_hz, false);
            const double with = lte_sinr_db(opt, opt.wifi_if_hz, true);
            const double a = throughput_mbps(base, mcs, Rat::LTE, opt.lte_bandwidth_hz, opt.lte_rank, opt.link);
            const double b = throughput_mbps(with, mcs, Rat::LTE, opt.lte_bandwidth_hz, opt.lte_rank, opt.link);
            if (b < 0.95 * a) {
                first = mcs;
                break;
            }
        }
        sum["first_mcs_degraded_by_wifi"] = first;
    }
    sum["cases"] = cases;
}

void cmd_channel(const ExperimentConfig& cfg, const Chain& chain, Staging& st, Json& sum) {
    const auto signals = signals_for(cfg);
    const auto m = explicit_mapping(cfg, signals);
    const auto grid = default_grid(signals, 64);
    const auto ch = build_effective_channel(signals, m, chain.cable, chain.frontend, grid);
    std::ostringstream csv;
    write_channel_csv(ch, csv);
    st.text("channel.csv", csv.str());
    sum["n_signals"] = ch.n_signals();
    sum["n_pairs"] = ch.n_pairs();
    sum["grid_points"] = grid.size();
    sum["if_centers_hz"] = ch.if_centers_hz;
    sum["inverted"] = ch.inverted;
    sum["mapping"] = mapping_json(m, signals);
}

struct CommandInfo {
    std::string_view name;
    bool needs_seed;
};
constexpr std::array<CommandInfo, 8> kCommands{{
    {"calibrate", false},
    {"plan", false},
    {"optimize-mapping", true},
    {"sinr-sweep", true},
    {"evm-sweep", true},
    {"throughput", true},
    {"channel", true},
    {"validate", false},
}};

}  // namespace

std::vector<std::string> command_names() {
    std::vector<std::string> v;
    for (const auto& c : kCommands) v.emplace_back(c.name);
    return v;
}

int run(const RunRequest& req, std::ostream& out, std::ostream& err) {
    const auto info = std::find_if(kCommands.begin(), kCommands.end(),
                                   [&](const CommandInfo& c) { return c.name == req.command; });
    if (info == kCommands.end()) {
        err << fmt::format("config error: unknown command '{}'\n", req.command);
        return kExitConfig;
    }

    ExperimentConfig cfg;
    try {
        RawConfig raw;
        if (req.config_path && req.preset) throw ConfigError("use either --config or --preset, not both");
        if (req.config_path) {
            raw = load_raw(*req.config_path);
        } else if (req.preset) {
            const auto text = preset_text(*req.preset);
            if (!text) throw ConfigError(fmt::format("unknown preset '{}'", *req.preset));
            std::istringstream is{std::string(*text)};
            raw = parse_ini(is);
        } else {
            throw ConfigError("--config PATH or --preset NAME is required");
        }
        for (const auto& o : req.overrides) apply_override(raw, o);
        cfg = build_config(raw);
        if (req.seed) cfg.seed = *req.seed;
        if (req.out_dir) cfg.output_dir = *req.out_dir;
        if (req.threads < 1) throw ConfigError("--threads must be >= 1");
        if (info->needs_seed && !cfg.seed) throw ConfigError(fmt::format("seed is required for {}", req.command));
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    const auto diags = validate_config(cfg);
    bool failed = false;
    for (const auto& d : diags) {
        err << fmt::format("{}: {}: {}\n", d.error ? "error" : "warning", d.key, d.message);
        failed = failed || d.error;
    }
    if (failed) return kExitValidation;
    if (req.command == "validate") {
        out << "config is valid\n";
        return kExitOk;
    }

    try {
        const auto t0 = Clock::now();
        const auto chain = resolve_chain(cfg);
        Staging st(cfg.output_dir, req.command);
        Json sum;
        sum["command"] = req.command;
        sum["seed"] = cfg.seed ? Json(*cfg.seed) : Json(nullptr);
        if (chain.calibration)
            sum["calibration"] = {{"insertion_loss_db", chain.calibration->insertion_loss_db},
                                  {"cable_scale", chain.calibration->cable_scale}};

        int rc = kExitOk;
        if (req.command == "calibrate")
            cmd_calibrate(cfg, st, sum);
        else if (req.command == "plan")
            rc = cmd_plan(cfg, chain, st, sum, err);
        else if (req.command == "optimize-mapping")
            cmd_optimize(cfg, chain, req.greedy, req.threads, st, sum, out);
        else if (req.command == "sinr-sweep")
            cmd_sinr_sweep(cfg, chain, req.threads, st, sum, out);
        else if (req.command == "evm-sweep")
            cmd_evm_sweep(cfg, chain, req.threads, st, sum);
        else if (req.command == "throughput")
            cmd_throughput(cfg, chain, st, sum);
        else if (req.command == "channel")
            cmd_channel(cfg, chain, st, sum);
        if (rc != kExitOk) return rc;

        st.text(req.command + ".summary.json", sum.dump(2) + "\n");
        fs::create_directories(cfg.output_dir);
        for (const auto& p : st.commit()) out << "wrote " << p.string() << '\n';
        out << fmt::format("{} finished in {:.2f} s\n", req.command, since(t0));
        return kExitOk;
    } catch (const InvalidMappingError& e) {
        for (const auto& v : e.violations()) err << fmt::format("violation: [{}] {}\n", to_string(v.kind), v.detail);
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}

int main_entry(int argc, char** argv) {
    CLI::App app{"amroc: analog MIMO radio-over-copper fronthaul simulator"};
    RunRequest req;
    std::string command;
    std::string preset_to_print;
    std::string config_path;
    std::string preset;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool exhaustive = false;

    const auto names = command_names();
    std::string cmd_help = "one of:";
    for (const auto& n : names) cmd_help += " " + n;
    cmd_help += " presets";
    app.add_option("command", command, cmd_help)->required();
    app.add_option("name", preset_to_print, "preset to print (presets command)");
    auto* o_config = app.add_option("--config", config_path, "INI experiment config");
    auto* o_preset = app.add_option("--preset", preset, "built-in preset: fig5, fig6-50m, fig6-15m, fig7");
    auto* o_out = app.add_option("--out", out_dir, "output directory (overrides output_dir)");
    auto* o_seed = app.add_option("--seed", seed, "root seed (overrides seed)");
    app.add_option("--threads", req.threads, "worker threads")->check(CLI::PositiveNumber);
    auto* f_ex = app.add_flag("--exhaustive", exhaustive, "optimize-mapping: evaluate every candidate (default)");
    auto* f_gr = app.add_flag("--greedy", req.greedy, "optimize-mapping: greedy heuristic");
    f_ex->excludes(f_gr);
    app.add_option("--set", req.overrides, "override section.key=value (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    if (command == "presets") {
        if (preset_to_print.empty()) {
            for (const auto& n : preset_names()) std::cout << n << '\n';
            return kExitOk;
        }
        const auto t = preset_text(preset_to_print);
        if (!t) {
            std::cerr << "config error: unknown preset '" << preset_to_print << "'\n";
            return kExitConfig;
        }
        std::cout << *t;
        return kExitOk;
    }

    req.command = command;
    if (o_config->count()) req.config_path = config_path;
    if (o_preset->count()) req.preset = preset;
    if (o_out->count()) req.out_dir = out_dir;
    if (o_seed->count()) req.seed = seed;
    return run(req, std::cout, std::cerr);
}

}  // namespace amroc::cli
