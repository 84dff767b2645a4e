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
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/core.h>

#include "amroc/cli/cli.hpp"
#include "amroc/rng.hpp"

namespace amroc::cli {

RawConfig parse_ini(std::istream& in) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(fmt::format("config line {}: {}", e.line(), e.message()));
    }
    RawConfig raw;
    raw[""];
    for (const auto& [name, node] : tree) {
        if (node.empty()) {
            raw[""][name] = node.data();
            continue;
        }
        auto& sec = raw[name];
        for (const auto& [key, leaf] : node) sec[key] = leaf.data();
    }
    return raw;
}

RawConfig load_raw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot read config file '{}'", path));
    return parse_ini(in);
}

void apply_override(RawConfig& raw, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw ConfigError(fmt::format("override '{}' is not key=value", assignment));
    const std::string path(assignment.substr(0, eq));
    const std::string value(assignment.substr(eq + 1));
    const auto dot = path.rfind('.');
    if (dot == std::string::npos)
        raw[""][path] = value;
    else
        raw[path.substr(0, dot)][path.substr(dot + 1)] = value;
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n\"");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n\"");
    return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, std::string_view v) {
    const std::string t = trim(v);
    if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
    if (t == "-inf") return -std::numeric_limits<double>::infinity();
    double x = 0.0;
    const auto* end = t.data() + t.size();
    const auto [p, ec] = std::from_chars(t.data(), end, x);
    if (ec != std::errc() || p != end || t.empty() || std::isnan(x))
        throw ConfigError(fmt::format("{}: '{}' is not a number", key, t));
    return x;
}

long long to_int(const std::string& key, std::string_view v) {
    const std::string t = trim(v);
    long long x = 0;
    const auto* end = t.data() + t.size();
    const auto [p, ec] = std::from_chars(t.data(), end, x);
    if (ec != std::errc() || p != end || t.empty())
        throw ConfigError(fmt::format("{}: '{}' is not an integer", key, t));
    return x;
}

int to_small_int(const std::string& key, std::string_view v) {
    const auto x = to_int(key, v);
    if (x < -1000000 || x > 1000000) throw ConfigError(fmt::format("{}: {} is out of range", key, x));
    return static_cast<int>(x);
}

std::uint64_t to_u64(const std::string& key, std::string_view v) {
    const std::string t = trim(v);
    std::uint64_t x = 0;
    const auto* end = t.data() + t.size();
    const auto [p, ec] = std::from_chars(t.data(), end, x);
    if (ec != std::errc() || p != end || t.empty())
        throw ConfigError(fmt::format("{}: '{}' is not an unsigned 64-bit integer", key, t));
    return x;
}

bool to_bool(const std::string& key, std::string_view v) {
    const std::string t = trim(v);
    if (t == "true" || t == "yes" || t == "1" || t == "on") return true;
    if (t == "false" || t == "no" || t == "0" || t == "off") return false;
    throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, t));
}

std::vector<double> to_list(const std::string& key, std::string_view v) {
    std::string t = trim(v);
    std::replace(t.begin(), t.end(), ',', ' ');
    std::istringstream is(t);
    std::vector<double> out;
    for (std::string tok; is >> tok;) out.push_back(to_double(key, tok));
    return out;
}

template <class T, class Parse>
T to_enum(const std::string& key, std::string_view v, Parse parse, std::string_view allowed) {
    const auto r = parse(trim(v));
    if (!r) throw ConfigError(fmt::format("{}: '{}' is not one of {}", key, trim(v), allowed));
    return *r;
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string& value, int index)>;
using Schema = std::map<std::string, Setter, std::less<>>;

#define AMROC_NUM(field) [](ExperimentConfig& c, const std::string& k, const std::string& v, int) { c.field = to_double(k, v); }
#define AMROC_INT(field) [](ExperimentConfig& c, const std::string& k, const std::string& v, int) { c.field = to_small_int(k, v); }
#define AMROC_BOOL(field) [](ExperimentConfig& c, const std::string& k, const std::string& v, int) { c.field = to_bool(k, v); }
#define AMROC_LIST(field) [](ExperimentConfig& c, const std::string& k, const std::string& v, int) { c.field = to_list(k, v); }

const Schema& top_schema() {
    static const Schema s{
        {"seed", [](ExperimentConfig& c, const std::string& k, const std::string& v, int) { c.seed = to_u64(k, v); }},
        {"output_dir", [](ExperimentConfig& c, const std::string&, const std::string& v, int) { c.output_dir = trim(v); }},
    };
    return s;
}

const Schema& cable_schema() {
    static const Schema s{
        {"category",
         [](ExperimentConfig& c, const std::string& k, const std::string& v, int) {
             const auto cat = to_enum<CableCategory>(k, v, parse_cable_category, "cat5, cat5e, cat6, cat7");
             c.cable.category = cat;
             c.cable.atten = default_attenuation(cat);
             c.cable.fext_ref_db = default_fext_ref_db(cat);
         }},
        {"length_m", AMROC_NUM(cable.length_m)},
        {"num_pairs", AMROC_INT(cable.num_pairs)},
        {"fext_ref_db", AMROC_NUM(cable.fext_ref_db)},
        {"fext_ref_hz", AMROC_NUM(cable.fext_ref_hz)},
        {"fext_enabled", AMROC_BOOL(cable.fext_enabled)},
        {"velocity_factor", AMROC_NUM(cable.velocity_factor)},
        {"pair_loss_scale", AMROC_LIST(cable.pair_loss_scale)},
        {"noise_dbm_hz",
         [](ExperimentConfig& c, const std::string& k, const std::string& v, int) {
             c.cable.noise_floor_dbm_hz = to_double(k, v);
             c.noise.cable_noise_dbm_hz = c.cable.noise_floor_dbm_hz;
         }},
        {"calibrate", AMROC_BOOL(calibrate)},
    };
    return s;
}

const Schema& frontend_schema() {
    static const Schema s{
        {"passband_lo_hz", AMROC_NUM(frontend.passband_lo_hz)},
        {"passband_hi_hz", AMROC_NUM(frontend.passband_hi_hz)},
        {"insertion_loss_db", AMROC_NUM(frontend.insertion_loss_db)},
        {"edge_order", AMROC_INT(frontend.edge_order)},
        {"equalizer_tilt_db_per_hz", AMROC_NUM(frontend.equalizer_tilt_db_per_hz)},
        {"design_length_m", AMROC_NUM(frontend.design_length_m)},
        {"phase",
         [](ExperimentConfig& c, const std::string& k, const std::string& v, int) {
             const auto t = trim(v);
             if (t == "zero")
                 c.frontend.phase = PhaseMode::Zero;
             else if (t == "minimum")
                 c.frontend.phase = PhaseMode::MinimumPhase;
             else
                 throw ConfigError(fmt::format("{}: '{}' is not one of zero, minimum", k, t));
         }},
    };
    return s;
}

const Schema& signal_schema() {
    static const Schema s{
        {"rf_center_hz", [](ExperimentConfig& c, const std::string& k, const std::string& v,
                            int i) { c.signals[static_cast<std::size_t>(i)].rf_center_hz = to_double(k, v); }},
        {"bandwidth_hz", [](ExperimentConfig& c, const std::string& k, const std::string& v,
                            int i) { c.signals[static_cast<std::size_t>(i)].bandwidth_hz = to_double(k, v); }},
        {"power_dbm", [](ExperimentConfig& c, const std::string& k, const std::string& v,
                         int i) { c.signals[static_cast<std::size_t>(i)].tx_power_dbm = to_double(k, v); }},
        {"rat",
         [](ExperimentConfig& c, const std::string& k, const std::string& v, int i) {
             c.signals[static_cast<std::size_t>(i)].rat = to_enum<Rat>(k, v, parse_rat, "lte, wimax, wifi, generic");
         }},
    };
    return s;
}

const Schema& target_schema() {
    static const Schema s{
        {"length_m", [](ExperimentConfig& c, const std::string& k, const std::string& v,
                        int i) { c.targets[static_cast<std::size_t>(i)].length_m = to_double(k, v); }},
        {"f_if_hz", [](ExperimentConfig& c, const std::string& k, const std::string& v,
                       int i) { c.targets[static_cast<std::size_t>(i)].f_if_hz = to_double(k, v); }},
        {"end_to_end_db", [](ExperimentConfig& c, const std::string& k, const std::string& v,
                             int i) { c.targets[static_cast<std::size_t>(i)].end_to_end_db = to_double(k, v); }},
    };
    return s;
}

const Schema& mapping_schema() {
    static const Schema s{
        {"space",
         [](ExperimentConfig& c, const std::string& k, const std::string& v, int) {
             try {
                 c.mapping.space = SpaceMap::parse(trim(v));
             } catch (const std::exception& e) {
                 throw ConfigError(fmt::format("{}: {}", k, e.what()));
             }
         }},
        {"if_hz", AMROC_LIST(mapping.if_hz)},
        {"side",
         [](ExperimentConfig& c, const std::string& k, const std::string& v, int) {
             const auto t = trim(v);
             if (t == "high")
                 c.mapping.side = InjectionSide::High;
             else if (t == "low")
                 c.mapping.side = InjectionSide::Low;
             else
                 throw ConfigError(fmt::format("{}: '{}' is not one of high, low", k, t));
         }},
        {"per_pair", AMROC_INT(mapping.per_pair)},
        {"lo_detune_hz", AMROC_NUM(mapping.lo_detune_hz)},
        {"if_slots_hz", AMROC_LIST(mapping.if_slots_hz)},
    };
    return s;
}

const Schema& scenario_schema() {
    static const Schema s{
        {"n_antennas", AMROC_INT(scenario.n_antennas)},
        {"element_spacing_wavelengths", AMROC_NUM(scenario.element_spacing_wavelengths)},
        {"desired_theta_deg", AMROC_NUM(scenario.desired_theta_deg)},
        {"interferer_thetas_deg", AMROC_LIST(scenario.interferer_thetas_deg)},
        {"desired_power_dbm", AMROC_NUM(scenario.desired_power_dbm)},
        {"interferer_powers_dbm", AMROC_LIST(scenario.interferer_powers_dbm)},
        {"bandwidth_hz", AMROC_NUM(scenario.signal_bandwidth_hz)},
        {"rf_center_hz", AMROC_NUM(scenario_rf_hz)},
        {"theta_step_deg", AMROC_NUM(theta_step_deg)},
        {"average_over_grid", AMROC_BOOL(scenario.average_over_grid)},
        {"antenna_noise_dbm_hz", AMROC_NUM(noise.antenna_noise_dbm_hz)},
        {"scalarization",
         [](ExperimentConfig& c, const std::string& k, const std::string& v, int) {
             c.search.scalarization = to_enum<Scalarization>(k, v, parse_scalarization, "mean, min, fixed");
         }},
        {"fixed_theta_deg", AMROC_NUM(search.fixed_theta_deg)},
        {"curves",
         [](ExperimentConfig& c, const std::string& k, const std::string& v, int) {
             const auto t = trim(v);
             if (t == "all")
                 c.curves = CurveSet::All;
             else if (t == "support")
                 c.curves = CurveSet::Support;
             else
                 throw ConfigError(fmt::format("{}: '{}' is not one of all, support", k, t));
         }},
    };
    return s;
}

const Schema& waveform_schema() {
    static const Schema s{
        // "rat" is applied before the other keys; see build_config.
        {"rat", [](ExperimentConfig&, const std::string&, const std::string&, int) {}},
        {"modulation",
         [](ExperimentConfig& c, const std::string& k, const std::string& v, int) {
             c.evm.waveform.modulation = to_enum<Modulation>(k, v, parse_modulation, "qpsk, 16qam, 64qam");
         }},
        {"n_symbols", AMROC_INT(evm.waveform.n_symbols)},
        {"fft_size", AMROC_INT(evm.waveform.fft_size)},
        {"occupied", AMROC_INT(evm.waveform.occupied)},
        {"cp_fraction", AMROC_NUM(evm.waveform.cp_fraction)},
        {"subcarrier_spacing_hz", AMROC_NUM(evm.waveform.subcarrier_spacing_hz)},
        {"oversample", AMROC_INT(evm.waveform.oversample)},
        {"pilot_spacing", AMROC_INT(evm.waveform.pilot_spacing)},
        {"bandwidth_hz", AMROC_NUM(evm.waveform.bandwidth_hz)},
        {"code_rate",
         [](ExperimentConfig& c, const std::string& k, const std::string& v, int) {
             const auto t = trim(v);
             const auto slash = t.find('/');
             if (slash == std::string::npos) throw ConfigError(fmt::format("{}: '{}' is not num/den", k, t));
             c.evm.waveform.code_rate = {to_small_int(k, t.substr(0, slash)), to_small_int(k, t.substr(slash + 1))};
         }},
    };
    return s;
}

const Schema& sweep_schema() {
    static const Schema s{
        {"input_power_min_dbm", AMROC_NUM(power_min_dbm)},
        {"input_power_max_dbm", AMROC_NUM(power_max_dbm)},
        {"input_power_step_db", AMROC_NUM(power_step_db)},
        {"analyzer_noise_dbm_hz", AMROC_NUM(evm.analyzer_noise_dbm_hz)},
        {"p1db_dbm", AMROC_NUM(evm.p1db_dbm)},
        {"gain_db", [](ExperimentConfig& c, const std::string& k, const std::string& v, int) { c.evm_gain_db = to_double(k, v); }},
        {"idle_fraction", AMROC_NUM(evm.idle_fraction)},
        {"clock_nominal_hz", AMROC_NUM(evm.clock_nominal_hz)},
        {"clock_stability_ppm", AMROC_NUM(evm.clock_stability_ppm)},
        {"dump_waveforms", AMROC_BOOL(dump_waveforms)},
    };
    return s;
}

const Schema& throughput_schema() {
    static const Schema s{
        {"lte_rf_hz", AMROC_NUM(throughput.lte_rf_hz)},
        {"lte_bandwidth_hz", AMROC_NUM(throughput.lte_bandwidth_hz)},
        {"lte_power_dbm", AMROC_NUM(throughput.lte_power_dbm)},
        {"lte_rank", AMROC_INT(throughput.lte_rank)},
        {"lte_if_hz", AMROC_LIST(throughput.lte_if_hz)},
        {"mcs_min", AMROC_INT(mcs_min)},
        {"mcs_max", AMROC_INT(mcs_max)},
        {"ue_noise_dbm_hz", AMROC_NUM(throughput.ue_noise_dbm_hz)},
        {"wifi_case", AMROC_BOOL(throughput.wifi_case)},
        {"wifi_rf_hz", AMROC_NUM(throughput.wifi_rf_hz)},
        {"wifi_bandwidth_hz", AMROC_NUM(throughput.wifi_bandwidth_hz)},
        {"wifi_power_dbm", AMROC_NUM(throughput.wifi_power_dbm)},
        {"wifi_if_hz", AMROC_NUM(throughput.wifi_if_hz)},
        {"wifi_pair", AMROC_INT(throughput.wifi_pair)},
        {"rolloff_db", AMROC_NUM(throughput.link.rolloff_db)},
    };
    return s;
}

#undef AMROC_NUM
#undef AMROC_INT
#undef AMROC_BOOL
#undef AMROC_LIST

// "signal.3" -> ("signal", 3); plain names -> (name, -1).
std::pair<std::string, int> split_section(const std::string& name) {
    const auto dot = name.find('.');
    if (dot == std::string::npos) return {name, -1};
    const std::string base = name.substr(0, dot);
    const std::string idx = name.substr(dot + 1);
    long long i = -1;
    const auto [p, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), i);
    if (ec != std::errc() || p != idx.data() + idx.size() || i < 0 || i > 4096)
        throw ConfigError(fmt::format("section [{}]: index must be a small non-negative integer", name));
    return {base, static_cast<int>(i)};
}

void apply_section(ExperimentConfig& cfg, const Schema& schema, const std::string& section,
                   const std::map<std::string, std::string>& kv, int index) {
    for (const auto& [key, value] : kv) {
        const std::string full = section.empty() ? key : section + "." + key;
        const auto it = schema.find(key);
        if (it == schema.end()) throw ConfigError(fmt::format("unknown key '{}'", full));
        it->second(cfg, full, value, index);
    }
}

// Indexed sections must be numbered 0..n-1.
std::vector<std::pair<int, const std::map<std::string, std::string>*>> indexed(
    const RawConfig& raw, const std::string& base) {
    std::vector<std::pair<int, const std::map<std::string, std::string>*>> out;
    for (const auto& [name, kv] : raw) {
        if (name.empty()) continue;
        const auto [b, i] = split_section(name);
        if (b == base && i >= 0) out.emplace_back(i, &kv);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 0; k < out.size(); ++k)
        if (out[k].first != static_cast<int>(k))
            throw ConfigError(fmt::format("[{}.N] sections must be numbered 0..{} without gaps", base, out.size() - 1));
    return out;
}

}  // namespace

ExperimentConfig build_config(const RawConfig& raw) {
    ExperimentConfig cfg;

    const std::map<std::string, const Schema*> plain{
        {"", &top_schema()},           {"cable", &cable_schema()},       {"frontend", &frontend_schema()},
        {"mapping", &mapping_schema()}, {"scenario", &scenario_schema()}, {"waveform", &waveform_schema()},
        {"sweep", &sweep_schema()},     {"throughput", &throughput_schema()},
    };
    for (const auto& [name, kv] : raw) {
        if (plain.count(name)) continue;
        const auto [base, idx] = split_section(name);
        if (idx < 0 || (base != "signal" && base != "target"))
            throw ConfigError(fmt::format("unknown section [{}]", name));
    }

    // Category first so explicit coefficients/FEXT keys override its defaults.
    if (const auto it = raw.find("cable"); it != raw.end()) {
        if (const auto c = it->second.find("category"); c != it->second.end())
            cable_schema().at("category")(cfg, "cable.category", c->second, -1);
    }
    if (const auto it = raw.find("waveform"); it != raw.end()) {
        if (const auto r = it->second.find("rat"); r != it->second.end()) {
            const auto rat = to_enum<Rat>("waveform.rat", r->second, parse_rat, "wimax, lte, wifi");
            if (rat == Rat::Generic) throw ConfigError("waveform.rat: 'generic' has no waveform plan");
            cfg.evm.waveform = WaveformSpec::defaults(rat);
        }
    }
    for (const auto& [name, schema] : plain) {
        const auto it = raw.find(name);
        if (it == raw.end()) continue;
        if (name == "cable") {
            auto kv = it->second;
            kv.erase("category");
            apply_section(cfg, *schema, name, kv, -1);
        } else {
            apply_section(cfg, *schema, name, it->second, -1);
        }
    }
    cfg.has_mapping = raw.count("mapping") > 0;

    const auto sigs = indexed(raw, "signal");
    cfg.signals.resize(sigs.size());
    for (const auto& [i, kv] : sigs) {
        cfg.signals[static_cast<std::size_t>(i)].id = i;
        apply_section(cfg, signal_schema(), fmt::format("signal.{}", i), *kv, i);
    }
    const auto tgts = indexed(raw, "target");
    if (!tgts.empty()) {
        cfg.targets.assign(tgts.size(), CalibrationTarget{});
        for (const auto& [i, kv] : tgts) apply_section(cfg, target_schema(), fmt::format("target.{}", i), *kv, i);
    }

    cfg.cable.num_pairs = std::max(cfg.cable.num_pairs, 0);
    cfg.scenario.noise = cfg.noise;
    cfg.throughput.noise = cfg.noise;
    if (cfg.theta_step_deg > 0.0 && cfg.theta_step_deg <= 180.0)
        cfg.scenario.sweep_deg = BeamScenario::default_sweep(cfg.theta_step_deg);

    cfg.evm.input_power_dbm.clear();  // an empty grid is reported by validate_config
    if (cfg.power_step_db > 0.0 && cfg.power_max_dbm >= cfg.power_min_dbm) {
        const double n = std::floor((cfg.power_max_dbm - cfg.power_min_dbm) / cfg.power_step_db + 1e-9);
        if (n > 1e5) throw ConfigError("sweep: input power grid has more than 1e5 points");
        for (int i = 0; i <= static_cast<int>(n); ++i)
            cfg.evm.input_power_dbm.push_back(cfg.power_min_dbm + i * cfg.power_step_db);
    }
    cfg.throughput.mcs.clear();
    for (int m = cfg.mcs_min; m <= cfg.mcs_max && m - cfg.mcs_min < 1000; ++m) cfg.throughput.mcs.push_back(m);
    return cfg;
}

std::vector<Diagnostic> validate_config(const ExperimentConfig& cfg) {
    std::vector<Diagnostic> d;
    auto guard = [&](const std::string& key, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            d.push_back({key, e.what(), true});
        }
    };
    guard("cable", [&] { cfg.cable.validate(); });
    guard("frontend", [&] { cfg.frontend.validate(); });
    guard("cable.noise_dbm_hz", [&] { cfg.noise.validate(); });

    for (std::size_t i = 0; i < cfg.signals.size(); ++i) {
        const auto chk = check_signal(cfg.signals[i]);
        // Point at the offending key when the message names one.
        auto key_of = [&](const std::string& msg) {
            for (const char* f : {"power_dbm", "bandwidth_hz", "rf_center_hz", "rat"})
                if (msg.find(f) != std::string::npos) return fmt::format("signal.{}.{}", i, f);
            return fmt::format("signal.{}", i);
        };
        for (const auto& e : chk.errors) d.push_back({key_of(e), e, true});
        for (const auto& w : chk.warnings) d.push_back({key_of(w), w, false});
    }
    if (cfg.calibrate && cfg.targets.size() < 2)
        d.push_back({"target", "calibration needs at least two [target.N] sections", true});
    for (std::size_t i = 0; i < cfg.targets.size(); ++i) {
        const auto& t = cfg.targets[i];
        if (!(t.length_m >= 0.0)) d.push_back({fmt::format("target.{}.length_m", i), "must be >= 0", true});
        if (!(t.f_if_hz > 0.0)) d.push_back({fmt::format("target.{}.f_if_hz", i), "must be > 0", true});
        if (!(t.end_to_end_db >= 0.0)) d.push_back({fmt::format("target.{}.end_to_end_db", i), "must be >= 0", true});
    }

    const auto& m = cfg.mapping;
    if (m.per_pair < 1) d.push_back({"mapping.per_pair", "must be >= 1", true});
    for (double f : m.if_slots_hz)
        if (!(f > cfg.frontend.passband_lo_hz && f < cfg.frontend.passband_hi_hz))
            d.push_back({"mapping.if_slots_hz",
                         fmt::format("IF slot {} Hz lies outside the front-end passband [{}, {}] Hz", f,
                                     cfg.frontend.passband_lo_hz, cfg.frontend.passband_hi_hz),
                         true});
    if (m.if_slots_hz.empty()) d.push_back({"mapping.if_slots_hz", "needs at least one slot", true});
    if (m.space) {
        if (m.space->signals() != static_cast<int>(cfg.signals.size()))
            d.push_back({"mapping.space",
                         fmt::format("has {} columns but {} signals are defined", m.space->signals(), cfg.signals.size()),
                         true});
        if (m.space->pairs() > cfg.cable.num_pairs)
            d.push_back({"mapping.space",
                         fmt::format("uses {} pairs but the cable has {}", m.space->pairs(), cfg.cable.num_pairs), true});
        if (m.if_hz.size() != cfg.signals.size())
            d.push_back({"mapping.if_hz", fmt::format("needs one IF per signal ({})", cfg.signals.size()), true});
    }
    if (!std::isfinite(m.lo_detune_hz)) d.push_back({"mapping.lo_detune_hz", "must be finite", true});

    guard("scenario", [&] { cfg.scenario.validate(); });
    if (!(cfg.theta_step_deg > 0.0 && cfg.theta_step_deg <= 180.0))
        d.push_back({"scenario.theta_step_deg", "must be in (0, 180]", true});
    if (!(cfg.scenario_rf_hz > cfg.scenario.signal_bandwidth_hz / 2.0))
        d.push_back({"scenario.rf_center_hz", "must exceed bandwidth_hz/2", true});
    if (cfg.scenario.desired_power_dbm > kMaxPortPowerDbm)
        d.push_back({"scenario.desired_power_dbm",
                     fmt::format("{} dBm exceeds the +{} dBm port maximum", cfg.scenario.desired_power_dbm, kMaxPortPowerDbm),
                     true});

    guard("waveform", [&] { cfg.evm.waveform.validate(); });
    if (cfg.power_max_dbm > kMaxPortPowerDbm)
        d.push_back({"sweep.input_power_max_dbm",
                     fmt::format("{} dBm exceeds the +{} dBm port maximum", cfg.power_max_dbm, kMaxPortPowerDbm),
                     true});
    if (cfg.evm.input_power_dbm.empty())
        d.push_back({"sweep", "input power grid needs step > 0 and max >= min", true});
    guard("sweep", [&] {
        auto e = cfg.evm;
        if (e.input_power_dbm.empty()) e.input_power_dbm = {0.0};
        e.validate();
    });

    guard("throughput", [&] {
        auto t = cfg.throughput;
        t.cable = cfg.cable;
        t.frontend = cfg.frontend;
        t.validate();
    });
    for (int mcs : cfg.throughput.mcs)
        if (mcs < 0 || mcs > 28) {
            d.push_back({"throughput.mcs_max", fmt::format("MCS {} outside the LTE table 0..28", mcs), true});
            break;
        }
    if (cfg.throughput.mcs.empty()) d.push_back({"throughput.mcs_min", "MCS range is empty", true});
    for (auto [key, p] : {std::pair{"throughput.lte_power_dbm", cfg.throughput.lte_power_dbm},
                          std::pair{"throughput.wifi_power_dbm", cfg.throughput.wifi_power_dbm}})
        if (p > kMaxPortPowerDbm)
            d.push_back({key, fmt::format("{} dBm exceeds the +{} dBm port maximum", p, kMaxPortPowerDbm), true});
    return d;
}

Chain resolve_chain(const ExperimentConfig& cfg) {
    Chain c{cfg.cable, cfg.frontend, std::nullopt};
    if (cfg.calibrate) {
        auto tmpl = cfg.cable;
        tmpl.pair_loss_scale.clear();
        c.calibration = calibrate_chain(cfg.targets, tmpl, cfg.frontend);
        apply_calibration(*c.calibration, c.cable, c.frontend);
    }
    c.cable.fext_seed = split_seed(cfg.seed.value_or(0), "fext");
    return c;
}

}  // namespace amroc::cli
