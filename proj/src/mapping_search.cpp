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

#include "amroc/mapping_search.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include <fmt/core.h>

#include "parallel.hpp"

namespace amroc {

std::string_view to_string(Scalarization s) {
    switch (s) {
        case Scalarization::MeanOverTheta: return "mean";
        case Scalarization::MinOverTheta: return "min";
        case Scalarization::FixedTheta: return "fixed";
    }
    return "?";
}

std::optional<Scalarization> parse_scalarization(std::string_view s) {
    for (auto v : {Scalarization::MeanOverTheta, Scalarization::MinOverTheta, Scalarization::FixedTheta})
        if (s == to_string(v)) return v;
    return std::nullopt;
}

double scalarize(const SinrCurve& curve, const SearchOptions& opt) {
    if (curve.sinr_db.empty()) throw std::invalid_argument("scalarize: empty curve");
    switch (opt.scalarization) {
        case Scalarization::MeanOverTheta:
            return std::accumulate(curve.sinr_db.begin(), curve.sinr_db.end(), 0.0) /
                   static_cast<double>(curve.sinr_db.size());
        case Scalarization::MinOverTheta:
            return *std::min_element(curve.sinr_db.begin(), curve.sinr_db.end());
        case Scalarization::FixedTheta:
            for (std::size_t i = 0; i < curve.theta_deg.size(); ++i)
                if (std::abs(curve.theta_deg[i] - opt.fixed_theta_deg) < 1e-9) return curve.sinr_db[i];
            throw std::invalid_argument(fmt::format("theta {} deg is not on the sweep grid", opt.fixed_theta_deg));
    }
    return 0.0;
}

ExhaustiveResult exhaustive_search(const BeamScenario& sc, std::span<const SignalSpec> signals,
                                   const CableSpec& cable, const FrontEndSpec& fe,
                                   std::span<const Sf2sfMapping> candidates, const SearchOptions& opt) {
    if (candidates.empty()) throw std::invalid_argument("exhaustive_search: no candidates");
    sc.validate();

    ExhaustiveResult res;
    res.curves.resize(candidates.size());
    detail::parallel_for(candidates.size(), opt.threads, [&](std::size_t i) {
        try {
            res.curves[i] = sweep_theta(sc, signals, cable, fe, candidates[i]);
        } catch (const InvalidMappingError& e) {
            throw std::invalid_argument(fmt::format("candidate {}: {}", i, e.what()));
        }
        res.curves[i].mapping_id = std::to_string(i);
    });

    res.objective_db.reserve(candidates.size());
    for (const auto& c : res.curves) res.objective_db.push_back(scalarize(c, opt));
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const double o = res.objective_db[i];
        const double b = res.objective_db[res.best_index];
        if (o > b || (o == b && mapping_less(candidates[i], candidates[res.best_index], signals)))
            res.best_index = i;
    }
    res.best = candidates[res.best_index];
    res.best_objective_db = res.objective_db[res.best_index];

    const auto& grid = res.curves.front().theta_deg;
    res.envelope.theta_deg = grid;
    res.envelope.mapping_id = "envelope";
    res.dispersion_db = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < grid.size(); ++t) {
        std::size_t arg = 0;
        double hi = res.curves[0].sinr_db[t];
        double lo = hi;
        for (std::size_t i = 1; i < res.curves.size(); ++i) {
            const double v = res.curves[i].sinr_db[t];
            if (v > hi) {
                hi = v;
                arg = i;
            }
            lo = std::min(lo, v);
        }
        res.envelope.sinr_db.push_back(hi);
        res.envelope_argmax.push_back(arg);
        if (hi - lo > res.dispersion_db) {
            res.dispersion_db = hi - lo;
            res.dispersion_theta_deg = grid[t];
        }
    }
    return res;
}

std::vector<Sf2sfMapping> canonical_candidates(std::span<const SignalSpec> signals, int n_pairs, int per_pair,
                                               std::span<const double> if_slots_hz, InjectionSide side) {
    std::vector<Sf2sfMapping> out;
    for (auto& space : enumerate_space_mappings(static_cast<int>(signals.size()), n_pairs, per_pair)) {
        LoPlan lo = canonical_frequency_plan(signals, space, if_slots_hz, side);
        out.push_back({std::move(space), std::move(lo), per_pair, false});
    }
    return out;
}

namespace {

struct GreedyState {
    std::vector<int> pair;     // -1 when unplaced
    std::vector<double> f_if;  // IF of placed signals
};

// Sum over placed signals of -10 log10(predicted SINR at band center).
double partial_cost(const GreedyState& st, const BeamScenario& sc, std::span<const SignalSpec> signals,
                    const CableSpec& cable, const FrontEndSpec& fe) {
    const double ant_psd = dbm_to_mw(sc.noise.antenna_noise_dbm_hz);
    const double cab_psd = dbm_to_mw(sc.noise.cable_noise_dbm_hz);
    double cost = 0.0;
    for (std::size_t n = 0; n < signals.size(); ++n) {
        if (st.pair[n] < 0) continue;
        const double x = st.f_if[n];
        const double hb2 = std::norm(frontend_gain(x, fe));
        const double g = hb2 * hb2 * std::norm(pair_insertion_gain(x, cable, st.pair[n]));
        const double bw = signals[n].bandwidth_hz;
        double inn = (cab_psd * hb2 + ant_psd * g) * bw;
        for (std::size_t k = 0; k < signals.size(); ++k) {
            if (k == n || st.pair[k] < 0 || st.pair[k] == st.pair[n]) continue;
            const double half = (bw + signals[k].bandwidth_hz) / 2.0;
            if (std::abs(st.f_if[k] - x) >= half) continue;
            inn += dbm_to_mw(signals[k].tx_power_dbm) * hb2 * hb2 *
                   std::norm(fext_gain(x, st.pair[k], st.pair[n], cable));
        }
        const double sig = dbm_to_mw(signals[n].tx_power_dbm) * g;
        cost -= lin_pow_to_db(sig / inn);
    }
    return cost;
}

bool partial_valid(const GreedyState& st, std::span<const SignalSpec> signals, int n_pairs, int per_pair,
                   const FrontEndSpec& fe, InjectionSide side) {
    std::vector<SignalSpec> sub;
    std::vector<int> pairs;
    std::vector<double> ifs;
    for (std::size_t n = 0; n < signals.size(); ++n) {
        if (st.pair[n] < 0) continue;
        sub.push_back(signals[n]);
        pairs.push_back(st.pair[n]);
        ifs.push_back(st.f_if[n]);
    }
    Sf2sfMapping m{SpaceMap::from_assignment(n_pairs, pairs), lo_plan_from_ifs(sub, ifs, side), per_pair, false};
    return validate_mapping(sub, m, fe).empty();
}

}  // namespace

Sf2sfMapping greedy_mapping(const BeamScenario& sc, std::span<const SignalSpec> signals, const CableSpec& cable,
                            const FrontEndSpec& fe, const GreedyOptions& opt) {
    if (opt.if_slots_hz.empty()) throw std::invalid_argument("greedy_mapping needs IF slots");
    const int n_pairs = cable.num_pairs;
    const auto n_sig = signals.size();
    if (static_cast<int>(n_sig) > n_pairs * opt.per_pair)
        throw std::invalid_argument("greedy_mapping: more signals than pair capacity");

    std::vector<double> slots = opt.if_slots_hz;
    std::sort(slots.begin(), slots.end());

    std::vector<std::size_t> order(n_sig);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return signals[a].bandwidth_hz > signals[b].bandwidth_hz;
    });

    GreedyState st{std::vector<int>(n_sig, -1), std::vector<double>(n_sig, 0.0)};
    std::vector<int> load(static_cast<std::size_t>(n_pairs), 0);

    auto slot_used = [&](int l, double f) {
        for (std::size_t k = 0; k < n_sig; ++k)
            if (st.pair[k] == l && st.f_if[k] == f) return true;
        return false;
    };
    auto capacity_left = [&] {
        std::size_t cap = 0;
        for (int l = 0; l < n_pairs; ++l) {
            std::size_t free_slots = 0;
            for (double f : slots) free_slots += slot_used(l, f) ? 0 : 1;
            cap += std::min(static_cast<std::size_t>(opt.per_pair - load[static_cast<std::size_t>(l)]), free_slots);
        }
        return cap;
    };

    std::function<bool(std::size_t)> place = [&](std::size_t step) {
        if (step == n_sig) return true;
        const std::size_t n = order[step];
        struct Option {
            double cost;
            int pair;
            double f;
        };
        std::vector<Option> options;
        for (int l = 0; l < n_pairs; ++l) {
            if (load[static_cast<std::size_t>(l)] == opt.per_pair) continue;
            for (double f : slots) {
                if (slot_used(l, f)) continue;
                st.pair[n] = l;
                st.f_if[n] = f;
                const bool ok = partial_valid(st, signals, n_pairs, opt.per_pair, fe, opt.side);
                if (ok) options.push_back({partial_cost(st, sc, signals, cable, fe), l, f});
                st.pair[n] = -1;
                if (ok) break;  // lowest feasible slot on this pair only
            }
        }
        std::stable_sort(options.begin(), options.end(),
                         [](const Option& a, const Option& b) { return a.cost < b.cost; });
        for (const auto& o : options) {
            st.pair[n] = o.pair;
            st.f_if[n] = o.f;
            ++load[static_cast<std::size_t>(o.pair)];
            if (capacity_left() >= n_sig - step - 1 && place(step + 1)) return true;
            --load[static_cast<std::size_t>(o.pair)];
            st.pair[n] = -1;
        }
        return false;
    };

    if (!place(0)) throw std::invalid_argument("greedy_mapping: no valid SF2SF mapping exists for these slots");

    Sf2sfMapping m{SpaceMap::from_assignment(n_pairs, st.pair), lo_plan_from_ifs(signals, st.f_if, opt.side),
                   opt.per_pair, false};
    return m;
}

}  // namespace amroc
