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
#include <span>
#include <string_view>
#include <vector>

#include "amroc/beamforming.hpp"
#include "amroc/sf2sf.hpp"

namespace amroc {

enum class Scalarization { MeanOverTheta, MinOverTheta, FixedTheta };

std::string_view to_string(Scalarization s);
std::optional<Scalarization> parse_scalarization(std::string_view s);

struct SearchOptions {
    Scalarization scalarization = Scalarization::MeanOverTheta;
    double fixed_theta_deg = 0.0;
    int threads = 1;
};

/// Collapse a curve to one number (dB) per the chosen scalarization.
double scalarize(const SinrCurve& curve, const SearchOptions& opt);

struct ExhaustiveResult {
    std::size_t best_index = 0;
    Sf2sfMapping best;
    double best_objective_db = 0.0;
    std::vector<double> objective_db;  ///< per candidate
    std::vector<SinrCurve> curves;     ///< per candidate, same order as input
    SinrCurve envelope;                ///< per-theta max over candidates
    std::vector<std::size_t> envelope_argmax;
    double dispersion_db = 0.0;        ///< max over theta of (best - worst)
    double dispersion_theta_deg = 0.0;
};

/// Evaluate every candidate's MVDR SINR curve and pick the best fixed
/// mapping. Candidates are evaluated in parallel when opt.threads > 1; the
/// reduction runs in candidate order so the winner never depends on
/// scheduling. Ties on the objective go to the smallest mapping_less.
/// Throws std::invalid_argument for an empty or invalid candidate set.
ExhaustiveResult exhaustive_search(const BeamScenario& sc, std::span<const SignalSpec> signals,
                                   const CableSpec& cable, const FrontEndSpec& fe,
                                   std::span<const Sf2sfMapping> candidates, const SearchOptions& opt = {});

/// Every space mapping of the signals over `n_pairs` pairs combined with its
/// canonical frequency plan.
std::vector<Sf2sfMapping> canonical_candidates(std::span<const SignalSpec> signals, int n_pairs,
                                               int per_pair, std::span<const double> if_slots_hz,
                                               InjectionSide side = InjectionSide::High);

struct GreedyOptions {
    std::vector<double> if_slots_hz{50.0e6, 75.0e6, 175.0e6, 400.0e6};
    int per_pair = 2;
    InjectionSide side = InjectionSide::High;
};

/// Place signals one at a time (descending bandwidth, then index) on the
/// (pair, slot) that minimizes the predicted loss-plus-interference cost of
/// the partial assignment. On each pair the lowest free slot that keeps the
/// partial plan valid is offered. Dead ends backtrack in cost order, so the
/// result is always valid. Throws std::invalid_argument when infeasible.
Sf2sfMapping greedy_mapping(const BeamScenario& sc, std::span<const SignalSpec> signals,
                            const CableSpec& cable, const FrontEndSpec& fe, const GreedyOptions& opt = {});

}  // namespace amroc
