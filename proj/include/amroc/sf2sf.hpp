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

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "amroc/channel_models.hpp"
#include "amroc/signal.hpp"

namespace amroc {

/// Binary L x N space-mapping matrix: bit (l, n) is set iff signal n feeds
/// slice l, and slice l drives twisted pair l. Ordering is lexicographic on
/// the row-major flattened matrix.
class SpaceMap {
public:
    SpaceMap() = default;
    SpaceMap(int pairs, int signals);

    /// One-hot columns from a signal -> pair assignment.
    static SpaceMap from_assignment(int pairs, std::span<const int> pair_of_signal);

    int pairs() const { return pairs_; }
    int signals() const { return signals_; }
    bool at(int pair, int signal) const;
    void set(int pair, int signal, bool on);

    /// The slice of `signal` if its column has exactly one bit set.
    std::optional<int> pair_of(int signal) const;
    std::vector<int> signals_on(int pair) const;
    int column_count(int signal) const;
    int row_count(int pair) const;

    /// Rows separated by ';', entries by spaces: "1 0; 0 1".
    std::string to_text() const;
    static SpaceMap parse(std::string_view text);

    auto operator<=>(const SpaceMap&) const = default;

private:
    int pairs_ = 0;
    int signals_ = 0;
    std::vector<std::uint8_t> bits_;  // row-major
};

/// Space mapping plus the LO plan realizing the frequency mapping.
struct Sf2sfMapping {
    SpaceMap space;
    LoPlan lo;
    int per_pair = 2;          ///< M, signals a slice can combine
    bool allow_detune = false;  ///< CFO studies may set f_U != f_D

    std::vector<IfConversion> if_plan(std::span<const SignalSpec> signals) const;
};

/// Tie-break order: flattened space matrix, then IF centers.
bool mapping_less(const Sf2sfMapping& a, const Sf2sfMapping& b,
                  std::span<const SignalSpec> signals);

struct MappingViolation {
    enum class Kind { OutOfBand, SameChainOverlap, ImageCollision, NetInversion, ColumnCount, RowCount };
    Kind kind;
    std::string detail;
    std::vector<int> offenders;  ///< signal (or pair, for RowCount) indices, ascending
};

std::string_view to_string(MappingViolation::Kind k);

/// Frequency tolerance for f_D == f_U and band-edge comparisons.
inline constexpr double kLoMatchTolHz = 1.0;

/// Returns every violated constraint, sorted by (kind, offenders). An empty
/// list means the mapping is valid. Throws std::invalid_argument only when
/// dimensions disagree.
std::vector<MappingViolation> validate_mapping(std::span<const SignalSpec> signals,
                                               const Sf2sfMapping& mapping,
                                               const FrontEndSpec& fe);

/// All assignments of N signals to L slices with at most M per slice, in
/// lexicographic order of the signal -> slice vector. Throws
/// std::invalid_argument when N > M * L.
std::vector<SpaceMap> enumerate_space_mappings(int n_signals, int n_pairs, int per_pair);

/// All per-pair-injective assignments of signals to IF slots whose mapping
/// passes the band, overlap and image checks. Plans are emitted in
/// lexicographic order of the slot-index vector. Empty when nothing is
/// feasible.
std::vector<LoPlan> enumerate_frequency_plans(std::span<const SignalSpec> signals,
                                              const SpaceMap& space,
                                              std::span<const double> if_slots_hz,
                                              const FrontEndSpec& fe, int per_pair,
                                              InjectionSide side = InjectionSide::High);

/// Canonical frequency plan: on every pair, signals in ascending index order
/// take the slots in ascending order. Throws when a pair holds more signals
/// than there are slots.
LoPlan canonical_frequency_plan(std::span<const SignalSpec> signals, const SpaceMap& space,
                                std::span<const double> if_slots_hz,
                                InjectionSide side = InjectionSide::High);

/// Plan from explicit per-signal IF centers.
LoPlan lo_plan_from_ifs(std::span<const SignalSpec> signals, std::span<const double> if_hz,
                        InjectionSide side = InjectionSide::High);

}  // namespace amroc
