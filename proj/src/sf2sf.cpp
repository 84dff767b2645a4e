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

#include "amroc/sf2sf.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <fmt/core.h>
#include <fmt/ranges.h>

namespace amroc {

SpaceMap::SpaceMap(int pairs, int signals) : pairs_(pairs), signals_(signals) {
    if (pairs < 0 || signals < 0) throw std::invalid_argument("SpaceMap dimensions must be >= 0");
    bits_.assign(static_cast<std::size_t>(pairs) * static_cast<std::size_t>(signals), 0);
}

SpaceMap SpaceMap::from_assignment(int pairs, std::span<const int> pair_of_signal) {
    SpaceMap m(pairs, static_cast<int>(pair_of_signal.size()));
    for (std::size_t n = 0; n < pair_of_signal.size(); ++n) m.set(pair_of_signal[n], static_cast<int>(n), true);
    return m;
}

bool SpaceMap::at(int pair, int signal) const {
    if (pair < 0 || pair >= pairs_ || signal < 0 || signal >= signals_)
        throw std::out_of_range("SpaceMap index out of range");
    return bits_[static_cast<std::size_t>(pair * signals_ + signal)] != 0;
}

void SpaceMap::set(int pair, int signal, bool on) {
    if (pair < 0 || pair >= pairs_ || signal < 0 || signal >= signals_)
        throw std::out_of_range("SpaceMap index out of range");
    bits_[static_cast<std::size_t>(pair * signals_ + signal)] = on ? 1 : 0;
}

int SpaceMap::column_count(int signal) const {
    int c = 0;
    for (int l = 0; l < pairs_; ++l) c += at(l, signal) ? 1 : 0;
    return c;
}

int SpaceMap::row_count(int pair) const {
    int c = 0;
    for (int n = 0; n < signals_; ++n) c += at(pair, n) ? 1 : 0;
    return c;
}

std::optional<int> SpaceMap::pair_of(int signal) const {
    std::optional<int> found;
    for (int l = 0; l < pairs_; ++l) {
        if (!at(l, signal)) continue;
        if (found) return std::nullopt;
        found = l;
    }
    return found;
}

std::vector<int> SpaceMap::signals_on(int pair) const {
    std::vector<int> out;
    for (int n = 0; n < signals_; ++n)
        if (at(pair, n)) out.push_back(n);
    return out;
}

std::string SpaceMap::to_text() const {
    std::string s;
    for (int l = 0; l < pairs_; ++l) {
        if (l) s += "; ";
        for (int n = 0; n < signals_; ++n) {
            if (n) s += ' ';
            s += at(l, n) ? '1' : '0';
        }
    }
    return s;
}

SpaceMap SpaceMap::parse(std::string_view text) {
    std::vector<std::vector<int>> rows;
    std::string row_text;
    std::istringstream all{std::string(text)};
    while (std::getline(all, row_text, ';')) {
        std::istringstream rs(row_text);
        std::vector<int> row;
        std::string tok;
        while (rs >> tok) {
            if (tok != "0" && tok != "1")
                throw std::invalid_argument(fmt::format("space matrix entry '{}' is not 0 or 1", tok));
            row.push_back(tok == "1" ? 1 : 0);
        }
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("empty space matrix");
    const auto width = rows.front().size();
    for (const auto& r : rows)
        if (r.size() != width) throw std::invalid_argument("space matrix rows differ in length");
    SpaceMap m(static_cast<int>(rows.size()), static_cast<int>(width));
    for (std::size_t l = 0; l < rows.size(); ++l)
        for (std::size_t n = 0; n < width; ++n) m.set(static_cast<int>(l), static_cast<int>(n), rows[l][n] != 0);
    return m;
}

std::vector<IfConversion> Sf2sfMapping::if_plan(std::span<const SignalSpec> signals) const {
    if (signals.size() != lo.f_down_hz.size())
        throw std::invalid_argument("LO plan size differs from signal count");
    std::vector<IfConversion> out;
    out.reserve(signals.size());
    for (std::size_t n = 0; n < signals.size(); ++n)
        out.push_back(if_of(signals[n].rf_center_hz, lo.f_down_hz[n]));
    return out;
}

bool mapping_less(const Sf2sfMapping& a, const Sf2sfMapping& b, std::span<const SignalSpec> signals) {
    if (a.space != b.space) return a.space < b.space;
    std::vector<double> ia, ib;
    for (const auto& c : a.if_plan(signals)) ia.push_back(c.if_center_hz);
    for (const auto& c : b.if_plan(signals)) ib.push_back(c.if_center_hz);
    return ia < ib;
}

std::string_view to_string(MappingViolation::Kind k) {
    using K = MappingViolation::Kind;
    switch (k) {
        case K::OutOfBand: return "OutOfBand";
        case K::SameChainOverlap: return "SameChainOverlap";
        case K::ImageCollision: return "ImageCollision";
        case K::NetInversion: return "NetInversion";
        case K::ColumnCount: return "ColumnCount";
        case K::RowCount: return "RowCount";
    }
    return "?";
}

namespace {

struct Band {
    double lo;
    double hi;
};

Band band_around(double center, double width) { return {center - width / 2.0, center + width / 2.0}; }

// Open intersection: bands that only touch do not overlap.
bool overlaps(Band a, Band b) { return std::max(a.lo, b.lo) < std::min(a.hi, b.hi); }

}  // namespace

std::vector<MappingViolation> validate_mapping(std::span<const SignalSpec> signals,
                                               const Sf2sfMapping& mapping,
                                               const FrontEndSpec& fe) {
    using K = MappingViolation::Kind;
    const int n_sig = static_cast<int>(signals.size());
    if (mapping.space.signals() != n_sig || mapping.lo.f_down_hz.size() != signals.size() ||
        mapping.lo.f_up_hz.size() != signals.size())
        throw std::invalid_argument(fmt::format(
            "mapping dimensions ({} columns, {}/{} LOs) do not match {} signals",
            mapping.space.signals(), mapping.lo.f_down_hz.size(), mapping.lo.f_up_hz.size(), n_sig));

    std::vector<MappingViolation> out;
    const auto& space = mapping.space;

    for (int n = 0; n < n_sig; ++n) {
        const int c = space.column_count(n);
        if (c != 1)
            out.push_back({K::ColumnCount, fmt::format("signal {} feeds {} slices (must be 1)", n, c), {n}});
    }
    for (int l = 0; l < space.pairs(); ++l) {
        const int r = space.row_count(l);
        if (r > mapping.per_pair)
            out.push_back({K::RowCount,
                           fmt::format("pair {} carries {} signals (max {})", l, r, mapping.per_pair),
                           {l}});
    }

    // IF geometry per signal; a zero IF is reported as out of band.
    std::vector<std::optional<IfConversion>> conv(signals.size());
    for (int n = 0; n < n_sig; ++n) {
        const auto& s = signals[static_cast<std::size_t>(n)];
        const double f_down = mapping.lo.f_down_hz[static_cast<std::size_t>(n)];
        if (f_down == s.rf_center_hz) {
            out.push_back({K::OutOfBand, fmt::format("signal {}: LO equals RF (zero IF)", n), {n}});
            continue;
        }
        conv[static_cast<std::size_t>(n)] = if_of(s.rf_center_hz, f_down);
        const Band b = band_around(conv[static_cast<std::size_t>(n)]->if_center_hz, s.bandwidth_hz);
        if (b.lo < fe.passband_lo_hz || b.hi > fe.passband_hi_hz)
            out.push_back({K::OutOfBand,
                           fmt::format("signal {}: IF band [{}, {}] Hz outside passband [{}, {}] Hz", n,
                                       b.lo, b.hi, fe.passband_lo_hz, fe.passband_hi_hz),
                           {n}});
    }

    for (int l = 0; l < space.pairs(); ++l) {
        std::vector<int> on;
        for (int n : space.signals_on(l))
            if (space.pair_of(n) && conv[static_cast<std::size_t>(n)]) on.push_back(n);

        for (std::size_t i = 0; i < on.size(); ++i) {
            for (std::size_t j = i + 1; j < on.size(); ++j) {
                const int n = on[i], m = on[j];
                const Band bn = band_around(conv[static_cast<std::size_t>(n)]->if_center_hz,
                                            signals[static_cast<std::size_t>(n)].bandwidth_hz);
                const Band bm = band_around(conv[static_cast<std::size_t>(m)]->if_center_hz,
                                            signals[static_cast<std::size_t>(m)].bandwidth_hz);
                if (overlaps(bn, bm))
                    out.push_back({K::SameChainOverlap,
                                   fmt::format("signals {} and {} overlap at IF on pair {}", n, m, l),
                                   {n, m}});
            }
        }

        // Every up-converter on the slice sees the whole pair: mixer n maps IF
        // line x to f_U,n +/- x. Only the designed sideband of its own signal
        // may land inside n's RF output band.
        for (int n : on) {
            const auto& cn = *conv[static_cast<std::size_t>(n)];
            const double f_up = mapping.lo.f_up_hz[static_cast<std::size_t>(n)];
            const double out_center = cn.inverted ? f_up - cn.if_center_hz : f_up + cn.if_center_hz;
            const Band out_band = band_around(out_center, signals[static_cast<std::size_t>(n)].bandwidth_hz);
            for (int m : on) {
                const double x = conv[static_cast<std::size_t>(m)]->if_center_hz;
                const double bw = signals[static_cast<std::size_t>(m)].bandwidth_hz;
                const double upper = f_up + x;
                const double lower = std::abs(f_up - x);
                const bool designed_upper = (m == n) && !cn.inverted;
                const bool designed_lower = (m == n) && cn.inverted;
                const bool hit = (!designed_upper && overlaps(band_around(upper, bw), out_band)) ||
                                 (!designed_lower && overlaps(band_around(lower, bw), out_band));
                if (hit) {
                    std::vector<int> who = n == m ? std::vector<int>{n}
                                                  : std::vector<int>{std::min(n, m), std::max(n, m)};
                    const bool dup = std::any_of(out.begin(), out.end(), [&](const auto& v) {
                        return v.kind == K::ImageCollision && v.offenders == who;
                    });
                    if (!dup)
                        out.push_back({K::ImageCollision,
                                       fmt::format("IF of signal {} images into the RF band of signal {} on pair {}",
                                                   m, n, l),
                                       who});
                }
            }
        }
    }

    if (!mapping.allow_detune) {
        for (int n = 0; n < n_sig; ++n) {
            const double d = mapping.lo.f_down_hz[static_cast<std::size_t>(n)];
            const double u = mapping.lo.f_up_hz[static_cast<std::size_t>(n)];
            if (std::abs(d - u) > kLoMatchTolHz)
                out.push_back({K::NetInversion,
                               fmt::format("signal {}: f_D {} Hz != f_U {} Hz", n, d, u), {n}});
        }
    }

    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::tie(a.kind, a.offenders, a.detail) < std::tie(b.kind, b.offenders, b.detail);
    });
    return out;
}

std::vector<SpaceMap> enumerate_space_mappings(int n_signals, int n_pairs, int per_pair) {
    if (n_signals < 0 || n_pairs < 1 || per_pair < 1)
        throw std::invalid_argument("enumerate_space_mappings needs N >= 0, L >= 1, M >= 1");
    if (n_signals > per_pair * n_pairs)
        throw std::invalid_argument(
            fmt::format("infeasible: {} signals exceed {} pairs x {} per pair", n_signals, n_pairs, per_pair));

    std::vector<SpaceMap> out;
    std::vector<int> assign(static_cast<std::size_t>(n_signals));
    std::vector<int> load(static_cast<std::size_t>(n_pairs), 0);
    std::function<void(int)> rec = [&](int n) {
        if (n == n_signals) {
            out.push_back(SpaceMap::from_assignment(n_pairs, assign));
            return;
        }
        for (int l = 0; l < n_pairs; ++l) {
            if (load[static_cast<std::size_t>(l)] == per_pair) continue;
            ++load[static_cast<std::size_t>(l)];
            assign[static_cast<std::size_t>(n)] = l;
            rec(n + 1);
            --load[static_cast<std::size_t>(l)];
        }
    };
    rec(0);
    return out;
}

LoPlan lo_plan_from_ifs(std::span<const SignalSpec> signals, std::span<const double> if_hz,
                        InjectionSide side) {
    if (signals.size() != if_hz.size()) throw std::invalid_argument("one IF per signal required");
    LoPlan p;
    for (std::size_t n = 0; n < signals.size(); ++n) {
        const double lo = lo_for(signals[n].rf_center_hz, if_hz[n], side);
        p.f_down_hz.push_back(lo);
        p.f_up_hz.push_back(lo);
    }
    return p;
}

std::vector<LoPlan> enumerate_frequency_plans(std::span<const SignalSpec> signals,
                                              const SpaceMap& space,
                                              std::span<const double> if_slots_hz,
                                              const FrontEndSpec& fe, int per_pair,
                                              InjectionSide side) {
    using K = MappingViolation::Kind;
    if (if_slots_hz.empty()) throw std::invalid_argument("enumerate_frequency_plans needs IF slots");
    const int n_sig = static_cast<int>(signals.size());
    if (space.signals() != n_sig) throw std::invalid_argument("space mapping / signal count mismatch");

    std::vector<int> pair(static_cast<std::size_t>(n_sig), -1);
    for (int n = 0; n < n_sig; ++n) pair[static_cast<std::size_t>(n)] = space.pair_of(n).value_or(-1);

    const auto n_slots = if_slots_hz.size();
    // Slots usable by each signal on their own (band check, positive LO).
    std::vector<std::vector<std::size_t>> usable(signals.size());
    for (std::size_t n = 0; n < signals.size(); ++n) {
        for (std::size_t s = 0; s < n_slots; ++s) {
            const double f_if = if_slots_hz[s];
            const double bw = signals[n].bandwidth_hz;
            if (f_if - bw / 2.0 < fe.passband_lo_hz || f_if + bw / 2.0 > fe.passband_hi_hz) continue;
            if (lo_for(signals[n].rf_center_hz, f_if, side) <= 0.0) continue;
            usable[n].push_back(s);
        }
    }

    std::vector<LoPlan> out;
    std::vector<std::size_t> slot(signals.size(), 0);
    std::vector<double> ifs(signals.size(), 0.0);
    std::function<void(std::size_t)> rec = [&](std::size_t n) {
        if (n == signals.size()) {
            Sf2sfMapping m{space, lo_plan_from_ifs(signals, ifs, side), per_pair, false};
            const auto v = validate_mapping(signals, m, fe);
            const bool ok = std::none_of(v.begin(), v.end(), [](const auto& x) {
                return x.kind == K::OutOfBand || x.kind == K::SameChainOverlap || x.kind == K::ImageCollision;
            });
            if (ok) out.push_back(std::move(m.lo));
            return;
        }
        for (std::size_t s : usable[n]) {
            bool taken = false;
            for (std::size_t k = 0; k < n && !taken; ++k)
                taken = pair[k] == pair[n] && pair[n] >= 0 && slot[k] == s;
            if (taken) continue;
            slot[n] = s;
            ifs[n] = if_slots_hz[s];
            rec(n + 1);
        }
    };
    rec(0);
    return out;
}

LoPlan canonical_frequency_plan(std::span<const SignalSpec> signals, const SpaceMap& space,
                                std::span<const double> if_slots_hz, InjectionSide side) {
    std::vector<double> slots(if_slots_hz.begin(), if_slots_hz.end());
    std::sort(slots.begin(), slots.end());
    std::vector<double> ifs(signals.size(), 0.0);
    for (int l = 0; l < space.pairs(); ++l) {
        const auto on = space.signals_on(l);
        if (on.size() > slots.size())
            throw std::invalid_argument(
                fmt::format("pair {} holds {} signals but only {} IF slots exist", l, on.size(), slots.size()));
        for (std::size_t k = 0; k < on.size(); ++k) ifs[static_cast<std::size_t>(on[k])] = slots[k];
    }
    return lo_plan_from_ifs(signals, ifs, side);
}

}  // namespace amroc
