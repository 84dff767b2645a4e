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

#include "amroc/link_algebra.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

namespace amroc {

std::size_t EffectiveChannel::grid_index(double delta) const {
    for (std::size_t k = 0; k < delta_hz.size(); ++k)
        if (std::abs(delta_hz[k] - delta) <= 1e-9 * std::max(1.0, std::abs(delta))) return k;
    throw std::out_of_range(fmt::format("offset {} Hz is not on the channel grid", delta));
}

std::vector<double> baseband_grid(double bandwidth_hz, int points) {
    if (points < 1) throw std::invalid_argument("grid needs at least one point");
    if (points == 1) return {0.0};
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k)
        g[static_cast<std::size_t>(k)] = -bandwidth_hz / 2.0 + bandwidth_hz * k / (points - 1);
    return g;
}

std::vector<double> default_grid(std::span<const SignalSpec> signals, int points) {
    if (signals.empty()) throw std::invalid_argument("default_grid needs signals");
    double bw = signals.front().bandwidth_hz;
    for (const auto& s : signals) bw = std::min(bw, s.bandwidth_hz);
    return baseband_grid(bw, points);
}

EffectiveChannel build_effective_channel(std::span<const SignalSpec> signals,
                                         const Sf2sfMapping& mapping, const CableSpec& cable,
                                         const FrontEndSpec& fe, std::span<const double> grid) {
    auto violations = validate_mapping(signals, mapping, fe);
    if (!violations.empty()) {
        std::string msg = "invalid SF2SF mapping:";
        for (const auto& v : violations) msg += fmt::format(" [{}] {};", to_string(v.kind), v.detail);
        throw InvalidMappingError(msg, std::move(violations));
    }
    if (mapping.space.pairs() > cable.num_pairs)
        throw std::invalid_argument(fmt::format("mapping uses {} pairs but the cable has {}",
                                                mapping.space.pairs(), cable.num_pairs));

    const int n_sig = static_cast<int>(signals.size());
    const int n_pairs = mapping.space.pairs();
    const auto conv = mapping.if_plan(signals);

    EffectiveChannel ch;
    ch.delta_hz.assign(grid.begin(), grid.end());
    for (int n = 0; n < n_sig; ++n) {
        ch.if_centers_hz.push_back(conv[static_cast<std::size_t>(n)].if_center_hz);
        ch.inverted.push_back(conv[static_cast<std::size_t>(n)].inverted);
        ch.pair_of_signal.push_back(*mapping.space.pair_of(n));
    }

    const double g2 = kMixerConversionGain * kMixerConversionGain;
    auto orient = [&](int n) { return ch.inverted[static_cast<std::size_t>(n)] ? -1.0 : 1.0; };
    // Output-side orientation: an inverted chain conjugates its IF response.
    auto restore = [&](int n, cplx c) { return ch.inverted[static_cast<std::size_t>(n)] ? std::conj(c) : c; };

    for (double delta : grid) {
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n_sig, n_sig);
        Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(n_sig, n_pairs);
        for (int m = 0; m < n_sig; ++m) {
            const int lm = ch.pair_of_signal[static_cast<std::size_t>(m)];
            const double x = ch.if_centers_hz[static_cast<std::size_t>(m)] + orient(m) * delta;
            const cplx hb = frontend_gain(x, fe);
            for (int n = 0; n < n_sig; ++n) {
                const int ln = ch.pair_of_signal[static_cast<std::size_t>(n)];
                cplx c{0.0, 0.0};
                if (n == m) {
                    c = g2 * hb * pair_insertion_gain(x, cable, lm) * hb;
                } else if (ln != lm) {
                    const double half = signals[static_cast<std::size_t>(n)].bandwidth_hz / 2.0;
                    if (std::abs(x - ch.if_centers_hz[static_cast<std::size_t>(n)]) <= half + kBandEdgeTolHz)
                        c = g2 * hb * fext_gain(x, lm, ln, cable) * hb;
                }
                a(n, m) = restore(n, c);
            }
        }
        for (int n = 0; n < n_sig; ++n) {
            const int ln = ch.pair_of_signal[static_cast<std::size_t>(n)];
            const double x = ch.if_centers_hz[static_cast<std::size_t>(n)] + orient(n) * delta;
            const cplx hb = kMixerConversionGain * frontend_gain(x, fe);
            for (int l = 0; l < n_pairs; ++l) {
                const cplx w = (l == ln) ? cplx{1.0, 0.0} : fext_relative_gain(x, l, ln, cable);
                b(n, l) = restore(n, hb * w);
            }
        }
        ch.a.push_back(std::move(a));
        ch.b.push_back(std::move(b));
    }
    return ch;
}

Eigen::MatrixXcd cable_noise_gram(const EffectiveChannel& ch, std::size_t k) {
    const auto& b = ch.b.at(k);
    const double delta = ch.delta_hz[k];
    const int n_sig = ch.n_signals();
    auto line = [&](int n) {
        const auto u = static_cast<std::size_t>(n);
        return ch.if_centers_hz[u] + (ch.inverted[u] ? -delta : delta);
    };
    Eigen::MatrixXcd g = b * b.adjoint();
    for (int n = 0; n < n_sig; ++n)
        for (int m = 0; m < n_sig; ++m)
            if (n != m && std::abs(line(n) - line(m)) > kBandEdgeTolHz) g(n, m) = 0.0;
    return g;
}

double output_noise_psd(const EffectiveChannel& ch, const NoiseModel& noise, int n, double delta) {
    const auto k = ch.grid_index(delta);
    const double cable_mw = dbm_to_mw(noise.cable_noise_dbm_hz);
    const double ant_mw = dbm_to_mw(noise.antenna_noise_dbm_hz);
    const double p = ch.b[k].row(n).squaredNorm() * cable_mw + ch.a[k].row(n).squaredNorm() * ant_mw;
    return mw_to_dbm(p);
}

void write_channel_csv(const EffectiveChannel& ch, std::ostream& os) {
    os << "delta_hz,n,m,re,im\n";
    for (std::size_t k = 0; k < ch.delta_hz.size(); ++k) {
        const auto& a = ch.a[k];
        for (Eigen::Index n = 0; n < a.rows(); ++n)
            for (Eigen::Index m = 0; m < a.cols(); ++m)
                os << fmt::format("{:.6f},{},{},{:.12e},{:.12e}\n", ch.delta_hz[k], n, m,
                                  a(n, m).real(), a(n, m).imag());
    }
}

}  // namespace amroc
