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

// Brute-force spectral-line model of the L2CC chain, used as a test oracle for
// the assembled channel matrix. A real signal is a list of lines (f >= 0, a)
// meaning Re{a exp(j 2 pi f t)}; every stage is applied line by line.

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "amroc/channel_models.hpp"
#include "amroc/sf2sf.hpp"

namespace oracle {

using cplx = std::complex<double>;

struct Line {
    double f;
    cplx a;
};

// Multiply by 2 cos(2 pi f_lo t). Keeps both products unless `drop_sum`.
inline std::vector<Line> mix(std::span<const Line> in, double f_lo, bool drop_sum) {
    std::vector<Line> out;
    for (const auto& l : in) {
        if (!drop_sum) out.push_back({l.f + f_lo, l.a});
        const double d = l.f - f_lo;
        out.push_back({std::abs(d), d < 0.0 ? std::conj(l.a) : l.a});
    }
    return out;
}

// Output lines of every port when a unit tone at rf_m + delta drives port m.
// Output port n keeps only lines inside its RF band (up-converted with f_U).
inline std::vector<std::vector<Line>> tone_response(std::span<const amroc::SignalSpec> signals,
                                                    const amroc::Sf2sfMapping& map,
                                                    const amroc::CableSpec& cable,
                                                    const amroc::FrontEndSpec& fe, int m, double delta,
                                                    double tol_hz = 1e-3) {
    const int n_sig = static_cast<int>(signals.size());
    const int n_pairs = map.space.pairs();
    const auto um = static_cast<std::size_t>(m);

    // RRU side: down-convert, keep the difference product, front-end.
    const Line tone{signals[um].rf_center_hz + delta, cplx{1.0, 0.0}};
    auto lines = mix(std::span<const Line>(&tone, 1), map.lo.f_down_hz[um], true);
    for (auto& l : lines) l.a *= amroc::frontend_gain(l.f, fe);

    // Cable: own pair through insertion loss, the others through FEXT.
    const int lm = *map.space.pair_of(m);
    std::vector<std::vector<Line>> on_pair(static_cast<std::size_t>(n_pairs));
    for (int l = 0; l < n_pairs; ++l) {
        for (const auto& ln : lines) {
            const cplx h = (l == lm) ? amroc::pair_insertion_gain(ln.f, cable, l)
                                     : amroc::fext_gain(ln.f, lm, l, cable);
            on_pair[static_cast<std::size_t>(l)].push_back({ln.f, ln.a * h * amroc::frontend_gain(ln.f, fe)});
        }
    }

    // BBU side: each port up-converts whatever its pair carries.
    std::vector<std::vector<Line>> out(static_cast<std::size_t>(n_sig));
    for (int n = 0; n < n_sig; ++n) {
        const auto un = static_cast<std::size_t>(n);
        const int ln = *map.space.pair_of(n);
        const auto up = mix(on_pair[static_cast<std::size_t>(ln)], map.lo.f_up_hz[un], false);
        const double f_if = std::abs(signals[un].rf_center_hz - map.lo.f_down_hz[un]);
        const bool high_side = map.lo.f_down_hz[un] > signals[un].rf_center_hz;
        const double f0 = map.lo.f_up_hz[un] + (high_side ? -f_if : f_if);
        for (const auto& l : up)
            if (std::abs(l.f - f0) <= signals[un].bandwidth_hz / 2.0 + tol_hz) out[un].push_back(l);
    }
    return out;
}

// Net amplitude per output port (sum of in-band lines).
inline std::vector<cplx> tone_oracle(std::span<const amroc::SignalSpec> signals, const amroc::Sf2sfMapping& map,
                                     const amroc::CableSpec& cable, const amroc::FrontEndSpec& fe, int m,
                                     double delta) {
    std::vector<cplx> a;
    for (const auto& port : tone_response(signals, map, cable, fe, m, delta)) {
        cplx s{0.0, 0.0};
        for (const auto& l : port) s += l.a;
        a.push_back(s);
    }
    return a;
}

}  // namespace oracle
