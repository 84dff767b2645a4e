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

#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "amroc/channel_models.hpp"
#include "amroc/sf2sf.hpp"
#include "amroc/signal.hpp"

namespace amroc {

/// Band-edge slack used when deciding whether an IF line falls inside a band.
inline constexpr double kBandEdgeTolHz = 1.0e-3;

/// Frequency-sampled end-to-end model s' = A s + B w_c.
///
/// a[k] is N x N and b[k] is N x L at baseband offset delta_hz[k]. Entry
/// A(n, m) maps input port m to output port n; B(n, l) maps cable noise on
/// pair l to output port n. Immutable once built.
struct EffectiveChannel {
    std::vector<double> delta_hz;
    std::vector<Eigen::MatrixXcd> a;
    std::vector<Eigen::MatrixXcd> b;
    std::vector<double> if_centers_hz;
    std::vector<bool> inverted;
    std::vector<int> pair_of_signal;

    int n_signals() const { return static_cast<int>(if_centers_hz.size()); }
    int n_pairs() const { return b.empty() ? 0 : static_cast<int>(b.front().cols()); }

    /// Index of delta on the grid; throws std::out_of_range when absent.
    std::size_t grid_index(double delta) const;
};

/// Raised when the mapping handed to the assembler fails validation.
class InvalidMappingError : public std::invalid_argument {
public:
    InvalidMappingError(std::string what, std::vector<MappingViolation> v)
        : std::invalid_argument(std::move(what)), violations_(std::move(v)) {}
    const std::vector<MappingViolation>& violations() const { return violations_; }

private:
    std::vector<MappingViolation> violations_;
};

/// `points` offsets spanning [-bw/2, +bw/2] inclusive (a single point gives {0}).
std::vector<double> baseband_grid(double bandwidth_hz, int points = 64);

/// Default grid: 64 points over the narrowest signal bandwidth.
std::vector<double> default_grid(std::span<const SignalSpec> signals, int points = 64);

/// Assemble A(delta) and B(delta) on `grid`.
///
/// Signal n on pair l sits at IF f_n with orientation s_n (-1 when the
/// down-conversion inverts). Its IF-domain response is
///   H_n(delta) = H_b(f_n + s_n delta) * H_c,l(f_n + s_n delta) * H_b(f_n + s_n delta)
/// and the matched up-conversion restores orientation, which conjugates the
/// response for inverted chains. Cross terms A(n, m) exist only between
/// different pairs, through FEXT, when m's IF line lands in n's IF band.
EffectiveChannel build_effective_channel(std::span<const SignalSpec> signals,
                                         const Sf2sfMapping& mapping, const CableSpec& cable,
                                         const FrontEndSpec& fe, std::span<const double> grid);

/// Cable-noise Gram matrix at grid point k, normalized to unit pair PSD.
/// Port n samples pair noise at its own IF line f_n + s_n delta, and white
/// noise at distinct frequencies is uncorrelated, so entry (n, n') is
/// sum_l B(n,l) conj(B(n',l)) when both lines coincide and 0 otherwise. The
/// diagonal equals sum_l |B(n,l)|^2.
Eigen::MatrixXcd cable_noise_gram(const EffectiveChannel& ch, std::size_t k);

/// Per-port output noise PSD in dBm/Hz at grid offset delta:
///   sum_l |B(n,l)|^2 N_cable + sum_m |A(n,m)|^2 N_antenna
double output_noise_psd(const EffectiveChannel& ch, const NoiseModel& noise, int n, double delta);

/// CSV rows "delta_hz,n,m,re,im" for every A entry.
void write_channel_csv(const EffectiveChannel& ch, std::ostream& os);

}  // namespace amroc
