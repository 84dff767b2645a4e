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

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "amroc/channel_models.hpp"
#include "amroc/link_algebra.hpp"
#include "amroc/sf2sf.hpp"

namespace amroc {

/// Uplink scenario: one desired UE and fixed interferers seen by an N-element
/// ULA whose element signals cross the copper link before MVDR combining at
/// the baseband unit.
struct BeamScenario {
    int n_antennas = 8;
    double element_spacing_wavelengths = 0.5;
    double desired_theta_deg = 0.0;
    std::vector<double> interferer_thetas_deg{-40.0, 25.0};
    double desired_power_dbm = -20.0;
    /// One entry per interferer; empty means "same as the desired UE".
    std::vector<double> interferer_powers_dbm;
    double signal_bandwidth_hz = 20.0e6;
    std::vector<double> sweep_deg = default_sweep();
    NoiseModel noise;
    /// Average linear SINR over every channel grid point instead of using
    /// only the band center.
    bool average_over_grid = false;

    double interferer_power_dbm(std::size_t k) const;
    void validate() const;
    static std::vector<double> default_sweep(double step_deg = 1.0);
};

struct SinrCurve {
    std::vector<double> theta_deg;
    std::vector<double> sinr_db;
    std::string mapping_id;
};

/// a_k = exp(j 2 pi d k sin(theta)), k = 0..n-1.
Eigen::VectorXcd ula_steering(double theta_deg, int n, double spacing_wavelengths = 0.5);

/// R = sum_k p_k (A a_k)(A a_k)^H + s_ant A A^H + s_c G at grid offset
/// `delta`, with the desired UE at `desired_theta_deg` and G the cable-noise
/// Gram matrix (B B^H restricted to coincident IF lines). Powers in mW over the
/// signal bandwidth. Throws std::logic_error if R is not Hermitian to 1e-12
/// (relative).
Eigen::MatrixXcd received_covariance(const BeamScenario& sc, const EffectiveChannel& ch,
                                     double delta, double desired_theta_deg);

struct MvdrSolution {
    Eigen::VectorXcd w;
    bool loaded = false;            ///< diagonal loading was applied
    double loading = 0.0;           ///< amount added to the diagonal
    double distortionless_error = 0.0;  ///< |w^H a - 1|
};

inline constexpr double kMaxConditionNumber = 1.0e12;
inline constexpr double kDistortionlessTol = 1.0e-10;

/// w = R^-1 a / (a^H R^-1 a), with loading 1e-6 tr(R)/N when cond(R) > 1e12.
/// Throws std::invalid_argument for a zero steering vector and
/// std::runtime_error when R stays singular after loading.
MvdrSolution mvdr_weights(const Eigen::MatrixXcd& r, const Eigen::VectorXcd& a_eff);

/// SINR in dB of combiner w. Returns +inf (and warns once on std::clog) when
/// the interference-plus-noise power is zero.
double sinr_db(const Eigen::VectorXcd& w, const BeamScenario& sc, const EffectiveChannel& ch,
               double delta, double desired_theta_deg);

/// MVDR SINR curve over sc.sweep_deg for a prebuilt channel.
SinrCurve sweep_theta(const BeamScenario& sc, const EffectiveChannel& ch);

/// Builds the channel (band center, or the default grid when averaging) and sweeps.
SinrCurve sweep_theta(const BeamScenario& sc, std::span<const SignalSpec> signals,
                      const CableSpec& cable, const FrontEndSpec& fe, const Sf2sfMapping& mapping);

/// Signal set for a scenario: one port per antenna at a common RF carrier.
std::vector<SignalSpec> antenna_signals(const BeamScenario& sc, double rf_center_hz, Rat rat = Rat::LTE);

}  // namespace amroc
