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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "amroc/units.hpp"

namespace amroc {

// ---------------------------------------------------------------------------
// Twisted-pair cable
// ---------------------------------------------------------------------------

enum class CableCategory { Cat5, Cat5e, Cat6, Cat7 };

std::string_view to_string(CableCategory c);
std::optional<CableCategory> parse_cable_category(std::string_view s);

/// Structured-cabling insertion-loss polynomial, dB per 100 m with f in MHz:
///   IL(f) = k1*sqrt(f) + k2*f + k3/sqrt(f)
struct AttenuationCoeffs {
    double k1 = 0.0;
    double k2 = 0.0;
    double k3 = 0.0;

    AttenuationCoeffs scaled(double s) const { return {k1 * s, k2 * s, k3 * s}; }
};

/// Published channel insertion-loss limits per category (Cat5 and Cat5e share
/// the same limit line).
AttenuationCoeffs default_attenuation(CableCategory c);

/// Pair-to-pair equal-level FEXT at 100 MHz over 100 m, dB (negative).
double default_fext_ref_db(CableCategory c);

struct CableSpec {
    CableCategory category = CableCategory::Cat5e;
    double length_m = 50.0;
    int num_pairs = 4;
    AttenuationCoeffs atten = default_attenuation(CableCategory::Cat5e);
    double fext_ref_db = default_fext_ref_db(CableCategory::Cat5e);
    double fext_ref_hz = 100.0 * kMHz;
    double noise_floor_dbm_hz = -140.0;
    double velocity_factor = 0.69;
    /// Per-pair multiplier on the attenuation coefficients (twist-rate
    /// spread). Empty means every pair uses 1.0.
    std::vector<double> pair_loss_scale;
    bool fext_enabled = true;
    std::uint64_t fext_seed = 0;

    static CableSpec make(CableCategory category, double length_m, int num_pairs = 4);

    double loss_scale(int pair) const;
    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// Positive insertion loss in dB of one pair at frequency f (Hz).
double pair_insertion_loss_db(double f_hz, const CableSpec& cable, int pair = 0);

/// Complex transfer function of one pair: loss magnitude plus linear delay phase.
/// Throws std::domain_error for negative f.
cplx pair_insertion_gain(double f_hz, const CableSpec& cable, int pair = 0);

/// Far-end crosstalk from pair `from` into pair `to`. Magnitude is symmetric
/// in the two indices; the phase is a deterministic function of the unordered
/// pair and cable.fext_seed plus the cable delay. Returns 0 when FEXT is
/// disabled. Throws std::domain_error when from == to or f < 0.
cplx fext_gain(double f_hz, int from, int to, const CableSpec& cable);

/// FEXT coupling in dB before the insertion-loss term (equal-level FEXT).
double fext_coupling_db(double f_hz, const CableSpec& cable);

/// Equal-level FEXT: fext_gain without the insertion-loss term. Weights noise
/// injected on one pair as seen on another.
cplx fext_relative_gain(double f_hz, int from, int to, const CableSpec& cable);

// ---------------------------------------------------------------------------
// Passive front-end (mixer + combiner + equalizer + balun), one traversal
// ---------------------------------------------------------------------------

enum class PhaseMode { Zero, MinimumPhase };

struct FrontEndSpec {
    double passband_lo_hz = 20.0 * kMHz;
    double passband_hi_hz = 500.0 * kMHz;
    double insertion_loss_db = 20.0;
    int edge_order = 4;
    double equalizer_tilt_db_per_hz = 0.0;
    double design_length_m = 50.0;
    PhaseMode phase = PhaseMode::Zero;

    double center_hz() const;
    void validate() const;
};

/// Butterworth band-pass skirt only (unit gain at the geometric center).
cplx frontend_skirt(double f_hz, const FrontEndSpec& fe);

/// Equalizer up-tilt in dB. The boost grows linearly from the lower passband
/// edge and saturates at the upper edge.
double frontend_tilt_db(double f_hz, const FrontEndSpec& fe);

/// Full front-end response: skirt * insertion loss * tilt, magnitude
/// clamped to <= 1.
cplx frontend_gain(double f_hz, const FrontEndSpec& fe);

/// Per-front-end tilt (dB/Hz) that flattens `cable` over [f_lo, f_hi] when two
/// front-ends sit in the path. Least-squares slope of the pair loss.
double fit_equalizer_tilt(const CableSpec& cable, double f_lo_hz, double f_hi_hz,
                          int n_points = 64);

/// Modeled end-to-end loss in dB (front-end, pair, front-end), positive.
double end_to_end_loss_db(double f_hz, const CableSpec& cable, const FrontEndSpec& fe,
                          int pair = 0);

// ---------------------------------------------------------------------------
// Noise
// ---------------------------------------------------------------------------

struct NoiseModel {
    double cable_noise_dbm_hz = -140.0;
    double antenna_noise_dbm_hz = -174.0;

    void validate() const;
};

// ---------------------------------------------------------------------------
// Calibration against measured end-to-end attenuation
// ---------------------------------------------------------------------------

struct CalibrationTarget {
    double length_m = 0.0;
    double f_if_hz = 0.0;
    double end_to_end_db = 0.0;
};

struct CalibrationResult {
    double insertion_loss_db = 0.0;  ///< per front-end
    double cable_scale = 1.0;        ///< multiplier on the category coefficients
    std::vector<double> model_db;
    std::vector<double> residual_db;  ///< model - target
    double max_abs_residual_db() const;
};

/// Least-squares fit of one lumped per-box loss and one cable coefficient
/// scale. The front-end shape (skirt + tilt) and the cable category come from
/// the templates. Throws std::invalid_argument for fewer than two targets or
/// when every target has the same length.
CalibrationResult calibrate_chain(std::span<const CalibrationTarget> targets,
                                  const CableSpec& cable_template,
                                  const FrontEndSpec& fe_template);

/// Apply a calibration result to a cable/front-end pair.
void apply_calibration(const CalibrationResult& cal, CableSpec& cable, FrontEndSpec& fe);

/// Measured attenuation anchors: 50 m Cat5e -> 50 dB, 15 m Cat5 -> 42 dB at 140 MHz.
std::vector<CalibrationTarget> lab_calibration_targets();

/// Front-end with the equalizer tuned for nominal 50 m Cat5e over [50, 400] MHz.
FrontEndSpec default_frontend();

struct ChainPreset {
    CableSpec cable;
    FrontEndSpec frontend;
    CalibrationResult calibration;
};

/// Built-in presets "cat5-15m" and "cat5e-50m", calibrated against
/// lab_calibration_targets(). Returns nullopt for unknown names.
std::optional<ChainPreset> chain_preset(std::string_view name);

}  // namespace amroc
