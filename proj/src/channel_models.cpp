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

#include "amroc/channel_models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>
#include <fmt/core.h>

#include "amroc/rng.hpp"

namespace amroc {

std::string_view to_string(CableCategory c) {
    switch (c) {
        case CableCategory::Cat5: return "cat5";
        case CableCategory::Cat5e: return "cat5e";
        case CableCategory::Cat6: return "cat6";
        case CableCategory::Cat7: return "cat7";
    }
    return "?";
}

std::optional<CableCategory> parse_cable_category(std::string_view s) {
    for (auto c : {CableCategory::Cat5, CableCategory::Cat5e, CableCategory::Cat6,
                   CableCategory::Cat7}) {
        if (s == to_string(c)) return c;
    }
    return std::nullopt;
}

AttenuationCoeffs default_attenuation(CableCategory c) {
    switch (c) {
        case CableCategory::Cat5:
        case CableCategory::Cat5e: return {1.967, 0.023, 0.050};
        case CableCategory::Cat6: return {1.808, 0.017, 0.200};
        case CableCategory::Cat7: return {1.800, 0.010, 0.200};
    }
    return {};
}

double default_fext_ref_db(CableCategory c) {
    switch (c) {
        case CableCategory::Cat5: return -22.0;
        case CableCategory::Cat5e: return -24.0;
        case CableCategory::Cat6: return -28.0;
        case CableCategory::Cat7: return -40.0;
    }
    return -24.0;
}

CableSpec CableSpec::make(CableCategory category, double length_m, int num_pairs) {
    CableSpec c;
    c.category = category;
    c.length_m = length_m;
    c.num_pairs = num_pairs;
    c.atten = default_attenuation(category);
    c.fext_ref_db = default_fext_ref_db(category);
    return c;
}

double CableSpec::loss_scale(int pair) const {
    if (pair < 0 || pair >= num_pairs)
        throw std::out_of_range(fmt::format("pair index {} outside [0, {})", pair, num_pairs));
    if (pair_loss_scale.empty()) return 1.0;
    return pair_loss_scale[static_cast<std::size_t>(pair)];
}

void CableSpec::validate() const {
    if (!(length_m >= 0.0) || !std::isfinite(length_m))
        throw std::invalid_argument("cable.length_m must be >= 0");
    if (num_pairs < 1) throw std::invalid_argument("cable.num_pairs must be >= 1");
    if (atten.k1 < 0.0 || atten.k2 < 0.0 || atten.k3 < 0.0)
        throw std::invalid_argument("cable attenuation coefficients must be >= 0");
    if (!(fext_ref_hz > 0.0)) throw std::invalid_argument("cable.fext_ref_hz must be > 0");
    if (!std::isfinite(fext_ref_db)) throw std::invalid_argument("cable.fext_ref_db must be finite");
    if (!std::isfinite(noise_floor_dbm_hz))
        throw std::invalid_argument("cable.noise_floor_dbm_hz must be finite");
    if (!(velocity_factor > 0.0 && velocity_factor <= 1.0))
        throw std::invalid_argument("cable.velocity_factor must be in (0, 1]");
    if (!pair_loss_scale.empty()) {
        if (pair_loss_scale.size() != static_cast<std::size_t>(num_pairs))
            throw std::invalid_argument("cable.pair_loss_scale needs one entry per pair");
        for (double s : pair_loss_scale)
            if (!(s >= 0.0) || !std::isfinite(s))
                throw std::invalid_argument("cable.pair_loss_scale entries must be >= 0");
    }
}

namespace {

void check_frequency(double f_hz) {
    if (!(f_hz >= 0.0)) throw std::domain_error(fmt::format("negative frequency {} Hz", f_hz));
}

double delay_phase(double f_hz, const CableSpec& cable) {
    return -2.0 * kPi * f_hz * cable.length_m / (cable.velocity_factor * kSpeedOfLight);
}

}  // namespace

double pair_insertion_loss_db(double f_hz, const CableSpec& cable, int pair) {
    check_frequency(f_hz);
    const double scale = cable.loss_scale(pair);
    if (cable.length_m == 0.0 || f_hz == 0.0) return 0.0;  // k2-only limit at DC
    const double f = f_hz / kMHz;
    const double sf = std::sqrt(f);
    const double per_100m = cable.atten.k1 * sf + cable.atten.k2 * f + cable.atten.k3 / sf;
    return scale * per_100m * cable.length_m / 100.0;
}

cplx pair_insertion_gain(double f_hz, const CableSpec& cable, int pair) {
    const double loss_db = pair_insertion_loss_db(f_hz, cable, pair);
    return std::polar(std::min(1.0, db_to_lin_amp(-loss_db)), delay_phase(f_hz, cable));
}

double fext_coupling_db(double f_hz, const CableSpec& cable) {
    return cable.fext_ref_db + 20.0 * std::log10(f_hz / cable.fext_ref_hz) +
           10.0 * std::log10(cable.length_m / 100.0);
}

cplx fext_gain(double f_hz, int from, int to, const CableSpec& cable) {
    check_frequency(f_hz);
    if (from == to) throw std::domain_error("fext_gain needs two distinct pairs");
    // range checks
    (void)cable.loss_scale(from);
    (void)cable.loss_scale(to);
    if (!cable.fext_enabled || f_hz == 0.0 || cable.length_m == 0.0) return {0.0, 0.0};

    // Mean of the two pair losses keeps |g(i,j)| = |g(j,i)| with unequal pairs.
    const double il = 0.5 * (pair_insertion_loss_db(f_hz, cable, from) +
                             pair_insertion_loss_db(f_hz, cable, to));
    const double mag = std::min(1.0, db_to_lin_amp(fext_coupling_db(f_hz, cable) - il));

    const auto lo = static_cast<std::uint64_t>(std::min(from, to));
    const auto hi = static_cast<std::uint64_t>(std::max(from, to));
    const double seeded =
        2.0 * kPi * unit_interval(split_seed(cable.fext_seed, "fext", (lo << 32) | hi));
    return std::polar(mag, seeded + delay_phase(f_hz, cable));
}

cplx fext_relative_gain(double f_hz, int from, int to, const CableSpec& cable) {
    const cplx g = fext_gain(f_hz, from, to, cable);
    if (g == cplx{0.0, 0.0}) return g;
    return std::polar(std::min(1.0, db_to_lin_amp(fext_coupling_db(f_hz, cable))), std::arg(g));
}

double FrontEndSpec::center_hz() const { return std::sqrt(passband_lo_hz * passband_hi_hz); }

void FrontEndSpec::validate() const {
    if (!(passband_lo_hz > 0.0 && passband_lo_hz < passband_hi_hz))
        throw std::invalid_argument("frontend passband needs 0 < lo < hi");
    if (!(insertion_loss_db >= 0.0) || !std::isfinite(insertion_loss_db))
        throw std::invalid_argument("frontend.insertion_loss_db must be >= 0");
    if (edge_order < 1) throw std::invalid_argument("frontend.edge_order must be >= 1");
    if (!(equalizer_tilt_db_per_hz >= 0.0) || !std::isfinite(equalizer_tilt_db_per_hz))
        throw std::invalid_argument("frontend.equalizer_tilt_db_per_hz must be >= 0");
}

cplx frontend_skirt(double f_hz, const FrontEndSpec& fe) {
    check_frequency(f_hz);
    if (f_hz == 0.0) return {0.0, 0.0};
    const double f0 = fe.center_hz();
    const double bw = fe.passband_hi_hz - fe.passband_lo_hz;
    // Low-pass prototype frequency of the band-pass transform.
    const double x = (f_hz * f_hz - f0 * f0) / (f_hz * bw);
    const int n = fe.edge_order;
    if (fe.phase == PhaseMode::Zero) {
        return {1.0 / std::sqrt(1.0 + std::pow(x * x, n)), 0.0};
    }
    // Butterworth poles on the unit circle, left half plane.
    cplx den{1.0, 0.0};
    for (int k = 1; k <= n; ++k) {
        const cplx pole = std::polar(1.0, kPi * (2.0 * k + n - 1.0) / (2.0 * n));
        den *= cplx{0.0, x} - pole;
    }
    return 1.0 / den;
}

double frontend_tilt_db(double f_hz, const FrontEndSpec& fe) {
    const double fc = std::clamp(f_hz, fe.passband_lo_hz, fe.passband_hi_hz);
    return fe.equalizer_tilt_db_per_hz * (fc - fe.passband_lo_hz);
}

cplx frontend_gain(double f_hz, const FrontEndSpec& fe) {
    const cplx skirt = frontend_skirt(f_hz, fe);
    const double mag = std::abs(skirt) * db_to_lin_amp(frontend_tilt_db(f_hz, fe) - fe.insertion_loss_db);
    if (mag == 0.0) return {0.0, 0.0};
    return std::polar(std::min(1.0, mag), std::arg(skirt));
}

double fit_equalizer_tilt(const CableSpec& cable, double f_lo_hz, double f_hi_hz, int n_points) {
    if (!(f_lo_hz > 0.0 && f_lo_hz < f_hi_hz) || n_points < 2)
        throw std::invalid_argument("fit_equalizer_tilt needs 0 < f_lo < f_hi and >= 2 points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n_points; ++i) {
        const double f = f_lo_hz + (f_hi_hz - f_lo_hz) * i / (n_points - 1);
        const double y = pair_insertion_loss_db(f, cable, 0);
        sx += f;
        sy += y;
        sxx += f * f;
        sxy += f * y;
    }
    const double n = n_points;
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return std::max(0.0, slope / 2.0);
}

double end_to_end_loss_db(double f_hz, const CableSpec& cable, const FrontEndSpec& fe, int pair) {
    const double fe_mag = std::abs(frontend_gain(f_hz, fe));
    const double pair_mag = std::abs(pair_insertion_gain(f_hz, cable, pair));
    return -lin_amp_to_db(fe_mag * fe_mag * pair_mag);
}

void NoiseModel::validate() const {
    if (!std::isfinite(cable_noise_dbm_hz) || !std::isfinite(antenna_noise_dbm_hz))
        throw std::invalid_argument("noise PSDs must be finite");
}

double CalibrationResult::max_abs_residual_db() const {
    double m = 0.0;
    for (double r : residual_db) m = std::max(m, std::abs(r));
    return m;
}

CalibrationResult calibrate_chain(std::span<const CalibrationTarget> targets,
                                  const CableSpec& cable_template,
                                  const FrontEndSpec& fe_template) {
    if (targets.size() < 2) throw std::invalid_argument("calibration needs at least two targets");
    const bool all_same_length = std::all_of(targets.begin(), targets.end(), [&](const auto& t) {
        return t.length_m == targets.front().length_m;
    });
    if (all_same_length)
        throw std::invalid_argument("singular calibration: all targets share one cable length");

    const auto m = static_cast<Eigen::Index>(targets.size());
    Eigen::MatrixXd design(m, 2);
    Eigen::VectorXd rhs(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& t = targets[static_cast<std::size_t>(i)];
        CableSpec c = cable_template;
        c.length_m = t.length_m;
        // Front-end shape with the lumped loss removed; not clamped.
        const double shape_db = -(lin_amp_to_db(std::abs(frontend_skirt(t.f_if_hz, fe_template))) +
                                  frontend_tilt_db(t.f_if_hz, fe_template));
        design(i, 0) = 2.0;
        design(i, 1) = pair_insertion_loss_db(t.f_if_hz, c, 0);
        rhs(i) = t.end_to_end_db - 2.0 * shape_db;
    }

    CalibrationResult out;
    if (design.col(1).squaredNorm() == 0.0) {
        // Loss-free cable: only the lumped loss is identifiable.
        out.insertion_loss_db = rhs.mean() / 2.0;
        out.cable_scale = 1.0;
    } else {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
        if (qr.rank() < 2) throw std::invalid_argument("singular calibration system");
        const Eigen::Vector2d x = qr.solve(rhs);
        out.insertion_loss_db = x(0);
        out.cable_scale = x(1);
    }
    if (out.insertion_loss_db < 0.0 || out.cable_scale < 0.0)
        throw std::invalid_argument(fmt::format(
            "calibration produced a non-passive chain (loss {:.3f} dB, scale {:.4f})",
            out.insertion_loss_db, out.cable_scale));

    CableSpec cable = cable_template;
    FrontEndSpec fe = fe_template;
    apply_calibration(out, cable, fe);
    for (const auto& t : targets) {
        cable.length_m = t.length_m;
        const double model = end_to_end_loss_db(t.f_if_hz, cable, fe, 0);
        out.model_db.push_back(model);
        out.residual_db.push_back(model - t.end_to_end_db);
    }
    return out;
}

void apply_calibration(const CalibrationResult& cal, CableSpec& cable, FrontEndSpec& fe) {
    cable.atten = default_attenuation(cable.category).scaled(cal.cable_scale);
    fe.insertion_loss_db = cal.insertion_loss_db;
}

std::vector<CalibrationTarget> lab_calibration_targets() {
    return {{50.0, 140.0 * kMHz, 50.0}, {15.0, 140.0 * kMHz, 42.0}};
}

FrontEndSpec default_frontend() {
    FrontEndSpec fe;
    fe.design_length_m = 50.0;
    const CableSpec nominal = CableSpec::make(CableCategory::Cat5e, fe.design_length_m);
    fe.equalizer_tilt_db_per_hz = fit_equalizer_tilt(nominal, 50.0 * kMHz, 400.0 * kMHz);
    return fe;
}

std::optional<ChainPreset> chain_preset(std::string_view name) {
    CableSpec cable;
    if (name == "cat5e-50m") {
        cable = CableSpec::make(CableCategory::Cat5e, 50.0);
    } else if (name == "cat5-15m") {
        cable = CableSpec::make(CableCategory::Cat5, 15.0);
    } else {
        return std::nullopt;
    }
    const auto targets = lab_calibration_targets();
    ChainPreset p{cable, default_frontend(), {}};
    p.calibration = calibrate_chain(targets, CableSpec::make(CableCategory::Cat5e, 50.0), p.frontend);
    apply_calibration(p.calibration, p.cable, p.frontend);
    return p;
}

}  // namespace amroc
