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

#include "amroc/beamforming.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

#include <fmt/core.h>

namespace amroc {

double BeamScenario::interferer_power_dbm(std::size_t k) const {
    if (interferer_powers_dbm.empty()) return desired_power_dbm;
    return interferer_powers_dbm.at(k);
}

void BeamScenario::validate() const {
    if (n_antennas < 1) throw std::invalid_argument("scenario.n_antennas must be >= 1");
    if (!(element_spacing_wavelengths > 0.0))
        throw std::invalid_argument("scenario.element_spacing_wavelengths must be > 0");
    auto check_theta = [](double t, const char* what) {
        if (!(std::abs(t) <= 90.0)) throw std::invalid_argument(fmt::format("{} must satisfy |theta| <= 90", what));
    };
    check_theta(desired_theta_deg, "scenario.desired_theta_deg");
    for (double t : interferer_thetas_deg) check_theta(t, "scenario.interferer_thetas_deg");
    for (double t : sweep_deg) check_theta(t, "scenario sweep");
    if (!interferer_powers_dbm.empty() && interferer_powers_dbm.size() != interferer_thetas_deg.size())
        throw std::invalid_argument("scenario.interferer_powers_dbm needs one entry per interferer");
    if (!std::isfinite(desired_power_dbm)) throw std::invalid_argument("scenario.desired_power_dbm must be finite");
    for (double p : interferer_powers_dbm)
        if (!std::isfinite(p)) throw std::invalid_argument("scenario interferer powers must be finite");
    if (!(signal_bandwidth_hz > 0.0)) throw std::invalid_argument("scenario.bandwidth_hz must be > 0");
    for (std::size_t i = 1; i < sweep_deg.size(); ++i)
        if (!(sweep_deg[i] > sweep_deg[i - 1])) throw std::invalid_argument("sweep grid must be strictly increasing");
    noise.validate();
}

std::vector<double> BeamScenario::default_sweep(double step_deg) {
    std::vector<double> g;
    const int n = static_cast<int>(std::floor(180.0 / step_deg + 1e-9));
    for (int i = 0; i <= n; ++i) g.push_back(-90.0 + i * step_deg);
    return g;
}

Eigen::VectorXcd ula_steering(double theta_deg, int n, double spacing_wavelengths) {
    const double s = std::sin(theta_deg * kPi / 180.0);
    Eigen::VectorXcd a(n);
    for (int k = 0; k < n; ++k) a(k) = std::polar(1.0, 2.0 * kPi * spacing_wavelengths * k * s);
    return a;
}

namespace {

struct Powers {
    double desired;
    std::vector<double> interferers;
    double antenna;
    double cable;
};

Powers powers_of(const BeamScenario& sc) {
    Powers p;
    p.desired = dbm_to_mw(sc.desired_power_dbm);
    for (std::size_t k = 0; k < sc.interferer_thetas_deg.size(); ++k)
        p.interferers.push_back(dbm_to_mw(sc.interferer_power_dbm(k)));
    p.antenna = dbm_to_mw(sc.noise.antenna_noise_dbm_hz) * sc.signal_bandwidth_hz;
    p.cable = dbm_to_mw(sc.noise.cable_noise_dbm_hz) * sc.signal_bandwidth_hz;
    return p;
}

void check_dims(const BeamScenario& sc, const EffectiveChannel& ch) {
    if (ch.n_signals() != sc.n_antennas)
        throw std::invalid_argument(fmt::format("channel has {} ports but the scenario has {} antennas",
                                                ch.n_signals(), sc.n_antennas));
}

}  // namespace

Eigen::MatrixXcd received_covariance(const BeamScenario& sc, const EffectiveChannel& ch, double delta,
                                     double desired_theta_deg) {
    check_dims(sc, ch);
    const auto k = ch.grid_index(delta);
    const auto& a = ch.a[k];
    const Powers p = powers_of(sc);
    const int n = sc.n_antennas;
    const double d = sc.element_spacing_wavelengths;

    Eigen::MatrixXcd r = p.antenna * (a * a.adjoint()) + p.cable * cable_noise_gram(ch, k);
    const Eigen::VectorXcd v0 = a * ula_steering(desired_theta_deg, n, d);
    r += p.desired * (v0 * v0.adjoint());
    for (std::size_t i = 0; i < sc.interferer_thetas_deg.size(); ++i) {
        const Eigen::VectorXcd vi = a * ula_steering(sc.interferer_thetas_deg[i], n, d);
        r += p.interferers[i] * (vi * vi.adjoint());
    }

    const double scale = std::max(r.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    const double asym = (r - r.adjoint()).cwiseAbs().maxCoeff() / scale;
    if (asym > 1e-12)
        throw std::logic_error(fmt::format("covariance is not Hermitian (relative error {:.3e})", asym));
    return 0.5 * (r + r.adjoint());
}

MvdrSolution mvdr_weights(const Eigen::MatrixXcd& r, const Eigen::VectorXcd& a_eff) {
    if (r.rows() != r.cols() || r.rows() != a_eff.size())
        throw std::invalid_argument("mvdr_weights: dimension mismatch");
    if (a_eff.squaredNorm() == 0.0) throw std::invalid_argument("mvdr_weights: zero steering vector");

    MvdrSolution sol;
    Eigen::MatrixXcd rl = r;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(r, Eigen::EigenvaluesOnly);
    const double lmin = eig.eigenvalues().minCoeff();
    const double lmax = eig.eigenvalues().maxCoeff();
    if (!(lmin > 0.0) || lmax / lmin > kMaxConditionNumber) {
        sol.loaded = true;
        sol.loading = 1e-6 * r.trace().real() / static_cast<double>(r.rows());
        rl.diagonal().array() += sol.loading;
    }

    const Eigen::LLT<Eigen::MatrixXcd> llt(rl);
    if (llt.info() != Eigen::Success) throw std::runtime_error("mvdr_weights: covariance singular after loading");
    const Eigen::VectorXcd y = llt.solve(a_eff);
    const cplx den = a_eff.dot(y);  // a^H R^-1 a
    if (!(std::abs(den) > 0.0) || !std::isfinite(std::abs(den)))
        throw std::runtime_error("mvdr_weights: degenerate normalization");
    sol.w = y / den;
    sol.distortionless_error = std::abs(sol.w.dot(a_eff) - 1.0);
    if (sol.distortionless_error > kDistortionlessTol)
        throw std::logic_error(
            fmt::format("MVDR distortionless constraint violated: |w^H a - 1| = {:.3e}", sol.distortionless_error));
    return sol;
}

double sinr_db(const Eigen::VectorXcd& w, const BeamScenario& sc, const EffectiveChannel& ch, double delta,
               double desired_theta_deg) {
    check_dims(sc, ch);
    if (!w.allFinite()) throw std::invalid_argument("sinr_db: non-finite weights");
    const auto k = ch.grid_index(delta);
    const auto& a = ch.a[k];
    const Powers p = powers_of(sc);
    const int n = sc.n_antennas;
    const double d = sc.element_spacing_wavelengths;

    const double sig = p.desired * std::norm(w.dot(a * ula_steering(desired_theta_deg, n, d)));
    double inn = p.antenna * (w.adjoint() * a).squaredNorm() + p.cable * w.dot(cable_noise_gram(ch, k) * w).real();
    for (std::size_t i = 0; i < sc.interferer_thetas_deg.size(); ++i)
        inn += p.interferers[i] * std::norm(w.dot(a * ula_steering(sc.interferer_thetas_deg[i], n, d)));
    if (inn == 0.0) {
        static std::atomic<bool> warned{false};
        if (!warned.exchange(true)) std::clog << "warning: sinr_db: zero interference-plus-noise power\n";
        return std::numeric_limits<double>::infinity();
    }
    return lin_pow_to_db(sig / inn);
}

namespace {

double mvdr_sinr_at(const BeamScenario& sc, const EffectiveChannel& ch, double delta, double theta) {
    const auto k = ch.grid_index(delta);
    const Eigen::MatrixXcd r = received_covariance(sc, ch, delta, theta);
    const Eigen::VectorXcd a_eff = ch.a[k] * ula_steering(theta, sc.n_antennas, sc.element_spacing_wavelengths);
    const auto sol = mvdr_weights(r, a_eff);
    return sinr_db(sol.w, sc, ch, delta, theta);
}

}  // namespace

SinrCurve sweep_theta(const BeamScenario& sc, const EffectiveChannel& ch) {
    check_dims(sc, ch);
    SinrCurve c;
    c.theta_deg = sc.sweep_deg;
    c.sinr_db.reserve(sc.sweep_deg.size());
    for (double theta : sc.sweep_deg) {
        if (!sc.average_over_grid) {
            c.sinr_db.push_back(mvdr_sinr_at(sc, ch, 0.0, theta));
            continue;
        }
        double acc = 0.0;
        for (double delta : ch.delta_hz) acc += db_to_lin_pow(mvdr_sinr_at(sc, ch, delta, theta));
        c.sinr_db.push_back(lin_pow_to_db(acc / static_cast<double>(ch.delta_hz.size())));
    }
    return c;
}

SinrCurve sweep_theta(const BeamScenario& sc, std::span<const SignalSpec> signals, const CableSpec& cable,
                      const FrontEndSpec& fe, const Sf2sfMapping& mapping) {
    sc.validate();
    std::vector<double> grid{0.0};
    if (sc.average_over_grid) grid = baseband_grid(sc.signal_bandwidth_hz, 65);  // odd count keeps 0
    const auto ch = build_effective_channel(signals, mapping, cable, fe, grid);
    return sweep_theta(sc, ch);
}

std::vector<SignalSpec> antenna_signals(const BeamScenario& sc, double rf_center_hz, Rat rat) {
    std::vector<SignalSpec> out;
    for (int n = 0; n < sc.n_antennas; ++n)
        out.push_back({n, rf_center_hz, sc.signal_bandwidth_hz, rat, sc.desired_power_dbm});
    return out;
}

}  // namespace amroc
