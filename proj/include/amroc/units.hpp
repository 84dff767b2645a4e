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

#include <cmath>
#include <complex>
#include <numbers>

namespace amroc {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kMHz = 1.0e6;

inline double db_to_lin_amp(double db) { return std::pow(10.0, db / 20.0); }
inline double db_to_lin_pow(double db) { return std::pow(10.0, db / 10.0); }
inline double lin_amp_to_db(double a) { return 20.0 * std::log10(a); }
inline double lin_pow_to_db(double p) { return 10.0 * std::log10(p); }

// Power in dBm to mW and back; a PSD in dBm/Hz times a bandwidth gives mW.
inline double dbm_to_mw(double dbm) { return db_to_lin_pow(dbm); }
inline double mw_to_dbm(double mw) { return lin_pow_to_db(mw); }

inline cplx polar_unit(double phase_rad) { return std::polar(1.0, phase_rad); }

}  // namespace amroc
