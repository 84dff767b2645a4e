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
#include <string_view>

namespace amroc {

/// SplitMix64 finalizer. Used to derive independent 64-bit seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed splitting scheme used everywhere randomness is needed:
///   child = mix64(parent ^ mix64(fnv1a(stream) + index))
/// Each module names its stream ("fext", "payload", "awgn", ...) and each
/// sweep point passes its index, so runs are reproducible regardless of the
/// order or thread on which points are evaluated.
constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t split_seed(std::uint64_t parent, std::string_view stream,
                                   std::uint64_t index = 0) {
    return mix64(parent ^ mix64(fnv1a(stream) + index));
}

/// Uniform double in [0, 1) from a 64-bit value.
constexpr double unit_interval(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace amroc
