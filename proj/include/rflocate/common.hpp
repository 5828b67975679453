// SPDX-License-Identifier: Apache-2.0
//
// rf-locate: simulation workbench for indoor RF localization comparing
// LIS matched-filter radio maps with FMCW mmWave radar point clouds.
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

#ifndef RFLOCATE_COMMON_HPP
#define RFLOCATE_COMMON_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace rflocate {

using cdouble = std::complex<double>;

inline constexpr double kSpeedOfLight = 299792458.0;   // m/s
inline constexpr double kVacuumPermittivity = 8.8541878128e-12; // F/m
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kFreeSpaceImpedance = 120.0 * kPi; // ohms

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    bool operator==(const Vec3&) const = default;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
};

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// c/f. Frequencies must be positive.
inline double wavelength(double f_hz) {
    if (f_hz <= 0.0) throw std::invalid_argument("wavelength: frequency must be > 0, got " + std::to_string(f_hz));
    return kSpeedOfLight / f_hz;
}

} // namespace rflocate

#endif
