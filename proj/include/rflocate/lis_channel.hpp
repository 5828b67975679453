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

#ifndef RFLOCATE_LIS_CHANNEL_HPP
#define RFLOCATE_LIS_CHANNEL_HPP

#include <optional>
#include <vector>

#include "rflocate/common.hpp"
#include "rflocate/grid.hpp"
#include "rflocate/rng.hpp"
#include "rflocate/scene.hpp"

namespace rflocate {

// Ceiling-mounted aperture of rows x cols isotropic elements on a half-wave
// grid. Element (r, c) sits at origin + (r, c) * spacing with r along x.
struct LisConfig {
    std::size_t rows = 118;
    std::size_t cols = 118;
    double carrier_f_hz = 3.5e9;
    double spacing_m = kSpeedOfLight / 3.5e9 / 2.0;
    double antenna_impedance_ohm = 1.0;  // Z_a = 1 for every element
    double mount_z = 3.2;
    double origin_x = 0.0;
    double origin_y = 0.0;

    std::size_t element_count() const { return rows * cols; }
    double wavelength_m() const { return wavelength(carrier_f_hz); }

    Vec3 element_position(std::size_t r, std::size_t c) const {
        return Vec3{origin_x + static_cast<double>(r) * spacing_m,
                    origin_y + static_cast<double>(c) * spacing_m, mount_z};
    }

    void validate() const {
        if (rows == 0 || cols == 0) throw std::invalid_argument("LisConfig: element counts must be > 0");
        if (spacing_m <= 0.0) throw std::invalid_argument("LisConfig: spacing must be > 0");
        if (carrier_f_hz <= 0.0) throw std::invalid_argument("LisConfig: carrier must be > 0");
    }

    // Aperture centered over the room at ceiling height, half-wave spacing.
    static LisConfig for_room(const Room& room, std::size_t rows = 118, std::size_t cols = 118,
                              double f_hz = 3.5e9);
};

enum class PathType { los, wall_bounce, target_bounce };

struct RayPath {
    PathType type = PathType::los;
    double length_m = 0.0;    // total traveled distance; sets the phase
    cdouble reflection{1.0, 0.0};  // cumulative reflection/scatter coefficient
    double spread = 0.0;      // 1/d for LOS and image bounces, 1/(d1*d2) for re-radiation

    cdouble gain() const { return reflection * spread; }
};

// Propagation environment for the aperture simulation. The target scatters
// two ways: specular bounces off its faces, and a weak quasi-diffuse
// re-radiation from centers on its vertical axis (a box-shaped mirror alone
// beams reflections away from the aperture patch above the target, which is
// not how a person lights up a ceiling array).
struct RayScene {
    Room room;
    std::optional<TargetBox> target;
    bool wall_bounces = true;
    bool target_occlusion = true;           // target shadows line-of-sight segments
    bool target_face_bounces = true;        // specular reflections off the box faces
    double target_diffuse_amplitude = 1.0;  // total re-radiation amplitude budget
    // Heights of the re-radiation centers on the body axis. The ground
    // interaction point dominates: a ceiling aperture with a floor-calibrated
    // filter is depth selective to a few centimeters, and only near-floor
    // scatter stays in focus. Extra heights add defocused background.
    std::vector<double> target_scatter_z{0.02};
};

// True when the open segment between a and b crosses the target volume.
bool segment_intersects_box(const Vec3& a, const Vec3& b, const TargetBox& box);

// TE Fresnel reflection coefficient for a planar interface with complex
// permittivity eps = eps_r - j sigma / (2 pi f eps0). Incidence angle is
// measured from the surface normal, in [0, pi/2).
cdouble fresnel_reflection(const Material& material, double incidence_angle_rad, double f_hz);

// All first-order paths from source to element: line of sight unless the
// target occludes it, image-method bounces off the six room surfaces, and
// the target interactions described on RayScene.
std::vector<RayPath> trace_paths(const RayScene& scene, const Vec3& source, const Vec3& element,
                                 double f_hz);

using FieldGrid = ComplexGrid;

// Complex E-field at every element: superposition over devices and ray
// paths, amplitude gain/d with phase -2 pi d / lambda, scaled by the
// transmit amplitude. Element rows evaluated in parallel; each element's
// accumulation order is fixed, so results do not depend on thread count.
FieldGrid field_at_elements(const RayScene& scene, const DeviceSet& devices, const LisConfig& lis);

// Antenna output scaling sqrt(lambda^2 Z_a / (4 pi Z_0)).
double signal_scale(const LisConfig& lis);

// y = scale * field + CN(0, sigma^2) per element.
ComplexGrid received_signal(const FieldGrid& field, double noise_variance, Rng& rng, const LisConfig& lis);

// Mean per-element SNR: lambda^2 / (4 pi Z_0 A sigma^2) * sum |E_a|^2.
double average_snr(const FieldGrid& field, double noise_variance, const LisConfig& lis);
inline double average_snr_db(const FieldGrid& field, double noise_variance, const LisConfig& lis) {
    return linear_to_db(average_snr(field, noise_variance, lis));
}

// Exact inverse of average_snr for a wanted linear SNR.
double sigma_for_target_snr(const FieldGrid& field, double target_snr_linear, const LisConfig& lis);

} // namespace rflocate

#endif
