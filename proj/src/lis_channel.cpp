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

#include "rflocate/lis_channel.hpp"

#include <algorithm>
#include <cmath>

#include "rflocate/parallel.hpp"

namespace rflocate {

LisConfig LisConfig::for_room(const Room& room, std::size_t rows, std::size_t cols, double f_hz) {
    LisConfig lis;
    lis.rows = rows;
    lis.cols = cols;
    lis.carrier_f_hz = f_hz;
    lis.spacing_m = wavelength(f_hz) / 2.0;
    lis.mount_z = room.height_m;
    lis.origin_x = room.center_x() - static_cast<double>(rows - 1) * lis.spacing_m / 2.0;
    lis.origin_y = room.center_y() - static_cast<double>(cols - 1) * lis.spacing_m / 2.0;
    return lis;
}

bool segment_intersects_box(const Vec3& a, const Vec3& b, const TargetBox& box) {
    // Slab test on the open parameter interval so endpoints touching the box
    // do not count as crossings.
    const double lo[3] = {box.x_min(), box.y_min(), 0.0};
    const double hi[3] = {box.x_max(), box.y_max(), box.height};
    const double pa[3] = {a.x, a.y, a.z};
    const double pb[3] = {b.x, b.y, b.z};
    double t_enter = 0.0, t_exit = 1.0;
    for (int axis = 0; axis < 3; ++axis) {
        const double d = pb[axis] - pa[axis];
        if (std::abs(d) < 1e-15) {
            if (pa[axis] < lo[axis] || pa[axis] > hi[axis]) return false;
            continue;
        }
        double t0 = (lo[axis] - pa[axis]) / d;
        double t1 = (hi[axis] - pa[axis]) / d;
        if (t0 > t1) std::swap(t0, t1);
        t_enter = std::max(t_enter, t0);
        t_exit = std::min(t_exit, t1);
        if (t_enter > t_exit) return false;
    }
    const double eps = 1e-9;
    return t_exit - t_enter > eps && t_exit > eps && t_enter < 1.0 - eps;
}

cdouble fresnel_reflection(const Material& material, double incidence_angle_rad, double f_hz) {
    if (incidence_angle_rad < 0.0 || incidence_angle_rad >= kPi / 2.0)
        throw std::invalid_argument("fresnel_reflection: angle must be in [0, pi/2)");
    if (f_hz <= 0.0) throw std::invalid_argument("fresnel_reflection: frequency must be > 0");
    const double cos_i = std::cos(incidence_angle_rad);
    const double sin_i = std::sin(incidence_angle_rad);
    const cdouble eps{material.rel_permittivity,
                      -material.conductivity_s_m / (2.0 * kPi * f_hz * kVacuumPermittivity)};
    const cdouble root = std::sqrt(eps - sin_i * sin_i);
    return (cos_i - root) / (cos_i + root);
}

namespace {

struct Surface {
    int axis;       // 0=x, 1=y, 2=z
    double plane;   // coordinate of the plane
    double lo0, hi0, lo1, hi1;  // bounds on the two remaining axes (in axis order)
};

double coord(const Vec3& p, int axis) { return axis == 0 ? p.x : axis == 1 ? p.y : p.z; }

Vec3 with_coord(Vec3 p, int axis, double v) {
    (axis == 0 ? p.x : axis == 1 ? p.y : p.z) = v;
    return p;
}

// Specular point for the image method; false when the bounce misses the
// surface patch or degenerates onto an endpoint.
bool specular_point(const Surface& s, const Vec3& source, const Vec3& element, Vec3& point,
                    double& incidence) {
    const Vec3 image = with_coord(source, s.axis, 2.0 * s.plane - coord(source, s.axis));
    const double da = coord(image, s.axis) - s.plane;
    const double db = coord(element, s.axis) - s.plane;
    const double denom = coord(element, s.axis) - coord(image, s.axis);
    if (std::abs(denom) < 1e-12) return false;          // segment parallel to plane
    if (da * db >= 0.0 && std::abs(da) > 1e-12 && std::abs(db) > 1e-12) return false; // same side
    const double t = (s.plane - coord(image, s.axis)) / denom;
    if (t <= 1e-9 || t >= 1.0 - 1e-9) return false;     // bounce at an endpoint
    point = image + (element - image) * t;
    const int a0 = s.axis == 0 ? 1 : 0;
    const int a1 = s.axis == 2 ? 1 : 2;
    if (coord(point, a0) < s.lo0 || coord(point, a0) > s.hi0) return false;
    if (coord(point, a1) < s.lo1 || coord(point, a1) > s.hi1) return false;
    const Vec3 leg = point - source;
    const double len = leg.norm();
    if (len < 1e-12) return false;
    incidence = std::acos(std::clamp(std::abs(coord(leg, s.axis)) / len, 0.0, 1.0));
    return true;
}

bool occluded(const RayScene& scene, const Vec3& a, const Vec3& b) {
    return scene.target_occlusion && scene.target && segment_intersects_box(a, b, *scene.target);
}

} // namespace

std::vector<RayPath> trace_paths(const RayScene& scene, const Vec3& source, const Vec3& element,
                                 double f_hz) {
    std::vector<RayPath> paths;
    paths.reserve(16);
    const Room& room = scene.room;

    // Line of sight.
    if (!occluded(scene, source, element)) {
        const double d = distance(source, element);
        if (d > 1e-12) paths.push_back({PathType::los, d, cdouble{1.0, 0.0}, 1.0 / d});
    }

    // First-order bounces off the six room surfaces.
    if (scene.wall_bounces) {
        const Surface surfaces[6] = {
            {0, 0.0, 0.0, room.depth_m, 0.0, room.height_m},
            {0, room.width_m, 0.0, room.depth_m, 0.0, room.height_m},
            {1, 0.0, 0.0, room.width_m, 0.0, room.height_m},
            {1, room.depth_m, 0.0, room.width_m, 0.0, room.height_m},
            {2, 0.0, 0.0, room.width_m, 0.0, room.depth_m},
            {2, room.height_m, 0.0, room.width_m, 0.0, room.depth_m},
        };
        for (const Surface& s : surfaces) {
            Vec3 p;
            double incidence = 0.0;
            if (!specular_point(s, source, element, p, incidence)) continue;
            if (occluded(scene, source, p) || occluded(scene, p, element)) continue;
            const double total = distance(source, p) + distance(p, element);
            paths.push_back({PathType::wall_bounce, total, fresnel_reflection(room.wall, incidence, f_hz),
                             1.0 / total});
        }
    }

    if (!scene.target) return paths;
    const TargetBox& box = *scene.target;

    // Specular bounces off the four side faces and the top face, visible to
    // both endpoints. The reflected wave keeps diverging from the image, so
    // the spreading uses the full path length.
    if (scene.target_face_bounces) {
        const Surface faces[5] = {
            {0, box.x_min(), box.y_min(), box.y_max(), 0.0, box.height},
            {0, box.x_max(), box.y_min(), box.y_max(), 0.0, box.height},
            {1, box.y_min(), box.x_min(), box.x_max(), 0.0, box.height},
            {1, box.y_max(), box.x_min(), box.x_max(), 0.0, box.height},
            {2, box.height, box.x_min(), box.x_max(), box.y_min(), box.y_max()},
        };
        for (int i = 0; i < 5; ++i) {
            const Surface& s = faces[i];
            // Both endpoints must be on the outward side of the face.
            const double mid = i < 4 ? (i < 2 ? box.center_x : box.center_y) : box.height / 2.0;
            const double side = s.plane - mid;  // outward direction sign along s.axis
            const double ds = (coord(source, s.axis) - s.plane) * side;
            const double de = (coord(element, s.axis) - s.plane) * side;
            if (ds <= 0.0 || de <= 0.0) continue;
            Vec3 p;
            double incidence = 0.0;
            if (!specular_point(s, source, element, p, incidence)) continue;
            const double total = distance(source, p) + distance(p, element);
            paths.push_back({PathType::target_bounce, total,
                             fresnel_reflection(box.material, incidence, f_hz), 1.0 / total});
        }
    }

    // Quasi-diffuse re-radiation from centers on the body axis. These behave
    // as secondary sources, so the spreading factor is 1/(d1*d2).
    if (!scene.target_scatter_z.empty() && scene.target_diffuse_amplitude > 0.0) {
        const cdouble unit_refl =
            fresnel_reflection(box.material, 0.0, f_hz) *
            (scene.target_diffuse_amplitude / static_cast<double>(scene.target_scatter_z.size()));
        for (double z : scene.target_scatter_z) {
            const Vec3 p{box.center_x, box.center_y, std::clamp(z, 0.0, box.height)};
            const double d1 = distance(source, p);
            const double d2 = distance(p, element);
            if (d1 < 1e-12 || d2 < 1e-12) continue;
            paths.push_back({PathType::target_bounce, d1 + d2, unit_refl, 1.0 / (d1 * d2)});
        }
    }

    return paths;
}

FieldGrid field_at_elements(const RayScene& scene, const DeviceSet& devices, const LisConfig& lis) {
    lis.validate();
    scene.room.validate();
    const double lambda = lis.wavelength_m();
    const double tx_amp = std::sqrt(std::pow(10.0, (devices.tx_power_dbm - 30.0) / 10.0));
    FieldGrid field(lis.rows, lis.cols);

    parallel_for(0, static_cast<std::int64_t>(lis.rows), [&](std::int64_t r) {
        for (std::size_t c = 0; c < lis.cols; ++c) {
            const Vec3 el = lis.element_position(static_cast<std::size_t>(r), c);
            // Per-device partial sums keep superposition exact: the field of
            // a device set equals the sum of single-device fields bit for bit.
            cdouble acc{0.0, 0.0};
            for (const Vec3& dev : devices.positions) {
                cdouble dev_sum{0.0, 0.0};
                for (const RayPath& path : trace_paths(scene, dev, el, lis.carrier_f_hz)) {
                    const double phase = -2.0 * kPi * path.length_m / lambda;
                    dev_sum += tx_amp * path.gain() * std::polar(1.0, phase);
                }
                acc += dev_sum;
            }
            field.at(static_cast<std::size_t>(r), c) = acc;
        }
    });
    return field;
}

double signal_scale(const LisConfig& lis) {
    const double lambda = lis.wavelength_m();
    return std::sqrt(lambda * lambda * lis.antenna_impedance_ohm / (4.0 * kPi * kFreeSpaceImpedance));
}

ComplexGrid received_signal(const FieldGrid& field, double noise_variance, Rng& rng, const LisConfig& lis) {
    if (noise_variance < 0.0) throw std::invalid_argument("received_signal: noise variance must be >= 0");
    const double scale = signal_scale(lis);
    ComplexGrid y(field.rows(), field.cols());
    for (std::size_t i = 0; i < field.size(); ++i) {
        cdouble n{0.0, 0.0};
        if (noise_variance > 0.0) n = rng.complex_normal(noise_variance);
        y.data()[i] = scale * field.data()[i] + n;
    }
    return y;
}

double average_snr(const FieldGrid& field, double noise_variance, const LisConfig& lis) {
    if (noise_variance <= 0.0) throw std::invalid_argument("average_snr: undefined for sigma^2 <= 0");
    const double lambda = lis.wavelength_m();
    double energy = 0.0;
    for (const cdouble& e : field.data()) energy += std::norm(e);
    const double a = static_cast<double>(field.size());
    return lambda * lambda / (4.0 * kPi * kFreeSpaceImpedance * a * noise_variance) * energy;
}

double sigma_for_target_snr(const FieldGrid& field, double target_snr_linear, const LisConfig& lis) {
    if (target_snr_linear <= 0.0) throw std::invalid_argument("sigma_for_target_snr: target SNR must be > 0");
    const double lambda = lis.wavelength_m();
    double energy = 0.0;
    for (const cdouble& e : field.data()) energy += std::norm(e);
    if (energy <= 0.0) throw std::invalid_argument("sigma_for_target_snr: field is identically zero");
    const double a = static_cast<double>(field.size());
    return lambda * lambda * energy / (4.0 * kPi * kFreeSpaceImpedance * a * target_snr_linear);
}

} // namespace rflocate
