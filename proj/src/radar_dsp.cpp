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

#include "rflocate/radar_dsp.hpp"

#include <algorithm>
#include <cmath>

#include "rflocate/fft.hpp"

namespace rflocate {

RadarCube synthesize_frame(const std::vector<Scatterer>& scatterers, const ChirpConfig& cfg, Rng& rng,
                           double timestamp) {
    cfg.validate();
    RadarCube cube(cfg.chirps_per_frame, cfg.samples_per_chirp, cfg.rx_count, timestamp);

    const double lambda = cfg.wavelength_m();
    const double fov_rad = cfg.fov_deg * kPi / 180.0;
    const double f_s = cfg.sample_rate_hz();
    const double slope = cfg.slope_hz_per_s();

    for (const Scatterer& s : scatterers) {
        if (s.amplitude < 0.0) throw std::invalid_argument("synthesize_frame: amplitude must be >= 0");
        if (s.range_m >= cfg.max_range_m())
            throw std::invalid_argument("synthesize_frame: scatterer beyond maximum range");
        if (std::abs(s.azimuth_rad) > fov_rad) {
            ++cube.excluded_scatterers;
            continue;
        }
        const double beat_hz = 2.0 * s.range_m * slope / kSpeedOfLight;
        const double doppler_step = 4.0 * kPi * s.radial_velocity_mps * cfg.chirp_duration_s / lambda;
        const double angle_step = kPi * std::sin(s.azimuth_rad);  // lambda/2 spacing
        const cdouble sample_rot = std::polar(1.0, 2.0 * kPi * beat_hz / f_s);

        for (std::size_t m = 0; m < cube.n_chirps; ++m) {
            for (std::size_t p = 0; p < cube.n_rx; ++p) {
                // TDM sweep: antenna p samples 1/n_rx of a chirp period later.
                const double base_phase =
                    s.phase_rad +
                    doppler_step * (static_cast<double>(m) +
                                    static_cast<double>(p) / static_cast<double>(cube.n_rx)) +
                    angle_step * static_cast<double>(p);
                cdouble v = std::polar(s.amplitude, base_phase);
                for (std::size_t n = 0; n < cube.n_samples; ++n) {
                    cube.at(m, n, p) += v;
                    v *= sample_rot;
                }
            }
        }
    }

    if (cfg.noise_variance > 0.0) {
        for (cdouble& v : cube.data) v += rng.complex_normal(cfg.noise_variance);
    }
    return cube;
}

namespace {

std::vector<double> hann_window(std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (n < 2) return w;
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n - 1)));
    return w;
}

} // namespace

RadarCube range_fft(const RadarCube& cube) {
    RadarCube out(cube.n_chirps, cube.n_samples, cube.n_rx, cube.timestamp);
    out.excluded_scatterers = cube.excluded_scatterers;
    const auto window = hann_window(cube.n_samples);
    std::vector<cdouble> line(cube.n_samples);
    for (std::size_t m = 0; m < cube.n_chirps; ++m) {
        for (std::size_t p = 0; p < cube.n_rx; ++p) {
            for (std::size_t n = 0; n < cube.n_samples; ++n) line[n] = cube.at(m, n, p) * window[n];
            fft_1d(line.data(), line.size(), false);
            for (std::size_t n = 0; n < cube.n_samples; ++n) out.at(m, n, p) = line[n];
        }
    }
    return out;
}

RadarCube doppler_fft(const RadarCube& range_profiles) {
    if (range_profiles.n_chirps < 2)
        throw std::invalid_argument("doppler_fft: need at least two chirps");
    RadarCube out(range_profiles.n_chirps, range_profiles.n_samples, range_profiles.n_rx,
                  range_profiles.timestamp);
    out.excluded_scatterers = range_profiles.excluded_scatterers;
    const std::size_t nc = range_profiles.n_chirps;
    const auto window = hann_window(nc);
    const std::size_t half = nc / 2;
    std::vector<cdouble> line(nc);
    for (std::size_t n = 0; n < range_profiles.n_samples; ++n) {
        for (std::size_t p = 0; p < range_profiles.n_rx; ++p) {
            for (std::size_t m = 0; m < nc; ++m) line[m] = range_profiles.at(m, n, p) * window[m];
            fft_1d(line.data(), nc, false);
            for (std::size_t q = 0; q < nc; ++q) out.at((q + half) % nc, n, p) = line[q];
        }
    }
    return out;
}

RealGrid predetection(const RadarCube& doppler) {
    if (doppler.n_rx < 1) throw std::invalid_argument("predetection: need at least one antenna");
    RealGrid grid(doppler.n_chirps, doppler.n_samples);
    for (std::size_t q = 0; q < doppler.n_chirps; ++q)
        for (std::size_t n = 0; n < doppler.n_samples; ++n) {
            double acc = 0.0;
            for (std::size_t p = 0; p < doppler.n_rx; ++p) acc += std::norm(doppler.at(q, n, p));
            grid.at(q, n) = acc;
        }
    return grid;
}

std::vector<Detection> ca_cfar_2d(const RealGrid& matrix, const CfarConfig& cfar, const ChirpConfig& cfg) {
    const int rows = static_cast<int>(matrix.rows());
    const int cols = static_cast<int>(matrix.cols());
    const int reach = cfar.guard + cfar.train;
    if (std::min(rows, cols) < 2 * reach + 1)
        throw std::invalid_argument("ca_cfar_2d: matrix smaller than the CFAR window");
    if (cfar.pfa <= 0.0 || cfar.pfa >= 1.0) throw std::invalid_argument("ca_cfar_2d: pfa must be in (0,1)");

    // Inclusive rectangle sums via a prefix table.
    std::vector<double> prefix(static_cast<std::size_t>(rows + 1) * (cols + 1), 0.0);
    const auto pref = [&](int r, int c) -> double& {
        return prefix[static_cast<std::size_t>(r) * (cols + 1) + c];
    };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            pref(r + 1, c + 1) = matrix.at(r, c) + pref(r, c + 1) + pref(r + 1, c) - pref(r, c);
    const auto rect_sum = [&](int r0, int r1, int c0, int c1) {
        r0 = std::max(r0, 0); c0 = std::max(c0, 0);
        r1 = std::min(r1, rows - 1); c1 = std::min(c1, cols - 1);
        return pref(r1 + 1, c1 + 1) - pref(r0, c1 + 1) - pref(r1 + 1, c0) + pref(r0, c0);
    };
    const auto rect_count = [&](int r0, int r1, int c0, int c1) {
        r0 = std::max(r0, 0); c0 = std::max(c0, 0);
        r1 = std::min(r1, rows - 1); c1 = std::min(c1, cols - 1);
        return (r1 - r0 + 1) * (c1 - c0 + 1);
    };

    std::vector<Detection> detections;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const double big = rect_sum(r - reach, r + reach, c - reach, c + reach);
            const double guard = rect_sum(r - cfar.guard, r + cfar.guard, c - cfar.guard, c + cfar.guard);
            const int n_train = rect_count(r - reach, r + reach, c - reach, c + reach) -
                                rect_count(r - cfar.guard, r + cfar.guard, c - cfar.guard, c + cfar.guard);
            if (n_train <= 0) continue;
            const double train_sum = big - guard;
            const double alpha =
                static_cast<double>(n_train) * (std::pow(cfar.pfa, -1.0 / n_train) - 1.0);
            const double threshold = alpha * train_sum / static_cast<double>(n_train);
            const double value = matrix.at(r, c);
            if (!(value > threshold)) continue;

            if (cfar.peak_grouping) {
                bool is_peak = true;
                for (int dr = -1; dr <= 1 && is_peak; ++dr)
                    for (int dc = -1; dc <= 1 && is_peak; ++dc) {
                        if (dr == 0 && dc == 0) continue;
                        const int rr = r + dr, cc = c + dc;
                        if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) continue;
                        if (matrix.at(rr, cc) > value) is_peak = false;
                    }
                if (!is_peak) continue;
            }

            Detection det;
            det.doppler_bin = static_cast<std::size_t>(r);
            det.range_bin = static_cast<std::size_t>(c);
            det.intensity = value;
            det.range_m = static_cast<double>(c) * cfg.range_resolution_m();
            det.radial_velocity_mps =
                (static_cast<double>(r) - static_cast<double>(cfg.chirps_per_frame) / 2.0) *
                cfg.velocity_resolution_mps();
            detections.push_back(det);
        }
    }
    return detections;
}

std::vector<Detection> angle_fft(const RadarCube& doppler, std::vector<Detection> detections,
                                 const ChirpConfig& cfg) {
    const std::size_t nfft = cfg.angle_fft_size;
    const double fov_rad = cfg.fov_deg * kPi / 180.0;
    std::vector<Detection> out;
    out.reserve(detections.size());
    std::vector<cdouble> line(nfft);

    for (Detection det : detections) {
        if (det.doppler_bin >= doppler.n_chirps || det.range_bin >= doppler.n_samples)
            throw std::invalid_argument("angle_fft: detection bins out of range");
        // Undo the Doppler phase accumulated across the TDM antenna sweep.
        const double doppler_phase =
            2.0 * kPi *
            (static_cast<double>(det.doppler_bin) - static_cast<double>(doppler.n_chirps) / 2.0) /
            static_cast<double>(doppler.n_chirps);
        std::fill(line.begin(), line.end(), cdouble{0.0, 0.0});
        for (std::size_t p = 0; p < doppler.n_rx; ++p) {
            const cdouble corr = std::polar(
                1.0, -doppler_phase * static_cast<double>(p) / static_cast<double>(doppler.n_rx));
            line[p] = doppler.at(det.doppler_bin, det.range_bin, p) * corr;
        }
        fft_1d(line.data(), nfft, false);

        std::size_t best = 0;
        double best_mag = std::norm(line[0]);
        for (std::size_t b = 1; b < nfft; ++b) {
            const double mag = std::norm(line[b]);
            if (mag > best_mag) {
                best_mag = mag;
                best = b;
            }
        }
        const double centered =
            static_cast<double>((best + nfft / 2) % nfft) - static_cast<double>(nfft) / 2.0;
        const double sin_theta = 2.0 * centered / static_cast<double>(nfft);
        if (sin_theta < -1.0 || sin_theta > 1.0) continue;
        const double theta = std::asin(sin_theta);
        if (std::abs(theta) > fov_rad) continue;
        det.azimuth_rad = theta;
        out.push_back(det);
    }
    return out;
}

PointCloud to_point_cloud(const std::vector<Detection>& detections, const ChirpConfig& cfg,
                          const RadarMount& mount, double timestamp) {
    (void)cfg;
    PointCloud cloud;
    cloud.timestamp = timestamp;
    cloud.points.reserve(detections.size());
    const double h_eff = mount.height_m - mount.scatter_ref_height_m;
    for (const Detection& det : detections) {
        RadarPoint pt;
        pt.x = det.range_m * std::sin(det.azimuth_rad);
        const double gr2 = det.range_m * det.range_m - h_eff * h_eff;
        const double ground = gr2 > 0.0 ? std::sqrt(gr2) : 0.0;
        const double y2 = ground * ground - pt.x * pt.x;
        pt.y = y2 > 0.0 ? std::sqrt(y2) : 0.0;
        pt.radial_velocity = det.radial_velocity_mps;
        pt.intensity = det.intensity;
        cloud.points.push_back(pt);
    }
    return cloud;
}

std::vector<Scatterer> render_target_scatterers(const TargetBox& box, double vx, double vy,
                                                const RadarMount& mount, Rng& rng) {
    const int count = 5 + static_cast<int>(rng.uniform_index(6));  // 5..10
    std::vector<Scatterer> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        Vec3 p;
        p.x = rng.uniform(box.x_min(), box.x_max());
        p.y = rng.uniform(box.y_min(), box.y_max());
        // Torso-weighted height: most of the return comes from mid-body.
        p.z = std::clamp(0.5 * box.height + 0.35 * rng.normal(), 0.1, box.height - 0.1);

        const Vec3 rel = p - Vec3{mount.x, mount.y, mount.height_m};
        const double slant = rel.norm();
        if (slant < 1e-9) continue;
        Scatterer s;
        s.range_m = slant;
        s.azimuth_rad = std::asin(std::clamp(rel.x / slant, -1.0, 1.0));
        s.radial_velocity_mps = (rel.x * vx + rel.y * vy) / slant + 0.05 * rng.normal();
        s.amplitude = rng.uniform(0.5, 1.5) / (slant * slant);
        s.phase_rad = rng.uniform(0.0, 2.0 * kPi);
        out.push_back(s);
    }
    return out;
}

PointCloud process_frame(const RadarCube& cube, const ChirpConfig& cfg, const CfarConfig& cfar,
                         const RadarMount& mount) {
    const RadarCube ranged = range_fft(cube);
    const RadarCube doppler = doppler_fft(ranged);
    const RealGrid pre = predetection(doppler);
    auto detections = ca_cfar_2d(pre, cfar, cfg);
    detections = angle_fft(doppler, std::move(detections), cfg);
    return to_point_cloud(detections, cfg, mount, cube.timestamp);
}

} // namespace rflocate
