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

#ifndef RFLOCATE_RADAR_DSP_HPP
#define RFLOCATE_RADAR_DSP_HPP

#include <cstddef>
#include <vector>

#include "rflocate/common.hpp"
#include "rflocate/grid.hpp"
#include "rflocate/rng.hpp"
#include "rflocate/scene.hpp"

namespace rflocate {

struct ChirpConfig {
    double carrier_f_hz = 77e9;
    double bandwidth_hz = 4e9;
    double chirp_duration_s = 40e-6;   // T_c
    std::size_t samples_per_chirp = 256;
    std::size_t chirps_per_frame = 128;
    std::size_t rx_count = 8;          // virtual lambda/2 linear array, azimuth only
    double frame_rate_hz = 33.0;
    double fov_deg = 55.0;
    double noise_variance = 0.0025;    // complex noise power per IF sample
    std::size_t angle_fft_size = 64;

    double slope_hz_per_s() const { return bandwidth_hz / chirp_duration_s; }
    double sample_rate_hz() const { return static_cast<double>(samples_per_chirp) / chirp_duration_s; }
    double wavelength_m() const { return wavelength(carrier_f_hz); }
    double range_resolution_m() const { return kSpeedOfLight / (2.0 * bandwidth_hz); }
    double velocity_resolution_mps() const {
        return wavelength_m() / (2.0 * static_cast<double>(chirps_per_frame) * chirp_duration_s);
    }
    // Largest beat frequency the complex IF sampling can represent.
    double max_range_m() const { return kSpeedOfLight * sample_rate_hz() / (2.0 * slope_hz_per_s()); }

    void validate() const {
        if (bandwidth_hz <= 0.0 || chirp_duration_s <= 0.0 || carrier_f_hz <= 0.0)
            throw std::invalid_argument("ChirpConfig: carrier, bandwidth, duration must be > 0");
        if (samples_per_chirp < 2 || chirps_per_frame < 2 || rx_count < 1)
            throw std::invalid_argument("ChirpConfig: degenerate cube dimensions");
        if (angle_fft_size < rx_count) throw std::invalid_argument("ChirpConfig: angle FFT smaller than array");
    }
};

// Point reflector in the radar frame.
struct Scatterer {
    double range_m = 0.0;
    double radial_velocity_mps = 0.0;  // positive receding
    double azimuth_rad = 0.0;          // positive toward +x
    double amplitude = 1.0;            // IF amplitude after spreading
    double phase_rad = 0.0;
};

// Complex IF samples indexed [chirp][fast-time sample][virtual antenna].
struct RadarCube {
    std::size_t n_chirps = 0;
    std::size_t n_samples = 0;
    std::size_t n_rx = 0;
    double timestamp = 0.0;
    std::vector<cdouble> data;
    std::size_t excluded_scatterers = 0;  // outside the field of view

    RadarCube() = default;
    RadarCube(std::size_t chirps, std::size_t samples, std::size_t rx, double t = 0.0)
        : n_chirps(chirps), n_samples(samples), n_rx(rx), timestamp(t),
          data(chirps * samples * rx, cdouble{0.0, 0.0}) {}

    cdouble& at(std::size_t m, std::size_t n, std::size_t p) {
        return data[(m * n_samples + n) * n_rx + p];
    }
    const cdouble& at(std::size_t m, std::size_t n, std::size_t p) const {
        return data[(m * n_samples + n) * n_rx + p];
    }
};

struct Detection {
    std::size_t range_bin = 0;
    std::size_t doppler_bin = 0;  // fftshifted; n_chirps/2 is zero velocity
    double azimuth_rad = 0.0;
    double range_m = 0.0;
    double radial_velocity_mps = 0.0;
    double intensity = 0.0;       // pre-detection power at the cell
};

struct RadarPoint {
    double x = 0.0;
    double y = 0.0;
    double radial_velocity = 0.0;
    double intensity = 0.0;
};

struct PointCloud {
    double timestamp = 0.0;
    std::vector<RadarPoint> points;
};

// IF synthesis: per scatterer the sample at (chirp m, fast time n, antenna p)
// advances in phase by the beat frequency over n, the Doppler step over m,
// and pi sin(theta) over p. Virtual antennas fire sequentially inside each
// chirp period, so the Doppler step also leaks into p at 1/n_rx rate (the
// TDM term the angle stage corrects). Scatterers outside the field of view
// are counted on the cube and omitted.
RadarCube synthesize_frame(const std::vector<Scatterer>& scatterers, const ChirpConfig& cfg, Rng& rng,
                           double timestamp = 0.0);

// Hann-windowed FFT along fast time; output has the same cube layout.
RadarCube range_fft(const RadarCube& cube);

// FFT across chirps at every (range bin, antenna), fftshifted so zero
// velocity sits at bin n_chirps/2.
RadarCube doppler_fft(const RadarCube& range_profiles);

// Entrywise power summed over antennas: rows are Doppler bins, cols range bins.
RealGrid predetection(const RadarCube& doppler);

struct CfarConfig {
    int guard = 2;
    int train = 4;
    double pfa = 1e-4;
    bool peak_grouping = true;  // keep only local maxima of the pre-detection matrix
};

// Cell-averaging CFAR with truncated windows at the borders; the threshold
// multiplier alpha = N_t (pfa^(-1/N_t) - 1) is recomputed per cell from the
// truncated training count.
std::vector<Detection> ca_cfar_2d(const RealGrid& matrix, const CfarConfig& cfar, const ChirpConfig& cfg);

// Azimuth per detection: Doppler-correct the antenna snapshot, zero-pad,
// FFT, map the peak bin to sin(theta). Detections beyond the FOV are dropped.
std::vector<Detection> angle_fft(const RadarCube& doppler, std::vector<Detection> detections,
                                 const ChirpConfig& cfg);

struct RadarMount {
    double x = 2.35;   // room coordinates of the ceiling mount
    double y = 2.35;
    double height_m = 3.0;
    // Reference scatter height used to project slant range to the floor;
    // 0 means the plain mount-height projection.
    double scatter_ref_height_m = 0.0;
};

// Projects detections onto the floor plane in the radar frame: x = R sin
// theta, ground range from slant range and the effective height, y >= 0
// along boresight (fore-aft is unobservable for a single-axis array).
PointCloud to_point_cloud(const std::vector<Detection>& detections, const ChirpConfig& cfg,
                          const RadarMount& mount, double timestamp = 0.0);

// Target rendering for synthesis: 5-10 scatter centers inside the box with
// per-frame jitter, z drawn near torso height. Velocity projects the pose
// velocity on the line of sight plus a small jitter.
std::vector<Scatterer> render_target_scatterers(const TargetBox& box, double vx, double vy,
                                                const RadarMount& mount, Rng& rng);

// Full per-frame pipeline; deterministic given the cube.
PointCloud process_frame(const RadarCube& cube, const ChirpConfig& cfg, const CfarConfig& cfar,
                         const RadarMount& mount);

} // namespace rflocate

#endif
