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

#ifndef RFLOCATE_SCENE_HPP
#define RFLOCATE_SCENE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rflocate/bbox.hpp"
#include "rflocate/common.hpp"
#include "rflocate/rng.hpp"

namespace rflocate {

struct Material {
    double conductivity_s_m = 0.0;
    double rel_permittivity = 1.0;
    double rel_permeability = 1.0;
};

// Measured tissue-equivalent values for a human torso in the low GHz range.
inline Material human_material() { return Material{1.44, 38.1, 1.0}; }
// Generic concrete wall.
inline Material wall_material_default() { return Material{0.1, 5.31, 1.0}; }

struct Room {
    double width_m = 4.7;   // x
    double depth_m = 4.7;   // y
    double height_m = 3.2;  // z
    Material wall = wall_material_default();

    double center_x() const { return width_m / 2.0; }
    double center_y() const { return depth_m / 2.0; }

    void validate() const {
        if (width_m <= 0.0 || depth_m <= 0.0 || height_m <= 0.0)
            throw std::invalid_argument("Room: all dimensions must be > 0");
    }
};

// Upright box standing on the floor, footprint centered at (center_x, center_y).
struct TargetBox {
    double center_x = 0.0;
    double center_y = 0.0;
    double extent_x = 0.3;
    double extent_y = 0.5;
    double height = 1.83;
    Material material = human_material();

    double x_min() const { return center_x - extent_x / 2.0; }
    double x_max() const { return center_x + extent_x / 2.0; }
    double y_min() const { return center_y - extent_y / 2.0; }
    double y_max() const { return center_y + extent_y / 2.0; }

    bool contains(const Vec3& p) const {
        return p.x >= x_min() && p.x <= x_max() && p.y >= y_min() && p.y <= y_max() && p.z >= 0.0 &&
               p.z <= height;
    }

    bool inside_room(const Room& room) const {
        return x_min() >= 0.0 && x_max() <= room.width_m && y_min() >= 0.0 && y_max() <= room.depth_m &&
               height <= room.height_m;
    }

    void validate() const {
        if (extent_x <= 0.0 || extent_y <= 0.0 || height <= 0.0)
            throw std::invalid_argument("TargetBox: extents must be > 0");
    }
};

struct DeviceSet {
    int count = 5;
    std::vector<Vec3> positions;
    double tx_power_dbm = 20.0;
    double carrier_f_hz = 3.5e9;
    // The transmitted symbol is unity and is folded into field synthesis.
};

struct TrajectoryPose {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double vx = 0.0;
    double vy = 0.0;
};

// Uniform draw in the closed disk of radius radius_m about (cx, cy).
// radius 0 degenerates to the center point.
std::pair<double, double> sample_target_position(Rng& rng, double radius_m, double cx, double cy);

// Device positions uniform inside the room interior, a small margin away
// from every surface so path gains stay bounded. Margins are symmetric, so
// per-axis means stay at the room mid-point.
std::vector<Vec3> sample_device_positions(Rng& rng, int count, const Room& room, double margin_m = 0.1);

// Random-waypoint walk inside the intersection of the disk and an axis box
// keeping the target footprint off the walls. Consecutive poses move by at
// most speed/frame_rate.
struct TrajectoryConfig {
    double duration_s = 1.0;
    double frame_rate_hz = 33.0;
    double speed_mps = 0.8;    // [0, 2]
    double radius_m = 2.5;
    double center_x = 2.35;
    double center_y = 2.35;
    double bound_x_min = 0.0;  // feasible region for the target center
    double bound_x_max = 4.7;
    double bound_y_min = 0.0;
    double bound_y_max = 4.7;
};

std::vector<TrajectoryPose> generate_trajectory(Rng& rng, const TrajectoryConfig& cfg);

// One regenerable dataset entry. LIS samples are static poses with their own
// device deployment; radar samples are (trajectory, frame) pairs whose ground
// truth lives in the radar frame (x relative to the mount, fore-aft folded).
struct SampleRecord {
    std::uint64_t id = 0;
    std::uint64_t seed = 0;
    std::string pipeline;          // "lis" | "radar"
    BBox2D gt_box;                 // task-frame label box
    double center_x = 0.0;         // room-frame target center at this sample
    double center_y = 0.0;
    std::vector<Vec3> devices;     // lis only
    std::uint64_t trajectory = 0;  // radar only
    std::uint64_t frame = 0;       // radar only

    bool operator==(const SampleRecord&) const = default;
};

struct DatasetConfig {
    std::string pipeline = "lis";  // "lis" | "radar"
    std::size_t size = 100;
    Room room;
    TargetBox target_template;     // extents + material; center filled per sample
    double disk_radius_m = 2.5;    // centered at the room center
    int device_count = 5;
    double device_margin_m = 0.1;
    double label_length = 0.5;     // label box x extent
    double label_width = 0.3;      // label box y extent
    // radar sampling
    double frame_rate_hz = 33.0;
    double walk_speed_mps = 0.8;
    std::size_t frames_per_trajectory = 512;
    int time_window = 5;           // first labeled frame leaves room for it

    void validate() const;
    // Feasible region for target centers: disk clipped so the physical box
    // and the label box both stay inside the room.
    void center_bounds(double& x_min, double& x_max, double& y_min, double& y_max) const;
};

// Deterministic dataset synthesis: every record carries the seed that
// regenerates it bit-exactly via regenerate_record.
std::vector<SampleRecord> build_dataset(const DatasetConfig& cfg, std::uint64_t master_seed);

SampleRecord regenerate_record(const DatasetConfig& cfg, const SampleRecord& record);

// Radar-frame label: x relative to the mount axis, fore-aft distance folded
// to |y| (a single-axis virtual array cannot sign the boresight-normal
// direction from the ceiling).
BBox2D radar_frame_label(double room_x, double room_y, const Room& room, double label_length,
                         double label_width);

// Poses for a radar trajectory, regenerated from its stored seed.
std::vector<TrajectoryPose> trajectory_for_record(const DatasetConfig& cfg, std::uint64_t traj_seed);

} // namespace rflocate

#endif
