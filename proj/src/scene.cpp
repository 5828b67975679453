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

#include "rflocate/scene.hpp"

#include <cmath>

namespace rflocate {

std::pair<double, double> sample_target_position(Rng& rng, double radius_m, double cx, double cy) {
    if (radius_m < 0.0) throw std::invalid_argument("sample_target_position: radius must be >= 0");
    double x = 0.0, y = 0.0;
    rng.disk_point(radius_m, cx, cy, x, y);
    return {x, y};
}

std::vector<Vec3> sample_device_positions(Rng& rng, int count, const Room& room, double margin_m) {
    if (count < 1) throw std::invalid_argument("sample_device_positions: count must be >= 1");
    room.validate();
    std::vector<Vec3> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        Vec3 p;
        p.x = rng.uniform(margin_m, room.width_m - margin_m);
        p.y = rng.uniform(margin_m, room.depth_m - margin_m);
        p.z = rng.uniform(margin_m, room.height_m - margin_m);
        out.push_back(p);
    }
    return out;
}

namespace {

struct WalkRegion {
    double cx, cy, radius;
    double x_min, x_max, y_min, y_max;

    bool contains(double x, double y) const {
        const double dx = x - cx, dy = y - cy;
        return dx * dx + dy * dy <= radius * radius + 1e-12 && x >= x_min && x <= x_max && y >= y_min &&
               y <= y_max;
    }

    // Rejection from the disk; the rectangle always covers a neighborhood of
    // the disk center, so this terminates quickly.
    void sample(Rng& rng, double& x, double& y) const {
        if (radius == 0.0) {
            x = cx;
            y = cy;
            return;
        }
        do {
            rng.disk_point(radius, cx, cy, x, y);
        } while (!contains(x, y));
    }
};

} // namespace

std::vector<TrajectoryPose> generate_trajectory(Rng& rng, const TrajectoryConfig& cfg) {
    if (cfg.duration_s <= 0.0) throw std::invalid_argument("generate_trajectory: duration must be > 0");
    if (cfg.frame_rate_hz <= 0.0) throw std::invalid_argument("generate_trajectory: frame rate must be > 0");
    if (cfg.speed_mps < 0.0 || cfg.speed_mps > 2.0)
        throw std::invalid_argument("generate_trajectory: speed must be in [0, 2] m/s");

    const WalkRegion region{cfg.center_x, cfg.center_y, cfg.radius_m,
                            cfg.bound_x_min, cfg.bound_x_max, cfg.bound_y_min, cfg.bound_y_max};
    if (!region.contains(cfg.center_x, cfg.center_y))
        throw std::invalid_argument("generate_trajectory: disk center outside walk bounds");

    const std::size_t n = static_cast<std::size_t>(std::llround(cfg.duration_s * cfg.frame_rate_hz));
    const double dt = 1.0 / cfg.frame_rate_hz;

    double px = 0.0, py = 0.0, wx = 0.0, wy = 0.0;
    region.sample(rng, px, py);
    region.sample(rng, wx, wy);

    std::vector<TrajectoryPose> poses;
    poses.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        TrajectoryPose pose;
        pose.t = static_cast<double>(i) * dt;
        pose.x = px;
        pose.y = py;
        const double d0 = std::hypot(wx - px, wy - py);
        if (cfg.speed_mps > 0.0 && d0 > 1e-12) {
            pose.vx = cfg.speed_mps * (wx - px) / d0;
            pose.vy = cfg.speed_mps * (wy - py) / d0;
        }
        poses.push_back(pose);

        if (cfg.speed_mps == 0.0) continue;
        double remaining = cfg.speed_mps * dt;
        int guard = 0;
        while (remaining > 1e-12 && guard++ < 8) {
            const double d = std::hypot(wx - px, wy - py);
            if (d <= remaining) {
                px = wx;
                py = wy;
                remaining -= d;
                region.sample(rng, wx, wy);
                if (std::hypot(wx - px, wy - py) < 1e-9) break; // degenerate region
            } else {
                px += (wx - px) / d * remaining;
                py += (wy - py) / d * remaining;
                remaining = 0.0;
            }
        }
    }
    return poses;
}

void DatasetConfig::validate() const {
    room.validate();
    target_template.validate();
    if (size < 1) throw std::invalid_argument("DatasetConfig: size must be >= 1");
    if (pipeline != "lis" && pipeline != "radar")
        throw std::invalid_argument("DatasetConfig: pipeline must be 'lis' or 'radar'");
    if (device_count < 1) throw std::invalid_argument("DatasetConfig: device count must be >= 1");
    if (time_window < 1) throw std::invalid_argument("DatasetConfig: time window must be >= 1");
    if (frames_per_trajectory <= static_cast<std::size_t>(time_window))
        throw std::invalid_argument("DatasetConfig: trajectory shorter than the time window");
}

void DatasetConfig::center_bounds(double& x_min, double& x_max, double& y_min, double& y_max) const {
    const double mx = std::max(target_template.extent_x, label_length) / 2.0;
    const double my = std::max(target_template.extent_y, label_width) / 2.0;
    x_min = mx;
    x_max = room.width_m - mx;
    y_min = my;
    y_max = room.depth_m - my;
    if (x_min >= x_max || y_min >= y_max)
        throw std::invalid_argument("DatasetConfig: target does not fit inside the room");
}

namespace {

TrajectoryConfig trajectory_config_for(const DatasetConfig& cfg) {
    TrajectoryConfig t;
    t.frame_rate_hz = cfg.frame_rate_hz;
    t.speed_mps = cfg.walk_speed_mps;
    t.duration_s = static_cast<double>(cfg.frames_per_trajectory) / cfg.frame_rate_hz;
    t.radius_m = cfg.disk_radius_m;
    t.center_x = cfg.room.center_x();
    t.center_y = cfg.room.center_y();
    cfg.center_bounds(t.bound_x_min, t.bound_x_max, t.bound_y_min, t.bound_y_max);
    return t;
}

// Static pose draw for one LIS record: uniform in the disk, rejecting poses
// whose box would clip a wall, so both scene invariants hold at once.
void sample_lis_pose(const DatasetConfig& cfg, Rng& rng, double& x, double& y) {
    double x_min, x_max, y_min, y_max;
    cfg.center_bounds(x_min, x_max, y_min, y_max);
    do {
        auto [px, py] = sample_target_position(rng, cfg.disk_radius_m, cfg.room.center_x(), cfg.room.center_y());
        x = px;
        y = py;
    } while (x < x_min || x > x_max || y < y_min || y > y_max);
}

std::vector<Vec3> sample_devices_clear_of_target(const DatasetConfig& cfg, Rng& rng, const TargetBox& box) {
    // Redraw any device that lands inside the target volume.
    std::vector<Vec3> devices;
    devices.reserve(static_cast<std::size_t>(cfg.device_count));
    while (static_cast<int>(devices.size()) < cfg.device_count) {
        auto batch = sample_device_positions(rng, 1, cfg.room, cfg.device_margin_m);
        if (!box.contains(batch[0])) devices.push_back(batch[0]);
    }
    return devices;
}

SampleRecord make_lis_record(const DatasetConfig& cfg, std::uint64_t id, std::uint64_t seed) {
    SampleRecord rec;
    rec.id = id;
    rec.seed = seed;
    rec.pipeline = "lis";
    Rng rng_target(derive_seed(seed, SeedStream::target_position));
    sample_lis_pose(cfg, rng_target, rec.center_x, rec.center_y);
    TargetBox box = cfg.target_template;
    box.center_x = rec.center_x;
    box.center_y = rec.center_y;
    Rng rng_dev(derive_seed(seed, SeedStream::device_positions));
    rec.devices = sample_devices_clear_of_target(cfg, rng_dev, box);
    rec.gt_box = box_from_center(rec.center_x, rec.center_y, cfg.label_length, cfg.label_width);
    return rec;
}

SampleRecord make_radar_record(const DatasetConfig& cfg, std::uint64_t id, std::uint64_t traj_index,
                               std::uint64_t frame, const std::vector<TrajectoryPose>& poses,
                               std::uint64_t traj_seed) {
    SampleRecord rec;
    rec.id = id;
    rec.seed = traj_seed;
    rec.pipeline = "radar";
    rec.trajectory = traj_index;
    rec.frame = frame;
    rec.center_x = poses[frame].x;
    rec.center_y = poses[frame].y;
    rec.gt_box = radar_frame_label(rec.center_x, rec.center_y, cfg.room, cfg.label_length, cfg.label_width);
    return rec;
}

} // namespace

BBox2D radar_frame_label(double room_x, double room_y, const Room& room, double label_length,
                         double label_width) {
    const double x_rel = room_x - room.center_x();
    const double y_fold = std::abs(room_y - room.center_y());
    return box_from_center(x_rel, y_fold, label_length, label_width);
}

std::vector<TrajectoryPose> trajectory_for_record(const DatasetConfig& cfg, std::uint64_t traj_seed) {
    Rng rng(traj_seed);
    return generate_trajectory(rng, trajectory_config_for(cfg));
}

std::vector<SampleRecord> build_dataset(const DatasetConfig& cfg, std::uint64_t master_seed) {
    cfg.validate();
    std::vector<SampleRecord> records;
    records.reserve(cfg.size);

    if (cfg.pipeline == "lis") {
        for (std::uint64_t id = 0; id < cfg.size; ++id)
            records.push_back(make_lis_record(cfg, id, derive_seed(master_seed, SeedStream::record, id)));
        return records;
    }

    // Radar: consecutive records are sliding windows along shared trajectories.
    const std::size_t per_traj = cfg.frames_per_trajectory - static_cast<std::size_t>(cfg.time_window - 1);
    std::uint64_t id = 0;
    for (std::uint64_t traj = 0; id < cfg.size; ++traj) {
        const std::uint64_t traj_seed = derive_seed(master_seed, SeedStream::trajectory, traj);
        const auto poses = trajectory_for_record(cfg, traj_seed);
        for (std::size_t k = 0; k < per_traj && id < cfg.size; ++k, ++id) {
            const std::uint64_t frame = static_cast<std::uint64_t>(cfg.time_window - 1) + k;
            records.push_back(make_radar_record(cfg, id, traj, frame, poses, traj_seed));
        }
    }
    return records;
}

SampleRecord regenerate_record(const DatasetConfig& cfg, const SampleRecord& record) {
    cfg.validate();
    if (record.pipeline == "lis") return make_lis_record(cfg, record.id, record.seed);
    const auto poses = trajectory_for_record(cfg, record.seed);
    if (record.frame >= poses.size()) throw std::invalid_argument("regenerate_record: frame out of range");
    return make_radar_record(cfg, record.id, record.trajectory, record.frame, poses, record.seed);
}

} // namespace rflocate
