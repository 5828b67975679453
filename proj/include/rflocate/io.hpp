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

#ifndef RFLOCATE_IO_HPP
#define RFLOCATE_IO_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rflocate/eval.hpp"
#include "rflocate/pointnet.hpp"
#include "rflocate/radar_dsp.hpp"
#include "rflocate/scene.hpp"

namespace rflocate {

// ---- hashing & atomic files ------------------------------------------------

std::uint64_t fnv1a64(const void* data, std::size_t n);
std::string file_hash_hex(const std::string& path);

// Writes to a sibling temp file and renames into place.
void atomic_write_text(const std::string& path, const std::string& content);

// ---- dataset manifest (line-delimited JSON, schema-versioned) ---------------

struct Manifest {
    DatasetConfig config;
    std::uint64_t master_seed = 0;
    std::vector<SampleRecord> records;
};

void write_manifest(const std::string& path, const Manifest& manifest);
Manifest read_manifest(const std::string& path);

// ---- per-frame point-cloud stream -------------------------------------------

struct FrameRecord {
    std::uint64_t trajectory = 0;
    std::uint64_t frame = 0;
    PointCloud cloud;
};

void write_cloud_stream(const std::string& path, const std::vector<FrameRecord>& frames);
std::vector<FrameRecord> read_cloud_stream(const std::string& path);

// ---- predictions and reports -------------------------------------------------

struct Prediction {
    std::uint64_t id = 0;
    BBox2D box;
    bool near_border = false;
};

void write_predictions(const std::string& path, const std::string& pipeline,
                       const std::vector<Prediction>& predictions);
std::vector<Prediction> read_predictions(const std::string& path, std::string* pipeline = nullptr);

void write_report(const std::string& path, const MetricReport& report);
MetricReport read_report(const std::string& path);
void write_metrics_csv(const std::string& path, const MetricReport& report);

void write_comparison(const std::string& json_path, const std::string& table_path,
                      const ComparisonReport& cmp);

// ---- training artifacts -------------------------------------------------------

void write_history(const std::string& path, const std::vector<EpochStats>& history);
std::vector<EpochStats> read_history(const std::string& path);

// Versioned binary blob: magic, architecture hash, shapes, float64 weights.
void write_checkpoint(const std::string& path, const NetworkParams& params);
NetworkParams read_checkpoint(const std::string& path);

// ---- workbench configuration ---------------------------------------------------

struct LisSettings {
    std::size_t rows = 118;
    std::size_t cols = 118;
    std::size_t kernel_rows = 100;
    std::size_t kernel_cols = 100;
    double kernel_distance_m = 3.2;
    std::vector<double> kernel_distance_sweep;  // optional extra design distances
    double snr_db = std::numeric_limits<double>::quiet_NaN();  // NaN disables noise
    double diffuse_amplitude = 1.0;
    std::vector<double> scatter_z{0.02};
};

struct RadarSettings {
    ChirpConfig chirp;
    CfarConfig cfar;
    RadarMount mount;  // mount x/y track the room center unless overridden
};

struct TrainSettings {
    TrainConfig train;
    NetworkConfig net;
    int k_neighbors = 8;
};

struct WorkbenchConfig {
    DatasetConfig dataset;
    LisSettings lis;
    RadarSettings radar;
    TrainSettings train;
    double split_train = 0.6;
    double split_val = 0.1;
    double split_test = 0.3;
};

// Defaults mirror the reference deployment: 4.7 x 4.7 x 3.2 m room, 118x118
// half-wave aperture at 3.5 GHz, 77 GHz / 4 GHz chirps, ceiling mount at 3 m.
WorkbenchConfig default_workbench_config();

// JSON overrides applied on top of the defaults; unknown keys are rejected.
WorkbenchConfig load_workbench_config(const std::string& path);
void save_workbench_config(const std::string& path, const WorkbenchConfig& cfg);

} // namespace rflocate

#endif
