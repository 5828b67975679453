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

#ifndef RFLOCATE_EVAL_HPP
#define RFLOCATE_EVAL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rflocate/bbox.hpp"

namespace rflocate {

// Intersection over union of two axis-aligned boxes; 0 for disjoint boxes.
double iou(const BBox2D& p, const BBox2D& g);

// Euclidean distance between box centers, meters.
double center_distance(const BBox2D& p, const BBox2D& g);

struct SplitIds {
    std::vector<std::uint64_t> train;
    std::vector<std::uint64_t> val;
    std::vector<std::uint64_t> test;
};

// Disjoint covering split: val and test sizes round(ratio * N), the
// remainder goes to train. Deterministic shuffle by seed.
SplitIds split_dataset(const std::vector<std::uint64_t>& ids, double train_ratio, double val_ratio,
                       double test_ratio, std::uint64_t seed);

struct LabeledBox {
    std::uint64_t id = 0;
    BBox2D box;
};

struct SampleMetric {
    std::uint64_t id = 0;
    double iou = 0.0;
    double center_distance_m = 0.0;
};

struct MetricReport {
    std::string pipeline;
    std::string dataset_hash;
    std::size_t count = 0;
    double mean_iou = 0.0;
    double mean_center_distance_m = 0.0;
    std::vector<SampleMetric> per_sample;  // sorted by id
};

// Per-sample IoU and center distance plus their means. Predictions and
// ground truths must carry exactly the same id set.
MetricReport evaluate(const std::vector<LabeledBox>& predictions,
                      const std::vector<LabeledBox>& ground_truths);

// Published baselines from the physical campaign this workbench mirrors
// (ceiling radar vs. simulated aperture); rendered as context rows only.
inline constexpr double kReferenceRadarIou = 0.71;
inline constexpr double kReferenceRadarDistanceM = 0.03;
inline constexpr double kReferenceLisIou = 0.56;
inline constexpr double kReferenceLisDistanceM = 0.10;

struct ComparisonReport {
    MetricReport lis;
    MetricReport radar;
    std::string iou_winner;       // "lis" | "radar" | "tie"
    std::string distance_winner;  // smaller mean distance wins
};

ComparisonReport compare_report(const MetricReport& lis, const MetricReport& radar);

// Aligned plain-text table including the reference rows.
std::string render_comparison_table(const ComparisonReport& cmp);

} // namespace rflocate

#endif
