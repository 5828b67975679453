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

#include "rflocate/eval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "rflocate/rng.hpp"

namespace rflocate {

double iou(const BBox2D& p, const BBox2D& g) {
    if (!p.valid() || !g.valid()) throw std::invalid_argument("iou: degenerate box");
    const double ix = std::min(p.x_max, g.x_max) - std::max(p.x_min, g.x_min);
    const double iy = std::min(p.y_max, g.y_max) - std::max(p.y_min, g.y_min);
    if (ix <= 0.0 || iy <= 0.0) return 0.0;
    const double inter = ix * iy;
    const double uni = p.area() + g.area() - inter;
    return inter / uni;
}

double center_distance(const BBox2D& p, const BBox2D& g) {
    if (!p.valid() || !g.valid()) throw std::invalid_argument("center_distance: degenerate box");
    return std::hypot(p.center_x() - g.center_x(), p.center_y() - g.center_y());
}

SplitIds split_dataset(const std::vector<std::uint64_t>& ids, double train_ratio, double val_ratio,
                       double test_ratio, std::uint64_t seed) {
    if (ids.empty()) throw std::invalid_argument("split_dataset: empty manifest");
    if (std::abs(train_ratio + val_ratio + test_ratio - 1.0) > 1e-9)
        throw std::invalid_argument("split_dataset: ratios must sum to 1");
    if (train_ratio < 0.0 || val_ratio < 0.0 || test_ratio < 0.0)
        throw std::invalid_argument("split_dataset: ratios must be >= 0");

    std::vector<std::uint64_t> shuffled = ids;
    Rng rng(derive_seed(seed, SeedStream::dataset_split));
    for (std::size_t i = shuffled.size(); i > 1; --i)
        std::swap(shuffled[i - 1], shuffled[rng.uniform_index(i)]);

    const std::size_t n = shuffled.size();
    std::size_t n_val = static_cast<std::size_t>(std::llround(val_ratio * static_cast<double>(n)));
    std::size_t n_test = static_cast<std::size_t>(std::llround(test_ratio * static_cast<double>(n)));
    n_val = std::min(n_val, n);
    n_test = std::min(n_test, n - n_val);
    const std::size_t n_train = n - n_val - n_test;  // rounding remainder goes to train

    SplitIds split;
    split.train.assign(shuffled.begin(), shuffled.begin() + n_train);
    split.val.assign(shuffled.begin() + n_train, shuffled.begin() + n_train + n_val);
    split.test.assign(shuffled.begin() + n_train + n_val, shuffled.end());
    return split;
}

MetricReport evaluate(const std::vector<LabeledBox>& predictions,
                      const std::vector<LabeledBox>& ground_truths) {
    if (predictions.size() != ground_truths.size())
        throw std::invalid_argument("evaluate: prediction/ground-truth count mismatch");
    std::unordered_map<std::uint64_t, const BBox2D*> gt;
    gt.reserve(ground_truths.size());
    for (const LabeledBox& g : ground_truths) {
        if (!gt.emplace(g.id, &g.box).second)
            throw std::invalid_argument("evaluate: duplicate ground-truth id " + std::to_string(g.id));
    }

    MetricReport report;
    report.count = predictions.size();
    report.per_sample.reserve(predictions.size());
    double iou_sum = 0.0, dist_sum = 0.0;
    for (const LabeledBox& p : predictions) {
        const auto it = gt.find(p.id);
        if (it == gt.end())
            throw std::invalid_argument("evaluate: prediction id " + std::to_string(p.id) +
                                        " missing from ground truth");
        SampleMetric m;
        m.id = p.id;
        m.iou = iou(p.box, *it->second);
        m.center_distance_m = center_distance(p.box, *it->second);
        iou_sum += m.iou;
        dist_sum += m.center_distance_m;
        report.per_sample.push_back(m);
    }
    std::sort(report.per_sample.begin(), report.per_sample.end(),
              [](const SampleMetric& a, const SampleMetric& b) { return a.id < b.id; });
    report.mean_iou = iou_sum / static_cast<double>(report.count);
    report.mean_center_distance_m = dist_sum / static_cast<double>(report.count);
    return report;
}

ComparisonReport compare_report(const MetricReport& lis, const MetricReport& radar) {
    ComparisonReport cmp;
    cmp.lis = lis;
    cmp.radar = radar;
    cmp.iou_winner = lis.mean_iou > radar.mean_iou   ? "lis"
                     : radar.mean_iou > lis.mean_iou ? "radar"
                                                     : "tie";
    cmp.distance_winner = lis.mean_center_distance_m < radar.mean_center_distance_m   ? "lis"
                          : radar.mean_center_distance_m < lis.mean_center_distance_m ? "radar"
                                                                                      : "tie";
    return cmp;
}

std::string render_comparison_table(const ComparisonReport& cmp) {
    std::ostringstream out;
    char line[160];
    out << "pipeline      samples   mean IoU   mean center err [m]\n";
    out << "----------------------------------------------------------\n";
    std::snprintf(line, sizeof(line), "%-12s %8zu   %8.4f   %10.4f\n", "lis", cmp.lis.count,
                  cmp.lis.mean_iou, cmp.lis.mean_center_distance_m);
    out << line;
    std::snprintf(line, sizeof(line), "%-12s %8zu   %8.4f   %10.4f\n", "radar", cmp.radar.count,
                  cmp.radar.mean_iou, cmp.radar.mean_center_distance_m);
    out << line;
    out << "----------------------------------------------------------\n";
    std::snprintf(line, sizeof(line), "%-12s %8s   %8.2f   %10.2f   (published hardware baseline)\n",
                  "lis (ref)", "-", kReferenceLisIou, kReferenceLisDistanceM);
    out << line;
    std::snprintf(line, sizeof(line), "%-12s %8s   %8.2f   %10.2f   (published hardware baseline)\n",
                  "radar (ref)", "-", kReferenceRadarIou, kReferenceRadarDistanceM);
    out << line;
    out << "IoU winner: " << cmp.iou_winner << "   distance winner: " << cmp.distance_winner << "\n";
    return out.str();
}

} // namespace rflocate
