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
//
// Independent reference implementations used only by tests. Everything here
// is written the slow, obvious way on purpose: these are the oracles the
// fast paths are checked against.

#ifndef RFLOCATE_TESTS_ORACLES_HPP
#define RFLOCATE_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "rflocate/bbox.hpp"
#include "rflocate/grid.hpp"
#include "rflocate/lis_radiomap.hpp"
#include "rflocate/radar_dsp.hpp"
#include "rflocate/rng.hpp"

namespace rflocate::oracles {

// Direct O(A * N_f) evaluation of the conjugate-kernel correlation with zero
// padding, matching the matched-filter contract entry by entry.
inline ComplexGrid direct_matched_filter(const ComplexGrid& y, const MfKernel& kernel) {
    const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(y.rows());
    const std::ptrdiff_t cols = static_cast<std::ptrdiff_t>(y.cols());
    const std::ptrdiff_t cu = static_cast<std::ptrdiff_t>(kernel.center_row());
    const std::ptrdiff_t cv = static_cast<std::ptrdiff_t>(kernel.center_col());
    ComplexGrid out(y.rows(), y.cols());
    for (std::ptrdiff_t i = 0; i < rows; ++i) {
        for (std::ptrdiff_t j = 0; j < cols; ++j) {
            cdouble acc{0.0, 0.0};
            for (std::ptrdiff_t u = 0; u < static_cast<std::ptrdiff_t>(kernel.rows); ++u) {
                for (std::ptrdiff_t v = 0; v < static_cast<std::ptrdiff_t>(kernel.cols); ++v) {
                    const std::ptrdiff_t r = i + u - cu;
                    const std::ptrdiff_t c = j + v - cv;
                    if (r < 0 || r >= rows || c < 0 || c >= cols) continue;
                    acc += std::conj(kernel.pattern.at(static_cast<std::size_t>(u),
                                                       static_cast<std::size_t>(v))) *
                           y.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
                }
            }
            out.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = acc;
        }
    }
    return out;
}

// Peak-normalized worst-case disagreement between two grids.
inline double max_relative_error(const ComplexGrid& a, const ComplexGrid& b) {
    double peak = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) peak = std::max(peak, std::abs(a.data()[i]));
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
    return peak > 0.0 ? worst / peak : worst;
}

// Naive cell-averaging CFAR: literal window loops, no prefix sums.
inline std::vector<std::pair<int, int>> naive_cfar_cells(const RealGrid& m, int guard, int train,
                                                         double pfa) {
    const int rows = static_cast<int>(m.rows());
    const int cols = static_cast<int>(m.cols());
    const int reach = guard + train;
    std::vector<std::pair<int, int>> hits;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            double sum = 0.0;
            int count = 0;
            for (int dr = -reach; dr <= reach; ++dr) {
                for (int dc = -reach; dc <= reach; ++dc) {
                    const int rr = r + dr, cc = c + dc;
                    if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) continue;
                    if (std::abs(dr) <= guard && std::abs(dc) <= guard) continue;
                    sum += m.at(rr, cc);
                    ++count;
                }
            }
            if (count <= 0) continue;
            const double alpha = count * (std::pow(pfa, -1.0 / count) - 1.0);
            if (m.at(r, c) > alpha * sum / count) hits.emplace_back(r, c);
        }
    }
    return hits;
}

// Brute-force kNN neighbor lists over (x, y), ties by index.
inline std::vector<std::vector<std::uint32_t>> brute_force_knn(const std::vector<RadarPoint>& pts,
                                                               int k) {
    const std::size_t n = pts.size();
    const std::size_t k_eff = std::min<std::size_t>(static_cast<std::size_t>(k), n - 1);
    std::vector<std::vector<std::uint32_t>> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::pair<double, std::uint32_t>> cand;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dx = pts[i].x - pts[j].x;
            const double dy = pts[i].y - pts[j].y;
            cand.emplace_back(dx * dx + dy * dy, static_cast<std::uint32_t>(j));
        }
        std::sort(cand.begin(), cand.end());
        for (std::size_t j = 0; j < k_eff; ++j) out[i].push_back(cand[j].second);
    }
    return out;
}

// Monte Carlo IoU of two boxes by uniform sampling over their union's
// bounding rectangle.
inline double monte_carlo_iou(const BBox2D& p, const BBox2D& g, std::size_t samples, Rng& rng) {
    const double x0 = std::min(p.x_min, g.x_min), x1 = std::max(p.x_max, g.x_max);
    const double y0 = std::min(p.y_min, g.y_min), y1 = std::max(p.y_max, g.y_max);
    std::size_t in_inter = 0, in_union = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        const double x = rng.uniform(x0, x1);
        const double y = rng.uniform(y0, y1);
        const bool in_p = x >= p.x_min && x <= p.x_max && y >= p.y_min && y <= p.y_max;
        const bool in_g = x >= g.x_min && x <= g.x_max && y >= g.y_min && y <= g.y_max;
        if (in_p && in_g) ++in_inter;
        if (in_p || in_g) ++in_union;
    }
    return in_union == 0 ? 0.0 : static_cast<double>(in_inter) / static_cast<double>(in_union);
}

} // namespace rflocate::oracles

#endif
