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

#ifndef RFLOCATE_LIS_RADIOMAP_HPP
#define RFLOCATE_LIS_RADIOMAP_HPP

#include <cstddef>

#include "rflocate/bbox.hpp"
#include "rflocate/common.hpp"
#include "rflocate/grid.hpp"

namespace rflocate {

// Spherical-wave matched-filter kernel: entry at offset (u, v) from the
// kernel center is (1/d_uv) exp(-j 2 pi d_uv / lambda) with
// d_uv = sqrt(d^2 + (u ds)^2 + (v ds)^2).
struct MfKernel {
    std::size_t rows = 100;
    std::size_t cols = 100;
    double f_hz = 3.5e9;
    double design_distance_m = 3.2;
    double spacing_m = kSpeedOfLight / 3.5e9 / 2.0;
    ComplexGrid pattern;

    std::size_t center_row() const { return rows / 2; }
    std::size_t center_col() const { return cols / 2; }
};

MfKernel steering_kernel(double f_hz, double design_distance_m, std::size_t k_rows, std::size_t k_cols,
                         double spacing_m);

// Correlates the received grid with the conjugated kernel so a source that
// matches the pattern produces a coherent real peak at its own pixel. Zero
// padding keeps the output the same shape as the input. Backed by padded
// FFTs; the construction cost is paid once per (kernel, grid shape).
class MatchedFilter {
  public:
    MatchedFilter(const MfKernel& kernel, std::size_t grid_rows, std::size_t grid_cols);

    ComplexGrid apply(const ComplexGrid& y) const;

    std::size_t kernel_half_rows() const { return k_rows_ / 2; }
    std::size_t kernel_half_cols() const { return k_cols_ / 2; }

  private:
    std::size_t rows_, cols_;      // input shape
    std::size_t k_rows_, k_cols_;  // kernel shape
    std::size_t pad_rows_, pad_cols_;
    ComplexGrid kernel_fft_conj_;
};

// One-shot convenience around MatchedFilter.
ComplexGrid matched_filter(const ComplexGrid& y, const MfKernel& kernel);

using RadioMap = RealGrid;

// Entrywise |y_mf|^2.
RadioMap radio_map(const ComplexGrid& y_mf);

// Entrywise max(0, with - empty); the empty-room reference removes the
// active-device signatures so the argmax lands on the passive target.
RadioMap background_subtract(const RadioMap& with_target, const RadioMap& empty);

struct Peak {
    std::size_t row = 0;
    std::size_t col = 0;
    double x = 0.0;  // row index * spacing
    double y = 0.0;  // col index * spacing
    double value = 0.0;
    bool near_border = false;
};

// Argmax of the map in grid-local coordinates; ties resolve to the smallest
// row-major index. border_rows/cols flag peaks within that margin of the
// edge (pass the kernel half widths).
Peak peak_position(const RadioMap& map, double spacing_m, std::size_t border_rows = 0,
                   std::size_t border_cols = 0);

} // namespace rflocate

#endif
