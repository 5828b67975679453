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

#ifndef RFLOCATE_BBOX_HPP
#define RFLOCATE_BBOX_HPP

#include <stdexcept>

namespace rflocate {

// Axis-aligned floor-plane bounding box, meters.
struct BBox2D {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    bool operator==(const BBox2D&) const = default;

    double width() const { return x_max - x_min; }   // x extent
    double height() const { return y_max - y_min; }  // y extent
    double area() const { return width() * height(); }
    double center_x() const { return 0.5 * (x_min + x_max); }
    double center_y() const { return 0.5 * (y_min + y_max); }

    bool valid() const { return x_min < x_max && y_min < y_max; }
};

// Fixed-footprint box around an inferred center. Defaults are the human
// footprint used throughout: 0.5 m along x, 0.3 m along y.
inline BBox2D box_from_center(double x_c, double y_c, double length = 0.5, double width = 0.3) {
    if (length <= 0.0 || width <= 0.0) throw std::invalid_argument("box_from_center: extents must be > 0");
    return BBox2D{x_c - length / 2.0, y_c - width / 2.0, x_c + length / 2.0, y_c + width / 2.0};
}

} // namespace rflocate

#endif
