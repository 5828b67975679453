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

#include "rflocate/lis_radiomap.hpp"

#include <cmath>
#include <stdexcept>

#include "rflocate/fft.hpp"

namespace rflocate {

namespace {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace

MfKernel steering_kernel(double f_hz, double design_distance_m, std::size_t k_rows, std::size_t k_cols,
                         double spacing_m) {
    if (design_distance_m <= 0.0) throw std::invalid_argument("steering_kernel: design distance must be > 0");
    if (k_rows == 0 || k_cols == 0) throw std::invalid_argument("steering_kernel: kernel dims must be > 0");
    if (spacing_m <= 0.0) throw std::invalid_argument("steering_kernel: spacing must be > 0");
    MfKernel k;
    k.rows = k_rows;
    k.cols = k_cols;
    k.f_hz = f_hz;
    k.design_distance_m = design_distance_m;
    k.spacing_m = spacing_m;
    k.pattern = ComplexGrid(k_rows, k_cols);
    const double lambda = wavelength(f_hz);
    const double d2 = design_distance_m * design_distance_m;
    for (std::size_t r = 0; r < k_rows; ++r) {
        const double du = (static_cast<double>(r) - static_cast<double>(k.center_row())) * spacing_m;
        for (std::size_t c = 0; c < k_cols; ++c) {
            const double dv = (static_cast<double>(c) - static_cast<double>(k.center_col())) * spacing_m;
            const double d_uv = std::sqrt(d2 + du * du + dv * dv);
            k.pattern.at(r, c) = std::polar(1.0 / d_uv, -2.0 * kPi * d_uv / lambda);
        }
    }
    return k;
}

MatchedFilter::MatchedFilter(const MfKernel& kernel, std::size_t grid_rows, std::size_t grid_cols)
    : rows_(grid_rows), cols_(grid_cols), k_rows_(kernel.rows), k_cols_(kernel.cols) {
    if (k_rows_ > rows_ || k_cols_ > cols_)
        throw std::invalid_argument("MatchedFilter: kernel larger than grid");
    pad_rows_ = next_pow2(rows_ + k_rows_ - 1);
    pad_cols_ = next_pow2(cols_ + k_cols_ - 1);
    kernel_fft_conj_ = ComplexGrid(pad_rows_, pad_cols_);
    for (std::size_t r = 0; r < k_rows_; ++r)
        for (std::size_t c = 0; c < k_cols_; ++c) kernel_fft_conj_.at(r, c) = kernel.pattern.at(r, c);
    fft_2d(kernel_fft_conj_.data().data(), pad_rows_, pad_cols_, false);
    for (cdouble& v : kernel_fft_conj_.data()) v = std::conj(v);
}

ComplexGrid MatchedFilter::apply(const ComplexGrid& y) const {
    if (y.rows() != rows_ || y.cols() != cols_)
        throw std::invalid_argument("MatchedFilter: grid shape mismatch");
    ComplexGrid work(pad_rows_, pad_cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) work.at(r, c) = y.at(r, c);
    fft_2d(work.data().data(), pad_rows_, pad_cols_, false);
    for (std::size_t i = 0; i < work.size(); ++i) work.data()[i] *= kernel_fft_conj_.data()[i];
    fft_2d(work.data().data(), pad_rows_, pad_cols_, true);

    // Circular correlation holds linear values at wrapped offsets; pick the
    // block where the kernel center sits on each output pixel.
    const std::size_t cu = k_rows_ / 2, cv = k_cols_ / 2;
    ComplexGrid out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        const std::size_t src_r = (i + pad_rows_ - cu) % pad_rows_;
        for (std::size_t j = 0; j < cols_; ++j) {
            const std::size_t src_c = (j + pad_cols_ - cv) % pad_cols_;
            out.at(i, j) = work.at(src_r, src_c);
        }
    }
    return out;
}

ComplexGrid matched_filter(const ComplexGrid& y, const MfKernel& kernel) {
    return MatchedFilter(kernel, y.rows(), y.cols()).apply(y);
}

RadioMap radio_map(const ComplexGrid& y_mf) {
    RadioMap map(y_mf.rows(), y_mf.cols());
    for (std::size_t i = 0; i < y_mf.size(); ++i) map.data()[i] = std::norm(y_mf.data()[i]);
    return map;
}

RadioMap background_subtract(const RadioMap& with_target, const RadioMap& empty) {
    if (with_target.rows() != empty.rows() || with_target.cols() != empty.cols())
        throw std::invalid_argument("background_subtract: dimension mismatch");
    RadioMap out(with_target.rows(), with_target.cols());
    for (std::size_t i = 0; i < out.size(); ++i)
        out.data()[i] = std::max(0.0, with_target.data()[i] - empty.data()[i]);
    return out;
}

Peak peak_position(const RadioMap& map, double spacing_m, std::size_t border_rows,
                   std::size_t border_cols) {
    if (map.size() == 0) throw std::invalid_argument("peak_position: empty map");
    Peak peak;
    peak.value = map.data()[0];
    for (std::size_t r = 0; r < map.rows(); ++r) {
        for (std::size_t c = 0; c < map.cols(); ++c) {
            const double v = map.at(r, c);
            if (v > peak.value) {
                peak.value = v;
                peak.row = r;
                peak.col = c;
            }
        }
    }
    peak.x = static_cast<double>(peak.row) * spacing_m;
    peak.y = static_cast<double>(peak.col) * spacing_m;
    peak.near_border = peak.row < border_rows || peak.row + border_rows >= map.rows() ||
                       peak.col < border_cols || peak.col + border_cols >= map.cols();
    return peak;
}

} // namespace rflocate
