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

#ifndef RFLOCATE_GRID_HPP
#define RFLOCATE_GRID_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "rflocate/common.hpp"

namespace rflocate {

// Row-major complex grid. Row index runs along x, column index along y for
// aperture grids, matching the pixel -> position convention of the radio map.
class ComplexGrid {
  public:
    ComplexGrid() = default;
    ComplexGrid(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cdouble{0.0, 0.0}) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    cdouble& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cdouble& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<cdouble>& data() { return data_; }
    const std::vector<cdouble>& data() const { return data_; }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cdouble> data_;
};

class RealGrid {
  public:
    RealGrid() = default;
    RealGrid(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const double& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Binary grid file: 16-byte header of two little-endian uint64 {rows, cols},
// then row-major float64 pairs (re, im) for every cell.
void write_complex_grid(const std::string& path, const ComplexGrid& grid);
ComplexGrid read_complex_grid(const std::string& path);

// Real grids reuse the complex container format with zero imaginary parts.
void write_real_grid(const std::string& path, const RealGrid& grid);
RealGrid read_real_grid(const std::string& path);

// 8-bit binary PGM, max-normalized; for visual inspection only.
void write_pgm(const std::string& path, const RealGrid& grid);

} // namespace rflocate

#endif
