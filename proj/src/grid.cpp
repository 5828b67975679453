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

#include "rflocate/grid.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace rflocate {

namespace {

void put_u64_le(std::ofstream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64_le(std::ifstream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw std::runtime_error("grid file: truncated header");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

} // namespace

void write_complex_grid(const std::string& path, const ComplexGrid& grid) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    put_u64_le(out, grid.rows());
    put_u64_le(out, grid.cols());
    // float64 pairs; x86-64 doubles are already little-endian IEEE-754.
    out.write(reinterpret_cast<const char*>(grid.data().data()),
              static_cast<std::streamsize>(grid.size() * sizeof(cdouble)));
    if (!out) throw std::runtime_error("write failed: " + path);
}

ComplexGrid read_complex_grid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    const std::uint64_t rows = get_u64_le(in);
    const std::uint64_t cols = get_u64_le(in);
    ComplexGrid grid(rows, cols);
    in.read(reinterpret_cast<char*>(grid.data().data()),
            static_cast<std::streamsize>(grid.size() * sizeof(cdouble)));
    if (!in) throw std::runtime_error("grid file: truncated payload: " + path);
    return grid;
}

void write_real_grid(const std::string& path, const RealGrid& grid) {
    ComplexGrid tmp(grid.rows(), grid.cols());
    for (std::size_t i = 0; i < grid.size(); ++i) tmp.data()[i] = cdouble{grid.data()[i], 0.0};
    write_complex_grid(path, tmp);
}

RealGrid read_real_grid(const std::string& path) {
    const ComplexGrid tmp = read_complex_grid(path);
    RealGrid grid(tmp.rows(), tmp.cols());
    for (std::size_t i = 0; i < grid.size(); ++i) grid.data()[i] = tmp.data()[i].real();
    return grid;
}

void write_pgm(const std::string& path, const RealGrid& grid) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    double peak = 0.0;
    for (double v : grid.data()) peak = std::max(peak, v);
    out << "P5\n" << grid.cols() << " " << grid.rows() << "\n255\n";
    std::vector<unsigned char> row(grid.cols());
    for (std::size_t r = 0; r < grid.rows(); ++r) {
        for (std::size_t c = 0; c < grid.cols(); ++c) {
            const double v = peak > 0.0 ? grid.at(r, c) / peak : 0.0;
            row[c] = static_cast<unsigned char>(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5);
        }
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace rflocate
