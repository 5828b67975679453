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

#ifndef RFLOCATE_FFT_HPP
#define RFLOCATE_FFT_HPP

#include <cstddef>
#include <vector>

#include "rflocate/common.hpp"

namespace rflocate {

// Unnormalized DFTs backed by FFTW. Plan creation is serialized internally;
// execution is safe from concurrent threads on distinct buffers. The inverse
// transforms divide by the length so ifft(fft(x)) == x.

void fft_1d(cdouble* data, std::size_t n, bool inverse);

// In-place transform of each length-n row of a contiguous batch.
void fft_1d_batch(cdouble* data, std::size_t n, std::size_t batch, bool inverse);

void fft_2d(cdouble* data, std::size_t rows, std::size_t cols, bool inverse);

inline void fft_1d(std::vector<cdouble>& v, bool inverse = false) { fft_1d(v.data(), v.size(), inverse); }

} // namespace rflocate

#endif
