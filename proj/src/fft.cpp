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

#include "rflocate/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace rflocate {

namespace {

// FFTW planning is not thread safe; executing a cached plan on new arrays
// via fftw_execute_dft is. Plans are created FFTW_ESTIMATE | FFTW_UNALIGNED
// so they apply to any buffer of the right shape.
class PlanCache {
  public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get_1d(std::size_t n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        const auto key = std::make_tuple(n, std::size_t{0}, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<cdouble> probe(n);
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(probe.data()),
                                          reinterpret_cast<fftw_complex*>(probe.data()), sign,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
        return plan;
    }

    fftw_plan get_2d(std::size_t rows, std::size_t cols, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        const auto key = std::make_tuple(rows, cols, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<cdouble> probe(rows * cols);
        fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols),
                                          reinterpret_cast<fftw_complex*>(probe.data()),
                                          reinterpret_cast<fftw_complex*>(probe.data()), sign,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
        return plan;
    }

  private:
    std::mutex mutex_;
    std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

void scale(cdouble* data, std::size_t n, double s) {
    for (std::size_t i = 0; i < n; ++i) data[i] *= s;
}

} // namespace

void fft_1d(cdouble* data, std::size_t n, bool inverse) {
    if (n == 0) return;
    fftw_plan plan = PlanCache::instance().get_1d(n, inverse ? FFTW_BACKWARD : FFTW_FORWARD);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data), reinterpret_cast<fftw_complex*>(data));
    if (inverse) scale(data, n, 1.0 / static_cast<double>(n));
}

void fft_1d_batch(cdouble* data, std::size_t n, std::size_t batch, bool inverse) {
    for (std::size_t b = 0; b < batch; ++b) fft_1d(data + b * n, n, inverse);
}

void fft_2d(cdouble* data, std::size_t rows, std::size_t cols, bool inverse) {
    if (rows == 0 || cols == 0) return;
    fftw_plan plan = PlanCache::instance().get_2d(rows, cols, inverse ? FFTW_BACKWARD : FFTW_FORWARD);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data), reinterpret_cast<fftw_complex*>(data));
    if (inverse) scale(data, rows * cols, 1.0 / static_cast<double>(rows * cols));
}

} // namespace rflocate
