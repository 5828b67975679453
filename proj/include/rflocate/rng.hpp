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

#ifndef RFLOCATE_RNG_HPP
#define RFLOCATE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "rflocate/common.hpp"

namespace rflocate {

// SplitMix64 finalizer. Used to expand one master seed into independent
// per-record / per-purpose streams without any ambient RNG state.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-based seed splitter: mixes (master, stream, counter) into a fresh
// seed. Distinct tuples give statistically independent streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t counter = 0) {
    return splitmix64(splitmix64(master ^ splitmix64(stream)) ^ counter);
}

// Stream tags for derive_seed. Names record intent; values are arbitrary.
enum class SeedStream : std::uint64_t {
    target_position = 1,
    device_positions = 2,
    trajectory = 3,
    lis_noise = 4,
    radar_scatterers = 5,
    radar_noise = 6,
    dataset_split = 7,
    net_init = 8,
    batch_shuffle = 9,
    record = 10,
};

inline std::uint64_t derive_seed(std::uint64_t master, SeedStream stream, std::uint64_t counter = 0) {
    return derive_seed(master, static_cast<std::uint64_t>(stream), counter);
}

// mt19937_64 engine with hand-rolled distributions. The standard engine is
// bit-exact across implementations; the standard distributions are not, so
// uniform/normal draws are generated here from raw 64-bit words.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n) {
        // Rejection keeps the draw unbiased for any n.
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return v % n;
    }

    // Standard normal via Box-Muller (polar form avoided to keep the
    // consumption of engine words fixed at two per pair).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * kPi * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * kPi * u2);
    }

    // Circularly symmetric complex Gaussian with E|z|^2 = variance.
    cdouble complex_normal(double variance) {
        const double s = std::sqrt(variance / 2.0);
        const double re = normal();
        const double im = normal();
        return {s * re, s * im};
    }

    // Uniform point in the closed disk of given radius about a center.
    void disk_point(double radius, double cx, double cy, double& x, double& y) {
        const double r = radius * std::sqrt(uniform());
        const double phi = 2.0 * kPi * uniform();
        x = cx + r * std::cos(phi);
        y = cy + r * std::sin(phi);
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace rflocate

#endif
