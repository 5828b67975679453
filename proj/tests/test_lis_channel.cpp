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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "rflocate/lis_channel.hpp"

using namespace rflocate;

TEST_CASE("wavelength basics") {
    CHECK(wavelength(3.5e9) == doctest::Approx(0.0856549880).epsilon(1e-9));
    CHECK(wavelength(kSpeedOfLight) == doctest::Approx(1.0));
    CHECK(wavelength(3.5e9) / 2.0 == doctest::Approx(0.0428274940).epsilon(1e-9));
    CHECK_THROWS_AS(wavelength(0.0), std::invalid_argument);
    CHECK_THROWS_AS(wavelength(-1.0), std::invalid_argument);
}

TEST_CASE("fresnel: perfect-conductor limit") {
    Material pec{1e9, 1.0, 1.0};
    const cdouble g = fresnel_reflection(pec, 0.3, 3.5e9);
    CHECK(std::abs(g) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("fresnel: vacuum interface reflects nothing") {
    Material vac{0.0, 1.0, 1.0};
    for (double ang : {0.0, 0.2, 0.7, 1.2}) CHECK(std::abs(fresnel_reflection(vac, ang, 3.5e9)) < 1e-12);
}

TEST_CASE("fresnel: human material at normal incidence, 3.5 GHz") {
    // eps = 38.1 - j*1.44/(2 pi f eps0) = 38.1 - 7.3955j, evaluated by hand:
    // |gamma| = |(1 - sqrt(eps)) / (1 + sqrt(eps))| = 0.7245
    const cdouble g = fresnel_reflection(human_material(), 0.0, 3.5e9);
    CHECK(std::abs(g) == doctest::Approx(0.72445).epsilon(2e-4));
    CHECK(std::abs(g) > 0.70);  // strong reflector
    CHECK(std::abs(g) < 0.75);
}

TEST_CASE("fresnel: angle domain enforced") {
    CHECK_THROWS_AS(fresnel_reflection(human_material(), -0.1, 3.5e9), std::invalid_argument);
    CHECK_THROWS_AS(fresnel_reflection(human_material(), kPi / 2.0, 3.5e9), std::invalid_argument);
}

namespace {

RayScene empty_room() {
    RayScene s;
    s.room = Room{};
    return s;
}

std::map<PathType, int> count_types(const std::vector<RayPath>& paths) {
    std::map<PathType, int> counts;
    for (const auto& p : paths) counts[p.type]++;
    return counts;
}

} // namespace

TEST_CASE("trace_paths: empty room has one LOS and at most six bounces") {
    const RayScene scene = empty_room();
    const Vec3 source{1.0, 1.5, 0.8};

    // element strictly inside: all six surfaces give a bounce
    const Vec3 mid{3.0, 3.2, 1.7};
    auto counts = count_types(trace_paths(scene, source, mid, 3.5e9));
    CHECK(counts[PathType::los] == 1);
    CHECK(counts[PathType::wall_bounce] == 6);

    // element on the ceiling: the ceiling bounce degenerates away
    const Vec3 ceiling{3.0, 3.2, scene.room.height_m};
    counts = count_types(trace_paths(scene, source, ceiling, 3.5e9));
    CHECK(counts[PathType::los] == 1);
    CHECK(counts[PathType::wall_bounce] <= 6);
    CHECK(counts[PathType::wall_bounce] == 5);
}

TEST_CASE("trace_paths: occluded line of sight is omitted") {
    RayScene scene = empty_room();
    scene.wall_bounces = false;
    scene.target_scatter_z.clear();
    TargetBox box;
    box.center_x = 2.35;
    box.center_y = 2.35;
    scene.target = box;

    // segment through the box volume
    const Vec3 source{2.35, 1.0, 0.9};
    const Vec3 element{2.35, 4.0, 0.9};
    CHECK(segment_intersects_box(source, element, box));
    auto counts = count_types(trace_paths(scene, source, element, 3.5e9));
    CHECK(counts[PathType::los] == 0);

    // segment passing beside the box
    const Vec3 aside{0.5, 1.0, 0.9};
    const Vec3 aside_el{0.5, 4.0, 0.9};
    CHECK(!segment_intersects_box(aside, aside_el, box));
    counts = count_types(trace_paths(scene, aside, aside_el, 3.5e9));
    CHECK(counts[PathType::los] == 1);

    // above the box: the target tops out at 1.83 m
    const Vec3 above_a{2.35, 1.0, 2.5};
    const Vec3 above_b{2.35, 4.0, 2.5};
    CHECK(!segment_intersects_box(above_a, above_b, box));
}

TEST_CASE("trace_paths: image-method bounce length equals image distance") {
    const RayScene scene = empty_room();
    const Vec3 source{1.0, 2.0, 1.2};
    const Vec3 element{3.5, 2.6, 2.9};
    const auto paths = trace_paths(scene, source, element, 3.5e9);

    // floor bounce: image of the source across z=0
    const Vec3 floor_image{source.x, source.y, -source.z};
    const double expect = distance(floor_image, element);
    bool found = false;
    for (const auto& p : paths)
        if (p.type == PathType::wall_bounce && std::abs(p.length_m - expect) < 1e-12) found = true;
    CHECK(found);

    for (const auto& p : paths) {
        CHECK(p.length_m >= distance(source, element) - 1e-12);  // no shortcut paths
        CHECK(std::abs(p.reflection) <= 1.0 + 1e-12);
    }
}

TEST_CASE("trace_paths: length multisets are reciprocal") {
    RayScene scene = empty_room();
    TargetBox box;
    box.center_x = 3.0;
    box.center_y = 2.0;
    scene.target = box;
    const Vec3 a{1.0, 1.0, 0.5};
    const Vec3 b{4.0, 3.9, 3.0};
    auto la = trace_paths(scene, a, b, 3.5e9);
    auto lb = trace_paths(scene, b, a, 3.5e9);
    REQUIRE(la.size() == lb.size());
    std::vector<double> da, db;
    for (const auto& p : la) da.push_back(p.length_m);
    for (const auto& p : lb) db.push_back(p.length_m);
    std::sort(da.begin(), da.end());
    std::sort(db.begin(), db.end());
    for (std::size_t i = 0; i < da.size(); ++i) CHECK(da[i] == doctest::Approx(db[i]).epsilon(1e-12));
}

namespace {

LisConfig small_lis() {
    LisConfig lis = LisConfig::for_room(Room{}, 24, 24, 3.5e9);
    return lis;
}

DeviceSet one_device(const Vec3& p) {
    DeviceSet d;
    d.count = 1;
    d.positions = {p};
    return d;
}

} // namespace

TEST_CASE("field: line-of-sight magnitude strictly decays with distance") {
    RayScene scene = empty_room();
    scene.wall_bounces = false;
    const LisConfig lis = small_lis();
    const Vec3 dev{lis.origin_x, lis.origin_y, 0.0};  // under element (0,0)
    const FieldGrid field = field_at_elements(scene, one_device(dev), lis);

    // along row 0 the element distance grows monotonically
    for (std::size_t c = 1; c < lis.cols; ++c)
        CHECK(std::abs(field.at(0, c)) < std::abs(field.at(0, c - 1)));
}

TEST_CASE("field: two co-located devices double the field exactly") {
    RayScene scene = empty_room();
    const LisConfig lis = small_lis();
    const Vec3 p{2.0, 2.5, 1.0};
    const FieldGrid one = field_at_elements(scene, one_device(p), lis);
    DeviceSet both = one_device(p);
    both.count = 2;
    both.positions.push_back(p);
    const FieldGrid two = field_at_elements(scene, both, lis);
    for (std::size_t i = 0; i < one.size(); ++i) CHECK(two.data()[i] == 2.0 * one.data()[i]);
}

TEST_CASE("field: per-device superposition is exact") {
    RayScene scene = empty_room();
    const LisConfig lis = small_lis();
    const Vec3 p1{2.0, 2.5, 1.0}, p2{1.1, 3.2, 0.4};
    const FieldGrid f1 = field_at_elements(scene, one_device(p1), lis);
    const FieldGrid f2 = field_at_elements(scene, one_device(p2), lis);
    DeviceSet both = one_device(p1);
    both.count = 2;
    both.positions.push_back(p2);
    const FieldGrid f12 = field_at_elements(scene, both, lis);
    for (std::size_t i = 0; i < f1.size(); ++i)
        CHECK(std::abs(f12.data()[i] - (f1.data()[i] + f2.data()[i])) < 1e-15);
}

TEST_CASE("field: target changes only occlusion and bounce terms") {
    RayScene without = empty_room();
    RayScene with = without;
    TargetBox box;
    box.center_x = 2.35;
    box.center_y = 2.35;
    with.target = box;
    const LisConfig lis = small_lis();
    const Vec3 dev{1.0, 1.0, 0.5};

    const FieldGrid f_with = field_at_elements(with, one_device(dev), lis);
    const FieldGrid f_without = field_at_elements(without, one_device(dev), lis);

    // oracle: recompute the difference from the path sets directly
    const double lambda = lis.wavelength_m();
    const double tx_amp = std::sqrt(std::pow(10.0, (20.0 - 30.0) / 10.0));
    for (std::size_t r = 0; r < lis.rows; r += 5) {
        for (std::size_t c = 0; c < lis.cols; c += 5) {
            const Vec3 el = lis.element_position(r, c);
            const auto sum_paths = [&](const RayScene& s) {
                cdouble acc{0.0, 0.0};
                for (const auto& p : trace_paths(s, dev, el, lis.carrier_f_hz))
                    acc += tx_amp * p.gain() * std::polar(1.0, -2.0 * kPi * p.length_m / lambda);
                return acc;
            };
            const cdouble diff_expected = sum_paths(with) - sum_paths(without);
            const cdouble diff = f_with.at(r, c) - f_without.at(r, c);
            CHECK(std::abs(diff - diff_expected) < 1e-12);
        }
    }
}

TEST_CASE("received signal: noiseless output is a fixed scaling") {
    RayScene scene = empty_room();
    const LisConfig lis = small_lis();
    const FieldGrid field = field_at_elements(scene, one_device({2.0, 2.0, 1.0}), lis);
    Rng rng(1);
    const ComplexGrid y = received_signal(field, 0.0, rng, lis);
    const double scale = signal_scale(lis);
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(y.data()[i] == scale * field.data()[i]);
}

TEST_CASE("received signal: scaling constant at 3.5 GHz") {
    LisConfig lis = small_lis();
    // sqrt(lambda^2 / (4 pi * 120 pi)) with lambda = 0.0856550 m = 1.24446e-3
    CHECK(signal_scale(lis) == doctest::Approx(1.24446e-3).epsilon(1e-4));
}

TEST_CASE("received signal: pure-noise variance matches sigma^2") {
    const LisConfig lis = small_lis();
    FieldGrid zero(lis.rows, lis.cols);
    Rng rng(77);
    double acc = 0.0;
    std::size_t n = 0;
    for (int round = 0; round < 200; ++round) {
        const ComplexGrid y = received_signal(zero, 1.0, rng, lis);
        for (const cdouble& v : y.data()) acc += std::norm(v);
        n += y.size();
    }
    CHECK(n >= 100000);
    CHECK(std::abs(acc / static_cast<double>(n) - 1.0) < 0.02);
}

TEST_CASE("snr: zero field and zero sigma edge cases") {
    const LisConfig lis = small_lis();
    FieldGrid zero(lis.rows, lis.cols);
    CHECK(average_snr(zero, 1.0, lis) == 0.0);
    CHECK_THROWS_AS(average_snr(zero, 0.0, lis), std::invalid_argument);
    CHECK_THROWS_AS(sigma_for_target_snr(zero, 10.0, lis), std::invalid_argument);
}

TEST_CASE("snr: quadratic in the field magnitude") {
    RayScene scene = empty_room();
    const LisConfig lis = small_lis();
    FieldGrid field = field_at_elements(scene, one_device({2.0, 2.0, 1.0}), lis);
    const double base = average_snr(field, 0.01, lis);
    for (cdouble& v : field.data()) v *= 2.0;
    CHECK(average_snr(field, 0.01, lis) == doctest::Approx(4.0 * base).epsilon(1e-12));
}

TEST_CASE("snr: closed form for a uniform unit field") {
    const LisConfig lis = small_lis();
    FieldGrid ones(lis.rows, lis.cols);
    for (cdouble& v : ones.data()) v = 1.0;
    const double lambda = lis.wavelength_m();
    const double sigma2 = sigma_for_target_snr(ones, 1.0, lis);
    // gamma = lambda^2 * A / (4 pi Z0 A sigma^2) -> sigma^2 = lambda^2/(4 pi Z0)
    CHECK(sigma2 == doctest::Approx(lambda * lambda / (4.0 * kPi * kFreeSpaceImpedance)).epsilon(1e-12));
}

TEST_CASE("snr: sigma_for_target_snr round-trips through average_snr") {
    RayScene scene = empty_room();
    const LisConfig lis = small_lis();
    const FieldGrid field = field_at_elements(scene, one_device({1.4, 3.0, 0.7}), lis);
    for (double target_db : {0.0, 10.0, 20.0}) {
        const double target = db_to_linear(target_db);
        const double sigma2 = sigma_for_target_snr(field, target, lis);
        const double back = average_snr(field, sigma2, lis);
        CHECK(std::abs(back - target) / target < 1e-9);
        CHECK(average_snr_db(field, sigma2, lis) == doctest::Approx(target_db).epsilon(1e-9));
    }
    // higher target SNR needs less noise
    CHECK(sigma_for_target_snr(field, db_to_linear(40.0), lis) <
          sigma_for_target_snr(field, db_to_linear(0.0), lis));
}
