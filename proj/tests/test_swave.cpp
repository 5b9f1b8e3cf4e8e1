/*
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <cmath>
#include <random>

#include "pat/swave.hpp"
#include "pat/waveform.hpp"

using namespace pat;

namespace {

AcousticConfig acoustic(double rate, int depth) {
    AcousticConfig ac;
    ac.sound_speed = 1500.0;
    ac.sample_rate = rate;
    ac.sample_depth = depth;
    return ac;
}

} // namespace

TEST_CASE("tau is the signed rounded sample offset from the calibration range") {
    AcousticConfig ac = acoustic(40.0e6, 1024);
    CHECK(swave_tau(0.0375, 0.03, ac) == 200);
    CHECK(swave_tau(0.0225, 0.03, ac) == -200);
    CHECK(swave_tau(0.03, 0.03, ac) == 0);
}

TEST_CASE("amplitude is unity at the calibration distance") {
    const double k = 0.03 * 0.03;
    CHECK(swave_amplitude(0.03, k, 1.0) == 1.0);
    CHECK(swave_amplitude(0.03, k, 2.5) == 2.5);
    CHECK(swave_amplitude(0.06, k, 1.0) == doctest::Approx(0.25));
    CHECK_THROWS_AS(swave_amplitude(0.0, k, 1.0), Error);
}

TEST_CASE("a unit source at the array center reproduces the template on every channel") {
    const int depth = 64;
    AcousticConfig ac = acoustic(40.0e6, depth);
    ArrayGeometry geom = ArrayGeometry::ring(4, 0.05);
    RoiGrid grid = RoiGrid::square(1, 0.001);
    std::vector<double> s = n_pulse(depth, 32.0, 2.0);
    SwaveParams params;
    params.calibration_distance = 0.05;

    Mat<double> field(1, 1);
    field(0, 0) = 1.0;
    SensorData out = swave_forward(field, geom, grid, ac, params, s);
    REQUIRE(out.num_sensors() == 4);
    REQUIRE(out.sample_depth() == std::size_t(depth));
    for (std::size_t i = 0; i < 4; ++i)
        for (int t = 0; t < depth; ++t)
            REQUIRE(out.samples(i, std::size_t(t)) == s[std::size_t(t)]);
}

TEST_CASE("forward synthesis is additive over sources") {
    const int depth = 96;
    AcousticConfig ac = acoustic(20.0e6, depth);
    ArrayGeometry geom = ArrayGeometry::ring(6, 0.03);
    RoiGrid grid = RoiGrid::square(4, 0.01);
    std::vector<double> s = n_pulse(depth, 40.0, 2.5);
    SwaveParams params;
    params.calibration_distance = 0.03;

    Mat<double> a(4, 4), b(4, 4), both(4, 4);
    a(1, 2) = 2.0;
    b(3, 0) = -1.5;
    both(1, 2) = 2.0;
    both(3, 0) = -1.5;

    SensorData fa = swave_forward(a, geom, grid, ac, params, s);
    SensorData fb = swave_forward(b, geom, grid, ac, params, s);
    SensorData fc = swave_forward(both, geom, grid, ac, params, s);
    for (std::size_t k = 0; k < fc.samples.size(); ++k)
        REQUIRE(fc.samples.data()[k] ==
                fa.samples.data()[k] + fb.samples.data()[k]);
}

TEST_CASE("skipping zero pixels and idle samples changes nothing") {
    const int depth = 128;
    AcousticConfig ac = acoustic(20.0e6, depth);
    ArrayGeometry geom = ArrayGeometry::ring(3, 0.04);
    RoiGrid grid = RoiGrid::square(3, 0.02);
    std::vector<double> s = n_pulse(depth, 40.0, 3.0);
    SwaveParams params;
    params.calibration_distance = 0.04;

    std::mt19937 rng(23);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Mat<double> field(3, 3);
    for (std::size_t k = 0; k < field.size(); ++k)
        field.data()[k] = (k % 2 == 0) ? 0.0 : dist(rng);

    SensorData fast = swave_forward(field, geom, grid, ac, params, s);

    // Naive reference: every pixel, every sample, explicit wraparound.
    std::vector<Vec2> sensors = sensor_offsets(geom);
    const double k_num = params.effective_k();
    Mat<double> naive(sensors.size(), std::size_t(depth));
    for (std::size_t i = 0; i < sensors.size(); ++i) {
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) {
                Vec2 off = grid.pixel_offset(r, c);
                const double dx = sensors[i].x - off.x;
                const double dy = sensors[i].y - off.y;
                const double d_p = std::sqrt(dx * dx + dy * dy);
                const double amp =
                    swave_amplitude(d_p, k_num, field(std::size_t(r), std::size_t(c)));
                const std::int64_t tau = swave_tau(d_p, params.calibration_distance, ac);
                for (int t = 0; t < depth; ++t) {
                    std::int64_t j = (t + tau) % depth;
                    if (j < 0)
                        j += depth;
                    naive(i, std::size_t(j)) += amp * s[std::size_t(t)];
                }
            }
        }
    }
    for (std::size_t k = 0; k < fast.samples.size(); ++k)
        REQUIRE(fast.samples.data()[k] == naive.data()[k]);
}

TEST_CASE("circular mode conserves what zero padding drops") {
    const int depth = 48;
    AcousticConfig ac = acoustic(40.0e6, depth);
    ArrayGeometry geom = ArrayGeometry::ring(1, 0.03);
    RoiGrid grid = RoiGrid::square(1, 0.001);
    std::vector<double> s = n_pulse(depth, 40.0, 3.0);
    SwaveParams params;
    params.calibration_distance = 0.0294; // tau = +16, pushes the tail past the end

    Mat<double> field(1, 1);
    field(0, 0) = 1.0;

    SensorData wrap = swave_forward(field, geom, grid, ac, params, s);
    params.shift_mode = ShiftMode::ZeroPad;
    SensorData pad = swave_forward(field, geom, grid, ac, params, s);

    double wrap_energy = 0.0, pad_energy = 0.0, src_energy = 0.0;
    const double amp = swave_amplitude(0.03, params.effective_k(), 1.0);
    for (int t = 0; t < depth; ++t) {
        wrap_energy += std::abs(wrap.samples(0, std::size_t(t)));
        pad_energy += std::abs(pad.samples(0, std::size_t(t)));
        src_energy += std::abs(amp * s[std::size_t(t)]);
    }
    CHECK(wrap_energy == doctest::Approx(src_energy));
    CHECK(pad_energy < 0.9 * wrap_energy);
    // The wrapped lobe lands at the head of the trace.
    bool head_nonzero = false;
    for (int t = 0; t < 12; ++t)
        head_nonzero = head_nonzero || wrap.samples(0, std::size_t(t)) != 0.0;
    CHECK(head_nonzero);
    for (int t = 0; t < 12; ++t)
        CHECK(pad.samples(0, std::size_t(t)) == 0.0);
}

TEST_CASE("a pixel on top of a sensor is degenerate") {
    const int depth = 32;
    AcousticConfig ac = acoustic(40.0e6, depth);
    ArrayGeometry geom = ArrayGeometry::linear(3, 1.0e-3, 0.0);
    RoiGrid grid = RoiGrid::square(1, 0.001);
    std::vector<double> s = n_pulse(depth, 16.0, 2.0);
    Mat<double> field(1, 1);
    field(0, 0) = 1.0;
    SwaveParams params;
    CHECK_THROWS_AS(swave_forward(field, geom, grid, ac, params, s), Error);
}

TEST_CASE("forward synthesis validates shapes") {
    const int depth = 32;
    AcousticConfig ac = acoustic(40.0e6, depth);
    ArrayGeometry geom = ArrayGeometry::ring(4, 0.05);
    RoiGrid grid = RoiGrid::square(2, 0.01);
    std::vector<double> s = n_pulse(16, 8.0, 2.0); // wrong length
    Mat<double> field(2, 2);
    SwaveParams params;
    CHECK_THROWS_AS(swave_forward(field, geom, grid, ac, params, s), Error);

    std::vector<double> ok = n_pulse(depth, 8.0, 2.0);
    Mat<double> wrong(3, 2);
    CHECK_THROWS_AS(swave_forward(wrong, geom, grid, ac, params, ok), Error);
}
