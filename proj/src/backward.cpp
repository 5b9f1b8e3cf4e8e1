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

#include "pat/backward.hpp"

#include <cmath>

namespace pat {

namespace {

void check_shapes(const SensorData& data, const DelayTable& table, const RoiGrid& grid) {
    if (data.samples.rows() != table.delays.rows())
        fail(Errc::DimensionMismatch, "sensor count does not match delay table");
    if (table.delays.cols() != grid.pixel_count())
        fail(Errc::DimensionMismatch, "grid size does not match delay table");
    if (data.samples.cols() == 0)
        fail(Errc::InvalidArgument, "sensor data has no samples");
}

} // namespace

Mat<double> das(const SensorData& data, const DelayTable& table, const RoiGrid& grid) {
    check_shapes(data, table, grid);
    const std::size_t sensors = data.num_sensors();
    const std::size_t depth = data.sample_depth();
    const std::size_t pixels = grid.pixel_count();

    Mat<double> out(std::size_t(grid.n), std::size_t(grid.m));
    for (std::size_t i = 0; i < sensors; ++i) {
        const double* row = data.samples.row(i);
        const std::uint32_t* del = table.delays.row(i);
        for (std::size_t j = 0; j < pixels; ++j) {
            const std::uint32_t d = del[j];
            if (d < depth)
                out.data()[j] += row[d];
        }
    }
    return out;
}

Mat<double> dmas(const SensorData& data, const DelayTable& table, const RoiGrid& grid) {
    check_shapes(data, table, grid);
    const std::size_t sensors = data.num_sensors();
    const std::size_t depth = data.sample_depth();
    const std::size_t pixels = grid.pixel_count();

    Mat<double> out(std::size_t(grid.n), std::size_t(grid.m));
    std::vector<double> sum(pixels, 0.0);
    std::vector<double> sum_sq(pixels, 0.0);
    for (std::size_t i = 0; i < sensors; ++i) {
        const double* row = data.samples.row(i);
        const std::uint32_t* del = table.delays.row(i);
        for (std::size_t j = 0; j < pixels; ++j) {
            const std::uint32_t d = del[j];
            if (d >= depth)
                continue;
            const double v = row[d];
            const double u = v < 0.0 ? -std::sqrt(-v) : std::sqrt(v);
            sum[j] += u;
            sum_sq[j] += u * u;
        }
    }
    for (std::size_t j = 0; j < pixels; ++j)
        out.data()[j] = 0.5 * (sum[j] * sum[j] - sum_sq[j]);
    return out;
}

Mat<double> das_cf(const SensorData& data, const DelayTable& table, const RoiGrid& grid) {
    check_shapes(data, table, grid);
    const std::size_t sensors = data.num_sensors();
    const std::size_t depth = data.sample_depth();
    const std::size_t pixels = grid.pixel_count();

    Mat<double> out(std::size_t(grid.n), std::size_t(grid.m));
    std::vector<double> sum(pixels, 0.0);
    std::vector<double> sum_sq(pixels, 0.0);
    for (std::size_t i = 0; i < sensors; ++i) {
        const double* row = data.samples.row(i);
        const std::uint32_t* del = table.delays.row(i);
        for (std::size_t j = 0; j < pixels; ++j) {
            const std::uint32_t d = del[j];
            if (d >= depth)
                continue;
            const double v = row[d];
            sum[j] += v;
            sum_sq[j] += v * v;
        }
    }
    for (std::size_t j = 0; j < pixels; ++j) {
        if (sum_sq[j] > 0.0) {
            // Cauchy-Schwarz bounds the factor by 1; the clamp only trims
            // rounding dust so the magnitude bound against plain delay and
            // sum holds exactly.
            double cf = (sum[j] * sum[j]) / (double(sensors) * sum_sq[j]);
            if (cf > 1.0)
                cf = 1.0;
            out.data()[j] = cf * sum[j];
        }
    }
    return out;
}

Image normalize_image(const Mat<double>& raw) {
    Image img;
    img.pixels = Mat<double>(raw.rows(), raw.cols());
    double peak = 0.0;
    for (std::size_t k = 0; k < raw.size(); ++k) {
        const double a = std::abs(raw.data()[k]);
        if (a > peak)
            peak = a;
    }
    if (peak > 0.0) {
        const double scale = 256.0 / peak;
        for (std::size_t k = 0; k < raw.size(); ++k)
            img.pixels.data()[k] = std::abs(raw.data()[k]) * scale;
    }
    img.value_range = std::make_pair(0.0, 256.0);
    return img;
}

} // namespace pat
