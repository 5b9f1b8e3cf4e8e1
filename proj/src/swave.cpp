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

#include "pat/swave.hpp"

#include <cmath>

#include "pat/waveform.hpp"

namespace pat {

void SwaveParams::validate() const {
    if (!(calibration_distance > 0.0) || !std::isfinite(calibration_distance))
        fail(Errc::InvalidArgument, "calibration distance must be positive");
    if (k && (!std::isfinite(*k) || !(*k > 0.0)))
        fail(Errc::InvalidArgument, "amplitude numerator k must be positive");
}

std::int64_t swave_tau(double d_p, double d_s, const AcousticConfig& acoustic) {
    return round_half_away(delay_samples(d_p - d_s, acoustic));
}

double swave_amplitude(double d_p, double k, double intensity) {
    if (d_p == 0.0)
        fail(Errc::DegenerateDistance, "pixel coincides with a sensor");
    return k * intensity / (d_p * d_p);
}

SensorData swave_forward(const Mat<double>& intensity, const ArrayGeometry& geom,
                         const RoiGrid& grid, const AcousticConfig& acoustic,
                         const SwaveParams& params,
                         const std::vector<double>& waveform) {
    geom.validate();
    grid.validate();
    acoustic.validate();
    params.validate();
    if (intensity.rows() != std::size_t(grid.n) || intensity.cols() != std::size_t(grid.m))
        fail(Errc::DimensionMismatch, "intensity field does not match the grid");
    if (waveform.size() != std::size_t(acoustic.sample_depth))
        fail(Errc::DimensionMismatch, "waveform length must equal the sample depth");

    const std::int64_t depth = acoustic.sample_depth;
    const double d_s = params.calibration_distance;
    const double k_num = params.effective_k();

    // Same center-relative coordinates as the delay tables, so
    // round(d_p / c * f_s) of a pixel here equals its table delay.
    const double shift_x = grid.center.x - geom.center.x;
    const double shift_y = geom.kind == ArrayKind::Linear
                               ? grid.center.y - geom.baseline_y
                               : grid.center.y - geom.center.y;
    std::vector<double> off_x(static_cast<std::size_t>(grid.m));
    std::vector<double> off_y(static_cast<std::size_t>(grid.n));
    for (int c = 0; c < grid.m; ++c)
        off_x[std::size_t(c)] = (c - (grid.m - 1) / 2.0) * grid.pixel_dx() + shift_x;
    for (int r = 0; r < grid.n; ++r)
        off_y[std::size_t(r)] = (r - (grid.n - 1) / 2.0) * grid.pixel_dy() + shift_y;
    const std::vector<Vec2> sensors = sensor_offsets(geom);

    const auto [t_first, t_last] = nonzero_span(waveform);

    SensorData out;
    out.sample_rate = acoustic.sample_rate;
    out.samples = Mat<double>(sensors.size(), std::size_t(depth));

    for (std::size_t i = 0; i < sensors.size(); ++i) {
        double* acc = out.samples.row(i);
        const Vec2 s = sensors[i];
        for (int r = 0; r < grid.n; ++r) {
            const double dy = s.y - off_y[std::size_t(r)];
            const double dy2 = dy * dy;
            for (int c = 0; c < grid.m; ++c) {
                const double p = intensity(std::size_t(r), std::size_t(c));
                if (p == 0.0)
                    continue;
                const double dx = s.x - off_x[std::size_t(c)];
                const double d_p = std::sqrt(dx * dx + dy2);
                const double a = swave_amplitude(d_p, k_num, p);
                const std::int64_t tau = swave_tau(d_p, d_s, acoustic);
                if (params.shift_mode == ShiftMode::Circular) {
                    for (std::size_t t = t_first; t < t_last; ++t) {
                        std::int64_t j = (std::int64_t(t) + tau) % depth;
                        if (j < 0)
                            j += depth;
                        acc[std::size_t(j)] += a * waveform[t];
                    }
                } else {
                    for (std::size_t t = t_first; t < t_last; ++t) {
                        const std::int64_t j = std::int64_t(t) + tau;
                        if (j >= 0 && j < depth)
                            acc[std::size_t(j)] += a * waveform[t];
                    }
                }
            }
        }
    }
    return out;
}

} // namespace pat
