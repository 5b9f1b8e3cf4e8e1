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

#ifndef PAT_SWAVE_HPP
#define PAT_SWAVE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "pat/geometry.hpp"
#include "pat/types.hpp"

namespace pat {

enum class ShiftMode { Circular, ZeroPad };

/// Forward-model parameters. The template waveform is calibrated at
/// distance d_s from a sensor; a pixel at distance d_p contributes the
/// template shifted by tau(d_p) and scaled by amplitude(d_p).
struct SwaveParams {
    double calibration_distance = 0.03; // d_s, meters
    std::optional<double> k;            // amplitude numerator, defaults to d_s^2
    ShiftMode shift_mode = ShiftMode::Circular;

    double effective_k() const {
        return k ? *k : calibration_distance * calibration_distance;
    }
    void validate() const;
};

/// Signed sample shift between a pixel at d_p and the calibration
/// distance: round((d_p - d_s) / c * f_s). Negative when the pixel is
/// closer than d_s.
std::int64_t swave_tau(double d_p, double d_s, const AcousticConfig& acoustic);

/// Spherical-spreading weight k * intensity / d_p^2. With the default
/// k = d_s^2 a pixel at exactly d_p = d_s has unit gain.
double swave_amplitude(double d_p, double k, double intensity);

/// Synthesizes per-sensor channel data from an intensity field: each
/// sensor sums, over pixels in row-major order, the template shifted by
/// tau and scaled by amplitude. Pixels with zero intensity are skipped;
/// this never changes the result since their contribution is zero.
/// Output is num_sensors x sample_depth. A pixel coinciding with a
/// sensor position is an error (the spreading weight diverges).
SensorData swave_forward(const Mat<double>& intensity, const ArrayGeometry& geom,
                         const RoiGrid& grid, const AcousticConfig& acoustic,
                         const SwaveParams& params,
                         const std::vector<double>& waveform);

} // namespace pat

#endif // PAT_SWAVE_HPP
