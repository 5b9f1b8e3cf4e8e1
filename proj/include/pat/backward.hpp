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

#ifndef PAT_BACKWARD_HPP
#define PAT_BACKWARD_HPP

#include "pat/geometry.hpp"
#include "pat/types.hpp"

namespace pat {

/// Delay and sum: pixel j accumulates S(i, delay(i, j)) over all sensors.
/// The sum keeps its sign; take the magnitude (normalize_image) only when
/// rendering, since iterative correction needs the signed field. Delays at
/// or beyond the sample depth contribute nothing.
Mat<double> das(const SensorData& data, const DelayTable& table, const RoiGrid& grid);

/// Delay multiply and sum: couples every sensor pair through the signed
/// square root, which suppresses incoherent single-channel energy.
/// Computed through the closed form ((sum u)^2 - sum u^2) / 2 with
/// u_i = sign(v_i) sqrt(|v_i|), identical to the pairwise definition.
Mat<double> dmas(const SensorData& data, const DelayTable& table, const RoiGrid& grid);

/// Coherence-factor weighted delay and sum. The factor
/// (sum v)^2 / (N sum v^2) lies in [0, 1], so magnitudes never exceed
/// plain delay and sum. An all-zero aperture gets factor 0.
Mat<double> das_cf(const SensorData& data, const DelayTable& table, const RoiGrid& grid);

/// Magnitude image scaled so the largest absolute value maps to 256.
/// An identically zero field stays zero.
Image normalize_image(const Mat<double>& raw);

} // namespace pat

#endif // PAT_BACKWARD_HPP
