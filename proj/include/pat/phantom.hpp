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

#ifndef PAT_PHANTOM_HPP
#define PAT_PHANTOM_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "pat/geometry.hpp"
#include "pat/swave.hpp"
#include "pat/types.hpp"

namespace pat {

enum class TargetKind { Point, Disc };

/// One absorber. Point targets rasterize to the single nearest pixel;
/// discs light every pixel whose center lies within the radius
/// (boundary inclusive).
struct PhantomTarget {
    TargetKind kind = TargetKind::Point;
    Vec2 pos{};
    double radius = 0.0; // Disc only, meters
    double intensity = 1.0;
};

/// Scene description. All target positions must lie inside the ROI and
/// intensities must be non-negative. noise_sigma, when set, is the
/// standard deviation of Gaussian noise added to the forward channel
/// data, expressed relative to the peak absolute sample.
struct PhantomSpec {
    std::vector<PhantomTarget> targets;
    std::optional<double> noise_sigma;

    void validate(const RoiGrid& grid) const;
};

/// Rasterizes the scene onto the grid. Overlapping targets superpose.
Image gen_phantom(const PhantomSpec& spec, const RoiGrid& grid);

/// Adds zero-mean Gaussian noise with sigma = sigma_rel * max|sample|.
/// The generator is a fixed 64-bit Mersenne Twister with an explicitly
/// coded Box-Muller transform, so a given seed produces identical noise
/// on every platform.
void add_noise(SensorData& data, double sigma_rel, std::uint64_t seed);

/// Channel data computed straight from the target coordinates: each
/// point target contributes the template shifted by its exact
/// sensor-to-target delay and scaled by the spreading weight. No pixel
/// grid is involved, which makes this an independent check of the
/// grid-based forward model when targets sit on pixel centers. Disc
/// targets are not representable here and are rejected.
SensorData oracle_forward(const PhantomSpec& spec, const ArrayGeometry& geom,
                          const AcousticConfig& acoustic, const SwaveParams& params,
                          const std::vector<double>& waveform);

} // namespace pat

#endif // PAT_PHANTOM_HPP
