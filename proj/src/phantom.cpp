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

#include "pat/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace pat {

void PhantomSpec::validate(const RoiGrid& grid) const {
    grid.validate();
    for (const PhantomTarget& t : targets) {
        if (!(t.intensity >= 0.0) || !std::isfinite(t.intensity))
            fail(Errc::InvalidArgument, "target intensity must be finite and >= 0");
        if (t.kind == TargetKind::Disc && (!(t.radius >= 0.0) || !std::isfinite(t.radius)))
            fail(Errc::InvalidArgument, "disc radius must be finite and >= 0");
        if (!grid.contains(t.pos))
            fail(Errc::OutsideRoi, "target position lies outside the imaging region");
    }
    if (noise_sigma && !(*noise_sigma >= 0.0))
        fail(Errc::InvalidArgument, "noise sigma must be >= 0");
}

Image gen_phantom(const PhantomSpec& spec, const RoiGrid& grid) {
    spec.validate(grid);
    Image img;
    img.pixels = Mat<double>(std::size_t(grid.n), std::size_t(grid.m));

    for (const PhantomTarget& t : spec.targets) {
        if (t.kind == TargetKind::Point) {
            // Nearest pixel center by fractional grid index. Positions on
            // the ROI boundary sit half a pitch beyond the outermost
            // center and clamp onto it.
            const double fr =
                (t.pos.y - grid.center.y) / grid.pixel_dy() + (grid.n - 1) / 2.0;
            const double fc =
                (t.pos.x - grid.center.x) / grid.pixel_dx() + (grid.m - 1) / 2.0;
            std::int64_t rr = std::clamp<std::int64_t>(std::llround(fr), 0, grid.n - 1);
            std::int64_t cc = std::clamp<std::int64_t>(std::llround(fc), 0, grid.m - 1);
            img.pixels(std::size_t(rr), std::size_t(cc)) += t.intensity;
        } else {
            const double r2 = t.radius * t.radius;
            for (int r = 0; r < grid.n; ++r) {
                for (int c = 0; c < grid.m; ++c) {
                    const Vec2 p = grid.pixel_center(r, c);
                    const double dx = p.x - t.pos.x;
                    const double dy = p.y - t.pos.y;
                    if (dx * dx + dy * dy <= r2)
                        img.pixels(std::size_t(r), std::size_t(c)) += t.intensity;
                }
            }
        }
    }
    return img;
}

void add_noise(SensorData& data, double sigma_rel, std::uint64_t seed) {
    if (!(sigma_rel >= 0.0) || !std::isfinite(sigma_rel))
        fail(Errc::InvalidArgument, "noise sigma must be finite and >= 0");
    if (sigma_rel == 0.0 || data.samples.empty()) return;

    double peak = 0.0;
    for (double v : data.samples.data()) peak = std::max(peak, std::fabs(v));
    const double sigma = sigma_rel * peak;
    if (sigma == 0.0) return;

    // Explicit Box-Muller on mt19937_64 output; std::normal_distribution
    // is implementation-defined and would break cross-platform
    // reproducibility of seeded runs.
    std::mt19937_64 gen(seed);
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    const double inv = 1.0 / 18446744073709551616.0; // 2^-64
    bool have_spare = false;
    double spare = 0.0;
    for (double& v : data.samples.data()) {
        double z;
        if (have_spare) {
            z = spare;
            have_spare = false;
        } else {
            const double u1 = (double(gen()) + 1.0) * inv; // in (0, 1]
            const double u2 = double(gen()) * inv;         // in [0, 1)
            const double mag = std::sqrt(-2.0 * std::log(u1));
            z = mag * std::cos(kTwoPi * u2);
            spare = mag * std::sin(kTwoPi * u2);
            have_spare = true;
        }
        v += sigma * z;
    }
}

SensorData oracle_forward(const PhantomSpec& spec, const ArrayGeometry& geom,
                          const AcousticConfig& acoustic, const SwaveParams& params,
                          const std::vector<double>& waveform) {
    geom.validate();
    acoustic.validate();
    params.validate();
    if (waveform.size() != std::size_t(acoustic.sample_depth))
        fail(Errc::DimensionMismatch, "waveform length must equal the sample depth");
    for (const PhantomTarget& t : spec.targets) {
        if (t.kind != TargetKind::Point)
            fail(Errc::InvalidArgument,
                 "coordinate-space forward model supports point targets only");
        if (!(t.intensity >= 0.0) || !std::isfinite(t.intensity))
            fail(Errc::InvalidArgument, "target intensity must be finite and >= 0");
    }

    const std::size_t depth = waveform.size();
    const double d_s = params.calibration_distance;
    const double k = params.effective_k();
    const double ticks = acoustic.sample_rate / acoustic.sound_speed;
    std::vector<Vec2> sensors = sensor_positions(geom);

    SensorData out;
    out.sample_rate = acoustic.sample_rate;
    out.samples = Mat<double>(std::size_t(geom.num_sensors), depth);

    for (int i = 0; i < geom.num_sensors; ++i) {
        double* ch = out.samples.row(std::size_t(i));
        for (const PhantomTarget& t : spec.targets) {
            if (t.intensity == 0.0) continue;
            const double dx = t.pos.x - sensors[std::size_t(i)].x;
            const double dy = t.pos.y - sensors[std::size_t(i)].y;
            const double d = std::sqrt(dx * dx + dy * dy);
            if (d == 0.0)
                fail(Errc::DegenerateDistance, "target coincides with a sensor");
            const double w = k * t.intensity / (d * d);
            const std::int64_t tau = std::llround((d - d_s) * ticks);
            if (params.shift_mode == ShiftMode::Circular) {
                for (std::size_t s = 0; s < depth; ++s) {
                    std::int64_t j = (std::int64_t(s) + tau) % std::int64_t(depth);
                    if (j < 0) j += std::int64_t(depth);
                    ch[j] += w * waveform[s];
                }
            } else {
                for (std::size_t s = 0; s < depth; ++s) {
                    const std::int64_t j = std::int64_t(s) + tau;
                    if (j >= 0 && j < std::int64_t(depth)) ch[j] += w * waveform[s];
                }
            }
        }
    }
    return out;
}

} // namespace pat
