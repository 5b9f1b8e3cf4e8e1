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

#include "pat/hwmodel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace pat {

namespace {

int ceil_log2(int n) {
    return n <= 1 ? 0 : std::bit_width(unsigned(n - 1));
}

std::int64_t sat_add(std::int64_t a, std::int64_t b, std::int64_t limit,
                     std::uint64_t& count) {
    std::int64_t s = a + b;
    if (s > limit) {
        ++count;
        return limit;
    }
    if (s < -limit - 1) {
        ++count;
        return -limit - 1;
    }
    return s;
}

/// Per-execution-cycle view of one lane: which stored table row the
/// sensor reads, through which address mode, and its data row.
struct LaneCtx {
    const std::uint32_t* delay_row = nullptr;
    const std::uint16_t* phase_row = nullptr;
    const std::uint16_t* amp_row = nullptr;
    AmuMode mode = AmuMode::Identity;
    int sensor = 0;
};

std::vector<LaneCtx> lane_group(const HwTables& tables, const ExecSchedule& sched,
                                int cc) {
    std::vector<LaneCtx> group(std::size_t(sched.lanes));
    for (int lane = 0; lane < sched.lanes; ++lane) {
        int sensor = sched.sensor_at(cc * sched.lanes + lane);
        const SensorFold& sf = tables.delay.map.mapping[std::size_t(sensor)];
        LaneCtx& ctx = group[std::size_t(lane)];
        ctx.delay_row = tables.delay.tables.row(std::size_t(sf.stored_index));
        if (!tables.phase.empty())
            ctx.phase_row = tables.phase.row(std::size_t(sf.stored_index));
        if (!tables.amplitude.empty())
            ctx.amp_row = tables.amplitude.row(std::size_t(sf.stored_index));
        ctx.mode = sf.mode;
        ctx.sensor = sensor;
    }
    return group;
}

} // namespace

void FixedPointSpec::validate(int num_sensors) const {
    if (delay_bits < 1 || delay_bits > 31)
        fail(Errc::InvalidArgument, "delay bit width out of range");
    if (phase_bits < 2 || phase_bits > 16)
        fail(Errc::InvalidArgument, "phase bit width out of range");
    if (amplitude_bits < 1 || amplitude_bits > 16)
        fail(Errc::InvalidArgument, "amplitude bit width out of range");
    if (sample_bits < 2 || sample_bits > 24)
        fail(Errc::InvalidArgument, "sample bit width out of range");
    if (accumulator_bits < 8 || accumulator_bits > 32)
        fail(Errc::InvalidArgument, "accumulator bit width out of range");
    if (norm_shift < 1 || norm_shift > 20)
        fail(Errc::InvalidArgument, "normalization shift out of range");
    if (amplitude_scale_shift && (*amplitude_scale_shift < 0 || *amplitude_scale_shift > 40))
        fail(Errc::InvalidArgument, "amplitude scale shift out of range");
    if (lr_shift < 0 || lr_shift > 30)
        fail(Errc::InvalidArgument, "learning-rate shift out of range");
    if (rescale_shift < 8 || rescale_shift > 30)
        fail(Errc::InvalidArgument, "rescale shift out of range");
    if (num_sensors < 1)
        fail(Errc::InvalidArgument, "sensor count must be positive");
    if (sample_bits + ceil_log2(num_sensors) > accumulator_bits)
        fail(Errc::InvalidArgument,
             "accumulator too narrow for the full-array sample sum");
}

ExecSchedule ExecSchedule::identity(int num_sensors, int lanes) {
    ExecSchedule s;
    s.lanes = lanes;
    s.validate(num_sensors);
    return s;
}

void ExecSchedule::validate(int num_sensors) const {
    if (lanes < 1)
        fail(Errc::InvalidArgument, "lane count must be positive");
    if (num_sensors < 1 || num_sensors % lanes != 0)
        fail(Errc::InvalidArgument, "lane count must divide the sensor count");
    if (assignment.empty()) return;
    if (int(assignment.size()) != num_sensors)
        fail(Errc::InvalidArgument, "lane assignment size must equal the sensor count");
    std::vector<bool> seen(std::size_t(num_sensors), false);
    for (int s : assignment) {
        if (s < 0 || s >= num_sensors || seen[std::size_t(s)])
            fail(Errc::InvalidArgument, "lane assignment must be a permutation");
        seen[std::size_t(s)] = true;
    }
}

std::vector<RomWindow> rom_enable_windows(const FoldMap& map, const ExecSchedule& sched) {
    sched.validate(map.num_sensors);
    const int cc_count = sched.cc_count(map.num_sensors);
    std::vector<RomWindow> out(static_cast<std::size_t>(cc_count));
    for (int cc = 0; cc < cc_count; ++cc) {
        int lo = std::numeric_limits<int>::max();
        int hi = -1;
        for (int lane = 0; lane < sched.lanes; ++lane) {
            int sensor = sched.sensor_at(cc * sched.lanes + lane);
            int idx = map.mapping[std::size_t(sensor)].stored_index;
            lo = std::min(lo, idx);
            hi = std::max(hi, idx);
        }
        out[std::size_t(cc)] = RomWindow{lo, hi};
    }
    return out;
}

HwTables quantize_tables(const ArrayGeometry& geom, const RoiGrid& grid,
                         const AcousticConfig& acoustic, const SwaveParams& params,
                         FoldKind fold, const FixedPointSpec& spec) {
    spec.validate(geom.num_sensors);
    params.validate();

    HwTables tables;
    tables.spec = spec;
    tables.fold = fold;

    DelayTable full = compute_delay_table(geom, grid, acoustic, spec.delay_bits);
    tables.delay = fold_tables(full, geom, grid, fold);
    tables.delay_overflow = full.overflow_count;

    const FoldMap& map = tables.delay.map;
    const int n = grid.n;
    const int m = grid.m;
    const std::size_t pixels = std::size_t(n) * std::size_t(m);
    const int stored = map.stored_count();

    // Same center-relative offsets as the delay table, so every stored
    // code is derived from bit-identical distances.
    const double shift_x = grid.center.x - geom.center.x;
    const double shift_y = geom.kind == ArrayKind::Linear
                               ? grid.center.y - geom.baseline_y
                               : grid.center.y - geom.center.y;
    std::vector<double> off_x(static_cast<std::size_t>(m));
    std::vector<double> off_y(static_cast<std::size_t>(n));
    for (int c = 0; c < m; ++c)
        off_x[std::size_t(c)] = (c - (m - 1) / 2.0) * grid.pixel_dx() + shift_x;
    for (int r = 0; r < n; ++r)
        off_y[std::size_t(r)] = (r - (n - 1) / 2.0) * grid.pixel_dy() + shift_y;
    std::vector<Vec2> sensors = sensor_offsets(geom);

    const double d_s = params.calibration_distance;
    const double k = params.effective_k();
    const double tick = acoustic.sample_rate / acoustic.sound_speed;
    const std::int64_t phase_max = (std::int64_t(1) << spec.phase_bits) - 1;
    const std::int32_t bias = spec.phase_bias();
    const std::uint16_t amp_max = std::uint16_t((1u << spec.amplitude_bits) - 1);

    Mat<double> gain(std::size_t(stored), pixels);
    Mat<std::int64_t> tau(std::size_t(stored), pixels);
    double max_gain = 0.0;
    for (int s = 0; s < stored; ++s) {
        const Vec2 sp = sensors[std::size_t(map.stored_ids[std::size_t(s)])];
        for (int r = 0; r < n; ++r) {
            const double dy = sp.y - off_y[std::size_t(r)];
            const double dy2 = dy * dy;
            for (int c = 0; c < m; ++c) {
                const double dx = sp.x - off_x[std::size_t(c)];
                const double d = std::sqrt(dx * dx + dy2);
                if (d == 0.0)
                    fail(Errc::DegenerateDistance,
                         "pixel coincides with a sensor; amplitude table diverges");
                const std::size_t j = std::size_t(r) * m + c;
                gain(std::size_t(s), j) = k / (d * d);
                tau(std::size_t(s), j) = round_half_away((d - d_s) * tick);
                max_gain = std::max(max_gain, gain(std::size_t(s), j));
            }
        }
    }

    tables.max_gain = max_gain;
    tables.amp_scale = double(amp_max) / max_gain;
    tables.phase = Mat<std::uint16_t>(std::size_t(stored), pixels);
    tables.amplitude = Mat<std::uint16_t>(std::size_t(stored), pixels);
    for (std::size_t i = 0; i < gain.data().size(); ++i) {
        std::int64_t code = tau.data()[i] + bias;
        if (code < 0) {
            code = 0;
            ++tables.phase_overflow;
        } else if (code > phase_max) {
            code = phase_max;
            ++tables.phase_overflow;
        }
        tables.phase.data()[i] = std::uint16_t(code);

        std::int64_t a = std::llround(gain.data()[i] * tables.amp_scale);
        if (a > amp_max) {
            a = amp_max;
            ++tables.amplitude_overflow;
        }
        tables.amplitude.data()[i] = std::uint16_t(a);
    }
    return tables;
}

std::uint16_t hw_phase_lookup(const HwTables& tables, int sensor, int r, int c) {
    const FoldMap& map = tables.delay.map;
    if (sensor < 0 || sensor >= map.num_sensors)
        fail(Errc::InvalidArgument, "sensor index out of range");
    const SensorFold& sf = map.mapping[std::size_t(sensor)];
    PixelRef p = amu_apply(sf.mode, r, c, map.grid_n, map.grid_m);
    return tables.phase(std::size_t(sf.stored_index),
                        std::size_t(p.r) * map.grid_m + p.c);
}

std::uint16_t hw_amplitude_lookup(const HwTables& tables, int sensor, int r, int c) {
    const FoldMap& map = tables.delay.map;
    if (sensor < 0 || sensor >= map.num_sensors)
        fail(Errc::InvalidArgument, "sensor index out of range");
    const SensorFold& sf = map.mapping[std::size_t(sensor)];
    PixelRef p = amu_apply(sf.mode, r, c, map.grid_n, map.grid_m);
    return tables.amplitude(std::size_t(sf.stored_index),
                            std::size_t(p.r) * map.grid_m + p.c);
}

QuantizedSensorData quantize_sensor_data(const SensorData& data, int sample_bits) {
    if (sample_bits < 2 || sample_bits > 24)
        fail(Errc::InvalidArgument, "sample bit width out of range");
    if (data.samples.empty())
        fail(Errc::InvalidArgument, "sensor data is empty");
    double peak = 0.0;
    for (double v : data.samples.data()) peak = std::max(peak, std::fabs(v));
    const double limit = double((std::int64_t(1) << (sample_bits - 1)) - 1);

    QuantizedSensorData q;
    q.bits = sample_bits;
    q.scale = peak > 0.0 ? limit / peak : 1.0;
    q.samples = Mat<std::int32_t>(data.samples.rows(), data.samples.cols());
    for (std::size_t i = 0; i < data.samples.data().size(); ++i)
        q.samples.data()[i] = std::int32_t(std::llround(data.samples.data()[i] * q.scale));
    return q;
}

QuantizedSeries quantize_waveform(const std::vector<double>& s, int sample_bits) {
    if (sample_bits < 2 || sample_bits > 24)
        fail(Errc::InvalidArgument, "sample bit width out of range");
    if (s.empty())
        fail(Errc::InvalidArgument, "waveform is empty");
    double peak = 0.0;
    for (double v : s) peak = std::max(peak, std::fabs(v));
    const double limit = double((std::int64_t(1) << (sample_bits - 1)) - 1);

    QuantizedSeries q;
    q.bits = sample_bits;
    q.scale = peak > 0.0 ? limit / peak : 1.0;
    q.q.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        q.q[i] = std::int32_t(std::llround(s[i] * q.scale));

    std::size_t first = 0;
    std::size_t last = q.q.size();
    while (first < last && q.q[first] == 0) ++first;
    while (last > first && q.q[last - 1] == 0) --last;
    if (first == last) {
        q.active_first = 0;
        q.active_last = 0;
    } else {
        q.active_first = first;
        q.active_last = last;
    }
    return q;
}

HwDasResult hw_das(const Mat<std::int32_t>& samples, const HwTables& tables,
                   const ExecSchedule& sched, bool finalize) {
    const FoldMap& map = tables.delay.map;
    const int N = map.num_sensors;
    tables.spec.validate(N);
    sched.validate(N);
    if (int(samples.rows()) != N)
        fail(Errc::DimensionMismatch, "sample row count must equal the sensor count");
    const std::size_t depth = samples.cols();
    const int n = map.grid_n;
    const int m = map.grid_m;
    const std::int64_t limit = tables.spec.acc_limit();
    const int cc_count = sched.cc_count(N);

    std::vector<std::int64_t> acc(std::size_t(n) * std::size_t(m), 0);
    HwDasResult res;

    for (int cc = 0; cc < cc_count; ++cc) {
        std::vector<LaneCtx> group = lane_group(tables, sched, cc);
        std::vector<const std::int32_t*> rows(group.size());
        for (std::size_t l = 0; l < group.size(); ++l)
            rows[l] = samples.row(std::size_t(group[l].sensor));
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < m; ++c) {
                std::int64_t& a = acc[std::size_t(r) * m + c];
                for (std::size_t l = 0; l < group.size(); ++l) {
                    PixelRef p = amu_apply(group[l].mode, r, c, n, m);
                    std::uint32_t d = group[l].delay_row[std::size_t(p.r) * m + p.c];
                    if (d < depth) {
                        a += rows[l][d];
                        if (a > limit || a < -limit - 1)
                            fail(Errc::AccumulatorOverflow,
                                 "backward accumulator exceeded its bit width");
                    }
                }
                ++res.steps;
            }
        }
    }

    res.accum = Mat<std::int32_t>(std::size_t(n), std::size_t(m));
    std::int64_t mx = 0;
    for (std::size_t i = 0; i < acc.size(); ++i) {
        res.accum.data()[i] = std::int32_t(acc[i]);
        mx = std::max<std::int64_t>(mx, std::llabs(acc[i]));
    }
    res.max_abs = mx;
    if (finalize) {
        // Round-to-nearest division: a truncating divider would bias every
        // pixel half a code low, and the iterative loop integrates such a
        // bias into a visible background pedestal.
        res.image = Mat<std::int32_t>(std::size_t(n), std::size_t(m));
        if (mx > 0) {
            for (std::size_t i = 0; i < acc.size(); ++i)
                res.image.data()[i] = std::int32_t(
                    ((std::llabs(acc[i]) << tables.spec.norm_shift) + mx / 2) / mx);
        }
    }
    return res;
}

Mat<double> exact_normalized(const Mat<std::int32_t>& accum, int norm_shift) {
    Mat<double> out(accum.rows(), accum.cols());
    std::int64_t mx = 0;
    for (std::int32_t v : accum.data()) mx = std::max<std::int64_t>(mx, std::llabs(std::int64_t(v)));
    if (mx == 0) return out;
    const double scale = double(std::int64_t(1) << norm_shift) / double(mx);
    for (std::size_t i = 0; i < accum.data().size(); ++i)
        out.data()[i] = std::fabs(double(accum.data()[i])) * scale;
    return out;
}

HwSwaveResult hw_swave(const Mat<std::int32_t>& image, const HwTables& tables,
                       const ExecSchedule& sched, const QuantizedSeries& waveform) {
    const FoldMap& map = tables.delay.map;
    const int N = map.num_sensors;
    tables.spec.validate(N);
    sched.validate(N);
    const int n = map.grid_n;
    const int m = map.grid_m;
    if (int(image.rows()) != n || int(image.cols()) != m)
        fail(Errc::DimensionMismatch, "image shape must match the table grid");
    if (waveform.q.empty())
        fail(Errc::InvalidArgument, "quantized waveform is empty");

    const std::int64_t depth = std::int64_t(waveform.q.size());
    const std::int64_t limit = tables.spec.acc_limit();
    const int shift = tables.spec.effective_amp_shift();
    const std::int32_t bias = tables.spec.phase_bias();
    const int cc_count = sched.cc_count(N);

    Mat<std::int64_t> acc(static_cast<std::size_t>(N), static_cast<std::size_t>(depth));
    HwSwaveResult res;

    for (int cc = 0; cc < cc_count; ++cc) {
        std::vector<LaneCtx> group = lane_group(tables, sched, cc);
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < m; ++c) {
                const std::int32_t value = image(std::size_t(r), std::size_t(c));
                for (std::size_t l = 0; l < group.size(); ++l) {
                    const LaneCtx& g = group[l];
                    PixelRef p = amu_apply(g.mode, r, c, n, m);
                    const std::size_t j = std::size_t(p.r) * m + p.c;
                    std::int64_t w = (std::int64_t(g.amp_row[j]) * value) >> shift;
                    if (w > limit) {
                        w = limit;
                        ++res.saturation_count;
                    } else if (w < -limit - 1) {
                        w = -limit - 1;
                        ++res.saturation_count;
                    }
                    if (w == 0) continue;
                    const std::int64_t tau = std::int64_t(g.phase_row[j]) - bias;
                    std::int64_t* ch = acc.row(std::size_t(g.sensor));
                    for (std::size_t t = waveform.active_first; t < waveform.active_last;
                         ++t) {
                        std::int64_t out = std::int64_t(t) + tau;
                        out %= depth;
                        if (out < 0) out += depth;
                        ch[out] = sat_add(ch[out], w * waveform.q[t], limit,
                                          res.saturation_count);
                    }
                }
                res.steps += waveform.active_len();
            }
        }
    }

    res.channels = Mat<std::int32_t>(std::size_t(N), std::size_t(depth));
    for (std::size_t i = 0; i < acc.data().size(); ++i)
        res.channels.data()[i] = std::int32_t(acc.data()[i]);
    return res;
}

std::int64_t forward_rescale_numerator(const HwTables& tables,
                                       const QuantizedSeries& waveform) {
    const double rho = double(std::int64_t(1) << tables.spec.effective_amp_shift()) /
                       (tables.amp_scale * waveform.scale);
    const std::int64_t num =
        std::llround(rho * double(std::int64_t(1) << tables.spec.rescale_shift));
    if (num < 1)
        fail(Errc::InvalidArgument, "forward descale factor rounds to zero");
    if (num > (std::int64_t(1) << 40))
        fail(Errc::InvalidArgument, "forward descale factor out of range");
    return num;
}

Mat<std::int32_t> rescale_to_codes(const Mat<std::int32_t>& raw, std::int64_t num,
                                   int shift) {
    Mat<std::int32_t> out(raw.rows(), raw.cols());
    const std::int64_t lo = std::numeric_limits<std::int32_t>::min();
    const std::int64_t hi = std::numeric_limits<std::int32_t>::max();
    const std::int64_t half = std::int64_t(1) << (shift - 1);
    for (std::size_t i = 0; i < raw.data().size(); ++i) {
        // Half-LSB pre-add makes the arithmetic shift round to nearest
        // instead of flooring; floor would bias predictions low and the
        // loop would integrate the bias.
        std::int64_t v = (std::int64_t(raw.data()[i]) * num + half) >> shift;
        out.data()[i] = std::int32_t(std::clamp(v, lo, hi));
    }
    return out;
}

SensorData dequantize_channels(const HwSwaveResult& result, const HwTables& tables,
                               const QuantizedSeries& waveform, double image_scale,
                               double sample_rate) {
    if (!(image_scale > 0.0))
        fail(Errc::InvalidArgument, "image scale must be positive");
    const double rho = double(std::int64_t(1) << tables.spec.effective_amp_shift()) /
                       (tables.amp_scale * waveform.scale * image_scale);
    SensorData out;
    out.sample_rate = sample_rate;
    out.samples = Mat<double>(result.channels.rows(), result.channels.cols());
    for (std::size_t i = 0; i < out.samples.data().size(); ++i)
        out.samples.data()[i] = double(result.channels.data()[i]) * rho;
    return out;
}

CycleReport cycle_model(int grid_n, int grid_m, int num_sensors, int lanes,
                        std::size_t sample_depth, std::size_t active_template_len,
                        int iterations, const CycleOverheads& overheads) {
    if (grid_n < 1 || grid_m < 1)
        fail(Errc::InvalidArgument, "grid must be non-empty");
    if (lanes < 1 || num_sensors < 1 || num_sensors % lanes != 0)
        fail(Errc::InvalidArgument, "lane count must divide the sensor count");
    if (iterations < 0)
        fail(Errc::InvalidArgument, "iteration count must be non-negative");
    if (overheads.lane_throughput < 1)
        fail(Errc::InvalidArgument, "lane throughput must be positive");

    const std::uint64_t pixels = std::uint64_t(grid_n) * std::uint64_t(grid_m);
    const std::uint64_t cc = std::uint64_t(num_sensors / lanes);
    const std::uint64_t thr = std::uint64_t(overheads.lane_throughput);
    const std::uint64_t span = (std::uint64_t(active_template_len) + thr - 1) / thr;
    const std::uint64_t channel_slots =
        (std::uint64_t(num_sensors) * sample_depth + lanes - 1) / std::uint64_t(lanes);

    CycleReport rep;
    rep.iterations_run = iterations;
    rep.cycles_das = cc * pixels + overheads.das_latency;
    rep.cycles_swave = cc * pixels * span + overheads.swave_latency;
    rep.cycles_deviation = pixels + overheads.deviation_latency;
    rep.cycles_loss = channel_slots + overheads.loss_latency;

    if (iterations == 0) {
        // Plain single-pass imaging: one backward pass plus the
        // normalization sweep.
        rep.total_cycles = rep.cycles_das + pixels + overheads.control_overhead;
        return rep;
    }
    const std::uint64_t T = std::uint64_t(iterations);
    rep.total_cycles = (T + 1) * (rep.cycles_das + rep.cycles_swave + rep.cycles_loss) +
                       T * rep.cycles_deviation + pixels + overheads.control_overhead;
    return rep;
}

std::uint64_t emulated_cycles(const HwStepCounts& counts, const CycleOverheads& overheads) {
    const std::uint64_t thr = std::uint64_t(std::max(1, overheads.lane_throughput));
    const std::uint64_t swave_stream = (counts.swave_steps + thr - 1) / thr;
    return counts.das_steps + counts.das_calls * overheads.das_latency + swave_stream +
           counts.swave_calls * overheads.swave_latency + counts.deviation_steps +
           counts.deviation_calls * overheads.deviation_latency + counts.loss_steps +
           counts.loss_calls * overheads.loss_latency + counts.norm_steps +
           overheads.control_overhead;
}

namespace {

struct NormImage {
    Mat<std::int32_t> image;
    std::int64_t max_abs = 0;
};

NormImage max_normalize(const Mat<std::int32_t>& state, int norm_shift) {
    NormImage out;
    out.image = Mat<std::int32_t>(state.rows(), state.cols());
    for (std::int32_t v : state.data())
        out.max_abs = std::max<std::int64_t>(out.max_abs, std::llabs(std::int64_t(v)));
    if (out.max_abs > 0) {
        for (std::size_t i = 0; i < state.data().size(); ++i)
            out.image.data()[i] = std::int32_t(
                ((std::llabs(std::int64_t(state.data()[i])) << norm_shift) +
                 out.max_abs / 2) /
                out.max_abs);
    }
    return out;
}

// The image RAM holds magnitudes only: both the backward writeback and
// the deviation writeback pass through an absolute-value stage. Folding
// the state keeps a pixel that crossed zero from self-amplifying on the
// next pass. |-(limit+1)| does not fit the word and saturates.
void fold_state(Mat<std::int32_t>& state, std::int64_t limit,
                std::uint64_t& saturation_count) {
    for (std::int32_t& v : state.data()) {
        std::int64_t a = std::llabs(std::int64_t(v));
        if (a > limit) {
            a = limit;
            ++saturation_count;
        }
        v = std::int32_t(a);
    }
}

} // namespace

HwIterateResult hw_model_based(const SensorData& data, const HwTables& tables,
                               const ExecSchedule& sched,
                               const std::vector<double>& waveform,
                               const HwIterateConfig& cfg,
                               const CycleOverheads& overheads) {
    const FoldMap& map = tables.delay.map;
    const int N = map.num_sensors;
    const int n = map.grid_n;
    const int m = map.grid_m;
    const FixedPointSpec& spec = tables.spec;
    spec.validate(N);
    sched.validate(N);
    if (int(data.num_sensors()) != N)
        fail(Errc::DimensionMismatch, "sensor data row count must equal the array size");
    if (waveform.size() != data.sample_depth())
        fail(Errc::DimensionMismatch, "waveform length must equal the sample depth");
    if (!(cfg.learning_rate >= 0.0) || !std::isfinite(cfg.learning_rate))
        fail(Errc::InvalidArgument, "learning rate must be finite and >= 0");
    if (cfg.max_iterations < 1)
        fail(Errc::InvalidArgument, "max iterations must be >= 1");
    if (!(cfg.loss_threshold_rel >= 0.0))
        fail(Errc::InvalidArgument, "relative loss threshold must be >= 0");
    if (cfg.loss_threshold_abs && !(*cfg.loss_threshold_abs >= 0.0))
        fail(Errc::InvalidArgument, "absolute loss threshold must be >= 0");

    const std::size_t depth = data.sample_depth();
    const std::uint64_t pixels = std::uint64_t(n) * std::uint64_t(m);
    const std::uint64_t loss_slots =
        (std::uint64_t(N) * depth + sched.lanes - 1) / std::uint64_t(sched.lanes);
    const std::int64_t limit = spec.acc_limit();

    HwIterateResult res;

    QuantizedSensorData sq = quantize_sensor_data(data, spec.sample_bits);
    QuantizedSeries wq = quantize_waveform(waveform, spec.sample_bits);
    const std::int64_t rho_num = forward_rescale_numerator(tables, wq);
    const double qs = sq.scale;
    res.input_scale = qs;
    res.lr_numerator = std::llround(cfg.learning_rate * double(std::int64_t(1) << spec.lr_shift));

    // The loss unit compares sum(r^2) against the squared threshold held
    // as an integer register; no square root in the loop.
    double threshold_phys = cfg.loss_threshold_abs ? *cfg.loss_threshold_abs : 0.0;
    if (!cfg.loss_threshold_abs) {
        double ss = 0.0;
        for (double v : data.samples.data()) ss += v * v;
        threshold_phys = cfg.loss_threshold_rel * std::sqrt(ss);
    }
    const double thr_real = threshold_phys * qs;
    std::int64_t thr_sq = std::numeric_limits<std::int64_t>::max();
    if (thr_real * thr_real < double(std::numeric_limits<std::int64_t>::max()))
        thr_sq = std::int64_t(std::floor(thr_real * thr_real));

    // Forward prediction from a Max-normalized image. The descale factor
    // folds the Max register back in: units cancel so the output lands in
    // quantized-sample codes regardless of the image magnitude.
    auto predict = [&](const NormImage& ni) {
        HwSwaveResult f = hw_swave(ni.image, tables, sched, wq);
        res.counts.swave_calls += 1;
        res.counts.swave_steps += f.steps;
        res.saturation_count += f.saturation_count;
        const std::int64_t rho_t =
            (rho_num * ni.max_abs + (std::int64_t(1) << (spec.norm_shift - 1))) >>
            spec.norm_shift;
        if (rho_t > (std::int64_t(1) << 38))
            fail(Errc::InvalidArgument, "forward descale factor out of range");
        return rescale_to_codes(f.channels, rho_t, spec.rescale_shift);
    };

    // Residual and squared loss in one streaming pass.
    Mat<std::int32_t> resid(std::size_t(N), depth);
    std::int64_t sum_sq = 0;
    using u128 = unsigned __int128;
    auto loss_pass = [&](const Mat<std::int32_t>& pred) {
        u128 ssq = 0;
        for (std::size_t i = 0; i < resid.data().size(); ++i) {
            std::int64_t r = std::int64_t(sq.samples.data()[i]) - pred.data()[i];
            if (r > limit) {
                r = limit;
                ++res.saturation_count;
            } else if (r < -limit - 1) {
                r = -limit - 1;
                ++res.saturation_count;
            }
            resid.data()[i] = std::int32_t(r);
            ssq += u128(std::uint64_t(r * r));
        }
        res.counts.loss_calls += 1;
        res.counts.loss_steps += loss_slots;
        const u128 cap = u128(std::uint64_t(std::numeric_limits<std::int64_t>::max()));
        sum_sq = ssq > cap ? std::numeric_limits<std::int64_t>::max()
                           : std::int64_t(std::uint64_t(ssq));
        if (cfg.record_trace) res.loss_trace.push_back(std::sqrt(double(sum_sq)) / qs);
    };

    HwDasResult d0 = hw_das(sq.samples, tables, sched, true);
    res.counts.das_calls += 1;
    res.counts.das_steps += d0.steps;
    Mat<std::int32_t> state = d0.accum;
    fold_state(state, limit, res.saturation_count);
    loss_pass(predict(NormImage{d0.image, d0.max_abs}));

    for (int t = 0; t < cfg.max_iterations; ++t) {
        if (sum_sq < thr_sq) {
            res.converged = true;
            break;
        }
        HwDasResult corr = hw_das(resid, tables, sched, false);
        res.counts.das_calls += 1;
        res.counts.das_steps += corr.steps;

        // The correction leaves the backward RAM as a magnitude, so the
        // update always subtracts the weighted image; the writeback fold
        // below supplies the outer absolute value. Rectifying the update
        // drains low-level background that a signed step would leave
        // parked a code or two above zero, and the rounded shift gives a
        // dead zone: a correction below half an update step leaves the
        // pixel untouched, which pins converged pixels in place instead
        // of eroding them.
        const std::int64_t lr_half = std::int64_t(1) << (spec.lr_shift - 1);
        if (cfg.normalize_each_das) {
            // Variant: the update consumes the correction scaled to
            // [0, 2^norm_shift] by its own maximum, so the learning rate
            // acts on normalized magnitudes.
            const std::int64_t mx = corr.max_abs;
            for (std::size_t i = 0; i < state.data().size(); ++i) {
                std::int64_t cm = std::llabs(std::int64_t(corr.accum.data()[i]));
                std::int64_t cvn =
                    mx > 0 ? ((cm << spec.norm_shift) + mx / 2) / mx : 0;
                std::int64_t delta = (res.lr_numerator * cvn + lr_half) >> spec.lr_shift;
                state.data()[i] = std::int32_t(sat_add(std::int64_t(state.data()[i]),
                                                       -delta, limit,
                                                       res.saturation_count));
            }
        } else {
            for (std::size_t i = 0; i < state.data().size(); ++i) {
                std::int64_t cm = std::llabs(std::int64_t(corr.accum.data()[i]));
                std::int64_t delta =
                    (res.lr_numerator * cm + lr_half) >> spec.lr_shift;
                state.data()[i] = std::int32_t(sat_add(std::int64_t(state.data()[i]),
                                                       -delta, limit,
                                                       res.saturation_count));
            }
        }
        fold_state(state, limit, res.saturation_count);
        res.counts.deviation_calls += 1;
        res.counts.deviation_steps += pixels;
        res.iterations_run = t + 1;

        loss_pass(predict(max_normalize(state, spec.norm_shift)));
    }
    if (!res.converged && sum_sq < thr_sq) res.converged = true;

    NormImage fin = max_normalize(state, spec.norm_shift);
    res.counts.norm_steps += pixels;
    res.accum = std::move(state);
    res.image = std::move(fin.image);
    res.final_loss = std::sqrt(double(sum_sq)) / qs;

    res.cycles.iterations_run = res.iterations_run;
    const std::uint64_t cc = std::uint64_t(N / sched.lanes);
    res.cycles.cycles_das = cc * pixels + overheads.das_latency;
    const std::uint64_t thr_lane = std::uint64_t(std::max(1, overheads.lane_throughput));
    res.cycles.cycles_swave =
        cc * pixels * ((wq.active_len() + thr_lane - 1) / thr_lane) +
        overheads.swave_latency;
    res.cycles.cycles_deviation = pixels + overheads.deviation_latency;
    res.cycles.cycles_loss = loss_slots + overheads.loss_latency;
    res.cycles.total_cycles = emulated_cycles(res.counts, overheads);
    return res;
}

} // namespace pat
