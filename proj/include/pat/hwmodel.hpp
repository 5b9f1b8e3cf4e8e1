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

#ifndef PAT_HWMODEL_HPP
#define PAT_HWMODEL_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "pat/geometry.hpp"
#include "pat/swave.hpp"
#include "pat/types.hpp"

namespace pat {

/// Bit widths of the emulated datapath. Delay and phase entries are
/// table codes, amplitudes are unsigned fractions consumed as
/// (code * value) >> amplitude_scale_shift, samples are signed ADC-width
/// integers, and all sums run in accumulator_bits with saturation.
struct FixedPointSpec {
    int delay_bits = 10;
    int phase_bits = 10;     // offset encoding, bias = 2^(phase_bits-1)
    int amplitude_bits = 8;  // codes 0 .. 2^bits - 1
    int sample_bits = 12;
    int accumulator_bits = 32;
    int norm_shift = 8;      // output scale: (|v| << 8) / max  in [0, 256]
    std::optional<int> amplitude_scale_shift; // defaults to amplitude_bits
    int lr_shift = 7;        // learning rate becomes round(lr * 2^7) / 2^7
    int rescale_shift = 24;  // fraction bits of the forward descale factor

    int effective_amp_shift() const {
        return amplitude_scale_shift ? *amplitude_scale_shift : amplitude_bits;
    }
    std::int32_t phase_bias() const { return std::int32_t(1) << (phase_bits - 1); }
    std::int64_t acc_limit() const {
        return (std::int64_t(1) << (accumulator_bits - 1)) - 1;
    }
    /// num_sensors additions of full-scale samples must fit the
    /// accumulator; violating configurations are rejected up front.
    void validate(int num_sensors) const;
};

/// Static lane schedule: `lanes` channels run in parallel, the sensor
/// list is walked in `cc_count = N / lanes` execution cycles. assignment
/// holds the sensor id handled at slot cc*lanes + lane; empty means
/// identity. Any permutation yields bit-identical results because the
/// per-pixel sums commute.
struct ExecSchedule {
    int lanes = 32;
    std::vector<int> assignment;

    static ExecSchedule identity(int num_sensors, int lanes);
    void validate(int num_sensors) const;
    int cc_count(int num_sensors) const { return num_sensors / lanes; }
    int sensor_at(int slot) const {
        return assignment.empty() ? slot : assignment[std::size_t(slot)];
    }
};

/// Stored-table rows touched during one execution cycle, as an inclusive
/// range. For the 128-sensor quarter fold with 32 lanes this reproduces
/// the alternating 0..31 / 1..32 ROM enable pattern.
struct RomWindow {
    int lo = 0;
    int hi = 0;
};

std::vector<RomWindow> rom_enable_windows(const FoldMap& map, const ExecSchedule& sched);

/// Pre-stored constant tables, one row per stored (folded) sensor.
struct HwTables {
    FoldedTableSet delay;        // codes, delay_bits wide
    Mat<std::uint16_t> phase;    // tau + bias, clamped to phase_bits
    Mat<std::uint16_t> amplitude;// round(gain * amp_scale), gain = k/d^2
    double amp_scale = 0.0;
    double max_gain = 0.0;
    FixedPointSpec spec;
    FoldKind fold = FoldKind::None;
    std::uint64_t delay_overflow = 0;
    std::uint64_t phase_overflow = 0;
    std::uint64_t amplitude_overflow = 0;

    int grid_n() const { return delay.map.grid_n; }
    int grid_m() const { return delay.map.grid_m; }
    int num_sensors() const { return delay.map.num_sensors; }
};

HwTables quantize_tables(const ArrayGeometry& geom, const RoiGrid& grid,
                         const AcousticConfig& acoustic, const SwaveParams& params,
                         FoldKind fold, const FixedPointSpec& spec);

/// Phase and amplitude codes for any sensor, resolved through the fold
/// map and the address mode, identical to the codes an unfolded table
/// would hold.
std::uint16_t hw_phase_lookup(const HwTables& tables, int sensor, int r, int c);
std::uint16_t hw_amplitude_lookup(const HwTables& tables, int sensor, int r, int c);

/// Full-scale signed quantization: code = round(x * scale) with
/// scale = (2^(bits-1) - 1) / max|x|. scale is 1 for an all-zero input.
struct QuantizedSensorData {
    Mat<std::int32_t> samples;
    double scale = 1.0;
    int bits = 0;
};

struct QuantizedSeries {
    std::vector<std::int32_t> q;
    double scale = 1.0;
    int bits = 0;
    std::size_t active_first = 0; // nonzero span after quantization
    std::size_t active_last = 0;  // one past the end; 0,0 when empty

    std::size_t active_len() const { return active_last - active_first; }
};

QuantizedSensorData quantize_sensor_data(const SensorData& data, int sample_bits);
QuantizedSeries quantize_waveform(const std::vector<double>& s, int sample_bits);

/// One backward pass over the schedule. Accumulation is signed; overflow
/// of accumulator_bits is a hard error (the width invariant makes it
/// unreachable for in-range inputs). With finalize set, the Max unit's
/// absolute maximum normalizes each pixel to (|v| << norm_shift) / max
/// by integer division; an all-zero image bypasses the division.
struct HwDasResult {
    Mat<std::int32_t> accum; // n x m signed sums
    Mat<std::int32_t> image; // normalized codes in [0, 256]; empty when raw
    std::int64_t max_abs = 0;
    std::uint64_t steps = 0; // cc_count * n * m accumulation slots
};

HwDasResult hw_das(const Mat<std::int32_t>& samples, const HwTables& tables,
                   const ExecSchedule& sched, bool finalize = true);

/// The normalized value each pixel would take without the integer
/// division, for quantization-bound checks.
Mat<double> exact_normalized(const Mat<std::int32_t>& accum, int norm_shift);

/// Forward pass in table codes: channel i accumulates, pixel by pixel in
/// row-major order, w = (amp_code * image_j) >> amplitude_scale_shift
/// times the quantized template circularly shifted by (phase - bias).
/// Adds saturate at accumulator_bits and are counted, never fatal.
struct HwSwaveResult {
    Mat<std::int32_t> channels; // N x M, raw accumulator units
    std::uint64_t saturation_count = 0;
    std::uint64_t steps = 0; // cc_count * n * m * active template length
};

HwSwaveResult hw_swave(const Mat<std::int32_t>& image, const HwTables& tables,
                       const ExecSchedule& sched, const QuantizedSeries& waveform);

/// Descale factor turning raw forward accumulators back into the units
/// of the quantized input samples: rho = 2^amp_shift / (amp_scale *
/// waveform.scale), carried as round(rho * 2^rescale_shift).
std::int64_t forward_rescale_numerator(const HwTables& tables,
                                       const QuantizedSeries& waveform);

/// Elementwise (v * num) >> shift with arithmetic shift semantics.
Mat<std::int32_t> rescale_to_codes(const Mat<std::int32_t>& raw, std::int64_t num,
                                   int shift);

/// Raw forward accumulators in physical units, given the code scale of
/// the image that produced them.
SensorData dequantize_channels(const HwSwaveResult& result, const HwTables& tables,
                               const QuantizedSeries& waveform, double image_scale,
                               double sample_rate);

/// Work counters of one emulated reconstruction, in scheduler steps.
struct HwStepCounts {
    std::uint64_t das_calls = 0;
    std::uint64_t das_steps = 0;
    std::uint64_t swave_calls = 0;
    std::uint64_t swave_steps = 0;
    std::uint64_t deviation_calls = 0;
    std::uint64_t deviation_steps = 0;
    std::uint64_t loss_calls = 0;
    std::uint64_t loss_steps = 0;
    std::uint64_t norm_steps = 0;
};

/// Per-stage pipeline-fill latencies and the controller overhead added
/// on top of the raw step counts.
struct CycleOverheads {
    std::uint64_t das_latency = 8;
    std::uint64_t swave_latency = 8;
    std::uint64_t deviation_latency = 4;
    std::uint64_t loss_latency = 4;
    std::uint64_t control_overhead = 0;
    int lane_throughput = 1; // template samples retired per lane per cycle
};

/// Closed-form cost model and the emulator's realized cost share the
/// same per-stage constants, so they can be cross-checked.
struct CycleReport {
    std::uint64_t cycles_das = 0;       // one backward pass
    std::uint64_t cycles_swave = 0;     // one forward pass
    std::uint64_t cycles_deviation = 0; // one image update
    std::uint64_t cycles_loss = 0;      // one residual + loss pass
    std::uint64_t total_cycles = 0;     // whole run
    int iterations_run = 0;

    double fps_at_clock(double hz) const {
        return total_cycles ? hz / double(total_cycles) : 0.0;
    }
};

/// Predicts the cycle cost of a full reconstruction: one initial
/// backward pass, iterations+1 forward and loss passes, iterations
/// backward and update passes, one final normalization sweep.
CycleReport cycle_model(int grid_n, int grid_m, int num_sensors, int lanes,
                        std::size_t sample_depth, std::size_t active_template_len,
                        int iterations, const CycleOverheads& overheads = {});

std::uint64_t emulated_cycles(const HwStepCounts& counts, const CycleOverheads& overheads);

/// Fixed-point reconstruction loop mirroring the float pipeline: the
/// image state stays in raw accumulator units and only the emitted image
/// passes through Max-unit normalization. normalize_each_das switches to
/// the variant that renormalizes every backward pass to [0, 256] before
/// the update; its corrections are then non-negative and the forward
/// descale is referenced to the initial pass's maximum.
struct HwIterateConfig {
    double learning_rate = 0.1;
    int max_iterations = 20;
    double loss_threshold_rel = 0.05;        // threshold = rel * ||S||_2
    std::optional<double> loss_threshold_abs; // overrides the relative rule
    bool record_trace = false;
    bool normalize_each_das = false;
};

struct HwIterateResult {
    Mat<std::int32_t> accum;  // final image state, signed
    Mat<std::int32_t> image;  // normalized [0, 256]
    int iterations_run = 0;
    bool converged = false;
    double final_loss = 0.0;           // sqrt(sum r^2) / input scale
    std::vector<double> loss_trace;    // one entry per forward pass
    std::int64_t lr_numerator = 0;     // realized learning rate * 2^lr_shift
    std::uint64_t saturation_count = 0;
    double input_scale = 1.0;          // codes per physical unit
    HwStepCounts counts;
    CycleReport cycles;
};

HwIterateResult hw_model_based(const SensorData& data, const HwTables& tables,
                               const ExecSchedule& sched,
                               const std::vector<double>& waveform,
                               const HwIterateConfig& cfg,
                               const CycleOverheads& overheads = {});

} // namespace pat

#endif // PAT_HWMODEL_HPP
