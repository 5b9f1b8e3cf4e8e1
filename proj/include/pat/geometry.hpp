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

#ifndef PAT_GEOMETRY_HPP
#define PAT_GEOMETRY_HPP

#include <cstdint>
#include <vector>

#include "pat/types.hpp"

namespace pat {

enum class ArrayKind { Ring, Linear };

/// Transducer array description. Ring arrays place sensor i at angle
/// angular_offset + 2*pi*i/N on a circle of the given radius; linear
/// arrays place sensors on a horizontal row at y = baseline_y, centered
/// on center.x.
struct ArrayGeometry {
    ArrayKind kind = ArrayKind::Ring;
    int num_sensors = 0;
    double radius = 0.0;         // Ring only, meters
    double pitch = 0.0;          // Linear only, meters
    Vec2 center{};               // Ring center / linear lattice center
    double angular_offset = 0.0; // Ring only, radians (sensor 0 from +x axis)
    double baseline_y = 0.0;     // Linear only, meters (absolute y of the row)

    static ArrayGeometry ring(int num_sensors, double radius, Vec2 center = {},
                              double angular_offset = 0.0);
    static ArrayGeometry linear(int num_sensors, double pitch, double baseline_y,
                                double center_x = 0.0);
    void validate() const;
};

/// Imaging grid: n rows by m columns of pixel centers at uniform pitch
/// extent/count, symmetric about the grid center. Row index r follows
/// the y axis (larger r = larger y), column index c follows x.
struct RoiGrid {
    int n = 0;
    int m = 0;
    double extent_x = 0.0;
    double extent_y = 0.0;
    Vec2 center{};

    static RoiGrid square(int n, double extent, Vec2 center = {});
    static RoiGrid rect(int n, int m, double extent_x, double extent_y, Vec2 center = {});
    void validate() const;

    double pixel_dx() const { return extent_x / m; }
    double pixel_dy() const { return extent_y / n; }

    /// Pixel-center offset from the grid center. Built so that
    /// pixel_offset(n-1-r, m-1-c) is the exact negation of pixel_offset(r, c).
    Vec2 pixel_offset(int r, int c) const;
    Vec2 pixel_center(int r, int c) const;

    std::size_t pixel_count() const { return std::size_t(n) * std::size_t(m); }
    std::size_t pixel_index(int r, int c) const { return std::size_t(r) * m + c; }
    bool contains(Vec2 p) const;
};

struct AcousticConfig {
    double sound_speed = 1500.0; // m/s
    double sample_rate = 0.0;    // Hz
    int sample_depth = 0;        // samples per channel

    void validate() const;
};

/// Half-away-from-zero rounding used for every real-to-sample-index
/// conversion in the pipeline.
std::int64_t round_half_away(double x);

/// Real-valued delay in samples for a propagation distance: d / c * f_s.
double delay_samples(double distance, const AcousticConfig& acoustic);

/// Sensor positions relative to the array center. Ring offsets are
/// generated by index reduction into the first quadrant/octant so that
/// mirror-partner sensors get bit-exact reflected coordinates whenever
/// N is divisible by 4 (and 8) and angular_offset is zero.
std::vector<Vec2> sensor_offsets(const ArrayGeometry& geom);

/// Absolute sensor positions (center + offset).
std::vector<Vec2> sensor_positions(const ArrayGeometry& geom);

/// Per-sensor-per-pixel integer delays, clamped to bit_width.
struct DelayTable {
    Mat<std::uint32_t> delays; // N x (n*m), pixel index = r*m + c
    int bit_width = 10;
    std::uint64_t overflow_count = 0;
    std::uint32_t max_entry = 0;
};

DelayTable compute_delay_table(const ArrayGeometry& geom, const RoiGrid& grid,
                               const AcousticConfig& acoustic, int bit_width = 10);

enum class FoldKind { None, Half, Quarter, Octant };

/// Address mode applied by the address mapping unit when a sensor reads
/// a table stored for one of its symmetry partners. The first four are
/// the center-symmetry modes used by the 4-execution-cycle schedule;
/// the swap modes appear only under the 8-fold (Octant) reduction.
enum class AmuMode : std::uint8_t {
    Identity,     // (r, c)
    ColMirror,    // (r, m-1-c)
    RowMirror,    // (n-1-r, c)
    PointReflect, // (n-1-r, m-1-c)
    Transpose,    // (c, r)
    AntiTranspose,// (n-1-c, m-1-r)
    RotateCCW,    // (c, m-1-r)
    RotateCW,     // (n-1-c, r)
};

const char* amu_mode_name(AmuMode mode);

struct PixelRef {
    int r = 0;
    int c = 0;
};

/// Applies an address mode to a pixel address on an n x m lattice.
/// Swap modes require n == m.
PixelRef amu_apply(AmuMode mode, int r, int c, int n, int m);

/// amu_compose(outer, inner) applied to p equals outer(inner(p)).
AmuMode amu_compose(AmuMode outer, AmuMode inner);

struct SensorFold {
    int stored_index = 0;
    AmuMode mode = AmuMode::Identity;
};

/// Symmetry reduction of a sensor array against a grid: which sensors
/// are stored and how every sensor addresses the stored tables.
struct FoldMap {
    FoldKind fold = FoldKind::None;
    int num_sensors = 0;
    int grid_n = 0;
    int grid_m = 0;
    std::vector<int> stored_ids;     // ascending sensor ids whose rows are kept
    std::vector<SensorFold> mapping; // one entry per sensor

    int stored_count() const { return int(stored_ids.size()); }
};

/// Builds the fold mapping, validating the symmetry preconditions
/// (divisibility of N, zero angular offset, coincident centers, square
/// grid for Quarter/Octant, square pixels for Octant).
FoldMap make_fold_map(const ArrayGeometry& geom, const RoiGrid& grid, FoldKind fold);

/// Stored subset of delay-table rows plus the AMU mapping.
struct FoldedTableSet {
    FoldMap map;
    Mat<std::uint32_t> tables; // stored_count x (n*m)
    int bit_width = 10;
};

FoldedTableSet fold_tables(const DelayTable& table, const ArrayGeometry& geom,
                           const RoiGrid& grid, FoldKind fold);

/// Delay of (sensor, pixel) through the folded tables. Exactly equal to
/// the direct DelayTable entry for valid folds.
std::uint32_t amu_lookup(const FoldedTableSet& folded, int sensor, int r, int c);

/// On-chip storage accounting for the three pre-stored table classes.
struct StorageBudget {
    std::uint64_t delay_bits = 0;
    std::uint64_t phase_bits = 0;
    std::uint64_t amplitude_bits = 0;
    std::uint64_t total_bits = 0;
    int stored_sensor_count = 0;
    double savings_ratio = 1.0; // N / stored_sensor_count
};

StorageBudget storage_budget(int num_sensors, int n, int m, int delay_bits,
                             int phase_bits, int amplitude_bits, FoldKind fold);

/// Bit count renderings: binary megabits (2^20) and decimal megabits (10^6).
double bits_to_mib(std::uint64_t bits);
double bits_to_megabits(std::uint64_t bits);

const char* fold_name(FoldKind fold);
int fold_stored_count(int num_sensors, FoldKind fold);

} // namespace pat

#endif // PAT_GEOMETRY_HPP
