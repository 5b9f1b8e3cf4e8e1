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

#include "pat/geometry.hpp"

#include <cmath>
#include <string>

namespace pat {

namespace {

constexpr double kPi = 3.14159265358979323846;

} // namespace

ArrayGeometry ArrayGeometry::ring(int num_sensors, double radius, Vec2 center,
                                  double angular_offset) {
    ArrayGeometry g;
    g.kind = ArrayKind::Ring;
    g.num_sensors = num_sensors;
    g.radius = radius;
    g.center = center;
    g.angular_offset = angular_offset;
    g.validate();
    return g;
}

ArrayGeometry ArrayGeometry::linear(int num_sensors, double pitch, double baseline_y,
                                    double center_x) {
    ArrayGeometry g;
    g.kind = ArrayKind::Linear;
    g.num_sensors = num_sensors;
    g.pitch = pitch;
    g.baseline_y = baseline_y;
    g.center = Vec2{center_x, 0.0};
    g.validate();
    return g;
}

void ArrayGeometry::validate() const {
    if (num_sensors < 1)
        fail(Errc::InvalidArgument, "array needs at least one sensor");
    if (kind == ArrayKind::Ring) {
        if (!(radius > 0.0) || !std::isfinite(radius))
            fail(Errc::InvalidArgument, "ring radius must be positive");
        if (!std::isfinite(angular_offset))
            fail(Errc::InvalidArgument, "angular offset must be finite");
    } else {
        if (!(pitch > 0.0) || !std::isfinite(pitch))
            fail(Errc::InvalidArgument, "linear pitch must be positive");
        if (!std::isfinite(baseline_y))
            fail(Errc::InvalidArgument, "baseline y must be finite");
    }
    if (!std::isfinite(center.x) || !std::isfinite(center.y))
        fail(Errc::InvalidArgument, "array center must be finite");
}

RoiGrid RoiGrid::square(int n, double extent, Vec2 center) {
    return rect(n, n, extent, extent, center);
}

RoiGrid RoiGrid::rect(int n, int m, double extent_x, double extent_y, Vec2 center) {
    RoiGrid g;
    g.n = n;
    g.m = m;
    g.extent_x = extent_x;
    g.extent_y = extent_y;
    g.center = center;
    g.validate();
    return g;
}

void RoiGrid::validate() const {
    if (n < 1 || m < 1)
        fail(Errc::InvalidArgument, "grid needs at least one pixel per axis");
    if (!(extent_x > 0.0) || !(extent_y > 0.0) ||
        !std::isfinite(extent_x) || !std::isfinite(extent_y))
        fail(Errc::InvalidArgument, "grid extents must be positive");
    if (!std::isfinite(center.x) || !std::isfinite(center.y))
        fail(Errc::InvalidArgument, "grid center must be finite");
}

Vec2 RoiGrid::pixel_offset(int r, int c) const {
    // (c - (m-1)/2) * dx flips sign exactly under c -> m-1-c because both
    // operands of the subtraction are representable and the products differ
    // only in sign.
    double ox = (c - (m - 1) / 2.0) * pixel_dx();
    double oy = (r - (n - 1) / 2.0) * pixel_dy();
    return Vec2{ox, oy};
}

Vec2 RoiGrid::pixel_center(int r, int c) const {
    Vec2 off = pixel_offset(r, c);
    return Vec2{center.x + off.x, center.y + off.y};
}

bool RoiGrid::contains(Vec2 p) const {
    double hx = extent_x / 2.0;
    double hy = extent_y / 2.0;
    return p.x >= center.x - hx && p.x <= center.x + hx &&
           p.y >= center.y - hy && p.y <= center.y + hy;
}

void AcousticConfig::validate() const {
    if (!(sound_speed > 0.0) || !std::isfinite(sound_speed))
        fail(Errc::InvalidArgument, "sound speed must be positive");
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate))
        fail(Errc::InvalidArgument, "sample rate must be positive");
    if (sample_depth < 1)
        fail(Errc::InvalidArgument, "sample depth must be at least 1");
}

std::int64_t round_half_away(double x) {
    return std::llround(x);
}

double delay_samples(double distance, const AcousticConfig& acoustic) {
    return distance / acoustic.sound_speed * acoustic.sample_rate;
}

namespace {

// Ring offsets via index reduction into the first octant. Sensors that are
// reflections of each other across the x axis, y axis, or main diagonal get
// coordinates that are bit-exact reflections, which is what makes folded
// delay tables match the direct ones to the last ulp. Only valid when the
// angular offset is zero; otherwise fall back to the direct formula.
std::vector<Vec2> ring_offsets(int n, double radius, double angular_offset) {
    std::vector<Vec2> out(static_cast<std::size_t>(n));
    if (angular_offset != 0.0) {
        for (int i = 0; i < n; ++i) {
            double ang = angular_offset + 2.0 * kPi * i / n;
            out[std::size_t(i)] = Vec2{radius * std::cos(ang), radius * std::sin(ang)};
        }
        return out;
    }
    for (int i = 0; i < n; ++i) {
        int j = i;
        double sx = 1.0;
        double sy = 1.0;
        bool swap = false;
        if (n % 2 == 0 && j > n / 2) {
            j = n - j;
            sy = -1.0;
        }
        if (n % 4 == 0 && j > n / 4) {
            j = n / 2 - j;
            sx = -1.0;
        }
        if (n % 8 == 0 && j > n / 8) {
            j = n / 4 - j;
            swap = true;
        }
        double ang = 2.0 * kPi * j / n;
        double x = std::cos(ang);
        double y = std::sin(ang);
        if (j == 0) {
            x = 1.0;
            y = 0.0;
        } else if (n % 4 == 0 && j == n / 4) {
            x = 0.0;
            y = 1.0;
        }
        if (swap)
            std::swap(x, y);
        out[std::size_t(i)] = Vec2{sx * (radius * x), sy * (radius * y)};
    }
    return out;
}

std::vector<Vec2> linear_offsets(int n, double pitch) {
    std::vector<Vec2> out(static_cast<std::size_t>(n));
    double half = (n - 1) / 2.0;
    for (int i = 0; i < n; ++i)
        out[std::size_t(i)] = Vec2{(i - half) * pitch, 0.0};
    return out;
}

} // namespace

std::vector<Vec2> sensor_offsets(const ArrayGeometry& geom) {
    geom.validate();
    if (geom.kind == ArrayKind::Ring)
        return ring_offsets(geom.num_sensors, geom.radius, geom.angular_offset);
    return linear_offsets(geom.num_sensors, geom.pitch);
}

std::vector<Vec2> sensor_positions(const ArrayGeometry& geom) {
    std::vector<Vec2> out = sensor_offsets(geom);
    double base_y = geom.kind == ArrayKind::Linear ? geom.baseline_y : geom.center.y;
    for (Vec2& p : out) {
        p.x += geom.center.x;
        p.y += base_y;
    }
    return out;
}

DelayTable compute_delay_table(const ArrayGeometry& geom, const RoiGrid& grid,
                               const AcousticConfig& acoustic, int bit_width) {
    geom.validate();
    grid.validate();
    acoustic.validate();
    if (bit_width < 1 || bit_width > 31)
        fail(Errc::InvalidArgument, "delay bit width out of range");

    const int n = grid.n;
    const int m = grid.m;
    const std::uint32_t max_code = (std::uint32_t(1) << bit_width) - 1;

    // Work in offsets from the array center. When the grid shares that
    // center the shift term is exactly zero and symmetric sensor/pixel
    // pairs produce bit-identical distances.
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

    DelayTable table;
    table.bit_width = bit_width;
    table.delays = Mat<std::uint32_t>(std::size_t(geom.num_sensors),
                                      std::size_t(n) * std::size_t(m));
    const double scale = acoustic.sample_rate / acoustic.sound_speed;

    for (int i = 0; i < geom.num_sensors; ++i) {
        std::uint32_t* row = table.delays.row(std::size_t(i));
        const Vec2 s = sensors[std::size_t(i)];
        for (int r = 0; r < n; ++r) {
            const double dy = s.y - off_y[std::size_t(r)];
            const double dy2 = dy * dy;
            for (int c = 0; c < m; ++c) {
                const double dx = s.x - off_x[std::size_t(c)];
                const double dist = std::sqrt(dx * dx + dy2);
                std::int64_t q = round_half_away(dist * scale);
                if (q > std::int64_t(max_code)) {
                    q = max_code;
                    ++table.overflow_count;
                }
                const std::uint32_t code = std::uint32_t(q);
                row[std::size_t(r) * m + c] = code;
                if (code > table.max_entry)
                    table.max_entry = code;
            }
        }
    }
    return table;
}

namespace {

struct ModeTriple {
    bool swap;
    bool flip_r;
    bool flip_c;
};

constexpr ModeTriple kModeTriples[] = {
    {false, false, false}, // Identity
    {false, false, true},  // ColMirror
    {false, true, false},  // RowMirror
    {false, true, true},   // PointReflect
    {true, false, false},  // Transpose
    {true, true, true},    // AntiTranspose
    {true, false, true},   // RotateCCW
    {true, true, false},   // RotateCW
};

AmuMode mode_from_triple(bool swap, bool flip_r, bool flip_c) {
    for (int k = 0; k < 8; ++k) {
        const ModeTriple& t = kModeTriples[k];
        if (t.swap == swap && t.flip_r == flip_r && t.flip_c == flip_c)
            return AmuMode(k);
    }
    fail(Errc::InvalidArgument, "unreachable mode triple");
}

} // namespace

const char* amu_mode_name(AmuMode mode) {
    switch (mode) {
    case AmuMode::Identity: return "Identity";
    case AmuMode::ColMirror: return "ColMirror";
    case AmuMode::RowMirror: return "RowMirror";
    case AmuMode::PointReflect: return "PointReflect";
    case AmuMode::Transpose: return "Transpose";
    case AmuMode::AntiTranspose: return "AntiTranspose";
    case AmuMode::RotateCCW: return "RotateCCW";
    case AmuMode::RotateCW: return "RotateCW";
    }
    return "Unknown";
}

PixelRef amu_apply(AmuMode mode, int r, int c, int n, int m) {
    if (r < 0 || r >= n || c < 0 || c >= m)
        fail(Errc::InvalidArgument, "pixel address outside lattice");
    const ModeTriple t = kModeTriples[int(mode)];
    if (t.swap && n != m)
        fail(Errc::IncompatibleSymmetry, "swap address modes need a square lattice");
    int u = t.swap ? c : r;
    int v = t.swap ? r : c;
    PixelRef out;
    out.r = t.flip_r ? n - 1 - u : u;
    out.c = t.flip_c ? m - 1 - v : v;
    return out;
}

AmuMode amu_compose(AmuMode outer, AmuMode inner) {
    const ModeTriple a = kModeTriples[int(inner)];
    const ModeTriple b = kModeTriples[int(outer)];
    const bool swap = a.swap != b.swap;
    bool flip_r;
    bool flip_c;
    if (b.swap) {
        flip_r = b.flip_r != a.flip_c;
        flip_c = b.flip_c != a.flip_r;
    } else {
        flip_r = b.flip_r != a.flip_r;
        flip_c = b.flip_c != a.flip_c;
    }
    return mode_from_triple(swap, flip_r, flip_c);
}

int fold_stored_count(int num_sensors, FoldKind fold) {
    switch (fold) {
    case FoldKind::None:
        return num_sensors;
    case FoldKind::Half:
        if (num_sensors % 2 != 0)
            fail(Errc::IncompatibleSymmetry, "half fold needs an even sensor count");
        return num_sensors / 2 + 1;
    case FoldKind::Quarter:
        if (num_sensors % 4 != 0)
            fail(Errc::IncompatibleSymmetry, "quarter fold needs 4 | sensor count");
        return num_sensors / 4 + 1;
    case FoldKind::Octant:
        if (num_sensors % 8 != 0)
            fail(Errc::IncompatibleSymmetry, "octant fold needs 8 | sensor count");
        return num_sensors / 8 + 1;
    }
    fail(Errc::InvalidArgument, "unknown fold kind");
}

const char* fold_name(FoldKind fold) {
    switch (fold) {
    case FoldKind::None: return "none";
    case FoldKind::Half: return "half";
    case FoldKind::Quarter: return "quarter";
    case FoldKind::Octant: return "octant";
    }
    return "unknown";
}

namespace {

void check_fold_preconditions(const ArrayGeometry& geom, const RoiGrid& grid,
                              FoldKind fold) {
    if (fold == FoldKind::None)
        return;
    if (geom.kind == ArrayKind::Linear) {
        if (fold != FoldKind::Half)
            fail(Errc::IncompatibleSymmetry,
                 "linear arrays only support the half fold");
        if (grid.center.x != geom.center.x)
            fail(Errc::IncompatibleSymmetry,
                 "half fold needs the grid centered on the array axis");
        return;
    }
    if (geom.angular_offset != 0.0)
        fail(Errc::IncompatibleSymmetry,
             "ring folds need a zero angular offset");
    if (grid.center.x != geom.center.x || grid.center.y != geom.center.y)
        fail(Errc::IncompatibleSymmetry,
             "ring folds need the grid centered on the ring");
    if (fold == FoldKind::Octant) {
        if (grid.n != grid.m || grid.extent_x != grid.extent_y)
            fail(Errc::IncompatibleSymmetry,
                 "octant fold needs a square grid with square pixels");
    }
}

} // namespace

FoldMap make_fold_map(const ArrayGeometry& geom, const RoiGrid& grid, FoldKind fold) {
    geom.validate();
    grid.validate();
    check_fold_preconditions(geom, grid, fold);

    const int count = geom.num_sensors;
    const int stored = fold_stored_count(count, fold);

    FoldMap map;
    map.fold = fold;
    map.num_sensors = count;
    map.grid_n = grid.n;
    map.grid_m = grid.m;
    map.stored_ids.resize(std::size_t(stored));
    for (int k = 0; k < stored; ++k)
        map.stored_ids[std::size_t(k)] = k;
    map.mapping.resize(std::size_t(count));

    for (int i = 0; i < count; ++i) {
        SensorFold sf;
        if (fold == FoldKind::None) {
            sf = SensorFold{i, AmuMode::Identity};
        } else if (geom.kind == ArrayKind::Linear) {
            // Mirror partner across the vertical array axis: i <-> N-1-i.
            sf = i <= count / 2 ? SensorFold{i, AmuMode::Identity}
                                : SensorFold{count - 1 - i, AmuMode::ColMirror};
        } else if (fold == FoldKind::Half) {
            // Partner across the horizontal axis: i <-> N-i.
            sf = i <= count / 2 ? SensorFold{i, AmuMode::Identity}
                                : SensorFold{count - i, AmuMode::RowMirror};
        } else {
            // Quadrant reduction, one arm per quarter turn of the ring.
            int j;
            AmuMode mode;
            if (i <= count / 4) {
                j = i;
                mode = AmuMode::Identity;
            } else if (i <= count / 2) {
                j = count / 2 - i;
                mode = AmuMode::ColMirror;
            } else if (i <= 3 * count / 4) {
                j = i - count / 2;
                mode = AmuMode::PointReflect;
            } else {
                j = count - i;
                mode = AmuMode::RowMirror;
            }
            if (fold == FoldKind::Octant && j > count / 8) {
                // Diagonal partner within the quadrant: j <-> N/4-j.
                j = count / 4 - j;
                mode = amu_compose(AmuMode::Transpose, mode);
            }
            sf = SensorFold{j, mode};
        }
        map.mapping[std::size_t(i)] = sf;
    }
    return map;
}

FoldedTableSet fold_tables(const DelayTable& table, const ArrayGeometry& geom,
                           const RoiGrid& grid, FoldKind fold) {
    if (table.delays.rows() != std::size_t(geom.num_sensors))
        fail(Errc::DimensionMismatch, "delay table does not match sensor count");
    if (table.delays.cols() != grid.pixel_count())
        fail(Errc::DimensionMismatch, "delay table does not match grid size");

    FoldedTableSet out;
    out.map = make_fold_map(geom, grid, fold);
    out.bit_width = table.bit_width;
    out.tables = Mat<std::uint32_t>(out.map.stored_ids.size(), table.delays.cols());
    for (std::size_t k = 0; k < out.map.stored_ids.size(); ++k) {
        const std::uint32_t* src = table.delays.row(std::size_t(out.map.stored_ids[k]));
        std::uint32_t* dst = out.tables.row(k);
        std::copy(src, src + table.delays.cols(), dst);
    }
    return out;
}

std::uint32_t amu_lookup(const FoldedTableSet& folded, int sensor, int r, int c) {
    if (sensor < 0 || sensor >= folded.map.num_sensors)
        fail(Errc::InvalidArgument, "sensor id out of range");
    const SensorFold& sf = folded.map.mapping[std::size_t(sensor)];
    const PixelRef q = amu_apply(sf.mode, r, c, folded.map.grid_n, folded.map.grid_m);
    return folded.tables(std::size_t(sf.stored_index),
                         std::size_t(q.r) * folded.map.grid_m + q.c);
}

StorageBudget storage_budget(int num_sensors, int n, int m, int delay_bits,
                             int phase_bits, int amplitude_bits, FoldKind fold) {
    if (num_sensors < 1 || n < 1 || m < 1)
        fail(Errc::InvalidArgument, "storage budget needs positive dimensions");
    if (delay_bits < 1 || phase_bits < 1 || amplitude_bits < 1)
        fail(Errc::InvalidArgument, "storage budget needs positive bit widths");

    const int stored = fold_stored_count(num_sensors, fold);
    const std::uint64_t cells = std::uint64_t(stored) * std::uint64_t(n) * std::uint64_t(m);

    StorageBudget b;
    b.stored_sensor_count = stored;
    b.delay_bits = cells * std::uint64_t(delay_bits);
    b.phase_bits = cells * std::uint64_t(phase_bits);
    b.amplitude_bits = cells * std::uint64_t(amplitude_bits);
    b.total_bits = b.delay_bits + b.phase_bits + b.amplitude_bits;
    b.savings_ratio = double(num_sensors) / double(stored);
    return b;
}

double bits_to_mib(std::uint64_t bits) {
    return double(bits) / (1024.0 * 1024.0);
}

double bits_to_megabits(std::uint64_t bits) {
    return double(bits) / 1.0e6;
}

} // namespace pat
