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

#include "pat/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pat/io.hpp"
#include "pat/waveform.hpp"

namespace pat {

namespace {

struct RawEntry {
    std::string key;
    std::string value;
    int line = 0;
};

std::string at_line(int line) {
    return line > 0 ? "config line " + std::to_string(line) + ": " : "config: ";
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

/// Comment stripping honors double quotes so paths may contain '#'.
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"')
            quoted = !quoted;
        else if (line[i] == '#' && !quoted)
            return line.substr(0, i);
    }
    return line;
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
        return s.substr(1, s.size() - 2);
    return s;
}

double parse_number(const std::string& text, const RawEntry& e) {
    const char* s = text.c_str();
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end == s || *end != '\0' || !std::isfinite(v))
        fail(Errc::InvalidArgument, at_line(e.line) + "'" + e.key +
                                        "' expects a finite number, got '" + text + "'");
    return v;
}

long long parse_integer(const RawEntry& e, long long lo, long long hi) {
    const char* s = e.value.c_str();
    char* end = nullptr;
    long long v = std::strtoll(s, &end, 10);
    if (end == s || *end != '\0')
        fail(Errc::InvalidArgument, at_line(e.line) + "'" + e.key +
                                        "' expects an integer, got '" + e.value + "'");
    if (v < lo || v > hi)
        fail(Errc::InvalidArgument, at_line(e.line) + "'" + e.key + "' is out of range");
    return v;
}

/// One section's entries with consumption tracking: anything left
/// unread when the section closes is an unknown key.
class SectionReader {
  public:
    SectionReader(std::string name, std::vector<RawEntry> entries)
        : name_(std::move(name)), entries_(std::move(entries)) {}

    const RawEntry* find(const std::string& key) {
        const RawEntry* hit = nullptr;
        for (const RawEntry& e : entries_) {
            if (e.key != key)
                continue;
            if (hit)
                fail(Errc::InvalidArgument, at_line(e.line) + "duplicate key '" + key +
                                                "' in [" + name_ + "]");
            hit = &e;
        }
        if (hit)
            consumed_.insert(key);
        return hit;
    }

    std::vector<const RawEntry*> repeated(const std::string& key) {
        std::vector<const RawEntry*> out;
        for (const RawEntry& e : entries_)
            if (e.key == key)
                out.push_back(&e);
        consumed_.insert(key);
        return out;
    }

    double number(const std::string& key, double def) {
        const RawEntry* e = find(key);
        return e ? parse_number(e->value, *e) : def;
    }

    std::optional<double> opt_number(const std::string& key) {
        const RawEntry* e = find(key);
        if (!e)
            return std::nullopt;
        return parse_number(e->value, *e);
    }

    int integer(const std::string& key, int def) {
        const RawEntry* e = find(key);
        return e ? int(parse_integer(*e, INT32_MIN, INT32_MAX)) : def;
    }

    std::optional<int> opt_integer(const std::string& key) {
        const RawEntry* e = find(key);
        if (!e)
            return std::nullopt;
        return int(parse_integer(*e, INT32_MIN, INT32_MAX));
    }

    std::optional<std::uint64_t> opt_u64(const std::string& key) {
        const RawEntry* e = find(key);
        if (!e)
            return std::nullopt;
        const char* s = e->value.c_str();
        char* end = nullptr;
        unsigned long long v = std::strtoull(s, &end, 10);
        if (end == s || *end != '\0' || e->value.front() == '-')
            fail(Errc::InvalidArgument, at_line(e->line) + "'" + key +
                                            "' expects an unsigned integer");
        return std::uint64_t(v);
    }

    bool boolean(const std::string& key, bool def) {
        const RawEntry* e = find(key);
        if (!e)
            return def;
        std::string v = unquote(e->value);
        if (v == "true")
            return true;
        if (v == "false")
            return false;
        fail(Errc::InvalidArgument,
             at_line(e->line) + "'" + key + "' expects true or false");
    }

    std::string text(const std::string& key, const std::string& def) {
        const RawEntry* e = find(key);
        return e ? unquote(e->value) : def;
    }

    /// Maps a keyword value through a name table; the error message
    /// lists the accepted spellings.
    template <typename T>
    T choice(const std::string& key,
             std::initializer_list<std::pair<const char*, T>> table, T def) {
        const RawEntry* e = find(key);
        if (!e)
            return def;
        std::string v = unquote(e->value);
        std::string names;
        for (const auto& [name, value] : table) {
            if (v == name)
                return value;
            if (!names.empty())
                names += " | ";
            names += name;
        }
        fail(Errc::InvalidArgument,
             at_line(e->line) + "'" + key + "' must be one of: " + names);
    }

    void finish() const {
        for (const RawEntry& e : entries_)
            if (!consumed_.count(e.key))
                fail(Errc::InvalidArgument, at_line(e.line) + "unknown key '" + e.key +
                                                "' in [" + name_ + "]");
    }

  private:
    std::string name_;
    std::vector<RawEntry> entries_;
    std::set<std::string> consumed_;
};

std::vector<std::string> split_fields(const std::string& s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t'))
            ++i;
        std::size_t b = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t')
            ++i;
        if (i > b)
            out.push_back(s.substr(b, i - b));
    }
    return out;
}

PhantomTarget parse_target(const RawEntry& e) {
    const std::vector<std::string> tok = split_fields(e.value);
    if (tok.empty())
        fail(Errc::InvalidArgument, at_line(e.line) + "empty target");
    PhantomTarget t;
    if (tok[0] == "point") {
        if (tok.size() < 3 || tok.size() > 4)
            fail(Errc::InvalidArgument,
                 at_line(e.line) + "point targets take x y [intensity]");
        t.kind = TargetKind::Point;
        t.pos.x = parse_number(tok[1], e);
        t.pos.y = parse_number(tok[2], e);
        t.intensity = tok.size() > 3 ? parse_number(tok[3], e) : 1.0;
    } else if (tok[0] == "disc") {
        if (tok.size() < 4 || tok.size() > 5)
            fail(Errc::InvalidArgument,
                 at_line(e.line) + "disc targets take x y radius [intensity]");
        t.kind = TargetKind::Disc;
        t.pos.x = parse_number(tok[1], e);
        t.pos.y = parse_number(tok[2], e);
        t.radius = parse_number(tok[3], e);
        t.intensity = tok.size() > 4 ? parse_number(tok[4], e) : 1.0;
    } else {
        fail(Errc::InvalidArgument,
             at_line(e.line) + "target must start with 'point' or 'disc'");
    }
    return t;
}

} // namespace

const char* run_mode_name(RunMode mode) {
    return mode == RunMode::Reference ? "reference" : "hardware";
}

double RunConfig::waveform_center() const {
    if (waveform.center)
        return *waveform.center;
    return delay_samples(swave.calibration_distance, acoustic) + waveform.sigma;
}

std::uint64_t config_hash(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

ConfigFile parse_config(const std::string& text) {
    std::map<std::string, std::vector<RawEntry>> sections;
    std::map<std::string, int> section_line;

    std::string current;
    int current_line = 0;
    int line_no = 0;
    std::size_t pos = 0;
    // A UTF-8 byte-order mark is tolerated but carries no meaning.
    if (text.rfind("\xEF\xBB\xBF", 0) == 0)
        pos = 3;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos)
            eol = text.size();
        ++line_no;
        std::string line = trim(strip_comment(text.substr(pos, eol - pos)));
        pos = eol + 1;
        if (line.empty()) {
            if (pos > text.size())
                break;
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                fail(Errc::InvalidArgument,
                     at_line(line_no) + "malformed section header '" + line + "'");
            current = trim(line.substr(1, line.size() - 2));
            // The hyphenated spelling is accepted as an alias.
            if (current == "fixed-point")
                current = "fixedpoint";
            if (!section_line.count(current))
                section_line[current] = line_no;
            current_line = line_no;
            sections[current];
        } else {
            std::size_t eq = line.find('=');
            if (eq == std::string::npos)
                fail(Errc::InvalidArgument,
                     at_line(line_no) + "expected 'key = value', got '" + line + "'");
            if (current.empty())
                fail(Errc::InvalidArgument,
                     at_line(line_no) + "key outside any [section]");
            RawEntry e;
            e.key = trim(line.substr(0, eq));
            e.value = trim(line.substr(eq + 1));
            e.line = line_no;
            if (e.key.empty())
                fail(Errc::InvalidArgument, at_line(line_no) + "empty key");
            sections[current].push_back(std::move(e));
        }
        if (pos > text.size())
            break;
    }
    (void)current_line;

    static const std::set<std::string> known = {
        "run",   "geometry", "grid",       "acoustic", "waveform",
        "swave", "recon",    "fixedpoint", "schedule", "phantom"};
    for (const auto& [name, entries] : sections) {
        (void)entries;
        if (!known.count(name))
            fail(Errc::InvalidArgument,
                 at_line(section_line[name]) + "unknown section [" + name + "]");
    }

    ConfigFile out;
    RunConfig& cfg = out.run;

    {
        SectionReader r("run", sections["run"]);
        cfg.mode = r.choice<RunMode>("mode",
                                     {{"reference", RunMode::Reference},
                                      {"hardware", RunMode::Hardware}},
                                     RunMode::Reference);
        r.finish();
    }

    {
        SectionReader r("geometry", sections["geometry"]);
        const ArrayKind kind = r.choice<ArrayKind>(
            "kind", {{"ring", ArrayKind::Ring}, {"linear", ArrayKind::Linear}},
            ArrayKind::Ring);
        ArrayGeometry g;
        g.kind = kind;
        g.num_sensors = r.integer("num_sensors", 128);
        g.center.x = r.number("center_x_m", 0.0);
        if (kind == ArrayKind::Ring) {
            g.radius = r.number("radius_m", 0.03);
            g.angular_offset = r.number("angular_offset_rad", 0.0);
            g.center.y = r.number("center_y_m", 0.0);
        } else {
            const std::optional<double> pitch = r.opt_number("pitch_m");
            if (!pitch)
                fail(Errc::InvalidArgument, "config: linear arrays need pitch_m");
            g.pitch = *pitch;
            g.baseline_y = r.number("baseline_y_m", 0.0);
        }
        r.finish();
        cfg.geometry = g;
    }

    {
        SectionReader r("grid", sections["grid"]);
        const int n = r.integer("grid_n", 128);
        const int m = r.integer("grid_m", n);
        const double extent = r.number("roi_extent_m", 0.02);
        RoiGrid g;
        g.n = n;
        g.m = m;
        g.extent_x = r.number("roi_extent_x_m", extent);
        g.extent_y = r.number("roi_extent_y_m", extent);
        g.center.x = r.number("center_x_m", 0.0);
        g.center.y = r.number("center_y_m", 0.0);
        r.finish();
        cfg.grid = g;
    }

    {
        SectionReader r("acoustic", sections["acoustic"]);
        cfg.acoustic.sound_speed = r.number("sound_speed_mps", 1500.0);
        cfg.acoustic.sample_rate = r.number("sample_rate_hz", 34.0e6);
        cfg.acoustic.sample_depth = r.integer("sample_depth", 1024);
        r.finish();
    }

    {
        SectionReader r("waveform", sections["waveform"]);
        cfg.waveform.kind = r.text("kind", "n-pulse");
        if (cfg.waveform.kind != "n-pulse" && cfg.waveform.kind != "file")
            fail(Errc::InvalidArgument,
                 "config: waveform kind must be 'n-pulse' or 'file'");
        cfg.waveform.center = r.opt_number("center");
        cfg.waveform.sigma = r.number("sigma", 3.0);
        cfg.waveform.amplitude = r.number("amplitude", 1.0);
        cfg.waveform.path = r.text("path", "");
        r.finish();
        if (cfg.waveform.kind == "file" && cfg.waveform.path.empty())
            fail(Errc::InvalidArgument, "config: file waveforms need a path");
        if (cfg.waveform.kind == "n-pulse" && !cfg.waveform.path.empty())
            fail(Errc::InvalidArgument,
                 "config: 'path' only applies to file waveforms");
    }

    {
        SectionReader r("swave", sections["swave"]);
        cfg.swave.calibration_distance = r.number("calibration_distance_m", 0.03);
        cfg.swave.k = r.opt_number("k");
        cfg.swave.shift_mode = r.choice<ShiftMode>(
            "shift_mode",
            {{"circular", ShiftMode::Circular}, {"zero-pad", ShiftMode::ZeroPad}},
            ShiftMode::Circular);
        r.finish();
    }

    {
        SectionReader r("recon", sections["recon"]);
        cfg.recon.learning_rate = r.number("learning_rate", 0.1);
        cfg.recon.max_iterations = r.integer("max_iterations", 20);
        cfg.recon.loss_threshold_rel = r.number("loss_threshold_rel", 0.05);
        cfg.recon.loss_threshold_abs = r.opt_number("loss_threshold_abs");
        cfg.recon.record_trace = r.boolean("record_trace", false);
        cfg.normalize_each_das = r.boolean("normalize_each_das", false);
        r.finish();
    }

    {
        SectionReader r("fixedpoint", sections["fixedpoint"]);
        FixedPointSpec& s = cfg.fixed_point;
        s.delay_bits = r.integer("delay_bits", s.delay_bits);
        s.phase_bits = r.integer("phase_bits", s.phase_bits);
        s.amplitude_bits = r.integer("amplitude_bits", s.amplitude_bits);
        s.sample_bits = r.integer("sample_bits", s.sample_bits);
        s.accumulator_bits = r.integer("accumulator_bits", s.accumulator_bits);
        s.norm_shift = r.integer("norm_shift", s.norm_shift);
        s.amplitude_scale_shift = r.opt_integer("amplitude_scale_shift");
        s.lr_shift = r.integer("lr_shift", s.lr_shift);
        s.rescale_shift = r.integer("rescale_shift", s.rescale_shift);
        cfg.fold = r.choice<FoldKind>("fold",
                                      {{"none", FoldKind::None},
                                       {"half", FoldKind::Half},
                                       {"quarter", FoldKind::Quarter},
                                       {"octant", FoldKind::Octant}},
                                      FoldKind::Quarter);
        r.finish();
    }

    {
        SectionReader r("schedule", sections["schedule"]);
        cfg.schedule.lanes = r.integer("lanes", 32);
        cfg.schedule.permutation_seed = r.opt_u64("permutation_seed");
        r.finish();
    }

    {
        SectionReader r("phantom", sections["phantom"]);
        cfg.phantom.noise_sigma = r.opt_number("noise_sigma");
        for (const RawEntry* e : r.repeated("target"))
            cfg.phantom.targets.push_back(parse_target(*e));
        r.finish();
    }

    out.hash = config_hash(text);
    out.warnings = validate_run_config(cfg);
    return out;
}

ConfigFile load_config_file(const std::string& path) {
    return parse_config(read_file_bytes(path));
}

std::vector<std::string> validate_run_config(const RunConfig& cfg) {
    cfg.geometry.validate();
    cfg.grid.validate();
    cfg.acoustic.validate();
    cfg.swave.validate();
    cfg.recon.validate();
    cfg.fixed_point.validate(cfg.geometry.num_sensors);
    cfg.phantom.validate(cfg.grid);

    if (!(cfg.waveform.sigma > 0.0) || !std::isfinite(cfg.waveform.sigma))
        fail(Errc::InvalidArgument, "waveform sigma must be positive");
    if (!std::isfinite(cfg.waveform.amplitude) || cfg.waveform.amplitude == 0.0)
        fail(Errc::InvalidArgument, "waveform amplitude must be finite and nonzero");
    if (cfg.waveform.kind == "file" && cfg.waveform.path.empty())
        fail(Errc::InvalidArgument, "file waveforms need a path");

    if (cfg.schedule.lanes < 1)
        fail(Errc::InvalidArgument, "schedule needs at least one lane");
    if (cfg.geometry.num_sensors % cfg.schedule.lanes != 0)
        fail(Errc::IncompatibleSymmetry,
             "num_sensors (" + std::to_string(cfg.geometry.num_sensors) +
                 ") must be divisible by lanes (" +
                 std::to_string(cfg.schedule.lanes) + ")");

    std::vector<std::string> warnings;
    const std::uint32_t max_code =
        std::uint32_t((std::uint64_t(1) << cfg.fixed_point.delay_bits) - 1);
    if (std::uint64_t(cfg.acoustic.sample_depth) > std::uint64_t(max_code) + 1)
        warnings.push_back("delay width " + std::to_string(cfg.fixed_point.delay_bits) +
                           " bits addresses samples 0.." + std::to_string(max_code) +
                           " but the capture depth is " +
                           std::to_string(cfg.acoustic.sample_depth) +
                           "; deeper samples are unreachable");

    // The farthest pixel from any sensor decides whether the delay
    // table saturates. Distance to a rectangle is maximized at a
    // corner, and the corner pixel centers are lattice points, so the
    // bound below is attained.
    double far_dist = 0.0;
    const double ox = cfg.grid.extent_x / 2.0 - cfg.grid.pixel_dx() / 2.0;
    const double oy = cfg.grid.extent_y / 2.0 - cfg.grid.pixel_dy() / 2.0;
    for (const Vec2& s : sensor_positions(cfg.geometry)) {
        for (int sx = -1; sx <= 1; sx += 2) {
            for (int sy = -1; sy <= 1; sy += 2) {
                const double dx = cfg.grid.center.x + sx * ox - s.x;
                const double dy = cfg.grid.center.y + sy * oy - s.y;
                far_dist = std::max(far_dist, std::hypot(dx, dy));
            }
        }
    }
    const std::int64_t far_delay =
        round_half_away(delay_samples(far_dist, cfg.acoustic));
    if (far_delay > std::int64_t(max_code))
        warnings.push_back("farthest pixel needs delay " + std::to_string(far_delay) +
                           " but the delay table saturates at " +
                           std::to_string(max_code) +
                           "; clamped entries read the wrong samples");
    if (far_delay >= cfg.acoustic.sample_depth)
        warnings.push_back("farthest pixel delay " + std::to_string(far_delay) +
                           " reaches past the capture depth " +
                           std::to_string(cfg.acoustic.sample_depth) +
                           "; those reads contribute nothing");
    return warnings;
}

std::vector<double> make_waveform(const RunConfig& cfg) {
    if (cfg.waveform.kind == "n-pulse")
        return n_pulse(cfg.acoustic.sample_depth, cfg.waveform_center(),
                       cfg.waveform.sigma, cfg.waveform.amplitude);
    std::vector<double> w = load_waveform(cfg.waveform.path);
    if (w.size() != std::size_t(cfg.acoustic.sample_depth))
        fail(Errc::LengthMismatch,
             cfg.waveform.path + ": waveform length " + std::to_string(w.size()) +
                 " does not match sample_depth " +
                 std::to_string(cfg.acoustic.sample_depth));
    return w;
}

ExecSchedule make_schedule(const RunConfig& cfg) {
    ExecSchedule sched =
        ExecSchedule::identity(cfg.geometry.num_sensors, cfg.schedule.lanes);
    if (cfg.schedule.permutation_seed) {
        sched.assignment.resize(std::size_t(cfg.geometry.num_sensors));
        std::iota(sched.assignment.begin(), sched.assignment.end(), 0);
        // Hand-rolled Fisher-Yates on the standardized mt19937_64
        // stream; std::shuffle's draw order is implementation-defined
        // and would break cross-platform reproducibility.
        std::mt19937_64 gen(*cfg.schedule.permutation_seed);
        for (std::size_t i = sched.assignment.size() - 1; i > 0; --i) {
            const std::size_t j = std::size_t(gen() % (i + 1));
            std::swap(sched.assignment[i], sched.assignment[j]);
        }
    }
    sched.validate(cfg.geometry.num_sensors);
    return sched;
}

std::string default_config_text() {
    const RunConfig d;
    char buf[4096];
    std::snprintf(
        buf, sizeof(buf),
        "# Default pipeline configuration. Every key is optional; the values\n"
        "# below are the built-in defaults.\n"
        "\n"
        "[run]\n"
        "mode = %s                # reference | hardware\n"
        "\n"
        "[geometry]\n"
        "kind = ring                     # ring | linear\n"
        "num_sensors = %d\n"
        "radius_m = %g\n"
        "angular_offset_rad = %g\n"
        "\n"
        "[grid]\n"
        "grid_n = %d\n"
        "grid_m = %d\n"
        "roi_extent_m = %g\n"
        "\n"
        "[acoustic]\n"
        "sound_speed_mps = %g\n"
        "sample_rate_hz = %g\n"
        "sample_depth = %d\n"
        "\n"
        "[waveform]\n"
        "kind = n-pulse                  # n-pulse | file\n"
        "# center defaults to the calibration delay plus one sigma\n"
        "sigma = %g\n"
        "amplitude = %g\n"
        "\n"
        "[swave]\n"
        "calibration_distance_m = %g\n"
        "# k defaults to calibration_distance_m^2\n"
        "shift_mode = circular           # circular | zero-pad\n"
        "\n"
        "[recon]\n"
        "learning_rate = %g\n"
        "max_iterations = %d\n"
        "loss_threshold_rel = %g\n"
        "record_trace = false\n"
        "normalize_each_das = false\n"
        "\n"
        "[fixedpoint]\n"
        "delay_bits = %d\n"
        "phase_bits = %d\n"
        "amplitude_bits = %d\n"
        "sample_bits = %d\n"
        "accumulator_bits = %d\n"
        "norm_shift = %d\n"
        "lr_shift = %d\n"
        "rescale_shift = %d\n"
        "fold = quarter                  # none | half | quarter | octant\n"
        "\n"
        "[schedule]\n"
        "lanes = %d\n"
        "# permutation_seed = 1          # shuffles the lane assignment\n"
        "\n"
        "[phantom]\n"
        "# target = point 0.004 0.003 1.0\n"
        "# target = disc 0.002 -0.001 0.002 1.0\n"
        "# noise_sigma = 0.01            # relative to the peak sample\n",
        run_mode_name(d.mode), d.geometry.num_sensors, d.geometry.radius,
        d.geometry.angular_offset, d.grid.n, d.grid.m, d.grid.extent_x,
        d.acoustic.sound_speed, d.acoustic.sample_rate, d.acoustic.sample_depth,
        d.waveform.sigma, d.waveform.amplitude, d.swave.calibration_distance,
        d.recon.learning_rate, d.recon.max_iterations, d.recon.loss_threshold_rel,
        d.fixed_point.delay_bits, d.fixed_point.phase_bits,
        d.fixed_point.amplitude_bits, d.fixed_point.sample_bits,
        d.fixed_point.accumulator_bits, d.fixed_point.norm_shift,
        d.fixed_point.lr_shift, d.fixed_point.rescale_shift, d.schedule.lanes);
    return std::string(buf);
}

} // namespace pat
