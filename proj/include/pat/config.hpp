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

#ifndef PAT_CONFIG_HPP
#define PAT_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pat/geometry.hpp"
#include "pat/hwmodel.hpp"
#include "pat/iterate.hpp"
#include "pat/phantom.hpp"
#include "pat/swave.hpp"

namespace pat {

/// Bumped whenever a built-in default value changes meaning, so run
/// metadata can state which generation of defaults filled the gaps.
inline constexpr const char* kConfigDefaultsVersion = "1";

enum class RunMode { Reference, Hardware };

const char* run_mode_name(RunMode mode);

/// Template source. "n-pulse" synthesizes the analytic pulse at the
/// configured center/width; "file" loads a single-row or single-column
/// PADF whose length must equal the acoustic sample depth.
struct WaveformConfig {
    std::string kind = "n-pulse";
    std::optional<double> center; // samples; defaults to the calibration delay
    double sigma = 3.0;           // samples
    double amplitude = 1.0;
    std::string path;             // kind == "file"
};

/// Lane count plus an optional deterministic shuffle of the
/// sensor-to-slot assignment. Any permutation produces bit-identical
/// images; the seed exists to exercise exactly that property.
struct ScheduleConfig {
    int lanes = 32;
    std::optional<std::uint64_t> permutation_seed;
};

/// Everything one pipeline invocation needs. Section structs mirror the
/// library types so a parsed config drops straight into the engine.
struct RunConfig {
    RunMode mode = RunMode::Reference;
    ArrayGeometry geometry = ArrayGeometry::ring(128, 0.03);
    RoiGrid grid = RoiGrid::square(128, 0.02);
    AcousticConfig acoustic{1500.0, 34.0e6, 1024};
    WaveformConfig waveform;
    SwaveParams swave;
    ReconConfig recon;
    bool normalize_each_das = false; // hardware-loop update variant
    FixedPointSpec fixed_point;
    FoldKind fold = FoldKind::Quarter;
    ScheduleConfig schedule;
    PhantomSpec phantom;

    /// Pulse center in samples: explicit value, or the calibration
    /// delay plus one pulse half-width so the compression peak sits on
    /// the calibration read point.
    double waveform_center() const;
};

/// Parse result. `warnings` carries non-fatal consistency findings
/// (for example a delay table too narrow for the sample depth); `hash`
/// fingerprints the exact source bytes for run metadata.
struct ConfigFile {
    RunConfig run;
    std::uint64_t hash = 0;
    std::vector<std::string> warnings;
};

/// Parses the sectioned key = value grammar (full description in the
/// README). Unknown sections or keys, duplicate keys, and type errors
/// all fail with the offending line number. An empty string yields the
/// built-in defaults.
ConfigFile parse_config(const std::string& text);

ConfigFile load_config_file(const std::string& path);

/// FNV-1a 64 over the raw bytes.
std::uint64_t config_hash(const std::string& text);

/// Cross-section invariants beyond each struct's own validate():
/// lane divisibility is fatal, delay-width versus sample-depth coverage
/// comes back as a warning.
std::vector<std::string> validate_run_config(const RunConfig& cfg);

/// Materializes the template waveform: synthesized n-pulse or loaded
/// file, always sample_depth entries long.
std::vector<double> make_waveform(const RunConfig& cfg);

/// Identity schedule, or a Fisher-Yates shuffle of it when a
/// permutation seed is set. The shuffle is hand-rolled on a fixed
/// 64-bit generator so a seed means the same order on every platform.
ExecSchedule make_schedule(const RunConfig& cfg);

/// The default configuration rendered in the config grammar, with every
/// key present. `pat gen-phantom --emit-config` prints this.
std::string default_config_text();

} // namespace pat

#endif // PAT_CONFIG_HPP
