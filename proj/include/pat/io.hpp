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

#ifndef PAT_IO_HPP
#define PAT_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pat/types.hpp"

namespace pat {

/// Binary matrix container. Layout, all little endian:
///
///   offset 0   "PADF"            4 bytes
///   offset 4   version           u16  (currently 1)
///   offset 6   rows              u32
///   offset 10  cols              u32
///   offset 14  dtype             u16  (0 = f64, 1 = i16)
///   offset 16  sample_rate       f64  (Hz; 0 when not applicable)
///   offset 24  payload, row major, rows*cols elements
///
/// Readers reject wrong magic, unknown version or dtype, short payloads,
/// and trailing bytes.
enum class PadfDtype : std::uint16_t { F64 = 0, I16 = 1 };

inline constexpr std::uint16_t kPadfVersion = 1;
inline constexpr std::size_t kPadfHeaderSize = 24;

struct PadfFile {
    std::uint16_t version = kPadfVersion;
    PadfDtype dtype = PadfDtype::F64;
    double sample_rate = 0.0;
    Mat<double> f64;       // valid when dtype == F64
    Mat<std::int16_t> i16; // valid when dtype == I16
};

PadfFile read_padf(const std::string& path);
void write_padf(const std::string& path, const Mat<double>& data, double sample_rate);
void write_padf(const std::string& path, const Mat<std::int16_t>& data,
                double sample_rate);

/// Payload as doubles regardless of the stored dtype (i16 widens verbatim).
Mat<double> padf_as_f64(const PadfFile& file);

/// Multichannel capture: one row per sensor. The sample rate comes from
/// the file header and must be positive.
SensorData load_sensor_data(const std::string& path);

/// Single waveform: the file must hold exactly one row or one column.
std::vector<double> load_waveform(const std::string& path, double* sample_rate = nullptr);

/// 8-bit binary PGM (P5). Pixel values are rounded and clamped to [0, 255];
/// a normalized image's full-scale value of 256 lands on 255.
void write_pgm(const std::string& path, const Image& image);

/// Plain-text matrix, one row per line, values comma separated with
/// round-trip (%.17g) precision.
void write_csv(const std::string& path, const Mat<double>& data);

/// Inverse of write_csv. Every row must have the same number of fields;
/// blank trailing lines are tolerated.
Mat<double> read_csv_matrix(const std::string& path);

/// Whole-file write through a temp file in the same directory plus an
/// atomic rename, so readers never observe a half-written file.
void atomic_write_file(const std::string& path, const std::string& bytes);

std::string read_file_bytes(const std::string& path);

} // namespace pat

#endif // PAT_IO_HPP
