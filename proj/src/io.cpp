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

#include "pat/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace pat {

namespace {

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(char(v & 0xff));
    out.push_back(char((v >> 8) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        out.push_back(char((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    for (int i = 0; i < 8; ++i)
        out.push_back(char((bits >> (8 * i)) & 0xff));
}

struct Cursor {
    const unsigned char* p;
    std::size_t left;

    std::uint16_t u16() {
        std::uint16_t v = std::uint16_t(p[0]) | std::uint16_t(p[1]) << 8;
        p += 2;
        left -= 2;
        return v;
    }
    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= std::uint32_t(p[i]) << (8 * i);
        p += 4;
        left -= 4;
        return v;
    }
    double f64() {
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i)
            bits |= std::uint64_t(p[i]) << (8 * i);
        p += 8;
        left -= 8;
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
    std::int16_t i16() {
        return std::int16_t(u16());
    }
};

std::string header_bytes(std::uint32_t rows, std::uint32_t cols, PadfDtype dtype,
                         double sample_rate) {
    std::string out;
    out.reserve(kPadfHeaderSize);
    out += "PADF";
    put_u16(out, kPadfVersion);
    put_u32(out, rows);
    put_u32(out, cols);
    put_u16(out, std::uint16_t(dtype));
    put_f64(out, sample_rate);
    return out;
}

} // namespace

std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(Errc::IoError, "cannot open " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    if (in.bad())
        fail(Errc::IoError, "read failed for " + path);
    return bytes;
}

void atomic_write_file(const std::string& path, const std::string& bytes) {
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            fail(Errc::IoError, "cannot create " + tmp.string());
        out.write(bytes.data(), std::streamsize(bytes.size()));
        out.flush();
        if (!out)
            fail(Errc::IoError, "write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        fail(Errc::IoError, "rename failed for " + path + ": " + ec.message());
    }
}

PadfFile read_padf(const std::string& path) {
    const std::string bytes = read_file_bytes(path);
    if (bytes.size() < kPadfHeaderSize)
        fail(Errc::TruncatedPayload, path + ": shorter than the header");
    if (std::memcmp(bytes.data(), "PADF", 4) != 0)
        fail(Errc::BadMagic, path + ": not a PADF file");

    Cursor cur{reinterpret_cast<const unsigned char*>(bytes.data()) + 4,
               bytes.size() - 4};
    PadfFile file;
    file.version = cur.u16();
    if (file.version != kPadfVersion)
        fail(Errc::BadMagic, path + ": unsupported version");
    const std::uint32_t rows = cur.u32();
    const std::uint32_t cols = cur.u32();
    const std::uint16_t dtype = cur.u16();
    file.sample_rate = cur.f64();

    std::size_t elem_size;
    switch (dtype) {
    case std::uint16_t(PadfDtype::F64): elem_size = 8; break;
    case std::uint16_t(PadfDtype::I16): elem_size = 2; break;
    default:
        fail(Errc::UnsupportedDtype, path + ": unknown dtype code");
    }
    file.dtype = PadfDtype(dtype);

    const std::size_t count = std::size_t(rows) * std::size_t(cols);
    if (cur.left < count * elem_size)
        fail(Errc::TruncatedPayload, path + ": payload shorter than rows*cols");
    if (cur.left > count * elem_size)
        fail(Errc::LengthMismatch, path + ": trailing bytes after payload");

    if (file.dtype == PadfDtype::F64) {
        file.f64 = Mat<double>(rows, cols);
        for (std::size_t k = 0; k < count; ++k)
            file.f64.data()[k] = cur.f64();
    } else {
        file.i16 = Mat<std::int16_t>(rows, cols);
        for (std::size_t k = 0; k < count; ++k)
            file.i16.data()[k] = cur.i16();
    }
    return file;
}

void write_padf(const std::string& path, const Mat<double>& data, double sample_rate) {
    std::string bytes = header_bytes(std::uint32_t(data.rows()),
                                     std::uint32_t(data.cols()),
                                     PadfDtype::F64, sample_rate);
    bytes.reserve(bytes.size() + data.size() * 8);
    for (std::size_t k = 0; k < data.size(); ++k)
        put_f64(bytes, data.data()[k]);
    atomic_write_file(path, bytes);
}

void write_padf(const std::string& path, const Mat<std::int16_t>& data,
                double sample_rate) {
    std::string bytes = header_bytes(std::uint32_t(data.rows()),
                                     std::uint32_t(data.cols()),
                                     PadfDtype::I16, sample_rate);
    bytes.reserve(bytes.size() + data.size() * 2);
    for (std::size_t k = 0; k < data.size(); ++k)
        put_u16(bytes, std::uint16_t(data.data()[k]));
    atomic_write_file(path, bytes);
}

Mat<double> padf_as_f64(const PadfFile& file) {
    if (file.dtype == PadfDtype::F64)
        return file.f64;
    Mat<double> out(file.i16.rows(), file.i16.cols());
    for (std::size_t k = 0; k < file.i16.size(); ++k)
        out.data()[k] = double(file.i16.data()[k]);
    return out;
}

SensorData load_sensor_data(const std::string& path) {
    PadfFile file = read_padf(path);
    if (!(file.sample_rate > 0.0))
        fail(Errc::InvalidArgument, path + ": sensor data needs a sample rate");
    SensorData data;
    data.samples = padf_as_f64(file);
    data.sample_rate = file.sample_rate;
    if (data.samples.rows() == 0 || data.samples.cols() == 0)
        fail(Errc::InvalidArgument, path + ": empty sensor data");
    return data;
}

std::vector<double> load_waveform(const std::string& path, double* sample_rate) {
    PadfFile file = read_padf(path);
    Mat<double> data = padf_as_f64(file);
    if (data.rows() != 1 && data.cols() != 1)
        fail(Errc::DimensionMismatch, path + ": waveform must be a single row or column");
    if (sample_rate)
        *sample_rate = file.sample_rate;
    return std::move(data.data());
}

void write_pgm(const std::string& path, const Image& image) {
    const Mat<double>& px = image.pixels;
    if (px.rows() == 0 || px.cols() == 0)
        fail(Errc::InvalidArgument, "cannot write an empty image");
    // The 8-bit payload only has a defined meaning for normalized
    // images; a raw intensity field must be normalized first.
    if (!image.value_range)
        fail(Errc::InvalidArgument, "image must be normalized before PGM export");
    const double lo = image.value_range->first;
    const double span = image.value_range->second - lo;
    if (!(span > 0.0))
        fail(Errc::InvalidArgument, "image value range is degenerate");
    char head[64];
    std::snprintf(head, sizeof(head), "P5\n%zu %zu\n255\n", px.cols(), px.rows());
    std::string bytes(head);
    bytes.reserve(bytes.size() + px.size());
    for (std::size_t k = 0; k < px.size(); ++k) {
        double v = (px.data()[k] - lo) * 255.0 / span;
        long q = std::lround(v);
        if (q < 0)
            q = 0;
        if (q > 255)
            q = 255;
        bytes.push_back(char(static_cast<unsigned char>(q)));
    }
    atomic_write_file(path, bytes);
}

Mat<double> read_csv_matrix(const std::string& path) {
    const std::string bytes = read_file_bytes(path);
    std::vector<std::vector<double>> rows;
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        std::size_t eol = bytes.find('\n', pos);
        if (eol == std::string::npos)
            eol = bytes.size();
        std::string line = bytes.substr(pos, eol - pos);
        pos = eol + 1;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::vector<double> row;
        const char* s = line.c_str();
        while (true) {
            char* end = nullptr;
            double v = std::strtod(s, &end);
            if (end == s)
                fail(Errc::InvalidArgument,
                     path + ": malformed number in CSV row " +
                         std::to_string(rows.size() + 1));
            row.push_back(v);
            s = end;
            while (*s == ' ' || *s == '\t')
                ++s;
            if (*s == ',') {
                ++s;
                continue;
            }
            if (*s == '\0')
                break;
            fail(Errc::InvalidArgument,
                 path + ": unexpected character in CSV row " +
                     std::to_string(rows.size() + 1));
        }
        if (!rows.empty() && row.size() != rows.front().size())
            fail(Errc::DimensionMismatch,
                 path + ": CSV rows have differing field counts");
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        fail(Errc::InvalidArgument, path + ": empty CSV matrix");
    Mat<double> out(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < out.cols(); ++c)
            out(r, c) = rows[r][c];
    return out;
}

void write_csv(const std::string& path, const Mat<double>& data) {
    std::string bytes;
    char buf[40];
    for (std::size_t r = 0; r < data.rows(); ++r) {
        for (std::size_t c = 0; c < data.cols(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", data(r, c));
            if (c)
                bytes.push_back(',');
            bytes += buf;
        }
        bytes.push_back('\n');
    }
    atomic_write_file(path, bytes);
}

} // namespace pat
