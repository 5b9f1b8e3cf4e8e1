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

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "pat/io.hpp"

using namespace pat;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("pat_io_test_" + std::to_string(std::rand()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const char* name) const { return (path / name).string(); }
};

} // namespace

TEST_CASE("f64 matrices survive a write/read round trip") {
    TempDir dir;
    Mat<double> m(3, 4);
    for (std::size_t k = 0; k < m.size(); ++k)
        m.data()[k] = 0.125 * double(k) - 1.0;
    m(2, 3) = -0.0;
    write_padf(dir.file("m.padf"), m, 40.0e6);

    PadfFile f = read_padf(dir.file("m.padf"));
    CHECK(f.version == 1);
    CHECK(f.dtype == PadfDtype::F64);
    CHECK(f.sample_rate == 40.0e6);
    REQUIRE(f.f64.rows() == 3);
    REQUIRE(f.f64.cols() == 4);
    for (std::size_t k = 0; k < m.size(); ++k)
        CHECK(f.f64.data()[k] == m.data()[k]);
}

TEST_CASE("i16 matrices round trip including negative values") {
    TempDir dir;
    Mat<std::int16_t> m(2, 3);
    std::int16_t vals[] = {-32768, -1, 0, 1, 2047, 32767};
    for (std::size_t k = 0; k < 6; ++k)
        m.data()[k] = vals[k];
    write_padf(dir.file("q.padf"), m, 0.0);

    PadfFile f = read_padf(dir.file("q.padf"));
    CHECK(f.dtype == PadfDtype::I16);
    for (std::size_t k = 0; k < 6; ++k)
        CHECK(f.i16.data()[k] == vals[k]);

    Mat<double> wide = padf_as_f64(f);
    CHECK(wide(0, 0) == -32768.0);
    CHECK(wide(1, 2) == 32767.0);
}

TEST_CASE("header size is pinned at 24 bytes") {
    TempDir dir;
    Mat<double> m(1, 2);
    write_padf(dir.file("h.padf"), m, 1.0);
    CHECK(std::filesystem::file_size(dir.file("h.padf")) == 24 + 2 * 8);
}

TEST_CASE("malformed files raise the specific error") {
    TempDir dir;
    Mat<double> m(2, 2);
    const std::string path = dir.file("x.padf");
    write_padf(path, m, 1.0);
    std::string good = read_file_bytes(path);

    SUBCASE("wrong magic") {
        std::string bad = good;
        bad[0] = 'Q';
        atomic_write_file(path, bad);
        CHECK_THROWS_WITH_AS(read_padf(path), doctest::Contains("not a PADF"), Error);
    }
    SUBCASE("unknown dtype") {
        std::string bad = good;
        bad[14] = 9;
        atomic_write_file(path, bad);
        CHECK_THROWS_AS(read_padf(path), Error);
        try {
            read_padf(path);
        } catch (const Error& e) {
            CHECK(e.code() == Errc::UnsupportedDtype);
        }
    }
    SUBCASE("short payload") {
        atomic_write_file(path, good.substr(0, good.size() - 3));
        try {
            read_padf(path);
            FAIL("expected a throw");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::TruncatedPayload);
        }
    }
    SUBCASE("trailing bytes") {
        atomic_write_file(path, good + "zz");
        try {
            read_padf(path);
            FAIL("expected a throw");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::LengthMismatch);
        }
    }
    SUBCASE("unsupported version") {
        std::string bad = good;
        bad[4] = 7;
        atomic_write_file(path, bad);
        try {
            read_padf(path);
            FAIL("expected a throw");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::BadMagic);
        }
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(read_padf(dir.file("nope.padf")), Error);
    }
}

TEST_CASE("waveform loader accepts a row or column, nothing else") {
    TempDir dir;
    Mat<double> row(1, 5);
    for (std::size_t k = 0; k < 5; ++k)
        row.data()[k] = double(k);
    write_padf(dir.file("row.padf"), row, 10.0);
    double rate = 0.0;
    std::vector<double> w = load_waveform(dir.file("row.padf"), &rate);
    CHECK(w.size() == 5);
    CHECK(w[3] == 3.0);
    CHECK(rate == 10.0);

    Mat<double> col(5, 1);
    write_padf(dir.file("col.padf"), col, 0.0);
    CHECK(load_waveform(dir.file("col.padf")).size() == 5);

    Mat<double> block(2, 5);
    write_padf(dir.file("block.padf"), block, 0.0);
    CHECK_THROWS_AS(load_waveform(dir.file("block.padf")), Error);
}

TEST_CASE("sensor data loader needs a positive sample rate") {
    TempDir dir;
    Mat<double> m(4, 16);
    write_padf(dir.file("s.padf"), m, 0.0);
    CHECK_THROWS_AS(load_sensor_data(dir.file("s.padf")), Error);
    write_padf(dir.file("s.padf"), m, 20.0e6);
    SensorData d = load_sensor_data(dir.file("s.padf"));
    CHECK(d.num_sensors() == 4);
    CHECK(d.sample_depth() == 16);
    CHECK(d.sample_rate == 20.0e6);
}

TEST_CASE("pgm output is 8-bit with clamped full scale") {
    TempDir dir;
    Image img;
    img.pixels = Mat<double>(2, 2);
    img.pixels(0, 0) = 0.0;
    img.pixels(0, 1) = 256.0;
    img.pixels(1, 0) = 300.0;  // beyond the declared range clips to white
    img.pixels(1, 1) = -4.0;

    SUBCASE("an unnormalized image is rejected") {
        CHECK_THROWS_WITH_AS(write_pgm(dir.file("i.pgm"), img),
                             doctest::Contains("normalized"), Error);
    }

    SUBCASE("a normalized image maps its range onto 0..255") {
        img.value_range = std::pair<double, double>{0.0, 256.0};
        write_pgm(dir.file("i.pgm"), img);
        std::string bytes = read_file_bytes(dir.file("i.pgm"));
        CHECK(bytes.substr(0, 11) == "P5\n2 2\n255\n");
        REQUIRE(bytes.size() == 11 + 4);
        CHECK((unsigned char)bytes[11] == 0);
        CHECK((unsigned char)bytes[12] == 255);
        CHECK((unsigned char)bytes[13] == 255);
        CHECK((unsigned char)bytes[14] == 0);
    }
}

TEST_CASE("csv output keeps full precision") {
    TempDir dir;
    Mat<double> m(1, 2);
    m(0, 0) = 1.0 / 3.0;
    m(0, 1) = -2.5;
    write_csv(dir.file("m.csv"), m);
    std::string text = read_file_bytes(dir.file("m.csv"));
    CHECK(text == "0.33333333333333331,-2.5\n");
}

TEST_CASE("atomic writes leave no temp file behind") {
    TempDir dir;
    atomic_write_file(dir.file("out.bin"), "payload");
    CHECK(read_file_bytes(dir.file("out.bin")) == "payload");
    CHECK_FALSE(std::filesystem::exists(dir.file("out.bin.tmp")));
}
