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

#ifndef PAT_TYPES_HPP
#define PAT_TYPES_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pat {

/// Error categories surfaced by the library. Each maps to a stable
/// machine-readable token used by the CLI ("error: <category>: <message>").
enum class Errc {
    InvalidArgument,
    DimensionMismatch,
    IncompatibleSymmetry,
    DegenerateDistance,
    NonFiniteLoss,
    AccumulatorOverflow,
    BadMagic,
    TruncatedPayload,
    UnsupportedDtype,
    LengthMismatch,
    OutsideRoi,
    IoError,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message),
          code_(code) {}

    Errc code() const { return code_; }
    const char* category() const { return errc_name(code_); }

  private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
    throw Error(code, message);
}

/// Dense row-major matrix. Used for sensor data (N x M), images (n x m)
/// and pre-computed lookup tables.
template <typename T>
class Mat {
  public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    T& at(std::size_t r, std::size_t c) {
        check_index(r, c);
        return data_[r * cols_ + c];
    }
    const T& at(std::size_t r, std::size_t c) const {
        check_index(r, c);
        return data_[r * cols_ + c];
    }

    T* row(std::size_t r) { return data_.data() + r * cols_; }
    const T* row(std::size_t r) const { return data_.data() + r * cols_; }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    bool same_shape(const Mat& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }
    bool operator==(const Mat& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }

  private:
    void check_index(std::size_t r, std::size_t c) const {
        if (r >= rows_ || c >= cols_)
            fail(Errc::InvalidArgument, "matrix index out of range");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// N x M channel-data matrix: one row per sensor, one column per sample.
struct SensorData {
    Mat<double> samples;
    double sample_rate = 0.0;

    std::size_t num_sensors() const { return samples.rows(); }
    std::size_t sample_depth() const { return samples.cols(); }
};

/// n x m scalar field. value_range is set once the image has been
/// normalized (reference path: [0, 256]).
struct Image {
    Mat<double> pixels;
    std::optional<std::pair<double, double>> value_range;

    std::size_t rows() const { return pixels.rows(); }
    std::size_t cols() const { return pixels.cols(); }
};

} // namespace pat

#endif // PAT_TYPES_HPP
