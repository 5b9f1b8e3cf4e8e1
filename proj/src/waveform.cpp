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

#include "pat/waveform.hpp"

#include <cmath>

namespace pat {

std::vector<double> n_pulse(int length, double center, double sigma, double amplitude) {
    if (length < 1)
        fail(Errc::InvalidArgument, "pulse length must be at least 1");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        fail(Errc::InvalidArgument, "pulse sigma must be positive");
    if (!std::isfinite(center) || !std::isfinite(amplitude))
        fail(Errc::InvalidArgument, "pulse center and amplitude must be finite");

    std::vector<double> out(static_cast<std::size_t>(length));
    for (int t = 0; t < length; ++t) {
        const double u = (t - center) / sigma;
        out[std::size_t(t)] = -amplitude * u * std::exp(0.5 - 0.5 * u * u);
    }
    return out;
}

std::vector<double> loop_shift(const std::vector<double>& in, std::int64_t shift) {
    const std::int64_t len = std::int64_t(in.size());
    if (len == 0)
        return {};
    std::vector<double> out(in.size());
    std::int64_t s = shift % len;
    if (s < 0)
        s += len;
    for (std::int64_t k = 0; k < len; ++k)
        out[std::size_t((k + s) % len)] = in[std::size_t(k)];
    return out;
}

std::vector<double> zero_shift(const std::vector<double>& in, std::int64_t shift) {
    const std::int64_t len = std::int64_t(in.size());
    std::vector<double> out(in.size(), 0.0);
    for (std::int64_t k = 0; k < len; ++k) {
        const std::int64_t j = k + shift;
        if (j >= 0 && j < len)
            out[std::size_t(j)] = in[std::size_t(k)];
    }
    return out;
}

std::pair<std::size_t, std::size_t> nonzero_span(const std::vector<double>& in) {
    std::size_t first = in.size();
    std::size_t last = 0;
    for (std::size_t k = 0; k < in.size(); ++k) {
        if (in[k] != 0.0) {
            if (first == in.size())
                first = k;
            last = k + 1;
        }
    }
    if (first == in.size())
        return {0, 0};
    return {first, last};
}

} // namespace pat
