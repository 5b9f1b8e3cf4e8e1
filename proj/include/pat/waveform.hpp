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

#ifndef PAT_WAVEFORM_HPP
#define PAT_WAVEFORM_HPP

#include <cstdint>
#include <vector>

#include "pat/types.hpp"

namespace pat {

/// N-shaped pressure pulse: the negated first derivative of a Gaussian,
/// scaled so the two lobes peak at exactly +/-amplitude and the zero
/// crossing sits at `center` (in samples):
///
///   s(t) = -amplitude * ((t - center)/sigma) * exp(1/2 - (t - center)^2 / (2 sigma^2))
///
/// The compression lobe (positive) arrives before the rarefaction lobe.
std::vector<double> n_pulse(int length, double center, double sigma,
                            double amplitude = 1.0);

/// Circular shift: out[(k + shift) mod len] = in[k]. Positive shifts move
/// the waveform toward later samples; negative shifts are allowed and any
/// magnitude wraps.
std::vector<double> loop_shift(const std::vector<double>& in, std::int64_t shift);

/// Linear shift with zero fill instead of wraparound.
std::vector<double> zero_shift(const std::vector<double>& in, std::int64_t shift);

/// First sample index of the leading nonzero entry, and one past the last.
/// Returns {0, 0} for an all-zero signal.
std::pair<std::size_t, std::size_t> nonzero_span(const std::vector<double>& in);

} // namespace pat

#endif // PAT_WAVEFORM_HPP
