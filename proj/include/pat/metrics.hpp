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

#ifndef PAT_METRICS_HPP
#define PAT_METRICS_HPP

#include "pat/types.hpp"

namespace pat {

/// Structural similarity with the standard constants: 11x11 Gaussian
/// window (sigma 1.5), k1 = 0.01, k2 = 0.03. dynamic_range matches the
/// normalized image scale.
struct SsimParams {
    int window = 11;
    double window_sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 256.0;
};

/// Mean SSIM over all windows fully inside the image (valid-mode
/// boundary handling). Symmetric in its arguments and 1.0 for identical
/// inputs; anti-correlated structure drives the value negative.
double ssim(const Mat<double>& a, const Mat<double>& b, const SsimParams& params = {});

/// Per-window SSIM values, (n - window + 1) x (m - window + 1).
Mat<double> ssim_map(const Mat<double>& a, const Mat<double>& b,
                     const SsimParams& params = {});

/// Elementwise absolute difference.
Mat<double> error_map(const Mat<double>& a, const Mat<double>& b);

double mse(const Mat<double>& a, const Mat<double>& b);

} // namespace pat

#endif // PAT_METRICS_HPP
