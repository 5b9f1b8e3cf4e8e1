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

#ifndef PAT_ITERATE_HPP
#define PAT_ITERATE_HPP

#include <vector>

#include "pat/geometry.hpp"
#include "pat/swave.hpp"
#include "pat/types.hpp"

namespace pat {

Mat<double> residual(const SensorData& data, const SensorData& predicted);

/// Frobenius norm, sqrt of the sum of squares over all entries.
double loss_l2(const Mat<double>& r);

/// image + lr * correction, elementwise.
Mat<double> update_image(const Mat<double>& image, const Mat<double>& correction,
                         double lr);

/// Absolute value per pixel; signed sums become renderable intensities.
Image abs_image(const Mat<double>& signed_image);

struct ReconConfig {
    double learning_rate = 0.1;
    int max_iterations = 20;
    double loss_threshold_rel = 0.05;         // threshold = rel * ||S||_2
    std::optional<double> loss_threshold_abs; // overrides the relative rule
    bool record_trace = false;

    void validate() const;
};

struct ReconResult {
    Mat<double> image;     // final signed backprojection state
    Image rendered;        // |image|, not normalized
    int iterations_run = 0;
    bool converged = false;
    double final_loss = 0.0;
    double threshold = 0.0;
    std::vector<double> loss_trace; // one entry per forward pass
};

/// Iterative correction loop. Each round first evaluates the residual
/// loss and exits when it drops strictly below the threshold, then
/// backprojects the residual and feeds the updated image's absolute
/// values through the forward model. The backprojection stays
/// un-normalized inside the loop; rendering is the caller's step.
/// A non-finite loss aborts with NonFiniteLoss.
ReconResult model_based_reconstruct(const SensorData& data, const ArrayGeometry& geom,
                                    const RoiGrid& grid, const AcousticConfig& acoustic,
                                    const SwaveParams& params,
                                    const std::vector<double>& waveform,
                                    const ReconConfig& cfg);

} // namespace pat

#endif // PAT_ITERATE_HPP
