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

#include "pat/iterate.hpp"

#include <cmath>
#include <cstddef>

#include "pat/backward.hpp"

namespace pat {

Mat<double> residual(const SensorData& data, const SensorData& predicted) {
    const Mat<double>& s = data.samples;
    const Mat<double>& p = predicted.samples;
    if (s.rows() != p.rows() || s.cols() != p.cols())
        fail(Errc::DimensionMismatch, "residual operands differ in shape");
    Mat<double> r(s.rows(), s.cols());
    for (std::size_t k = 0; k < s.data().size(); ++k)
        r.data()[k] = s.data()[k] - p.data()[k];
    return r;
}

double loss_l2(const Mat<double>& r) {
    double sum_sq = 0.0;
    for (double v : r.data()) sum_sq += v * v;
    return std::sqrt(sum_sq);
}

Mat<double> update_image(const Mat<double>& image, const Mat<double>& correction,
                         double lr) {
    if (image.rows() != correction.rows() || image.cols() != correction.cols())
        fail(Errc::DimensionMismatch, "update operands differ in shape");
    Mat<double> out(image.rows(), image.cols());
    for (std::size_t k = 0; k < out.data().size(); ++k)
        out.data()[k] = image.data()[k] + lr * correction.data()[k];
    return out;
}

Image abs_image(const Mat<double>& signed_image) {
    Image img;
    img.pixels = Mat<double>(signed_image.rows(), signed_image.cols());
    for (std::size_t k = 0; k < signed_image.data().size(); ++k)
        img.pixels.data()[k] = std::fabs(signed_image.data()[k]);
    return img;
}

void ReconConfig::validate() const {
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
        fail(Errc::InvalidArgument, "learning rate must be finite and >= 0");
    if (max_iterations < 1)
        fail(Errc::InvalidArgument, "max iterations must be >= 1");
    if (!(loss_threshold_rel >= 0.0))
        fail(Errc::InvalidArgument, "relative loss threshold must be >= 0");
    if (loss_threshold_abs && !(*loss_threshold_abs >= 0.0))
        fail(Errc::InvalidArgument, "absolute loss threshold must be >= 0");
}

namespace {

double checked_loss(const Mat<double>& r) {
    double loss = loss_l2(r);
    if (!std::isfinite(loss))
        fail(Errc::NonFiniteLoss, "residual norm is not finite");
    return loss;
}

// The image RAM only ever holds magnitudes: the backward stage writes
// absolute values and the deviation stage folds the updated image again.
// The fold is what keeps a pixel pushed through zero from self-amplifying
// on the next pass.
void fold_state(Mat<double>& image) {
    for (double& v : image.data()) v = std::fabs(v);
}

} // namespace

ReconResult model_based_reconstruct(const SensorData& data, const ArrayGeometry& geom,
                                    const RoiGrid& grid, const AcousticConfig& acoustic,
                                    const SwaveParams& params,
                                    const std::vector<double>& waveform,
                                    const ReconConfig& cfg) {
    cfg.validate();
    // Widest legal table: the float path addresses the full sample record.
    DelayTable table = compute_delay_table(geom, grid, acoustic, 31);

    ReconResult res;
    res.threshold = cfg.loss_threshold_abs
                        ? *cfg.loss_threshold_abs
                        : cfg.loss_threshold_rel * loss_l2(data.samples);

    res.image = das(data, table, grid);
    fold_state(res.image);
    SensorData predicted = swave_forward(abs_image(res.image).pixels, geom, grid,
                                         acoustic, params, waveform);
    Mat<double> r = residual(data, predicted);
    double loss = checked_loss(r);
    if (cfg.record_trace) res.loss_trace.push_back(loss);

    for (int t = 0; t < cfg.max_iterations; ++t) {
        if (loss < res.threshold) {
            res.converged = true;
            break;
        }
        SensorData rd{r, data.sample_rate};
        Mat<double> corr = das(rd, table, grid);
        res.image = update_image(res.image, corr, cfg.learning_rate);
        fold_state(res.image);
        predicted = swave_forward(abs_image(res.image).pixels, geom, grid, acoustic,
                                  params, waveform);
        r = residual(data, predicted);
        loss = checked_loss(r);
        if (cfg.record_trace) res.loss_trace.push_back(loss);
        res.iterations_run = t + 1;
    }
    if (!res.converged && loss < res.threshold) res.converged = true;

    res.final_loss = loss;
    res.rendered = abs_image(res.image);
    return res;
}

} // namespace pat
