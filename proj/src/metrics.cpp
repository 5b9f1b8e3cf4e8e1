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

#include "pat/metrics.hpp"

#include <cmath>
#include <vector>

namespace pat {

namespace {

void check_pair(const Mat<double>& a, const Mat<double>& b) {
    if (!a.same_shape(b))
        fail(Errc::DimensionMismatch, "metric operands differ in shape");
    if (a.empty())
        fail(Errc::InvalidArgument, "metric operands are empty");
}

std::vector<double> gaussian_window(int size, double sigma) {
    std::vector<double> w(std::size_t(size) * std::size_t(size));
    const double half = (size - 1) / 2.0;
    double sum = 0.0;
    for (int r = 0; r < size; ++r) {
        for (int c = 0; c < size; ++c) {
            const double dr = r - half;
            const double dc = c - half;
            const double v = std::exp(-(dr * dr + dc * dc) / (2.0 * sigma * sigma));
            w[std::size_t(r) * size + c] = v;
            sum += v;
        }
    }
    for (double& v : w) v /= sum;
    return w;
}

} // namespace

Mat<double> ssim_map(const Mat<double>& a, const Mat<double>& b,
                     const SsimParams& params) {
    check_pair(a, b);
    if (params.window < 3 || params.window % 2 == 0)
        fail(Errc::InvalidArgument, "ssim window must be odd and >= 3");
    if (!(params.window_sigma > 0.0) || !(params.dynamic_range > 0.0))
        fail(Errc::InvalidArgument, "ssim parameters must be positive");
    const int n = int(a.rows());
    const int m = int(a.cols());
    const int win = params.window;
    if (n < win || m < win)
        fail(Errc::InvalidArgument, "image smaller than the ssim window");

    const std::vector<double> w = gaussian_window(win, params.window_sigma);
    const double c1 = params.k1 * params.dynamic_range * params.k1 * params.dynamic_range;
    const double c2 = params.k2 * params.dynamic_range * params.k2 * params.dynamic_range;

    Mat<double> out(std::size_t(n - win + 1), std::size_t(m - win + 1));
    for (int r = 0; r + win <= n; ++r) {
        for (int c = 0; c + win <= m; ++c) {
            double mx = 0.0, my = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
            for (int i = 0; i < win; ++i) {
                const double* ra = a.row(std::size_t(r + i)) + c;
                const double* rb = b.row(std::size_t(r + i)) + c;
                const double* rw = &w[std::size_t(i) * win];
                for (int j = 0; j < win; ++j) {
                    const double x = ra[j];
                    const double y = rb[j];
                    const double g = rw[j];
                    mx += g * x;
                    my += g * y;
                    sxx += g * x * x;
                    syy += g * y * y;
                    sxy += g * x * y;
                }
            }
            const double vx = sxx - mx * mx;
            const double vy = syy - my * my;
            const double cxy = sxy - mx * my;
            const double num = (2.0 * mx * my + c1) * (2.0 * cxy + c2);
            const double den = (mx * mx + my * my + c1) * (vx + vy + c2);
            out(std::size_t(r), std::size_t(c)) = num / den;
        }
    }
    return out;
}

double ssim(const Mat<double>& a, const Mat<double>& b, const SsimParams& params) {
    Mat<double> map = ssim_map(a, b, params);
    double sum = 0.0;
    for (double v : map.data()) sum += v;
    return sum / double(map.data().size());
}

Mat<double> error_map(const Mat<double>& a, const Mat<double>& b) {
    check_pair(a, b);
    Mat<double> out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.data().size(); ++i)
        out.data()[i] = std::fabs(a.data()[i] - b.data()[i]);
    return out;
}

double mse(const Mat<double>& a, const Mat<double>& b) {
    check_pair(a, b);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        const double d = a.data()[i] - b.data()[i];
        sum += d * d;
    }
    return sum / double(a.data().size());
}

} // namespace pat
