// Copyright 2026 The SSPSR Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sspsr/resize.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sspsr {
namespace {

constexpr double kKernelWidth = 4.0;

std::size_t mirror_index(std::ptrdiff_t i, std::size_t length) {
    // Symmetric extension: ... 1 0 | 0 1 ... n-1 | n-1 n-2 ...
    const std::ptrdiff_t period = 2 * static_cast<std::ptrdiff_t>(length);
    std::ptrdiff_t m = i % period;
    if (m < 0) m += period;
    return m < static_cast<std::ptrdiff_t>(length) ? static_cast<std::size_t>(m)
                                                    : static_cast<std::size_t>(period - 1 - m);
}

std::size_t resized_length(std::size_t length, double factor, ResizeDirection direction) {
    if (direction == ResizeDirection::up) {
        return static_cast<std::size_t>(std::llround(static_cast<double>(length) * factor));
    }
    return static_cast<std::size_t>(std::ceil(static_cast<double>(length) / factor));
}

void check_factor(double factor) {
    if (!(factor > 0.0) || !std::isfinite(factor)) {
        throw std::invalid_argument("bicubic resize factor must be positive, got " +
                                    std::to_string(factor));
    }
}

}  // namespace

double cubic_kernel(double x) {
    const double a = std::abs(x);
    const double a2 = a * a, a3 = a2 * a;
    if (a <= 1.0) return 1.5 * a3 - 2.5 * a2 + 1.0;
    if (a <= 2.0) return -0.5 * a3 + 2.5 * a2 - 4.0 * a + 2.0;
    return 0.0;
}

AxisWeights bicubic_axis_weights(std::size_t in_length, std::size_t out_length, double scale) {
    const bool antialias = scale < 1.0;
    const double width = antialias ? kKernelWidth / scale : kKernelWidth;
    const std::size_t taps = static_cast<std::size_t>(std::ceil(width)) + 2;

    AxisWeights aw;
    aw.in_length = in_length;
    aw.out_length = out_length;
    aw.taps = taps;
    aw.indices.resize(out_length * taps);
    aw.weights.resize(out_length * taps);
    for (std::size_t i = 0; i < out_length; ++i) {
        // 1-based coordinates, as imresize computes them.
        const double x = static_cast<double>(i + 1);
        const double u = x / scale + 0.5 * (1.0 - 1.0 / scale);
        const double left = std::floor(u - width / 2.0);
        double total = 0.0;
        for (std::size_t t = 0; t < taps; ++t) {
            const double idx = left + static_cast<double>(t);
            const double d = u - idx;
            const double w = antialias ? scale * cubic_kernel(scale * d) : cubic_kernel(d);
            aw.weights[i * taps + t] = w;
            aw.indices[i * taps + t] = mirror_index(static_cast<std::ptrdiff_t>(idx) - 1, in_length);
            total += w;
        }
        for (std::size_t t = 0; t < taps; ++t) aw.weights[i * taps + t] /= total;
    }
    return aw;
}

namespace {

// out = x_ref + sum_t w_t (x_t - x_ref): identical to sum_t w_t x_t for
// normalized weights, and exact on constant input.
inline double apply_taps(const AxisWeights& aw, std::size_t i, const double* src,
                         std::size_t stride) {
    const std::size_t base = i * aw.taps;
    const double ref = src[aw.indices[base] * stride];
    double acc = 0.0;
    for (std::size_t t = 0; t < aw.taps; ++t) {
        const double w = aw.weights[base + t];
        if (w == 0.0) continue;
        acc += w * (src[aw.indices[base + t] * stride] - ref);
    }
    return ref + acc;
}

}  // namespace

std::vector<double> bicubic_resize_plane(std::span<const double> plane, std::size_t height,
                                         std::size_t width, const AxisWeights& rows,
                                         const AxisWeights& cols) {
    if (plane.size() != height * width || rows.in_length != height || cols.in_length != width) {
        throw ShapeError("bicubic_resize_plane: weights do not match a " + std::to_string(height) +
                         "x" + std::to_string(width) + " plane");
    }
    // Height first, then width.
    std::vector<double> tmp(rows.out_length * width);
    for (std::size_t x = 0; x < width; ++x)
        for (std::size_t y = 0; y < rows.out_length; ++y)
            tmp[y * width + x] = apply_taps(rows, y, plane.data() + x, width);
    std::vector<double> out(rows.out_length * cols.out_length);
    for (std::size_t y = 0; y < rows.out_length; ++y)
        for (std::size_t x = 0; x < cols.out_length; ++x)
            out[y * cols.out_length + x] = apply_taps(cols, x, tmp.data() + y * width, 1);
    return out;
}

HsiCube bicubic_resize(const HsiCube& cube, double factor, ResizeDirection direction) {
    check_factor(factor);
    Tensor batch = bicubic_resize_batch(cube.as_batch(), factor, direction);
    return HsiCube::from_batch(batch);
}

Tensor bicubic_resize_batch(const Tensor& x, double factor, ResizeDirection direction) {
    check_factor(factor);
    if (x.rank() != 4) {
        throw ShapeError("bicubic_resize_batch: expected [N,C,H,W], got " + shape_to_string(x.shape()));
    }
    const std::size_t n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
    const std::size_t oh = resized_length(h, factor, direction);
    const std::size_t ow = resized_length(w, factor, direction);
    if (oh == 0 || ow == 0) throw ShapeError("bicubic resize produced an empty image");
    const double s = direction == ResizeDirection::up ? factor : 1.0 / factor;
    const AxisWeights rows = bicubic_axis_weights(h, oh, s);
    const AxisWeights cols = bicubic_axis_weights(w, ow, s);
    Tensor out({n, c, oh, ow});
    for (std::size_t p = 0; p < n * c; ++p) {
        auto plane = bicubic_resize_plane(x.data().subspan(p * h * w, h * w), h, w, rows, cols);
        std::copy(plane.begin(), plane.end(), out.data().begin() + p * oh * ow);
    }
    if (!will_record({&x})) return out;
    // The resize is linear, so the backward pass applies the transposed taps.
    return make_result(std::move(out), {&x}, [rows, cols, n, c, h, w, oh, ow](autograd::Node& node) {
        const auto& g = node.grad;
        std::vector<double> dx(n * c * h * w, 0.0);
        std::vector<double> tmp(oh * w);
        for (std::size_t p = 0; p < n * c; ++p) {
            std::fill(tmp.begin(), tmp.end(), 0.0);
            const double* gp = g.data() + p * oh * ow;
            for (std::size_t y = 0; y < oh; ++y)
                for (std::size_t xo = 0; xo < ow; ++xo)
                    for (std::size_t t = 0; t < cols.taps; ++t)
                        tmp[y * w + cols.indices[xo * cols.taps + t]] +=
                            cols.weights[xo * cols.taps + t] * gp[y * ow + xo];
            double* dp = dx.data() + p * h * w;
            for (std::size_t yo = 0; yo < oh; ++yo)
                for (std::size_t t = 0; t < rows.taps; ++t) {
                    const double wt = rows.weights[yo * rows.taps + t];
                    double* dst = dp + rows.indices[yo * rows.taps + t] * w;
                    for (std::size_t xi = 0; xi < w; ++xi) dst[xi] += wt * tmp[yo * w + xi];
                }
        }
        node.accumulate_into(0, dx);
    });
}

}  // namespace sspsr
