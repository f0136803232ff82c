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

// Brute-force reference implementations. They follow the textbook
// definitions as literally as possible and share no code with the library.

#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "sspsr/hsi_cube.hpp"
#include "sspsr/tensor.hpp"

namespace sspsr::oracle {

inline double rmse(const HsiCube& x, const HsiCube& y) {
    double s = 0.0;
    for (std::size_t b = 0; b < x.bands(); ++b)
        for (std::size_t i = 0; i < x.height(); ++i)
            for (std::size_t j = 0; j < x.width(); ++j) s += std::pow(x(b, i, j) - y(b, i, j), 2);
    return std::sqrt(s / static_cast<double>(x.bands() * x.height() * x.width()));
}

inline double band_mse(const HsiCube& x, const HsiCube& y, std::size_t b) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.height(); ++i)
        for (std::size_t j = 0; j < x.width(); ++j) s += std::pow(x(b, i, j) - y(b, i, j), 2);
    return s / static_cast<double>(x.height() * x.width());
}

inline double band_mean(const HsiCube& x, std::size_t b) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.height(); ++i)
        for (std::size_t j = 0; j < x.width(); ++j) s += x(b, i, j);
    return s / static_cast<double>(x.height() * x.width());
}

inline double psnr(const HsiCube& x, const HsiCube& y) {
    double s = 0.0;
    for (std::size_t b = 0; b < x.bands(); ++b) {
        const double mse = band_mse(x, y, b);
        s += mse < 1e-10 ? 100.0 : 10.0 * std::log10(1.0 / mse);
    }
    return s / static_cast<double>(x.bands());
}

inline double sam(const HsiCube& x, const HsiCube& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.height(); ++i)
        for (std::size_t j = 0; j < x.width(); ++j) {
            double dot = 0.0, nx = 0.0, ny = 0.0;
            for (std::size_t b = 0; b < x.bands(); ++b) {
                dot += x(b, i, j) * y(b, i, j);
                nx += x(b, i, j) * x(b, i, j);
                ny += y(b, i, j) * y(b, i, j);
            }
            s += std::acos(dot / (std::sqrt(nx) * std::sqrt(ny) + 1e-12));
        }
    return s / static_cast<double>(x.height() * x.width()) * 180.0 / std::numbers::pi;
}

inline double cc(const HsiCube& x, const HsiCube& y) {
    double s = 0.0;
    for (std::size_t b = 0; b < x.bands(); ++b) {
        const double mx = band_mean(x, b), my = band_mean(y, b);
        double num = 0.0, dx = 0.0, dy = 0.0;
        for (std::size_t i = 0; i < x.height(); ++i)
            for (std::size_t j = 0; j < x.width(); ++j) {
                num += (x(b, i, j) - mx) * (y(b, i, j) - my);
                dx += (x(b, i, j) - mx) * (x(b, i, j) - mx);
                dy += (y(b, i, j) - my) * (y(b, i, j) - my);
            }
        s += (dx == 0.0 || dy == 0.0) ? 0.0 : num / std::sqrt(dx * dy);
    }
    return s / static_cast<double>(x.bands());
}

inline double ergas(const HsiCube& ref, const HsiCube& est, double d) {
    double s = 0.0;
    for (std::size_t b = 0; b < ref.bands(); ++b) {
        const double r = std::sqrt(band_mse(ref, est, b)) / band_mean(ref, b);
        s += r * r;
    }
    return 100.0 / d * std::sqrt(s / static_cast<double>(ref.bands()));
}

/// Mean SSIM of one band, evaluating every window position with a full 2-D
/// Gaussian weight matrix.
inline double ssim_band(const HsiCube& x, const HsiCube& y, std::size_t b, std::size_t win = 11,
                        double sigma = 1.5) {
    std::vector<double> g(win * win);
    double gs = 0.0;
    const double c = (static_cast<double>(win) - 1.0) / 2.0;
    for (std::size_t u = 0; u < win; ++u)
        for (std::size_t v = 0; v < win; ++v) {
            const double du = static_cast<double>(u) - c, dv = static_cast<double>(v) - c;
            g[u * win + v] = std::exp(-(du * du + dv * dv) / (2 * sigma * sigma));
            gs += g[u * win + v];
        }
    for (auto& w : g) w /= gs;
    const double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i + win <= x.height(); ++i)
        for (std::size_t j = 0; j + win <= x.width(); ++j) {
            double mx = 0, my = 0;
            for (std::size_t u = 0; u < win; ++u)
                for (std::size_t v = 0; v < win; ++v) {
                    mx += g[u * win + v] * x(b, i + u, j + v);
                    my += g[u * win + v] * y(b, i + u, j + v);
                }
            double vx = 0, vy = 0, cxy = 0;
            for (std::size_t u = 0; u < win; ++u)
                for (std::size_t v = 0; v < win; ++v) {
                    const double a = x(b, i + u, j + v) - mx, e = y(b, i + u, j + v) - my;
                    vx += g[u * win + v] * a * a;
                    vy += g[u * win + v] * e * e;
                    cxy += g[u * win + v] * a * e;
                }
            total += ((2 * mx * my + c1) * (2 * cxy + c2)) /
                     ((mx * mx + my * my + c1) * (vx + vy + c2));
            ++count;
        }
    return total / static_cast<double>(count);
}

inline double ssim(const HsiCube& x, const HsiCube& y, std::size_t win = 11, double sigma = 1.5) {
    double s = 0.0;
    for (std::size_t b = 0; b < x.bands(); ++b) s += ssim_band(x, y, b, win, sigma);
    return s / static_cast<double>(x.bands());
}

inline double l1(const Tensor& p, const Tensor& g) {
    const auto& s = p.shape();
    double total = 0.0;
    for (std::size_t n = 0; n < s[0]; ++n) {
        double a = 0.0;
        for (std::size_t c = 0; c < s[1]; ++c)
            for (std::size_t h = 0; h < s[2]; ++h)
                for (std::size_t w = 0; w < s[3]; ++w)
                    a += std::abs(p.at({n, c, h, w}) - g.at({n, c, h, w}));
        total += a / static_cast<double>(s[1] * s[2] * s[3]);
    }
    return total / static_cast<double>(s[0]);
}

/// Spatial-spectral TV with each axis term optionally divided by its site count.
inline double sstv(const Tensor& p, bool per_site) {
    const auto& s = p.shape();
    const std::size_t C = s[1], H = s[2], W = s[3];
    double total = 0.0;
    for (std::size_t n = 0; n < s[0]; ++n) {
        double th = 0, tw = 0, tc = 0;
        for (std::size_t c = 0; c < C; ++c)
            for (std::size_t h = 0; h < H; ++h)
                for (std::size_t w = 0; w < W; ++w) {
                    const double v = p.at({n, c, h, w});
                    if (h + 1 < H) th += std::abs(p.at({n, c, h + 1, w}) - v);
                    if (w + 1 < W) tw += std::abs(p.at({n, c, h, w + 1}) - v);
                    if (c + 1 < C) tc += std::abs(p.at({n, c + 1, h, w}) - v);
                }
        if (per_site) {
            if (H > 1) th /= static_cast<double>((H - 1) * W * C);
            if (W > 1) tw /= static_cast<double>(H * (W - 1) * C);
            if (C > 1) tc /= static_cast<double>(H * W * (C - 1));
        }
        total += th + tw + tc;
    }
    return total / static_cast<double>(s[0]);
}

/// Group count by walking strides until the bands are covered.
inline std::size_t group_count(std::size_t c, std::size_t p, std::size_t o) {
    if (p >= c) return 1;
    std::size_t groups = 0;
    std::size_t start = 0;
    while (true) {
        ++groups;
        if (start + p >= c) return groups;
        start += p - o;
    }
}

}  // namespace sspsr::oracle
