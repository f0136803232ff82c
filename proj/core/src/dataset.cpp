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

#include "sspsr/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace sspsr {
namespace {

std::size_t reflect(std::ptrdiff_t i, std::size_t n) {
    const std::ptrdiff_t period = 2 * static_cast<std::ptrdiff_t>(n);
    std::ptrdiff_t m = i % period;
    if (m < 0) m += period;
    return m < static_cast<std::ptrdiff_t>(n) ? static_cast<std::size_t>(m)
                                               : static_cast<std::size_t>(period - 1 - m);
}

std::vector<double> gaussian_taps(double sigma) {
    if (sigma <= 0.0) return {1.0};
    const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
    std::vector<double> taps(2 * radius + 1);
    for (std::ptrdiff_t i = -radius; i <= radius; ++i)
        taps[i + radius] = std::exp(-0.5 * static_cast<double>(i * i) / (sigma * sigma));
    const double s = std::accumulate(taps.begin(), taps.end(), 0.0);
    for (auto& t : taps) t /= s;
    return taps;
}

// Smooths `count` sequences of `length` samples spaced `stride` apart.
void smooth_1d(std::vector<double>& v, std::size_t length, std::size_t stride, std::size_t count,
               std::size_t line_step, const std::vector<double>& taps) {
    const auto radius = static_cast<std::ptrdiff_t>(taps.size() / 2);
    std::vector<double> line(length);
    for (std::size_t l = 0; l < count; ++l) {
        double* base = v.data() + l * line_step;
        for (std::size_t i = 0; i < length; ++i) {
            double acc = 0.0;
            for (std::ptrdiff_t t = -radius; t <= radius; ++t)
                acc += taps[t + radius] * base[reflect(static_cast<std::ptrdiff_t>(i) + t, length) * stride];
            line[i] = acc;
        }
        for (std::size_t i = 0; i < length; ++i) base[i * stride] = line[i];
    }
}

void standardize(std::span<double> v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - m) * (x - m);
    const double sd = std::sqrt(var / static_cast<double>(v.size()));
    for (auto& x : v) x = sd > 0.0 ? (x - m) / sd : 0.0;
}

}  // namespace

std::vector<std::size_t> patch_origins(std::size_t extent, const PatchSpec& spec) {
    if (spec.patch_size == 0 || spec.overlap >= spec.patch_size) {
        throw std::invalid_argument("patch overlap must be smaller than a positive patch size");
    }
    if (spec.patch_size > extent) {
        throw std::invalid_argument("patch size " + std::to_string(spec.patch_size) +
                                    " exceeds image extent " + std::to_string(extent));
    }
    const std::size_t stride = spec.patch_size - spec.overlap;
    std::vector<std::size_t> origins;
    for (std::size_t o = 0; o + spec.patch_size <= extent; o += stride) origins.push_back(o);
    if (origins.back() + spec.patch_size < extent) origins.push_back(extent - spec.patch_size);
    return origins;
}

HsiCube crop(const HsiCube& cube, std::size_t y, std::size_t x, std::size_t h, std::size_t w) {
    if (y + h > cube.height() || x + w > cube.width()) {
        throw ShapeError("crop: window exceeds the cube's spatial extent");
    }
    HsiCube out(cube.bands(), h, w);
    for (std::size_t b = 0; b < cube.bands(); ++b)
        for (std::size_t r = 0; r < h; ++r)
            for (std::size_t c = 0; c < w; ++c) out(b, r, c) = cube(b, y + r, x + c);
    return out;
}

std::vector<HsiCube> extract_patches(const HsiCube& cube, const PatchSpec& spec) {
    const auto ys = patch_origins(cube.height(), spec);
    const auto xs = patch_origins(cube.width(), spec);
    std::vector<HsiCube> patches;
    patches.reserve(ys.size() * xs.size());
    for (auto y : ys)
        for (auto x : xs) patches.push_back(crop(cube, y, x, spec.patch_size, spec.patch_size));
    return patches;
}

HsiCube synth_cube(const SynthConfig& cfg) {
    if (cfg.bands == 0 || cfg.height == 0 || cfg.width == 0) {
        throw std::invalid_argument("synth_cube: empty cube requested");
    }
    if (cfg.n_endmembers == 0 || cfg.n_endmembers > cfg.bands) {
        throw std::invalid_argument("synth_cube: endmember count must be in [1, bands]");
    }
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t k = cfg.n_endmembers, c = cfg.bands, h = cfg.height, w = cfg.width;

    // Endmember spectra, each rescaled into [0.15, 0.85].
    std::vector<double> spectra(k * c);
    for (auto& v : spectra) v = gauss(rng);
    smooth_1d(spectra, c, 1, k, c, gaussian_taps(cfg.spectral_smoothness));
    for (std::size_t e = 0; e < k; ++e) {
        auto s = std::span(spectra).subspan(e * c, c);
        const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
        const double span = *hi - *lo;
        const double low = *lo;
        for (auto& v : s) v = span > 0.0 ? 0.15 + 0.7 * (v - low) / span : 0.5;
    }

    // Abundances: softmax over smoothed noise fields.
    std::vector<double> fields(k * h * w);
    for (auto& v : fields) v = gauss(rng);
    const auto taps = gaussian_taps(cfg.smoothness);
    for (std::size_t e = 0; e < k; ++e) {
        std::vector<double> plane(fields.begin() + e * h * w, fields.begin() + (e + 1) * h * w);
        smooth_1d(plane, w, 1, h, w, taps);
        smooth_1d(plane, h, w, w, 1, taps);
        standardize(plane);
        std::copy(plane.begin(), plane.end(), fields.begin() + e * h * w);
    }
    constexpr double kSharpness = 3.0;
    std::vector<double> abundance(k * h * w);
    for (std::size_t p = 0; p < h * w; ++p) {
        double mx = -1e300;
        for (std::size_t e = 0; e < k; ++e) mx = std::max(mx, fields[e * h * w + p]);
        double z = 0.0;
        for (std::size_t e = 0; e < k; ++e) {
            abundance[e * h * w + p] = std::exp(kSharpness * (fields[e * h * w + p] - mx));
            z += abundance[e * h * w + p];
        }
        for (std::size_t e = 0; e < k; ++e) abundance[e * h * w + p] /= z;
    }

    HsiCube cube(c, h, w);
    for (std::size_t b = 0; b < c; ++b)
        for (std::size_t p = 0; p < h * w; ++p) {
            double v = 0.0;
            for (std::size_t e = 0; e < k; ++e) v += abundance[e * h * w + p] * spectra[e * c + b];
            v += cfg.noise * gauss(rng);
            cube.tensor()[b * h * w + p] = std::clamp(v, 0.0, 1.0);
        }
    return cube;
}

double adjacent_band_correlation(const HsiCube& cube) {
    if (cube.bands() < 2) return 1.0;
    const std::size_t n = cube.pixels();
    double total = 0.0;
    for (std::size_t b = 0; b + 1 < cube.bands(); ++b) {
        auto x = cube.band(b);
        auto y = cube.band(b + 1);
        const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
        const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
        double sxy = 0.0, sxx = 0.0, syy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sxy += (x[i] - mx) * (y[i] - my);
            sxx += (x[i] - mx) * (x[i] - mx);
            syy += (y[i] - my) * (y[i] - my);
        }
        const double d = std::sqrt(sxx * syy);
        total += d > 0.0 ? std::abs(sxy / d) : 0.0;
    }
    return total / static_cast<double>(cube.bands() - 1);
}

}  // namespace sspsr
