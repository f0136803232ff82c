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

// Shared helpers for the unit and acceptance suites.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "sspsr/hsi_cube.hpp"
#include "sspsr/network.hpp"
#include "sspsr/ops.hpp"
#include "sspsr/resize.hpp"
#include "sspsr/ssb.hpp"
#include "sspsr/tensor.hpp"

namespace sspsr::testing {

inline Tensor random_tensor(Shape shape, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Tensor t(std::move(shape));
    for (auto& v : t.data()) v = u(rng);
    return t;
}

inline HsiCube random_cube(std::size_t c, std::size_t h, std::size_t w, std::mt19937_64& rng,
                           double lo = 0.0, double hi = 1.0) {
    return HsiCube(random_tensor({c, h, w}, rng, lo, hi));
}

inline double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline std::vector<double> minus(const Tensor& a, const Tensor& b) {
    std::vector<double> d(a.numel());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = a[i] - b[i];
    return d;
}

using GraphFn = std::function<Tensor(const std::vector<Tensor>&)>;

/// Central finite-difference check of every input of `f`.
///
/// The scalar probed is sum(f(inputs) * r) for a fixed random r, so every
/// output element carries a distinct upstream gradient. Returns
/// max over inputs of |g_analytic - g_fd|_inf / (|g_fd|_inf + 1e-12).
inline double gradcheck(const GraphFn& f, std::vector<Tensor> inputs, std::mt19937_64& rng,
                        double step = 1e-5) {
    for (auto& t : inputs) t.set_requires_grad(true);
    Tensor out = f(inputs);
    const Tensor r = random_tensor(out.shape(), rng);
    backward(sum(mul(out, r)));

    auto probe = [&](const std::vector<Tensor>& xs) {
        NoGradGuard guard;
        const Tensor y = f(xs);
        double s = 0.0;
        for (std::size_t i = 0; i < y.numel(); ++i) s += y[i] * r[i];
        return s;
    };

    double worst = 0.0;
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        const std::vector<double> analytic = inputs[k].grad().values();
        std::vector<double> numeric(inputs[k].numel());
        std::vector<Tensor> xs;
        for (const auto& t : inputs) xs.push_back(t.detach());
        for (std::size_t i = 0; i < numeric.size(); ++i) {
            const double orig = xs[k][i];
            xs[k][i] = orig + step;
            const double up = probe(xs);
            xs[k][i] = orig - step;
            const double down = probe(xs);
            xs[k][i] = orig;
            numeric[i] = (up - down) / (2.0 * step);
        }
        std::vector<double> diff(numeric.size());
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = analytic[i] - numeric[i];
        worst = std::max(worst, max_abs(diff) / (max_abs(numeric) + 1e-12));
    }
    return worst;
}

inline SsbParams zero_block(std::size_t n) {
    const std::size_t h = attention_hidden(n);
    return {{Tensor({n, n, 3, 3}), Tensor({n})},
            {Tensor({n, n, 3, 3}), Tensor({n})},
            {Tensor({n, n, 1, 1}), Tensor({n})},
            Tensor({h, n}),
            Tensor({h}),
            Tensor({n, h}),
            Tensor({n})};
}

inline SsbParams random_block(std::size_t n, std::mt19937_64& rng) {
    const std::size_t h = attention_hidden(n);
    return {{random_tensor({n, n, 3, 3}, rng, -0.3, 0.3), random_tensor({n}, rng, -0.1, 0.1)},
            {random_tensor({n, n, 3, 3}, rng, -0.3, 0.3), random_tensor({n}, rng, -0.1, 0.1)},
            {random_tensor({n, n, 1, 1}, rng, -0.5, 0.5), random_tensor({n}, rng, -0.1, 0.1)},
            random_tensor({h, n}, rng),
            random_tensor({h}, rng),
            random_tensor({n, h}, rng),
            random_tensor({n}, rng)};
}

/// Finite-difference check of one random SSB w.r.t. its input and every parameter.
inline double ssb_gradcheck(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const SsbParams b = random_block(4, rng);
    std::vector<Tensor> in{random_tensor({2, 4, 3, 3}, rng), b.spatial1.weight, b.spatial1.bias,
                           b.spatial2.weight, b.spatial2.bias, b.spectral.weight, b.spectral.bias,
                           b.fc1_weight, b.fc1_bias, b.fc2_weight, b.fc2_bias};
    auto f = [](const std::vector<Tensor>& x) {
        const SsbParams p{{x[1], x[2]}, {x[3], x[4]}, {x[5], x[6]}, x[7], x[8], x[9], x[10]};
        return ssb_forward(x[0], p);
    };
    return gradcheck(f, in, rng);
}

struct OpCase {
    const char* name;
    GraphFn f;
    std::vector<Shape> shapes;
};

/// Every differentiable tensor operation on small random operands.
inline std::vector<OpCase> op_cases() {
    return {
        {"conv3x3 im2col", [](auto& x) { return conv2d(x[0], {x[1], x[2]}, 1); },
         {{2, 3, 4, 5}, {4, 3, 3, 3}, {4}}},
        {"conv3x3 direct", [](auto& x) { return conv2d(x[0], {x[1], x[2]}, 1, ConvAlgo::direct); },
         {{2, 3, 4, 5}, {4, 3, 3, 3}, {4}}},
        {"conv1x1", [](auto& x) { return conv2d(x[0], {x[1], x[2]}, 0); },
         {{2, 3, 4, 5}, {4, 3, 1, 1}, {4}}},
        {"relu", [](auto& x) { return relu(x[0]); }, {{2, 3, 4, 5}}},
        {"sigmoid", [](auto& x) { return sigmoid(x[0]); }, {{2, 3, 4, 5}}},
        {"avgpool", [](auto& x) { return global_avg_pool(x[0]); }, {{2, 3, 4, 5}}},
        {"shuffle", [](auto& x) { return pixel_shuffle(x[0], 2); }, {{2, 8, 3, 2}}},
        {"unshuffle", [](auto& x) { return pixel_unshuffle(x[0], 2); }, {{2, 2, 4, 6}}},
        {"add", [](auto& x) { return add(x[0], x[1]); }, {{2, 3, 4, 5}, {2, 3, 4, 5}}},
        {"mul", [](auto& x) { return mul(x[0], x[1]); }, {{2, 3, 4, 5}, {2, 3, 4, 5}}},
        {"mul broadcast", [](auto& x) { return mul(x[0], x[1]); }, {{2, 3, 4, 5}, {2, 3, 1, 1}}},
        {"concat", [](auto& x) { return concat_channels({x[0], x[1]}); },
         {{2, 3, 4, 5}, {2, 2, 4, 5}}},
        {"slice", [](auto& x) { return slice_channels(x[0], 1, 3); }, {{2, 4, 4, 5}}},
        {"fc", [](auto& x) { return fully_connected(x[0], x[1], x[2]); }, {{2, 5}, {3, 5}, {3}}},
        {"reshape", [](auto& x) { return reshape(x[0], {6, 5}); }, {{2, 3, 5}}},
        {"mean", [](auto& x) { return mean(x[0]); }, {{2, 3, 5}}},
        {"sum", [](auto& x) { return sum(x[0]); }, {{2, 3, 5}}},
        {"scale", [](auto& x) { return scale(x[0], -1.7); }, {{2, 3, 5}}},
        {"bicubic up", [](auto& x) { return bicubic_resize_batch(x[0], 2, ResizeDirection::up); },
         {{1, 2, 4, 3}}},
        {"bicubic down",
         [](auto& x) { return bicubic_resize_batch(x[0], 2, ResizeDirection::down); },
         {{1, 2, 6, 5}}},
    };
}

/// Micro network used by the end-to-end gradient checks.
inline NetworkConfig micro_config() {
    NetworkConfig c;
    c.bands = 6;
    c.group_size = 4;
    c.overlap = 2;
    c.n_feats = 4;
    c.blocks = 1;
    c.scale = 2;
    return c;
}

/// Rebuilds a parameter set whose tensors are taken, in order, from `values`.
inline SspsrParams with_values(const SspsrParams& skeleton, const std::vector<Tensor>& values) {
    SspsrParams p = skeleton;
    auto named = named_parameters(p);
    for (std::size_t i = 0; i < named.size(); ++i) *named[i].tensor = values[i];
    return p;
}

/// Gradient check of the whole network w.r.t. the input and every parameter.
inline double network_gradcheck(const NetworkConfig& cfg, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    SspsrParams skeleton = init_params(cfg, seed);
    std::vector<Tensor> inputs{random_tensor({1, cfg.bands, 3, 3}, rng, 0.0, 1.0)};
    for (auto& nt : named_parameters(skeleton)) {
        // Small random biases keep ReLU inputs away from exact zero.
        if (nt.tensor->rank() == 1) *nt.tensor = random_tensor(nt.tensor->shape(), rng, -0.1, 0.1);
        inputs.push_back(nt.tensor->detach());
    }
    GraphFn f = [&](const std::vector<Tensor>& xs) {
        const std::vector<Tensor> params(xs.begin() + 1, xs.end());
        return sspsr_forward(xs[0], with_values(skeleton, params));
    };
    return gradcheck(f, inputs, rng);
}

}  // namespace sspsr::testing
