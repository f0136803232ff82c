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

#include <benchmark/benchmark.h>

#include <random>

#include "sspsr/losses.hpp"
#include "sspsr/network.hpp"
#include "sspsr/ops.hpp"

using namespace sspsr;

namespace {

Tensor random_tensor(Shape shape, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Tensor t(std::move(shape));
    for (auto& v : t.data()) v = u(rng);
    return t;
}

void BM_Conv3x3(benchmark::State& state, ConvAlgo algo) {
    const auto c = static_cast<std::size_t>(state.range(0));
    const auto hw = static_cast<std::size_t>(state.range(1));
    const Tensor x = random_tensor({4, c, hw, hw}, 1);
    const ConvParams p{random_tensor({c, c, 3, 3}, 2), random_tensor({c}, 3)};
    for (auto _ : state) benchmark::DoNotOptimize(conv2d(x, p, 1, algo));
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(conv2d_flops(4, c, hw, hw, c, 3, 3)));
}

void BM_DeskForward(benchmark::State& state) {
    const auto cfg = NetworkConfig::desk(16, 4);
    const auto params = init_params(cfg, 0);
    const Tensor lr = random_tensor({8, 16, 12, 12}, 4);
    for (auto _ : state) {
        NoGradGuard guard;
        benchmark::DoNotOptimize(sspsr_forward(lr, params));
    }
}

void BM_DeskTrainStep(benchmark::State& state) {
    const auto cfg = NetworkConfig::desk(16, 4);
    auto params = init_params(cfg, 0);
    const Tensor lr = random_tensor({8, 16, 12, 12}, 5);
    const Tensor hr = random_tensor({8, 16, 48, 48}, 6);
    for (auto _ : state) {
        for (auto& p : named_parameters(params)) p.tensor->zero_grad();
        backward(total_loss(sspsr_forward(lr, params), hr));
    }
}

}  // namespace

BENCHMARK_CAPTURE(BM_Conv3x3, direct, ConvAlgo::direct)->Args({32, 12})->Args({32, 24});
BENCHMARK_CAPTURE(BM_Conv3x3, im2col, ConvAlgo::im2col)->Args({32, 12})->Args({32, 24});
BENCHMARK(BM_DeskForward)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DeskTrainStep)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
