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

#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sspsr/losses.hpp"
#include "support.hpp"

using namespace sspsr;
using sspsr::testing::random_tensor;

TEST_CASE("l1 loss values") {
    std::mt19937_64 rng(1);
    const Tensor a = random_tensor({2, 3, 4, 4}, rng);
    const Tensor b = random_tensor({2, 3, 4, 4}, rng);
    CHECK(l1_loss(a, a).item() == 0.0);
    Tensor shifted = a.detach();
    for (auto& v : shifted.data()) v += 0.1;
    CHECK(l1_loss(shifted, a).item() == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(l1_loss(a, b).item() == l1_loss(b, a).item());
    CHECK_THROWS_AS(l1_loss(a, Tensor({2, 3, 4, 5})), ShapeError);
}

TEST_CASE("l1 subgradient is zero at ties") {
    Tensor p({1, 1, 1, 2}, {0.5, 0.7});
    const Tensor g({1, 1, 1, 2}, {0.5, 0.2});
    p.set_requires_grad(true);
    backward(l1_loss(p, g));
    CHECK(p.grad()[0] == 0.0);
    CHECK(p.grad()[1] == 0.5);
}

TEST_CASE("sstv: constant cube, ramp along one axis, shift invariance") {
    CHECK(sstv_loss(Tensor::full({1, 3, 4, 4}, 0.3)).item() == 0.0);

    // 2 bands x 3 x 3, linear in h with slope s.
    const double s = 0.25;
    Tensor ramp({1, 2, 3, 3});
    for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t h = 0; h < 3; ++h)
            for (std::size_t w = 0; w < 3; ++w) ramp.at({0, c, h, w}) = s * static_cast<double>(h);
    // 2*2*3 = 12 h-difference sites each contributing s.
    CHECK(sstv_loss(ramp, SstvNormalization::raw_sum).item() == doctest::Approx(12 * s));
    CHECK(sstv_loss(ramp, SstvNormalization::per_site).item() == doctest::Approx(s));

    std::mt19937_64 rng(2);
    const Tensor x = random_tensor({2, 3, 4, 4}, rng);
    Tensor y = x.detach();
    for (auto& v : y.data()) v += 0.375;
    CHECK(sstv_loss(y).item() == doctest::Approx(sstv_loss(x).item()).epsilon(1e-13));
}

TEST_CASE("losses match triple-loop oracles to 1e-12") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const Tensor p = random_tensor({2, 3, 4, 4}, rng, 0, 1);
        const Tensor g = random_tensor({2, 3, 4, 4}, rng, 0, 1);
        CHECK(std::abs(l1_loss(p, g).item() - oracle::l1(p, g)) < 1e-12);
        CHECK(std::abs(sstv_loss(p).item() - oracle::sstv(p, true)) < 1e-12);
        CHECK(std::abs(sstv_loss(p, SstvNormalization::raw_sum).item() - oracle::sstv(p, false)) <
              1e-12);
    }
    // Degenerate extents drop that axis.
    const Tensor thin = random_tensor({1, 1, 1, 5}, rng);
    CHECK(std::abs(sstv_loss(thin).item() - oracle::sstv(thin, true)) < 1e-12);
}

TEST_CASE("total loss: alpha weighting and alpha = 0 degeneracy") {
    std::mt19937_64 rng(4);
    const Tensor p = random_tensor({2, 3, 4, 4}, rng);
    const Tensor g = random_tensor({2, 3, 4, 4}, rng);
    CHECK(total_loss(p, g, {.alpha = 0.0}).item() == l1_loss(p, g).item());
    const double expect = l1_loss(p, g).item() + 1e-3 * sstv_loss(p).item();
    CHECK(total_loss(p, g).item() == doctest::Approx(expect).epsilon(1e-15));
    const Tensor flat = Tensor::full({1, 2, 3, 3}, 0.4);
    CHECK(total_loss(flat, flat).item() == 0.0);
    // Hand arithmetic: 0.1 + 1e-3 * 2.0.
    CHECK(0.1 + 1e-3 * 2.0 == doctest::Approx(0.102));
    CHECK_THROWS_AS(total_loss(p, g, {.alpha = -1.0}), std::invalid_argument);
}

TEST_CASE("loss gradients pass the finite-difference check") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::mt19937_64 rng(seed);
        const Tensor p = random_tensor({2, 3, 4, 4}, rng);
        const Tensor g = random_tensor({2, 3, 4, 4}, rng);
        INFO("seed " << seed);
        CHECK(testing::gradcheck([](auto& x) { return l1_loss(x[0], x[1]); }, {p, g}, rng) < 1e-4);
        CHECK(testing::gradcheck([](auto& x) { return sstv_loss(x[0]); }, {p}, rng) < 1e-4);
        CHECK(testing::gradcheck([](auto& x) { return total_loss(x[0], x[1]); }, {p, g}, rng) < 1e-4);
    }
}
