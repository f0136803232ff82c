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

#pragma once

#include <cstddef>
#include <vector>

#include "sspsr/tensor.hpp"

namespace sspsr {

/// A hyperspectral image stored band-major as [bands, height, width].
class HsiCube {
public:
    HsiCube() = default;
    HsiCube(std::size_t bands, std::size_t height, std::size_t width)
        : data_({bands, height, width}) {}
    explicit HsiCube(Tensor data) : data_(std::move(data)) {
        if (data_.rank() != 3) {
            throw ShapeError("HsiCube needs a rank-3 tensor, got " + shape_to_string(data_.shape()));
        }
    }

    std::size_t bands() const { return data_.dim(0); }
    std::size_t height() const { return data_.dim(1); }
    std::size_t width() const { return data_.dim(2); }
    std::size_t pixels() const { return height() * width(); }

    double& operator()(std::size_t b, std::size_t y, std::size_t x) {
        return data_[(b * height() + y) * width() + x];
    }
    double operator()(std::size_t b, std::size_t y, std::size_t x) const {
        return data_[(b * height() + y) * width() + x];
    }

    std::span<double> band(std::size_t b) { return data_.data().subspan(b * pixels(), pixels()); }
    std::span<const double> band(std::size_t b) const {
        return data_.data().subspan(b * pixels(), pixels());
    }

    const Tensor& tensor() const { return data_; }
    Tensor& tensor() { return data_; }

    /// View as a single-sample batch [1, bands, height, width].
    Tensor as_batch() const { return data_.reshaped({1, bands(), height(), width()}); }
    /// Sample `n` of a rank-4 batch.
    static HsiCube from_batch(const Tensor& batch, std::size_t n = 0);
    /// Stacks equally shaped cubes into [N, bands, height, width].
    static Tensor stack(const std::vector<HsiCube>& cubes);

    bool same_shape(const HsiCube& other) const { return data_.shape() == other.data_.shape(); }

private:
    Tensor data_;
};

inline HsiCube HsiCube::from_batch(const Tensor& batch, std::size_t n) {
    if (batch.rank() != 4 || n >= batch.dim(0)) {
        throw ShapeError("from_batch: cannot take sample " + std::to_string(n) + " of " +
                         shape_to_string(batch.shape()));
    }
    const std::size_t c = batch.dim(1), h = batch.dim(2), w = batch.dim(3);
    const std::size_t size = c * h * w;
    std::vector<double> v(batch.data().begin() + n * size, batch.data().begin() + (n + 1) * size);
    return HsiCube(Tensor({c, h, w}, std::move(v)));
}

inline Tensor HsiCube::stack(const std::vector<HsiCube>& cubes) {
    if (cubes.empty()) throw ShapeError("stack: no cubes");
    const auto& s = cubes.front().tensor().shape();
    std::vector<double> v;
    v.reserve(cubes.size() * shape_numel(s));
    for (const auto& c : cubes) {
        if (c.tensor().shape() != s) {
            throw ShapeError("stack: cube " + shape_to_string(c.tensor().shape()) +
                             " differs from " + shape_to_string(s));
        }
        v.insert(v.end(), c.tensor().data().begin(), c.tensor().data().end());
    }
    return Tensor({cubes.size(), s[0], s[1], s[2]}, std::move(v));
}

}  // namespace sspsr
