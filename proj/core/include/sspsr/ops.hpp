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
#include <cstdint>
#include <vector>

#include "sspsr/tensor.hpp"

namespace sspsr {

/// Weight [out_ch, in_ch, kh, kw] and bias [out_ch] of one convolution layer.
struct ConvParams {
    Tensor weight;
    Tensor bias;

    std::size_t out_channels() const { return weight.dim(0); }
    std::size_t in_channels() const { return weight.dim(1); }
    std::size_t kernel() const { return weight.dim(2); }
};

enum class ConvAlgo : std::uint8_t {
    direct,  // nested loops; reference path
    im2col,  // column unfolding plus a dense matrix product
};

enum class Activation : std::uint8_t { relu, sigmoid };
enum class Combine : std::uint8_t { add, mul };

/// 2-D cross-correlation with zero padding, stride 1.
/// Only 1x1 and 3x3 square kernels are accepted.
Tensor conv2d(const Tensor& x, const ConvParams& p, std::size_t padding,
              ConvAlgo algo = ConvAlgo::im2col);

/// Padding that keeps spatial extent for the accepted kernel sizes.
inline std::size_t same_padding(std::size_t kernel) { return kernel / 2; }

Tensor activation(const Tensor& x, Activation kind);
inline Tensor relu(const Tensor& x) { return activation(x, Activation::relu); }
inline Tensor sigmoid(const Tensor& x) { return activation(x, Activation::sigmoid); }

/// [N,C,H,W] -> [N,C,1,1] spatial mean.
Tensor global_avg_pool(const Tensor& x);

/// [N,C*r*r,H,W] -> [N,C,rH,rW].
Tensor pixel_shuffle(const Tensor& x, std::size_t r);
/// [N,C,rH,rW] -> [N,C*r*r,H,W]; exact inverse of pixel_shuffle.
Tensor pixel_unshuffle(const Tensor& x, std::size_t r);

/// Elementwise add/mul. `y` may also be a [N,C,1,1] per-channel vector
/// broadcast over the spatial axes of a rank-4 `x`.
Tensor combine(const Tensor& x, const Tensor& y, Combine kind);
inline Tensor add(const Tensor& x, const Tensor& y) { return combine(x, y, Combine::add); }
inline Tensor mul(const Tensor& x, const Tensor& y) { return combine(x, y, Combine::mul); }

Tensor concat_channels(const std::vector<Tensor>& xs);
/// Channels [begin, end) of a rank-4 tensor.
Tensor slice_channels(const Tensor& x, std::size_t begin, std::size_t end);

/// x [N,C], weight [K,C], bias [K] -> [N,K].
Tensor fully_connected(const Tensor& x, const Tensor& weight, const Tensor& bias);

/// Differentiable reshape.
Tensor reshape(const Tensor& x, Shape shape);
Tensor scale(const Tensor& x, double factor);
Tensor sum(const Tensor& x);
Tensor mean(const Tensor& x);

}  // namespace sspsr
