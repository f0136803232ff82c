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

#include "sspsr/ops.hpp"

namespace sspsr {

/// Learnable state of one spatial-spectral block.
struct SsbParams {
    ConvParams spatial1;  // 3x3, n -> n
    ConvParams spatial2;  // 3x3, n -> n
    ConvParams spectral;  // 1x1, n -> n
    // Attention layers; empty when the block is built without attention.
    Tensor fc1_weight;    // [hidden, n]
    Tensor fc1_bias;      // [hidden]
    Tensor fc2_weight;    // [n, hidden]
    Tensor fc2_bias;      // [n]

    std::size_t features() const { return spatial1.out_channels(); }
};

struct SspnParams {
    std::vector<SsbParams> blocks;
};

/// Width of the attention bottleneck: max(1, n_feats / 16).
std::size_t attention_hidden(std::size_t n_feats);

/// Which feature map feeds the channel-attention statistics.
enum class AttentionSource {
    spectral_body,    // T computed from relu(conv1x1(F_spa)), the map it rescales
    spatial_features  // T computed from F_spa
};

struct SsbOptions {
    bool use_attention = true;
    AttentionSource attention_source = AttentionSource::spectral_body;
    ConvAlgo algo = ConvAlgo::im2col;
};

/// F + conv3x3(relu(conv3x3(F))).
Tensor spatial_residual(const Tensor& f, const SsbParams& p, ConvAlgo algo = ConvAlgo::im2col);

/// sigmoid(fc2(relu(fc1(avgpool(F))))) reshaped to [N,n,1,1].
Tensor spectral_attention(const Tensor& f, const SsbParams& p);

/// relu(conv1x1(F_spa)).
Tensor spectral_body(const Tensor& f_spa, const SsbParams& p, ConvAlgo algo = ConvAlgo::im2col);

/// F_spa + T * B with attention, F_spa + B without.
Tensor ssb_forward(const Tensor& f_in, const SsbParams& p, const SsbOptions& opt = {});

/// SSB_R(...SSB_1(F0)...) + F0.
Tensor sspn_forward(const Tensor& f0, const SspnParams& p, const SsbOptions& opt = {});

}  // namespace sspsr
