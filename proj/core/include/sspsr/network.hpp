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
#include <string>
#include <vector>

#include "sspsr/grouping.hpp"
#include "sspsr/ops.hpp"
#include "sspsr/ssb.hpp"

namespace sspsr {

/// Ablation switches. All on is the full model.
struct AblationFlags {
    bool use_grouping = true;     // off: one branch over all bands
    bool use_progressive = true;  // off: no branch upsampling, one final upsampler
    bool share_params = true;     // off: one parameter copy per group
    bool use_attention = true;    // off: SSB output is F_spa + B
    bool operator==(const AblationFlags&) const = default;
};

struct NetworkConfig {
    std::size_t bands = 128;
    std::size_t group_size = 8;
    std::size_t overlap = 2;
    std::size_t n_feats = 256;
    std::size_t blocks = 3;
    std::size_t scale = 4;
    // 0 selects the default split for `scale`.
    std::size_t branch_scale = 0;
    AblationFlags flags;
    AttentionSource attention_source = AttentionSource::spectral_body;
    ConvAlgo algo = ConvAlgo::im2col;

    /// Full-size settings for a `bands`-band sensor.
    static NetworkConfig paper(std::size_t bands, std::size_t scale = 4);
    /// Small settings used by tests and the desk-scale experiments.
    static NetworkConfig desk(std::size_t bands, std::size_t scale = 4);

    /// Throws std::invalid_argument describing the first violated constraint.
    void validate() const;
    std::size_t effective_branch_scale() const;
    std::size_t global_scale() const { return scale / effective_branch_scale(); }
    GroupingScheme grouping() const;
    SsbOptions ssb_options() const;
    bool operator==(const NetworkConfig&) const = default;
};

/// One x2 sub-pixel stage per entry: conv n -> 4n, pixel_shuffle(2), relu.
struct UpsamplerParams {
    std::vector<ConvParams> stages;
};

struct BranchParams {
    ConvParams shallow;  // p -> n
    SspnParams sspn;
    UpsamplerParams up;
    ConvParams rec;  // n -> p
};

struct GlobalParams {
    ConvParams gfe;  // C -> n on merged branch outputs
    SspnParams sspn;
    UpsamplerParams up;
    ConvParams gfe2;  // C -> n on the bicubic-upsampled input
    ConvParams grec;  // n -> C
};

/// All learnable tensors. With parameter sharing `branches` holds one
/// entry that every group reads; otherwise it holds one entry per group.
struct SspsrParams {
    NetworkConfig config;
    std::vector<BranchParams> branches;
    GlobalParams global;

    const BranchParams& branch_for(std::size_t group) const {
        return branches.size() == 1 ? branches.front() : branches.at(group);
    }
};

struct NamedTensor {
    std::string name;
    Tensor* tensor;
};

/// Every unique parameter tensor in a fixed order with a stable name.
std::vector<NamedTensor> named_parameters(SspsrParams& params);
std::vector<const Tensor*> parameter_list(const SspsrParams& params);

/// He-uniform weights (bound sqrt(6 / fan_in)), zero biases. Every
/// parameter is a graph leaf.
SspsrParams init_params(const NetworkConfig& cfg, std::uint64_t seed);

/// Zero-fills every parameter while keeping shapes and graph leaves.
void zero_params(SspsrParams& params);

/// Deep copy with fresh gradient leaves, so training the copy leaves `params` untouched.
SspsrParams clone_params(const SspsrParams& params);

/// [N,C,h,w] -> [N,C,d*h,d*w].
Tensor sspsr_forward(const Tensor& lr, const SspsrParams& params);

/// Output of one branch network for one group slice.
Tensor branch_forward(const Tensor& group, const BranchParams& branch, const NetworkConfig& cfg);

/// Scalar count over unique parameter storage.
std::size_t count_params(const SspsrParams& params);

/// Multiply-accumulate count of one 2-D convolution.
std::uint64_t conv2d_flops(std::size_t n, std::size_t cout, std::size_t out_h, std::size_t out_w,
                           std::size_t cin, std::size_t kh, std::size_t kw);

/// Multiply-accumulates of every convolution and fully connected layer of
/// the forward pass for an [N,C,h,w] input. Elementwise work and the fixed
/// bicubic interpolation are not counted.
std::uint64_t forward_flops(const NetworkConfig& cfg, const Shape& input_shape);

}  // namespace sspsr
