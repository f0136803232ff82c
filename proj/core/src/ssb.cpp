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

#include "sspsr/ssb.hpp"

#include <algorithm>
#include <string>

namespace sspsr {
namespace {

void check_features(const Tensor& f, const SsbParams& p, const char* where) {
    if (f.rank() != 4 || f.dim(1) != p.features()) {
        throw ShapeError(std::string(where) + ": input " + shape_to_string(f.shape()) +
                         " does not match block width " + std::to_string(p.features()));
    }
}

}  // namespace

std::size_t attention_hidden(std::size_t n_feats) { return std::max<std::size_t>(1, n_feats / 16); }

Tensor spatial_residual(const Tensor& f, const SsbParams& p, ConvAlgo algo) {
    check_features(f, p, "spatial_residual");
    Tensor h = relu(conv2d(f, p.spatial1, 1, algo));
    return add(f, conv2d(h, p.spatial2, 1, algo));
}

Tensor spectral_attention(const Tensor& f, const SsbParams& p) {
    check_features(f, p, "spectral_attention");
    const std::size_t n = f.dim(0), c = f.dim(1);
    Tensor pooled = reshape(global_avg_pool(f), {n, c});
    Tensor hidden = relu(fully_connected(pooled, p.fc1_weight, p.fc1_bias));
    Tensor gate = sigmoid(fully_connected(hidden, p.fc2_weight, p.fc2_bias));
    return reshape(gate, {n, c, 1, 1});
}

Tensor spectral_body(const Tensor& f_spa, const SsbParams& p, ConvAlgo algo) {
    return relu(conv2d(f_spa, p.spectral, 0, algo));
}

Tensor ssb_forward(const Tensor& f_in, const SsbParams& p, const SsbOptions& opt) {
    Tensor f_spa = spatial_residual(f_in, p, opt.algo);
    Tensor body = spectral_body(f_spa, p, opt.algo);
    if (!opt.use_attention) return add(f_spa, body);
    const Tensor& stats = opt.attention_source == AttentionSource::spectral_body ? body : f_spa;
    return add(f_spa, mul(body, spectral_attention(stats, p)));
}

Tensor sspn_forward(const Tensor& f0, const SspnParams& p, const SsbOptions& opt) {
    if (p.blocks.empty()) throw ShapeError("sspn_forward: no blocks");
    Tensor f = f0;
    for (const auto& block : p.blocks) f = ssb_forward(f, block, opt);
    return add(f, f0);
}

}  // namespace sspsr
