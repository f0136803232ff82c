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

#include "sspsr/network.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "sspsr/resize.hpp"

namespace sspsr {
namespace {

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

std::size_t log2_exact(std::size_t v) {
    std::size_t k = 0;
    while (v > 1) {
        v >>= 1;
        ++k;
    }
    return k;
}

class Initializer {
public:
    explicit Initializer(std::uint64_t seed) : rng_(seed) {}

    Tensor uniform(Shape shape, std::size_t fan_in) {
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
        Tensor t(std::move(shape));
        for (auto& v : t.data()) {
            do {
                v = (2.0 * std::generate_canonical<double, 53>(rng_) - 1.0) * bound;
            } while (v <= -bound);
        }
        return std::move(t.set_requires_grad(true));
    }

    ConvParams conv(std::size_t cin, std::size_t cout, std::size_t k) {
        ConvParams p;
        p.weight = uniform({cout, cin, k, k}, cin * k * k);
        p.bias = Tensor::zeros({cout});
        p.bias.set_requires_grad(true);
        return p;
    }

    SspnParams sspn(std::size_t n, std::size_t blocks, bool attention) {
        SspnParams s;
        const std::size_t hidden = attention_hidden(n);
        for (std::size_t r = 0; r < blocks; ++r) {
            SsbParams b;
            b.spatial1 = conv(n, n, 3);
            b.spatial2 = conv(n, n, 3);
            b.spectral = conv(n, n, 1);
            if (!attention) {
                s.blocks.push_back(std::move(b));
                continue;
            }
            b.fc1_weight = uniform({hidden, n}, n);
            b.fc1_bias = std::move(Tensor::zeros({hidden}).set_requires_grad(true));
            b.fc2_weight = uniform({n, hidden}, hidden);
            b.fc2_bias = std::move(Tensor::zeros({n}).set_requires_grad(true));
            s.blocks.push_back(std::move(b));
        }
        return s;
    }

    UpsamplerParams upsampler(std::size_t n, std::size_t factor) {
        UpsamplerParams u;
        for (std::size_t i = 0; i < log2_exact(factor); ++i) u.stages.push_back(conv(n, 4 * n, 3));
        return u;
    }

private:
    std::mt19937_64 rng_;
};

Tensor upsample(const Tensor& x, const UpsamplerParams& up, ConvAlgo algo) {
    Tensor f = x;
    for (const auto& stage : up.stages) f = relu(pixel_shuffle(conv2d(f, stage, 1, algo), 2));
    return f;
}

void collect(const std::string& prefix, ConvParams& p, std::vector<NamedTensor>& out) {
    out.push_back({prefix + ".weight", &p.weight});
    out.push_back({prefix + ".bias", &p.bias});
}

void collect(const std::string& prefix, SspnParams& s, std::vector<NamedTensor>& out) {
    for (std::size_t r = 0; r < s.blocks.size(); ++r) {
        auto& b = s.blocks[r];
        const std::string base = prefix + ".block" + std::to_string(r);
        collect(base + ".spatial1", b.spatial1, out);
        collect(base + ".spatial2", b.spatial2, out);
        collect(base + ".spectral", b.spectral, out);
        if (b.fc1_weight.numel() == 0) continue;
        out.push_back({base + ".fc1.weight", &b.fc1_weight});
        out.push_back({base + ".fc1.bias", &b.fc1_bias});
        out.push_back({base + ".fc2.weight", &b.fc2_weight});
        out.push_back({base + ".fc2.bias", &b.fc2_bias});
    }
}

void collect(const std::string& prefix, UpsamplerParams& u, std::vector<NamedTensor>& out) {
    for (std::size_t i = 0; i < u.stages.size(); ++i)
        collect(prefix + ".stage" + std::to_string(i), u.stages[i], out);
}

std::uint64_t sspn_flops(std::size_t n, std::size_t feats, std::size_t blocks, bool attention,
                         std::size_t h, std::size_t w) {
    const std::size_t hidden = attention ? attention_hidden(feats) : 0;
    std::uint64_t per_block = 2 * conv2d_flops(n, feats, h, w, feats, 3, 3) +
                              conv2d_flops(n, feats, h, w, feats, 1, 1) +
                              static_cast<std::uint64_t>(n) * 2 * feats * hidden;
    return per_block * blocks;
}

std::uint64_t upsampler_flops(std::size_t n, std::size_t feats, std::size_t factor, std::size_t h,
                              std::size_t w) {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < log2_exact(factor); ++i) {
        total += conv2d_flops(n, 4 * feats, h, w, feats, 3, 3);
        h *= 2;
        w *= 2;
    }
    return total;
}

}  // namespace

NetworkConfig NetworkConfig::paper(std::size_t bands, std::size_t scale) {
    NetworkConfig c;
    c.bands = bands;
    c.scale = scale;
    return c;
}

NetworkConfig NetworkConfig::desk(std::size_t bands, std::size_t scale) {
    NetworkConfig c;
    c.bands = bands;
    c.scale = scale;
    c.group_size = 4;
    c.overlap = 1;
    c.n_feats = 32;
    c.blocks = 1;
    return c;
}

void NetworkConfig::validate() const {
    if (bands == 0) throw std::invalid_argument("bands must be positive");
    if (n_feats == 0) throw std::invalid_argument("n_feats must be positive");
    if (blocks == 0) throw std::invalid_argument("blocks (R) must be at least 1");
    if (scale != 2 && scale != 4 && scale != 8) {
        throw std::invalid_argument("scale must be 2, 4 or 8, got " + std::to_string(scale));
    }
    if (flags.use_grouping) {
        if (group_size == 0) throw std::invalid_argument("group_size must be positive");
        if (overlap >= group_size) throw std::invalid_argument("overlap must be smaller than group_size");
    }
    if (branch_scale != 0) {
        if (!is_power_of_two(branch_scale) || scale % branch_scale != 0) {
            throw std::invalid_argument("branch_scale " + std::to_string(branch_scale) +
                                        " must be a power of two dividing scale " +
                                        std::to_string(scale));
        }
        if (!flags.use_progressive && branch_scale != 1) {
            throw std::invalid_argument("branch_scale must be 1 when progressive upsampling is off");
        }
    }
}

std::size_t NetworkConfig::effective_branch_scale() const {
    if (!flags.use_progressive) return 1;
    if (branch_scale != 0) return branch_scale;
    return scale == 2 ? 1 : 2;
}

GroupingScheme NetworkConfig::grouping() const {
    if (!flags.use_grouping) return plan_groups(bands, bands, 0);
    return plan_groups(bands, group_size, overlap);
}

SsbOptions NetworkConfig::ssb_options() const {
    return SsbOptions{flags.use_attention, attention_source, algo};
}

SspsrParams init_params(const NetworkConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    Initializer init(seed);
    SspsrParams params;
    params.config = cfg;
    const GroupingScheme scheme = cfg.grouping();
    const std::size_t p = scheme.group_size;
    const std::size_t n = cfg.n_feats;
    const std::size_t copies = cfg.flags.share_params ? 1 : scheme.groups();
    for (std::size_t k = 0; k < copies; ++k) {
        BranchParams b;
        b.shallow = init.conv(p, n, 3);
        b.sspn = init.sspn(n, cfg.blocks, cfg.flags.use_attention);
        b.up = init.upsampler(n, cfg.effective_branch_scale());
        b.rec = init.conv(n, p, 3);
        params.branches.push_back(std::move(b));
    }
    auto& g = params.global;
    g.gfe = init.conv(cfg.bands, n, 3);
    g.sspn = init.sspn(n, cfg.blocks, cfg.flags.use_attention);
    g.up = init.upsampler(n, cfg.global_scale());
    g.gfe2 = init.conv(cfg.bands, n, 3);
    g.grec = init.conv(n, cfg.bands, 3);
    return params;
}

std::vector<NamedTensor> named_parameters(SspsrParams& params) {
    std::vector<NamedTensor> out;
    for (std::size_t k = 0; k < params.branches.size(); ++k) {
        auto& b = params.branches[k];
        const std::string base = "branch" + std::to_string(k);
        collect(base + ".shallow", b.shallow, out);
        collect(base + ".sspn", b.sspn, out);
        collect(base + ".up", b.up, out);
        collect(base + ".rec", b.rec, out);
    }
    auto& g = params.global;
    collect("global.gfe", g.gfe, out);
    collect("global.sspn", g.sspn, out);
    collect("global.up", g.up, out);
    collect("global.gfe2", g.gfe2, out);
    collect("global.grec", g.grec, out);
    return out;
}

std::vector<const Tensor*> parameter_list(const SspsrParams& params) {
    std::vector<const Tensor*> out;
    for (const auto& nt : named_parameters(const_cast<SspsrParams&>(params))) out.push_back(nt.tensor);
    return out;
}

void zero_params(SspsrParams& params) {
    for (auto& nt : named_parameters(params))
        std::fill(nt.tensor->data().begin(), nt.tensor->data().end(), 0.0);
}

SspsrParams clone_params(const SspsrParams& params) {
    SspsrParams copy = params;
    for (auto& [name, t] : named_parameters(copy)) {
        t->set_requires_grad(false);
        t->set_requires_grad(true);
    }
    return copy;
}

Tensor branch_forward(const Tensor& group, const BranchParams& branch, const NetworkConfig& cfg) {
    Tensor f0 = conv2d(group, branch.shallow, 1, cfg.algo);
    Tensor f = sspn_forward(f0, branch.sspn, cfg.ssb_options());
    f = upsample(f, branch.up, cfg.algo);
    return conv2d(f, branch.rec, 1, cfg.algo);
}

Tensor sspsr_forward(const Tensor& lr, const SspsrParams& params) {
    const NetworkConfig& cfg = params.config;
    if (lr.rank() != 4 || lr.dim(1) != cfg.bands) {
        throw ShapeError("sspsr_forward: input " + shape_to_string(lr.shape()) + " does not have " +
                         std::to_string(cfg.bands) + " bands");
    }
    const GroupingScheme scheme = cfg.grouping();
    if (!cfg.flags.share_params && params.branches.size() != scheme.groups()) {
        throw ShapeError("sspsr_forward: " + std::to_string(params.branches.size()) +
                         " branch parameter sets for " + std::to_string(scheme.groups()) + " groups");
    }
    std::vector<Tensor> branch_out;
    branch_out.reserve(scheme.groups());
    const auto groups = split(lr, scheme);
    for (std::size_t k = 0; k < groups.size(); ++k)
        branch_out.push_back(branch_forward(groups[k], params.branch_for(k), cfg));
    Tensor merged = merge_overlap_average(branch_out, scheme);

    const auto& g = params.global;
    Tensor f = conv2d(merged, g.gfe, 1, cfg.algo);
    f = sspn_forward(f, g.sspn, cfg.ssb_options());
    f = upsample(f, g.up, cfg.algo);
    const Tensor lr_up = bicubic_upsample_batch(lr, static_cast<double>(cfg.scale));
    f = add(f, conv2d(lr_up, g.gfe2, 1, cfg.algo));
    return conv2d(f, g.grec, 1, cfg.algo);
}

std::size_t count_params(const SspsrParams& params) {
    std::size_t total = 0;
    for (const Tensor* t : parameter_list(params)) total += t->numel();
    return total;
}

std::uint64_t conv2d_flops(std::size_t n, std::size_t cout, std::size_t out_h, std::size_t out_w,
                           std::size_t cin, std::size_t kh, std::size_t kw) {
    return static_cast<std::uint64_t>(n) * cout * out_h * out_w * cin * kh * kw;
}

std::uint64_t forward_flops(const NetworkConfig& cfg, const Shape& input_shape) {
    if (input_shape.size() != 4) {
        throw ShapeError("forward_flops: expected [N,C,h,w], got " + shape_to_string(input_shape));
    }
    const std::size_t n = input_shape[0], h = input_shape[2], w = input_shape[3];
    if (n == 0 || h == 0 || w == 0) return 0;
    const GroupingScheme scheme = cfg.grouping();
    const std::size_t p = scheme.group_size, f = cfg.n_feats, bs = cfg.effective_branch_scale();

    const bool att = cfg.flags.use_attention;
    std::uint64_t branch = conv2d_flops(n, f, h, w, p, 3, 3) +
                           sspn_flops(n, f, cfg.blocks, att, h, w) +
                           upsampler_flops(n, f, bs, h, w) +
                           conv2d_flops(n, p, h * bs, w * bs, f, 3, 3);
    const std::size_t gh = h * bs, gw = w * bs, oh = h * cfg.scale, ow = w * cfg.scale;
    std::uint64_t global = conv2d_flops(n, f, gh, gw, cfg.bands, 3, 3) +
                           sspn_flops(n, f, cfg.blocks, att, gh, gw) +
                           upsampler_flops(n, f, cfg.global_scale(), gh, gw) +
                           conv2d_flops(n, f, oh, ow, cfg.bands, 3, 3) +
                           conv2d_flops(n, cfg.bands, oh, ow, f, 3, 3);
    return branch * scheme.groups() + global;
}

}  // namespace sspsr
