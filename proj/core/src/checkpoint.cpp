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

#include "sspsr/checkpoint.hpp"

#include <cmath>
#include <map>

#include "binary_io.hpp"
#include "sspsr/cube_io.hpp"

namespace sspsr {
namespace {

std::uint32_t pack_flags(const AblationFlags& f) {
    return (f.use_grouping ? 1u : 0u) | (f.use_progressive ? 2u : 0u) | (f.share_params ? 4u : 0u) |
           (f.use_attention ? 8u : 0u);
}

AblationFlags unpack_flags(std::uint32_t v) {
    AblationFlags f;
    f.use_grouping = v & 1u;
    f.use_progressive = v & 2u;
    f.share_params = v & 4u;
    f.use_attention = v & 8u;
    return f;
}

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const SspsrParams& params) {
    const NetworkConfig& c = params.config;
    detail::ByteWriter w;
    w.bytes(kSspwMagic.data(), kSspwMagic.size());
    w.u32(kSspwVersion);
    for (std::size_t v : {c.bands, c.group_size, c.overlap, c.n_feats, c.blocks, c.scale, c.branch_scale})
        w.u32(static_cast<std::uint32_t>(v));
    w.u32(pack_flags(c.flags));
    w.u32(static_cast<std::uint32_t>(c.attention_source));

    auto named = named_parameters(const_cast<SspsrParams&>(params));
    w.u32(static_cast<std::uint32_t>(named.size()));
    for (const auto& nt : named) {
        w.u32(static_cast<std::uint32_t>(nt.name.size()));
        w.bytes(nt.name.data(), nt.name.size());
        const Shape& s = nt.tensor->shape();
        w.u32(static_cast<std::uint32_t>(s.size()));
        for (auto d : s) w.u32(static_cast<std::uint32_t>(d));
        for (double v : nt.tensor->data()) w.f64(v);
    }
    return std::move(w.buffer());
}

SspsrParams decode_checkpoint(const std::vector<std::uint8_t>& bytes, const std::string& origin) {
    detail::ByteReader r(bytes, origin);
    std::array<char, 4> magic{};
    r.bytes(magic.data(), magic.size(), "magic");
    if (magic != kSspwMagic) throw FormatError(origin + ": bad magic, not an SSPW checkpoint");
    const std::uint32_t version = r.u32("version");
    if (version != kSspwVersion) {
        throw FormatError(origin + ": unsupported SSPW version " + std::to_string(version));
    }
    NetworkConfig cfg;
    cfg.bands = r.u32("config.bands");
    cfg.group_size = r.u32("config.group_size");
    cfg.overlap = r.u32("config.overlap");
    cfg.n_feats = r.u32("config.n_feats");
    cfg.blocks = r.u32("config.blocks");
    cfg.scale = r.u32("config.scale");
    cfg.branch_scale = r.u32("config.branch_scale");
    cfg.flags = unpack_flags(r.u32("config.flags"));
    const std::uint32_t source = r.u32("config.attention_source");
    if (source > 1) throw FormatError(origin + ": unknown attention source " + std::to_string(source));
    cfg.attention_source = static_cast<AttentionSource>(source);
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw FormatError(origin + ": invalid network config: " + e.what());
    }

    SspsrParams params = init_params(cfg, 0);
    std::map<std::string, Tensor*> slots;
    for (auto& nt : named_parameters(params)) slots[nt.name] = nt.tensor;

    const std::uint32_t count = r.u32("tensor count");
    if (count != slots.size()) {
        throw FormatError(origin + ": checkpoint has " + std::to_string(count) +
                          " tensors, config expects " + std::to_string(slots.size()));
    }
    for (std::uint32_t k = 0; k < count; ++k) {
        const std::uint32_t len = r.u32("name length");
        r.need(len, "tensor name");
        std::string name(len, '\0');
        r.bytes(name.data(), len, "tensor name");
        auto it = slots.find(name);
        if (it == slots.end()) throw FormatError(origin + ": unexpected tensor '" + name + "'");
        Tensor* dst = it->second;
        const std::uint32_t rank = r.u32("rank");
        Shape shape(rank);
        for (auto& d : shape) d = r.u32("dimension");
        if (shape != dst->shape()) {
            throw FormatError(origin + ": tensor '" + name + "' has shape " + shape_to_string(shape) +
                              ", config expects " + shape_to_string(dst->shape()));
        }
        r.need(dst->numel() * 8, "tensor values");
        for (auto& v : dst->data()) {
            v = r.f64("value");
            if (!std::isfinite(v)) throw FormatError(origin + ": non-finite value in '" + name + "'");
        }
        slots.erase(it);
    }
    if (r.remaining() != 0) {
        throw FormatError(origin + ": " + std::to_string(r.remaining()) + " trailing bytes");
    }
    return params;
}

void save_checkpoint(const SspsrParams& params, const std::filesystem::path& path) {
    write_file(path, encode_checkpoint(params));
}

SspsrParams load_checkpoint(const std::filesystem::path& path) {
    return decode_checkpoint(read_file(path), path.string());
}

}  // namespace sspsr
