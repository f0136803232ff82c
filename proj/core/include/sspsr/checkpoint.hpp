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

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "sspsr/network.hpp"

namespace sspsr {

// SSPW layout, all little-endian:
//   "SSPW" | u32 version (1)
//   config: u32 bands, group_size, overlap, n_feats, blocks, scale,
//           branch_scale, flags (bit0 grouping, bit1 progressive,
//           bit2 share, bit3 attention), attention_source
//   u32 tensor count, then per tensor:
//     u32 name length | name bytes | u32 rank | u32 dims[rank] | f64 values
inline constexpr std::array<char, 4> kSspwMagic{'S', 'S', 'P', 'W'};
inline constexpr std::uint32_t kSspwVersion = 1;

std::vector<std::uint8_t> encode_checkpoint(const SspsrParams& params);
SspsrParams decode_checkpoint(const std::vector<std::uint8_t>& bytes,
                              const std::string& origin = "<memory>");

void save_checkpoint(const SspsrParams& params, const std::filesystem::path& path);
SspsrParams load_checkpoint(const std::filesystem::path& path);

}  // namespace sspsr
