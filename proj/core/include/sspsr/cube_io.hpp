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
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "sspsr/hsi_cube.hpp"

namespace sspsr {

/// Malformed or unreadable file contents.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// HSIC layout, all little-endian:
//   "HSIC" | u32 version (1) | u32 bands | u32 height | u32 width |
//   bands*height*width f32 samples, band-major.
inline constexpr std::array<char, 4> kHsicMagic{'H', 'S', 'I', 'C'};
inline constexpr std::uint32_t kHsicVersion = 1;

std::vector<std::uint8_t> encode_cube(const HsiCube& cube);
HsiCube decode_cube(const std::vector<std::uint8_t>& bytes, const std::string& origin = "<memory>");

/// Rejects samples outside [0, 1]. Samples are stored as 32-bit floats.
void save_cube(const HsiCube& cube, const std::filesystem::path& path);
HsiCube load_cube(const std::filesystem::path& path);

/// 8-bit RGB PNG from three bands, each linearly mapped from [0, 1].
void write_png_composite(const HsiCube& cube, std::array<std::size_t, 3> rgb_bands,
                         const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

}  // namespace sspsr
