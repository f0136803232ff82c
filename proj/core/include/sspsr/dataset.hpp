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

#include "sspsr/hsi_cube.hpp"

namespace sspsr {

struct PatchSpec {
    std::size_t patch_size = 64;
    std::size_t overlap = 32;
};

/// Top-left offsets along one axis: every `patch - overlap` pixels, with a
/// final patch flush against the far edge when the grid leaves a remainder.
std::vector<std::size_t> patch_origins(std::size_t extent, const PatchSpec& spec);

/// Square patches over the full spatial grid, row-major by origin.
std::vector<HsiCube> extract_patches(const HsiCube& cube, const PatchSpec& spec);

/// Spatial crop [y, y + h) x [x, x + w) of every band.
HsiCube crop(const HsiCube& cube, std::size_t y, std::size_t x, std::size_t h, std::size_t w);

struct SynthConfig {
    std::size_t bands = 16;
    std::size_t height = 48;
    std::size_t width = 48;
    // Gaussian sigma (pixels) of the abundance maps.
    double smoothness = 3.0;
    // Gaussian sigma (bands) of the endmember spectra.
    double spectral_smoothness = 2.0;
    std::size_t n_endmembers = 4;
    double noise = 0.005;
    std::uint64_t seed = 0;
};

/// Linear mixture of smooth random spectra weighted by smooth random
/// abundance maps, plus white noise, clipped to [0, 1].
HsiCube synth_cube(const SynthConfig& cfg);

/// Mean |Pearson correlation| between each pair of adjacent bands.
double adjacent_band_correlation(const HsiCube& cube);

}  // namespace sspsr
