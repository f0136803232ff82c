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

#include "sspsr/hsi_cube.hpp"
#include "sspsr/tensor.hpp"

namespace sspsr {

/// Half-open band range [start, start + size).
struct BandInterval {
    std::size_t start = 0;
    std::size_t size = 0;
    std::size_t end() const { return start + size; }
    bool operator==(const BandInterval&) const = default;
};

/// Overlapping spectral groups of `group_size` bands.
///
/// Groups start every `group_size - overlap` bands; the last group is
/// anchored to the final `group_size` bands so the whole spectrum is
/// covered. The group count is ceil((C - o) / (p - o)).
struct GroupingScheme {
    std::size_t total_bands = 0;
    std::size_t group_size = 0;
    std::size_t overlap = 0;
    std::vector<BandInterval> intervals;
    // Set when the requested group size exceeded the band count.
    bool clamped = false;

    std::size_t groups() const { return intervals.size(); }
    /// Number of intervals covering each band.
    std::vector<std::size_t> coverage() const;
};

/// Plans groups for `bands` bands. Throws on overlap >= group_size or
/// group_size == 0; clamps group_size > bands to a single group.
GroupingScheme plan_groups(std::size_t bands, std::size_t group_size, std::size_t overlap);

/// Channel slices of a [N,C,H,W] tensor, one per interval. Differentiable.
std::vector<Tensor> split(const Tensor& x, const GroupingScheme& scheme);
std::vector<HsiCube> split(const HsiCube& cube, const GroupingScheme& scheme);

/// Places each part at its band position and averages overlapping bands.
/// Differentiable in every part.
Tensor merge_overlap_average(const std::vector<Tensor>& parts, const GroupingScheme& scheme);

}  // namespace sspsr
