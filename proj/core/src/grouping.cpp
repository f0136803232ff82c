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

#include "sspsr/grouping.hpp"

#include <string>

#include "sspsr/ops.hpp"

namespace sspsr {

std::vector<std::size_t> GroupingScheme::coverage() const {
    std::vector<std::size_t> count(total_bands, 0);
    for (const auto& iv : intervals)
        for (std::size_t b = iv.start; b < iv.end(); ++b) ++count[b];
    return count;
}

GroupingScheme plan_groups(std::size_t bands, std::size_t group_size, std::size_t overlap) {
    if (bands == 0) throw ShapeError("plan_groups: band count must be positive");
    if (group_size == 0) throw ShapeError("plan_groups: group size must be positive");
    if (overlap >= group_size) {
        throw ShapeError("plan_groups: overlap " + std::to_string(overlap) +
                         " must be smaller than group size " + std::to_string(group_size));
    }
    GroupingScheme s;
    s.total_bands = bands;
    s.group_size = group_size;
    s.overlap = overlap;
    if (group_size >= bands) {
        s.clamped = group_size > bands;
        s.group_size = bands;
        s.overlap = s.clamped ? 0 : overlap;
        s.intervals.push_back({0, bands});
        return s;
    }
    const std::size_t stride = group_size - overlap;
    const std::size_t count = (bands - overlap + stride - 1) / stride;
    for (std::size_t k = 0; k + 1 < count; ++k) s.intervals.push_back({k * stride, group_size});
    // Fallback: the last group is always the final p bands.
    s.intervals.push_back({bands - group_size, group_size});
    return s;
}

std::vector<Tensor> split(const Tensor& x, const GroupingScheme& scheme) {
    if (x.rank() != 4 || x.dim(1) != scheme.total_bands) {
        throw ShapeError("split: input " + shape_to_string(x.shape()) + " does not have " +
                         std::to_string(scheme.total_bands) + " channels");
    }
    std::vector<Tensor> parts;
    parts.reserve(scheme.groups());
    for (const auto& iv : scheme.intervals) parts.push_back(slice_channels(x, iv.start, iv.end()));
    return parts;
}

std::vector<HsiCube> split(const HsiCube& cube, const GroupingScheme& scheme) {
    std::vector<HsiCube> out;
    for (const auto& t : split(cube.as_batch(), scheme)) out.push_back(HsiCube::from_batch(t));
    return out;
}

Tensor merge_overlap_average(const std::vector<Tensor>& parts, const GroupingScheme& scheme) {
    if (parts.size() != scheme.groups()) {
        throw ShapeError("merge_overlap_average: got " + std::to_string(parts.size()) +
                         " parts for " + std::to_string(scheme.groups()) + " groups");
    }
    const Tensor& first = parts.front();
    for (std::size_t k = 0; k < parts.size(); ++k) {
        const Tensor& t = parts[k];
        if (t.rank() != 4 || t.dim(1) != scheme.intervals[k].size || t.dim(0) != first.dim(0) ||
            t.dim(2) != first.dim(2) || t.dim(3) != first.dim(3)) {
            throw ShapeError("merge_overlap_average: part " + std::to_string(k) + " has shape " +
                             shape_to_string(t.shape()) + ", expected " +
                             std::to_string(scheme.intervals[k].size) + " channels");
        }
    }
    const std::size_t n = first.dim(0), c = scheme.total_bands, plane = first.dim(2) * first.dim(3);
    const auto cover = scheme.coverage();
    Tensor out({n, c, first.dim(2), first.dim(3)});
    // Running mean: identical contributions reproduce their value exactly.
    std::vector<std::size_t> seen(c, 0);
    for (std::size_t k = 0; k < parts.size(); ++k) {
        const auto& iv = scheme.intervals[k];
        for (std::size_t ch = 0; ch < iv.size; ++ch) {
            const double count = static_cast<double>(++seen[iv.start + ch]);
            for (std::size_t b = 0; b < n; ++b) {
                const double* src = parts[k].data().data() + (b * iv.size + ch) * plane;
                double* dst = out.data().data() + (b * c + iv.start + ch) * plane;
                for (std::size_t i = 0; i < plane; ++i) dst[i] += (src[i] - dst[i]) / count;
            }
        }
    }

    std::vector<const Tensor*> inputs;
    for (const auto& t : parts) inputs.push_back(&t);
    return make_result(std::move(out), inputs, [scheme, cover, n, c, plane](autograd::Node& self) {
        for (std::size_t k = 0; k < scheme.groups(); ++k) {
            if (!self.parent_attached(k)) continue;
            const auto& iv = scheme.intervals[k];
            std::vector<double> g(n * iv.size * plane);
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t ch = 0; ch < iv.size; ++ch) {
                    const double inv = 1.0 / static_cast<double>(cover[iv.start + ch]);
                    const double* src = self.grad.data() + (b * c + iv.start + ch) * plane;
                    double* dst = g.data() + (b * iv.size + ch) * plane;
                    for (std::size_t i = 0; i < plane; ++i) dst[i] = src[i] * inv;
                }
            self.accumulate_into(k, g);
        }
    });
}

}  // namespace sspsr
