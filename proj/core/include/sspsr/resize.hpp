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

enum class ResizeDirection { down, up };

/// Cubic convolution kernel with a = -0.5 (Keys), support [-2, 2].
double cubic_kernel(double x);

/// Sparse resampling matrix for one axis, in the layout MATLAB's imresize
/// builds: output i reads `taps` input indices starting at row i.
struct AxisWeights {
    std::size_t in_length = 0;
    std::size_t out_length = 0;
    std::size_t taps = 0;
    std::vector<std::size_t> indices;  // out_length * taps, already mirrored
    std::vector<double> weights;       // out_length * taps, rows sum to 1
};

/// `scale` is output/input. Downscaling widens the kernel by 1/scale
/// (antialiasing); out-of-range taps are mirrored symmetrically.
AxisWeights bicubic_axis_weights(std::size_t in_length, std::size_t out_length, double scale);

/// Resizes one H x W plane.
std::vector<double> bicubic_resize_plane(std::span<const double> plane, std::size_t height,
                                         std::size_t width, const AxisWeights& rows,
                                         const AxisWeights& cols);

/// Band-wise resize by an integer factor. Downscaling output extent is
/// ceil(extent / factor).
HsiCube bicubic_resize(const HsiCube& cube, double factor, ResizeDirection direction);

/// Same resize applied to every plane of an [N,C,H,W] tensor (not recorded
/// in any graph).
Tensor bicubic_resize_batch(const Tensor& x, double factor, ResizeDirection direction);
inline Tensor bicubic_upsample_batch(const Tensor& x, double factor) {
    return bicubic_resize_batch(x, factor, ResizeDirection::up);
}

}  // namespace sspsr
