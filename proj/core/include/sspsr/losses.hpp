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

#include "sspsr/tensor.hpp"

namespace sspsr {

enum class SstvNormalization {
    per_site,  // each axis term divided by its number of difference sites
    raw_sum    // plain l1 norms of the forward differences
};

struct LossConfig {
    double alpha = 1e-3;
    SstvNormalization sstv_norm = SstvNormalization::per_site;
};

/// Mean over the batch of each sample's mean absolute error.
Tensor l1_loss(const Tensor& pred, const Tensor& gt);

/// Spatial-spectral total variation of a [N,C,H,W] batch: forward
/// differences along H, W and C, l1-normed, summed over axes and averaged
/// over the batch. Axes of extent 1 contribute nothing.
Tensor sstv_loss(const Tensor& pred, SstvNormalization norm = SstvNormalization::per_site);

/// l1_loss + alpha * sstv_loss. alpha == 0 returns l1_loss unchanged.
Tensor total_loss(const Tensor& pred, const Tensor& gt, const LossConfig& cfg = {});

}  // namespace sspsr
