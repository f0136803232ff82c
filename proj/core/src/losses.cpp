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

#include "sspsr/losses.hpp"

#include <array>
#include <cmath>
#include <string>

#include "sspsr/ops.hpp"

namespace sspsr {
namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Element stride and site count for forward differences along C, H and W
// of one sample.
struct DiffAxis {
    int which;  // 0 = H, 1 = W, 2 = C
    std::size_t stride;
    std::size_t extent;
    std::size_t sites;
};

std::array<DiffAxis, 3> diff_axes(std::size_t c, std::size_t h, std::size_t w) {
    auto sites = [](std::size_t extent, std::size_t others) {
        return extent < 2 ? std::size_t{0} : (extent - 1) * others;
    };
    return {DiffAxis{0, w, h, sites(h, c * w)}, DiffAxis{1, 1, w, sites(w, c * h)},
            DiffAxis{2, h * w, c, sites(c, h * w)}};
}

// Calls fn(i, j) for every forward-difference pair j = i + stride along the axis.
template <typename Fn>
void for_each_site(const DiffAxis& axis, std::size_t c, std::size_t h, std::size_t w, Fn&& fn) {
    const std::size_t dims[3] = {c, h, w};
    for (std::size_t ci = 0; ci < dims[0]; ++ci)
        for (std::size_t hi = 0; hi < dims[1]; ++hi)
            for (std::size_t wi = 0; wi < dims[2]; ++wi) {
                const std::size_t idx = (ci * h + hi) * w + wi;
                const std::size_t pos = axis.which == 0 ? hi : (axis.which == 1 ? wi : ci);
                if (pos + 1 < axis.extent) fn(idx, idx + axis.stride);
            }
}

}  // namespace

Tensor l1_loss(const Tensor& pred, const Tensor& gt) {
    if (pred.shape() != gt.shape() || pred.rank() == 0 || pred.numel() == 0) {
        throw ShapeError("l1_loss: shapes " + shape_to_string(pred.shape()) + " and " +
                         shape_to_string(gt.shape()) + " differ");
    }
    const std::size_t n = pred.dim(0);
    const std::size_t per = pred.numel() / n;
    double total = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
        double s = 0.0;
        for (std::size_t i = b * per; i < (b + 1) * per; ++i) s += std::abs(pred[i] - gt[i]);
        total += s / static_cast<double>(per);
    }
    const double value = total / static_cast<double>(n);
    if (!will_record({&pred, &gt})) return Tensor::scalar(value);
    return make_result(Tensor::scalar(value), {&pred, &gt},
                       [p = pred.detach(), g = gt.detach(), n, per](autograd::Node& self) {
                           const double scale = self.grad[0] / (static_cast<double>(n) * per);
                           std::vector<double> d(p.numel());
                           for (std::size_t i = 0; i < d.size(); ++i) d[i] = sign(p[i] - g[i]) * scale;
                           self.accumulate_into(0, d);
                           if (self.parent_attached(1)) {
                               for (auto& v : d) v = -v;
                               self.accumulate_into(1, d);
                           }
                       });
}

Tensor sstv_loss(const Tensor& pred, SstvNormalization norm) {
    if (pred.rank() != 4) {
        throw ShapeError("sstv_loss: expected [N,C,H,W], got " + shape_to_string(pred.shape()));
    }
    const std::size_t n = pred.dim(0), c = pred.dim(1), h = pred.dim(2), w = pred.dim(3);
    const std::size_t per = c * h * w;
    const auto axes = diff_axes(c, h, w);
    std::array<double, 3> weight{};
    for (std::size_t a = 0; a < 3; ++a) {
        if (axes[a].sites == 0) continue;
        weight[a] = norm == SstvNormalization::per_site ? 1.0 / static_cast<double>(axes[a].sites) : 1.0;
    }

    double total = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
        const double* x = pred.data().data() + b * per;
        double sample = 0.0;
        for (std::size_t a = 0; a < 3; ++a) {
            if (axes[a].sites == 0) continue;
            double s = 0.0;
            for_each_site(axes[a], c, h, w, [&](std::size_t i, std::size_t j) { s += std::abs(x[j] - x[i]); });
            sample += s * weight[a];
        }
        total += sample;
    }
    const double value = n == 0 ? 0.0 : total / static_cast<double>(n);
    if (!will_record({&pred})) return Tensor::scalar(value);
    return make_result(Tensor::scalar(value), {&pred},
                       [p = pred.detach(), axes, weight, n, c, h, w, per](autograd::Node& self) {
                           std::vector<double> g(p.numel(), 0.0);
                           const double outer = self.grad[0] / static_cast<double>(n);
                           for (std::size_t b = 0; b < n; ++b) {
                               const double* x = p.data().data() + b * per;
                               double* gx = g.data() + b * per;
                               for (std::size_t a = 0; a < 3; ++a) {
                                   if (axes[a].sites == 0) continue;
                                   const double wt = outer * weight[a];
                                   for_each_site(axes[a], c, h, w, [&](std::size_t i, std::size_t j) {
                                       const double s = sign(x[j] - x[i]) * wt;
                                       gx[j] += s;
                                       gx[i] -= s;
                                   });
                               }
                           }
                           self.accumulate_into(0, g);
                       });
}

Tensor total_loss(const Tensor& pred, const Tensor& gt, const LossConfig& cfg) {
    if (cfg.alpha < 0.0) throw std::invalid_argument("total_loss: alpha must be non-negative");
    Tensor l1 = l1_loss(pred, gt);
    if (cfg.alpha == 0.0) return l1;
    return add(l1, scale(sstv_loss(pred, cfg.sstv_norm), cfg.alpha));
}

}  // namespace sspsr
