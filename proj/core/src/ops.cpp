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

#include "sspsr/ops.hpp"

#include <Eigen/Core>
#include <cmath>
#include <string>

namespace sspsr {
namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMat>;
using MutMap = Eigen::Map<RowMat>;

void require_rank(const Tensor& x, std::size_t rank, const char* op) {
    if (x.rank() != rank) {
        throw ShapeError(std::string(op) + ": expected rank " + std::to_string(rank) +
                         " input, got " + shape_to_string(x.shape()));
    }
}

struct ConvGeometry {
    std::size_t n, cin, h, w, cout, k, pad, oh, ow;
};

ConvGeometry conv_geometry(const Tensor& x, const ConvParams& p, std::size_t padding) {
    require_rank(x, 4, "conv2d");
    if (p.weight.rank() != 4 || p.bias.rank() != 1) {
        throw ShapeError("conv2d: weight must be rank 4 and bias rank 1, got weight " +
                         shape_to_string(p.weight.shape()) + " bias " +
                         shape_to_string(p.bias.shape()));
    }
    const auto& ws = p.weight.shape();
    if (ws[2] != ws[3] || (ws[2] != 1 && ws[2] != 3)) {
        throw ShapeError("conv2d: kernel must be 1x1 or 3x3, got weight " + shape_to_string(ws));
    }
    if (ws[1] != x.dim(1)) {
        throw ShapeError("conv2d: input " + shape_to_string(x.shape()) +
                         " does not match weight " + shape_to_string(ws));
    }
    if (p.bias.dim(0) != ws[0]) {
        throw ShapeError("conv2d: bias " + shape_to_string(p.bias.shape()) +
                         " does not match weight " + shape_to_string(ws));
    }
    ConvGeometry g{x.dim(0), x.dim(1), x.dim(2), x.dim(3), ws[0], ws[2], padding, 0, 0};
    if (g.h + 2 * padding < g.k || g.w + 2 * padding < g.k) {
        throw ShapeError("conv2d: input " + shape_to_string(x.shape()) + " too small for weight " +
                         shape_to_string(ws));
    }
    g.oh = g.h + 2 * padding - g.k + 1;
    g.ow = g.w + 2 * padding - g.k + 1;
    return g;
}

// Unfolds one sample [cin,h,w] into rows (ci,ky,kx) by columns (oy,ox).
void im2col(const double* x, const ConvGeometry& g, double* cols) {
    const std::size_t plane = g.oh * g.ow;
    std::size_t row = 0;
    for (std::size_t ci = 0; ci < g.cin; ++ci) {
        const double* xc = x + ci * g.h * g.w;
        for (std::size_t ky = 0; ky < g.k; ++ky) {
            for (std::size_t kx = 0; kx < g.k; ++kx, ++row) {
                double* dst = cols + row * plane;
                for (std::size_t oy = 0; oy < g.oh; ++oy) {
                    const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(oy + ky) -
                                              static_cast<std::ptrdiff_t>(g.pad);
                    for (std::size_t ox = 0; ox < g.ow; ++ox) {
                        const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(ox + kx) -
                                                  static_cast<std::ptrdiff_t>(g.pad);
                        const bool inside = iy >= 0 && ix >= 0 &&
                                            iy < static_cast<std::ptrdiff_t>(g.h) &&
                                            ix < static_cast<std::ptrdiff_t>(g.w);
                        dst[oy * g.ow + ox] = inside ? xc[iy * g.w + ix] : 0.0;
                    }
                }
            }
        }
    }
}

void col2im_add(const double* cols, const ConvGeometry& g, double* dx) {
    const std::size_t plane = g.oh * g.ow;
    std::size_t row = 0;
    for (std::size_t ci = 0; ci < g.cin; ++ci) {
        double* dxc = dx + ci * g.h * g.w;
        for (std::size_t ky = 0; ky < g.k; ++ky) {
            for (std::size_t kx = 0; kx < g.k; ++kx, ++row) {
                const double* src = cols + row * plane;
                for (std::size_t oy = 0; oy < g.oh; ++oy) {
                    const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(oy + ky) -
                                              static_cast<std::ptrdiff_t>(g.pad);
                    if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.h)) continue;
                    for (std::size_t ox = 0; ox < g.ow; ++ox) {
                        const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(ox + kx) -
                                                  static_cast<std::ptrdiff_t>(g.pad);
                        if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(g.w)) continue;
                        dxc[iy * g.w + ix] += src[oy * g.ow + ox];
                    }
                }
            }
        }
    }
}

bool is_pointwise(const ConvGeometry& g) { return g.k == 1 && g.pad == 0; }

void conv_forward_im2col(const ConvGeometry& g, const double* x, const double* w,
                         const double* b, double* out) {
    const std::size_t kk = g.cin * g.k * g.k;
    const std::size_t plane = g.oh * g.ow;
    std::vector<double> cols(is_pointwise(g) ? 0 : kk * plane);
    ConstMap wm(w, g.cout, kk);
    for (std::size_t n = 0; n < g.n; ++n) {
        const double* xn = x + n * g.cin * g.h * g.w;
        const double* colp = xn;
        if (!is_pointwise(g)) {
            im2col(xn, g, cols.data());
            colp = cols.data();
        }
        MutMap om(out + n * g.cout * plane, g.cout, plane);
        om.noalias() = wm * ConstMap(colp, kk, plane);
        for (std::size_t co = 0; co < g.cout; ++co) om.row(co).array() += b[co];
    }
}

void conv_forward_direct(const ConvGeometry& g, const double* x, const double* w,
                         const double* b, double* out) {
    for (std::size_t n = 0; n < g.n; ++n) {
        for (std::size_t co = 0; co < g.cout; ++co) {
            for (std::size_t oy = 0; oy < g.oh; ++oy) {
                for (std::size_t ox = 0; ox < g.ow; ++ox) {
                    double acc = b[co];
                    for (std::size_t ci = 0; ci < g.cin; ++ci) {
                        for (std::size_t ky = 0; ky < g.k; ++ky) {
                            const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(oy + ky) -
                                                      static_cast<std::ptrdiff_t>(g.pad);
                            if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.h)) continue;
                            for (std::size_t kx = 0; kx < g.k; ++kx) {
                                const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(ox + kx) -
                                                          static_cast<std::ptrdiff_t>(g.pad);
                                if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(g.w)) continue;
                                acc += w[((co * g.cin + ci) * g.k + ky) * g.k + kx] *
                                       x[((n * g.cin + ci) * g.h + iy) * g.w + ix];
                            }
                        }
                    }
                    out[((n * g.cout + co) * g.oh + oy) * g.ow + ox] = acc;
                }
            }
        }
    }
}

void conv_backward_direct(const ConvGeometry& g, const double* x, const double* w,
                          const double* gout, double* dx, double* dw, double* db) {
    for (std::size_t n = 0; n < g.n; ++n) {
        for (std::size_t co = 0; co < g.cout; ++co) {
            for (std::size_t oy = 0; oy < g.oh; ++oy) {
                for (std::size_t ox = 0; ox < g.ow; ++ox) {
                    const double go = gout[((n * g.cout + co) * g.oh + oy) * g.ow + ox];
                    if (db) db[co] += go;
                    for (std::size_t ci = 0; ci < g.cin; ++ci) {
                        for (std::size_t ky = 0; ky < g.k; ++ky) {
                            const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(oy + ky) -
                                                      static_cast<std::ptrdiff_t>(g.pad);
                            if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.h)) continue;
                            for (std::size_t kx = 0; kx < g.k; ++kx) {
                                const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(ox + kx) -
                                                          static_cast<std::ptrdiff_t>(g.pad);
                                if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(g.w)) continue;
                                const std::size_t wi = ((co * g.cin + ci) * g.k + ky) * g.k + kx;
                                const std::size_t xi = ((n * g.cin + ci) * g.h + iy) * g.w + ix;
                                if (dx) dx[xi] += w[wi] * go;
                                if (dw) dw[wi] += x[xi] * go;
                            }
                        }
                    }
                }
            }
        }
    }
}

void conv_backward_im2col(const ConvGeometry& g, const double* x, const double* w,
                          const double* gout, double* dx, double* dw, double* db) {
    const std::size_t kk = g.cin * g.k * g.k;
    const std::size_t plane = g.oh * g.ow;
    std::vector<double> cols(is_pointwise(g) ? 0 : kk * plane);
    std::vector<double> dcols(dx ? kk * plane : 0);
    ConstMap wm(w, g.cout, kk);
    for (std::size_t n = 0; n < g.n; ++n) {
        ConstMap gm(gout + n * g.cout * plane, g.cout, plane);
        if (db) {
            for (std::size_t co = 0; co < g.cout; ++co) db[co] += gm.row(co).sum();
        }
        if (dw) {
            const double* xn = x + n * g.cin * g.h * g.w;
            const double* colp = xn;
            if (!is_pointwise(g)) {
                im2col(xn, g, cols.data());
                colp = cols.data();
            }
            MutMap(dw, g.cout, kk).noalias() += gm * ConstMap(colp, kk, plane).transpose();
        }
        if (dx) {
            double* dxn = dx + n * g.cin * g.h * g.w;
            if (is_pointwise(g)) {
                MutMap(dxn, kk, plane).noalias() += wm.transpose() * gm;
            } else {
                MutMap(dcols.data(), kk, plane).noalias() = wm.transpose() * gm;
                col2im_add(dcols.data(), g, dxn);
            }
        }
    }
}

// Maps (n, c, oy, ox) in the shuffled output to a flat index of the input.
template <typename Fn>
void for_each_shuffle_pair(const Shape& in_shape, std::size_t r, Fn&& fn) {
    const std::size_t n = in_shape[0], cin = in_shape[1], h = in_shape[2], w = in_shape[3];
    const std::size_t c = cin / (r * r);
    const std::size_t oh = h * r, ow = w * r;
    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t ch = 0; ch < c; ++ch) {
            for (std::size_t y = 0; y < oh; ++y) {
                for (std::size_t x = 0; x < ow; ++x) {
                    const std::size_t i = y % r, j = x % r;
                    const std::size_t src = ((b * cin + ch * r * r + i * r + j) * h + y / r) * w + x / r;
                    const std::size_t dst = ((b * c + ch) * oh + y) * ow + x;
                    fn(dst, src);
                }
            }
        }
    }
}

}  // namespace

Tensor conv2d(const Tensor& x, const ConvParams& p, std::size_t padding, ConvAlgo algo) {
    const ConvGeometry g = conv_geometry(x, p, padding);
    Tensor out({g.n, g.cout, g.oh, g.ow});
    if (algo == ConvAlgo::im2col) {
        conv_forward_im2col(g, x.data().data(), p.weight.data().data(), p.bias.data().data(),
                            out.data().data());
    } else {
        conv_forward_direct(g, x.data().data(), p.weight.data().data(), p.bias.data().data(),
                            out.data().data());
    }
    if (!will_record({&x, &p.weight, &p.bias})) return out;
    return make_result(std::move(out), {&x, &p.weight, &p.bias},
                       [g, algo, xv = x.detach(), wv = p.weight.detach()](autograd::Node& self) {
                           const bool need_x = self.parent_attached(0);
                           const bool need_w = self.parent_attached(1);
                           const bool need_b = self.parent_attached(2);
                           std::vector<double> dx(need_x ? xv.numel() : 0);
                           std::vector<double> dw(need_w ? wv.numel() : 0);
                           std::vector<double> db(need_b ? g.cout : 0);
                           auto fn = algo == ConvAlgo::im2col ? conv_backward_im2col
                                                              : conv_backward_direct;
                           fn(g, xv.data().data(), wv.data().data(), self.grad.data(),
                              need_x ? dx.data() : nullptr, need_w ? dw.data() : nullptr,
                              need_b ? db.data() : nullptr);
                           if (need_x) self.accumulate_into(0, dx);
                           if (need_w) self.accumulate_into(1, dw);
                           if (need_b) self.accumulate_into(2, db);
                       });
}

Tensor activation(const Tensor& x, Activation kind) {
    Tensor out(x.shape());
    auto in = x.data();
    auto o = out.data();
    if (kind == Activation::relu) {
        for (std::size_t i = 0; i < o.size(); ++i) o[i] = in[i] > 0.0 ? in[i] : 0.0;
    } else {
        for (std::size_t i = 0; i < o.size(); ++i) o[i] = 1.0 / (1.0 + std::exp(-in[i]));
    }
    if (!will_record({&x})) return out;
    return make_result(out, {&x}, [kind, y = out.detach()](autograd::Node& self) {
        std::vector<double> g(self.grad);
        auto yv = y.data();
        if (kind == Activation::relu) {
            // Subgradient at exactly zero is zero.
            for (std::size_t i = 0; i < g.size(); ++i) g[i] = yv[i] > 0.0 ? g[i] : 0.0;
        } else {
            for (std::size_t i = 0; i < g.size(); ++i) g[i] *= yv[i] * (1.0 - yv[i]);
        }
        self.accumulate_into(0, g);
    });
}

Tensor global_avg_pool(const Tensor& x) {
    require_rank(x, 4, "global_avg_pool");
    const std::size_t n = x.dim(0), c = x.dim(1), plane = x.dim(2) * x.dim(3);
    if (plane == 0) throw ShapeError("global_avg_pool: empty spatial extent");
    Tensor out({n, c, 1, 1});
    for (std::size_t i = 0; i < n * c; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < plane; ++k) s += x[i * plane + k];
        out[i] = s / static_cast<double>(plane);
    }
    return make_result(std::move(out), {&x}, [n, c, plane](autograd::Node& self) {
        std::vector<double> g(n * c * plane);
        for (std::size_t i = 0; i < n * c; ++i) {
            const double gi = self.grad[i] / static_cast<double>(plane);
            for (std::size_t k = 0; k < plane; ++k) g[i * plane + k] = gi;
        }
        self.accumulate_into(0, g);
    });
}

Tensor pixel_shuffle(const Tensor& x, std::size_t r) {
    require_rank(x, 4, "pixel_shuffle");
    if (r == 0 || x.dim(1) % (r * r) != 0) {
        throw ShapeError("pixel_shuffle: channel count of " + shape_to_string(x.shape()) +
                         " is not divisible by r^2 for r=" + std::to_string(r));
    }
    const Shape in_shape = x.shape();
    Tensor out({in_shape[0], in_shape[1] / (r * r), in_shape[2] * r, in_shape[3] * r});
    for_each_shuffle_pair(in_shape, r, [&](std::size_t dst, std::size_t src) { out[dst] = x[src]; });
    return make_result(std::move(out), {&x}, [in_shape, r](autograd::Node& self) {
        std::vector<double> g(shape_numel(in_shape));
        for_each_shuffle_pair(in_shape, r,
                              [&](std::size_t dst, std::size_t src) { g[src] = self.grad[dst]; });
        self.accumulate_into(0, g);
    });
}

Tensor pixel_unshuffle(const Tensor& x, std::size_t r) {
    require_rank(x, 4, "pixel_unshuffle");
    if (r == 0 || x.dim(2) % r != 0 || x.dim(3) % r != 0) {
        throw ShapeError("pixel_unshuffle: spatial extent of " + shape_to_string(x.shape()) +
                         " is not divisible by r=" + std::to_string(r));
    }
    const Shape in_shape{x.dim(0), x.dim(1) * r * r, x.dim(2) / r, x.dim(3) / r};
    Tensor out(in_shape);
    for_each_shuffle_pair(in_shape, r, [&](std::size_t dst, std::size_t src) { out[src] = x[dst]; });
    return make_result(std::move(out), {&x}, [in_shape, r, out_shape = x.shape()](autograd::Node& self) {
        std::vector<double> g(shape_numel(out_shape));
        for_each_shuffle_pair(in_shape, r,
                              [&](std::size_t dst, std::size_t src) { g[dst] = self.grad[src]; });
        self.accumulate_into(0, g);
    });
}

Tensor combine(const Tensor& x, const Tensor& y, Combine kind) {
    const bool same = x.shape() == y.shape();
    const bool channel_broadcast = !same && x.rank() == 4 && y.rank() == 4 &&
                                   y.dim(0) == x.dim(0) && y.dim(1) == x.dim(1) &&
                                   y.dim(2) == 1 && y.dim(3) == 1;
    if (!same && !channel_broadcast) {
        throw ShapeError("combine: incompatible shapes " + shape_to_string(x.shape()) + " and " +
                         shape_to_string(y.shape()));
    }
    const std::size_t plane = same ? 1 : x.dim(2) * x.dim(3);
    Tensor out(x.shape());
    for (std::size_t i = 0; i < out.numel(); ++i) {
        const double yv = y[i / plane];
        out[i] = kind == Combine::add ? x[i] + yv : x[i] * yv;
    }
    if (!will_record({&x, &y})) return out;
    auto bw = [kind, plane, xv = kind == Combine::mul ? x.detach() : Tensor(),
               yv = kind == Combine::mul ? y.detach() : Tensor(),
               y_size = y.numel()](autograd::Node& self) {
        const auto& g = self.grad;
        if (self.parent_attached(0)) {
            if (kind == Combine::add) {
                self.accumulate_into(0, g);
            } else {
                std::vector<double> gx(g.size());
                for (std::size_t i = 0; i < g.size(); ++i) gx[i] = g[i] * yv[i / plane];
                self.accumulate_into(0, gx);
            }
        }
        if (self.parent_attached(1)) {
            std::vector<double> gy(y_size, 0.0);
            for (std::size_t i = 0; i < g.size(); ++i) {
                gy[i / plane] += kind == Combine::add ? g[i] : g[i] * xv[i];
            }
            self.accumulate_into(1, gy);
        }
    };
    return make_result(std::move(out), {&x, &y}, std::move(bw));
}

Tensor concat_channels(const std::vector<Tensor>& xs) {
    if (xs.empty()) throw ShapeError("concat_channels: empty input list");
    std::size_t total = 0;
    for (const auto& t : xs) {
        require_rank(t, 4, "concat_channels");
        if (t.dim(0) != xs[0].dim(0) || t.dim(2) != xs[0].dim(2) || t.dim(3) != xs[0].dim(3)) {
            throw ShapeError("concat_channels: " + shape_to_string(t.shape()) +
                             " is incompatible with " + shape_to_string(xs[0].shape()));
        }
        total += t.dim(1);
    }
    const std::size_t n = xs[0].dim(0), plane = xs[0].dim(2) * xs[0].dim(3);
    Tensor out({n, total, xs[0].dim(2), xs[0].dim(3)});
    std::vector<std::size_t> channels;
    std::size_t base = 0;
    for (const auto& t : xs) {
        const std::size_t c = t.dim(1);
        channels.push_back(c);
        for (std::size_t b = 0; b < n; ++b) {
            std::copy_n(t.data().begin() + b * c * plane, c * plane,
                        out.data().begin() + (b * total + base) * plane);
        }
        base += c;
    }
    std::vector<const Tensor*> inputs;
    for (const auto& t : xs) inputs.push_back(&t);
    return make_result(std::move(out), inputs, [channels, n, total, plane](autograd::Node& self) {
        std::size_t base = 0;
        for (std::size_t k = 0; k < channels.size(); ++k) {
            const std::size_t c = channels[k];
            if (self.parent_attached(k)) {
                std::vector<double> g(n * c * plane);
                for (std::size_t b = 0; b < n; ++b) {
                    std::copy_n(self.grad.begin() + (b * total + base) * plane, c * plane,
                                g.begin() + b * c * plane);
                }
                self.accumulate_into(k, g);
            }
            base += c;
        }
    });
}

Tensor slice_channels(const Tensor& x, std::size_t begin, std::size_t end) {
    require_rank(x, 4, "slice_channels");
    if (begin >= end || end > x.dim(1)) {
        throw ShapeError("slice_channels: range [" + std::to_string(begin) + "," +
                         std::to_string(end) + ") invalid for " + shape_to_string(x.shape()));
    }
    const std::size_t n = x.dim(0), c = x.dim(1), plane = x.dim(2) * x.dim(3), k = end - begin;
    Tensor out({n, k, x.dim(2), x.dim(3)});
    for (std::size_t b = 0; b < n; ++b) {
        std::copy_n(x.data().begin() + (b * c + begin) * plane, k * plane,
                    out.data().begin() + b * k * plane);
    }
    return make_result(std::move(out), {&x}, [n, c, plane, k, begin](autograd::Node& self) {
        std::vector<double> g(n * c * plane, 0.0);
        for (std::size_t b = 0; b < n; ++b) {
            std::copy_n(self.grad.begin() + b * k * plane, k * plane,
                        g.begin() + (b * c + begin) * plane);
        }
        self.accumulate_into(0, g);
    });
}

Tensor fully_connected(const Tensor& x, const Tensor& weight, const Tensor& bias) {
    require_rank(x, 2, "fully_connected");
    if (weight.rank() != 2 || bias.rank() != 1 || weight.dim(1) != x.dim(1) ||
        bias.dim(0) != weight.dim(0)) {
        throw ShapeError("fully_connected: input " + shape_to_string(x.shape()) + " weight " +
                         shape_to_string(weight.shape()) + " bias " +
                         shape_to_string(bias.shape()) + " do not agree");
    }
    const std::size_t n = x.dim(0), c = x.dim(1), k = weight.dim(0);
    Tensor out({n, k});
    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t j = 0; j < k; ++j) {
            double acc = bias[j];
            for (std::size_t i = 0; i < c; ++i) acc += weight[j * c + i] * x[b * c + i];
            out[b * k + j] = acc;
        }
    }
    if (!will_record({&x, &weight, &bias})) return out;
    return make_result(std::move(out), {&x, &weight, &bias},
                       [n, c, k, xv = x.detach(), wv = weight.detach()](autograd::Node& self) {
                           const auto& g = self.grad;
                           if (self.parent_attached(0)) {
                               std::vector<double> gx(n * c, 0.0);
                               for (std::size_t b = 0; b < n; ++b)
                                   for (std::size_t j = 0; j < k; ++j)
                                       for (std::size_t i = 0; i < c; ++i)
                                           gx[b * c + i] += g[b * k + j] * wv[j * c + i];
                               self.accumulate_into(0, gx);
                           }
                           if (self.parent_attached(1)) {
                               std::vector<double> gw(k * c, 0.0);
                               for (std::size_t b = 0; b < n; ++b)
                                   for (std::size_t j = 0; j < k; ++j)
                                       for (std::size_t i = 0; i < c; ++i)
                                           gw[j * c + i] += g[b * k + j] * xv[b * c + i];
                               self.accumulate_into(1, gw);
                           }
                           if (self.parent_attached(2)) {
                               std::vector<double> gb(k, 0.0);
                               for (std::size_t b = 0; b < n; ++b)
                                   for (std::size_t j = 0; j < k; ++j) gb[j] += g[b * k + j];
                               self.accumulate_into(2, gb);
                           }
                       });
}

Tensor reshape(const Tensor& x, Shape shape) {
    Tensor out = x.reshaped(std::move(shape));
    return make_result(std::move(out), {&x},
                       [](autograd::Node& self) { self.accumulate_into(0, self.grad); });
}

Tensor scale(const Tensor& x, double factor) {
    Tensor out(x.shape());
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] = x[i] * factor;
    return make_result(std::move(out), {&x}, [factor](autograd::Node& self) {
        std::vector<double> g(self.grad);
        for (auto& v : g) v *= factor;
        self.accumulate_into(0, g);
    });
}

Tensor sum(const Tensor& x) {
    double s = 0.0;
    for (double v : x.data()) s += v;
    return make_result(Tensor::scalar(s), {&x}, [n = x.numel()](autograd::Node& self) {
        std::vector<double> g(n, self.grad[0]);
        self.accumulate_into(0, g);
    });
}

Tensor mean(const Tensor& x) {
    if (x.numel() == 0) throw ShapeError("mean: empty tensor");
    return scale(sum(x), 1.0 / static_cast<double>(x.numel()));
}

}  // namespace sspsr
