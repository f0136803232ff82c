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

#include "sspsr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sspsr {
namespace {

void require_same(const HsiCube& x, const HsiCube& y, const char* metric) {
    if (!x.same_shape(y)) {
        throw ShapeError(std::string(metric) + ": cube shapes " +
                         shape_to_string(x.tensor().shape()) + " and " +
                         shape_to_string(y.tensor().shape()) + " differ");
    }
}

double band_mse(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
    return s / static_cast<double>(x.size());
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Valid-mode separable filter of an h x w plane with `taps`.
std::vector<double> filter_valid(const std::vector<double>& plane, std::size_t h, std::size_t w,
                                 const std::vector<double>& taps) {
    const std::size_t k = taps.size(), oh = h - k + 1, ow = w - k + 1;
    std::vector<double> rows(h * ow);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (std::size_t t = 0; t < k; ++t) acc += taps[t] * plane[y * w + x + t];
            rows[y * ow + x] = acc;
        }
    std::vector<double> out(oh * ow);
    for (std::size_t y = 0; y < oh; ++y)
        for (std::size_t x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (std::size_t t = 0; t < k; ++t) acc += taps[t] * rows[(y + t) * ow + x];
            out[y * ow + x] = acc;
        }
    return out;
}

}  // namespace

double rmse(const HsiCube& x, const HsiCube& y) {
    require_same(x, y, "rmse");
    return std::sqrt(band_mse(x.tensor().data(), y.tensor().data()));
}

std::vector<double> psnr_per_band(const HsiCube& x, const HsiCube& y, double data_range) {
    require_same(x, y, "psnr");
    std::vector<double> out(x.bands());
    for (std::size_t b = 0; b < x.bands(); ++b) {
        const double mse = band_mse(x.band(b), y.band(b));
        out[b] = mse < kPsnrZeroMse ? kPsnrCapDb : 10.0 * std::log10(data_range * data_range / mse);
    }
    return out;
}

double psnr(const HsiCube& x, const HsiCube& y, double data_range) {
    return mean_of(psnr_per_band(x, y, data_range));
}

double sam(const HsiCube& x, const HsiCube& y) {
    require_same(x, y, "sam");
    const std::size_t c = x.bands(), n = x.pixels();
    const auto xs = x.tensor().data();
    const auto ys = y.tensor().data();
    double total = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        double dot = 0.0, nx = 0.0, ny = 0.0;
        for (std::size_t b = 0; b < c; ++b) {
            const double u = xs[b * n + p], v = ys[b * n + p];
            dot += u * v;
            nx += u * u;
            ny += v * v;
        }
        double angle;
        if (nx == 0.0 || ny == 0.0) {
            angle = std::acos(0.0);
        } else {
            // atan2 of |u x v| and u.v; exact zero for parallel spectra where
            // acos of a rounded cosine is not.
            const double cross = std::sqrt(std::max(0.0, nx * ny - dot * dot));
            angle = std::atan2(cross, dot);
        }
        total += angle;
    }
    return total / static_cast<double>(n) * 180.0 / std::numbers::pi;
}

double cc(const HsiCube& ref, const HsiCube& est, std::vector<std::size_t>* constant_bands) {
    require_same(ref, est, "cc");
    const std::size_t n = ref.pixels();
    double total = 0.0;
    for (std::size_t b = 0; b < ref.bands(); ++b) {
        auto x = ref.band(b);
        auto y = est.band(b);
        const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
        const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
        double sxy = 0.0, sxx = 0.0, syy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dx = x[i] - mx, dy = y[i] - my;
            sxy += dx * dy;
            sxx += dx * dx;
            syy += dy * dy;
        }
        if (sxx == 0.0 || syy == 0.0) {
            if (constant_bands) constant_bands->push_back(b);
            continue;
        }
        total += std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    }
    return total / static_cast<double>(ref.bands());
}

double ergas(const HsiCube& ref, const HsiCube& est, double scale) {
    require_same(ref, est, "ergas");
    if (!(scale >= 1.0)) throw std::invalid_argument("ergas: scale factor must be >= 1");
    double acc = 0.0;
    for (std::size_t b = 0; b < ref.bands(); ++b) {
        auto x = ref.band(b);
        const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
        if (mean == 0.0) {
            throw std::invalid_argument("ergas: reference band " + std::to_string(b) +
                                        " has zero mean");
        }
        const double r = std::sqrt(band_mse(x, est.band(b))) / mean;
        acc += r * r;
    }
    return 100.0 / scale * std::sqrt(acc / static_cast<double>(ref.bands()));
}

std::vector<double> gaussian_window(std::size_t size, double sigma) {
    std::vector<double> taps(size);
    const double center = (static_cast<double>(size) - 1.0) / 2.0;
    for (std::size_t i = 0; i < size; ++i) {
        const double d = static_cast<double>(i) - center;
        taps[i] = std::exp(-(d * d) / (2.0 * sigma * sigma));
    }
    const double s = std::accumulate(taps.begin(), taps.end(), 0.0);
    for (auto& t : taps) t /= s;
    return taps;
}

std::vector<double> ssim_per_band(const HsiCube& x, const HsiCube& y, double data_range,
                                  const SsimOptions& opt) {
    require_same(x, y, "ssim");
    const std::size_t h = x.height(), w = x.width();
    if (h < opt.window || w < opt.window) {
        throw ShapeError("ssim: spatial extent " + std::to_string(h) + "x" + std::to_string(w) +
                         " is smaller than the " + std::to_string(opt.window) + "x" +
                         std::to_string(opt.window) + " window");
    }
    const auto taps = gaussian_window(opt.window, opt.sigma);
    const double c1 = (opt.k1 * data_range) * (opt.k1 * data_range);
    const double c2 = (opt.k2 * data_range) * (opt.k2 * data_range);
    std::vector<double> out(x.bands());
    for (std::size_t b = 0; b < x.bands(); ++b) {
        auto xb = x.band(b);
        auto yb = y.band(b);
        std::vector<double> xv(xb.begin(), xb.end()), yv(yb.begin(), yb.end());
        std::vector<double> xx(h * w), yy(h * w), xy(h * w);
        for (std::size_t i = 0; i < h * w; ++i) {
            xx[i] = xv[i] * xv[i];
            yy[i] = yv[i] * yv[i];
            xy[i] = xv[i] * yv[i];
        }
        const auto mx = filter_valid(xv, h, w, taps);
        const auto my = filter_valid(yv, h, w, taps);
        const auto exx = filter_valid(xx, h, w, taps);
        const auto eyy = filter_valid(yy, h, w, taps);
        const auto exy = filter_valid(xy, h, w, taps);
        double total = 0.0;
        for (std::size_t i = 0; i < mx.size(); ++i) {
            const double vx = exx[i] - mx[i] * mx[i];
            const double vy = eyy[i] - my[i] * my[i];
            const double cxy = exy[i] - mx[i] * my[i];
            const double num = (2.0 * mx[i] * my[i] + c1) * (2.0 * cxy + c2);
            const double den = (mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2);
            total += num / den;
        }
        out[b] = total / static_cast<double>(mx.size());
    }
    return out;
}

double ssim(const HsiCube& x, const HsiCube& y, double data_range, const SsimOptions& opt) {
    return mean_of(ssim_per_band(x, y, data_range, opt));
}

MetricReport evaluate_all(const HsiCube& ref, const HsiCube& est, double scale) {
    MetricReport r;
    r.cc = cc(ref, est, &r.constant_cc_bands);
    r.sam_degrees = sam(ref, est);
    r.rmse = rmse(ref, est);
    r.ergas = ergas(ref, est, scale);
    r.band_psnr = psnr_per_band(ref, est);
    r.psnr_db = mean_of(r.band_psnr);
    r.band_ssim = ssim_per_band(ref, est);
    r.ssim = mean_of(r.band_ssim);
    return r;
}

std::string metrics_csv_header() { return "cube_id,d,cc,sam,rmse,ergas,psnr,ssim"; }

std::string metrics_csv_row(const std::string& cube_id, double scale, const MetricReport& r) {
    std::ostringstream os;
    os << cube_id << ',' << scale << std::fixed << std::setprecision(6) << ',' << r.cc << ','
       << r.sam_degrees << ',' << r.rmse << ',' << r.ergas << ',' << r.psnr_db << ',' << r.ssim;
    return os.str();
}

MetricReport mean_report(const std::vector<MetricReport>& reports) {
    MetricReport m;
    if (reports.empty()) return m;
    for (const auto& r : reports) {
        m.cc += r.cc;
        m.sam_degrees += r.sam_degrees;
        m.rmse += r.rmse;
        m.ergas += r.ergas;
        m.psnr_db += r.psnr_db;
        m.ssim += r.ssim;
    }
    const double n = static_cast<double>(reports.size());
    m.cc /= n;
    m.sam_degrees /= n;
    m.rmse /= n;
    m.ergas /= n;
    m.psnr_db /= n;
    m.ssim /= n;
    return m;
}

}  // namespace sspsr
