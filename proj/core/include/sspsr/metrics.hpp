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
#include <string>
#include <vector>

#include "sspsr/hsi_cube.hpp"

namespace sspsr {

inline constexpr double kPsnrCapDb = 100.0;
inline constexpr double kPsnrZeroMse = 1e-10;
inline constexpr double kSamEpsilon = 1e-12;

struct SsimOptions {
    std::size_t window = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
};

struct MetricReport {
    double cc = 0.0;
    double sam_degrees = 0.0;
    double rmse = 0.0;
    double ergas = 0.0;
    double psnr_db = 0.0;
    double ssim = 0.0;
    std::vector<double> band_psnr;
    std::vector<double> band_ssim;
    // Bands whose correlation was undefined (constant) and counted as 0.
    std::vector<std::size_t> constant_cc_bands;
};

/// Root mean squared error over all voxels.
double rmse(const HsiCube& x, const HsiCube& y);

/// Per-band PSNR in dB, capped at 100 dB when the band MSE is below 1e-10.
std::vector<double> psnr_per_band(const HsiCube& x, const HsiCube& y, double data_range = 1.0);
double psnr(const HsiCube& x, const HsiCube& y, double data_range = 1.0);

/// Mean spectral angle over pixels, in degrees. A zero spectrum on either
/// side counts as 90 degrees.
double sam(const HsiCube& x, const HsiCube& y);

/// Mean over bands of the Pearson correlation across pixels. A constant
/// band on either side contributes 0 and is listed in `constant_bands`.
double cc(const HsiCube& ref, const HsiCube& est, std::vector<std::size_t>* constant_bands = nullptr);

/// 100/d * sqrt(mean_b (rmse_b / mean_b(ref))^2). Throws on a zero-mean
/// reference band.
double ergas(const HsiCube& ref, const HsiCube& est, double scale);

/// Per-band mean SSIM over all valid (unpadded) Gaussian windows.
std::vector<double> ssim_per_band(const HsiCube& x, const HsiCube& y, double data_range = 1.0,
                                  const SsimOptions& opt = {});
double ssim(const HsiCube& x, const HsiCube& y, double data_range = 1.0, const SsimOptions& opt = {});

/// Normalized 1-D Gaussian taps; the 2-D window is their outer product.
std::vector<double> gaussian_window(std::size_t size, double sigma);

MetricReport evaluate_all(const HsiCube& ref, const HsiCube& est, double scale);

/// "cube_id,d,cc,sam,rmse,ergas,psnr,ssim"
std::string metrics_csv_header();
/// Fixed column order, six decimals.
std::string metrics_csv_row(const std::string& cube_id, double scale, const MetricReport& r);

/// Field-wise arithmetic mean of the six scalar metrics.
MetricReport mean_report(const std::vector<MetricReport>& reports);

}  // namespace sspsr
