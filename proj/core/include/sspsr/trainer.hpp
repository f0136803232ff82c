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
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sspsr/dataset.hpp"
#include "sspsr/hsi_cube.hpp"
#include "sspsr/losses.hpp"
#include "sspsr/metrics.hpp"
#include "sspsr/network.hpp"

namespace sspsr {

struct TrainConfig {
    double lr0 = 1e-4;
    double lr_decay_factor = 10.0;
    std::size_t lr_decay_epoch = 30;
    std::size_t epochs = 40;
    std::size_t batch_size = 32;
    // 0 means one pass over the training set per epoch.
    std::size_t steps_per_epoch = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    LossConfig loss;
    std::uint64_t seed = 0;
    double val_fraction = 0.1;

    /// Acceptance configuration: batch 8, 40 epochs of 5 steps, lr0 3e-3.
    static TrainConfig desk();

    void validate() const;
    std::size_t total_steps(std::size_t train_samples) const;
};

/// Step-decayed learning rate: lr0 before the decay epoch, lr0 / factor after.
double lr_schedule(std::size_t epoch, const TrainConfig& cfg);

struct TrainState {
    std::size_t step = 0;
    double lr = 0.0;
    std::vector<Tensor> m;  // first moments, one per parameter
    std::vector<Tensor> v;  // second moments
    double loss_sum = 0.0;
    std::size_t loss_count = 0;

    static TrainState for_params(const std::vector<NamedTensor>& params);
};

/// One bias-corrected Adam update using each parameter's accumulated gradient.
///
/// Throws std::invalid_argument naming the first parameter without a gradient.
void adam_step(const std::vector<NamedTensor>& params, TrainState& state, double lr,
               const TrainConfig& cfg);

struct EpochLog {
    std::size_t epoch = 0;
    std::size_t steps = 0;  // cumulative
    double lr = 0.0;
    double train_loss = 0.0;
    std::optional<double> val_psnr;
};

struct TrainResult {
    SspsrParams best;
    std::size_t best_epoch = 0;
    std::optional<double> best_val_psnr;
    std::vector<EpochLog> log;
    // total_loss on the first training batch before the first and after the last update.
    double probe_loss_initial = 0.0;
    double probe_loss_final = 0.0;
};

struct TrainOutputs {
    std::filesystem::path log_csv;     // empty: no log file
    std::filesystem::path checkpoint;  // empty: best weights are only returned
    std::ostream* progress = nullptr;
};

/// Crops height and width down to multiples of `factor`.
HsiCube crop_to_multiple(const HsiCube& cube, std::size_t factor);

/// Seeded split of `count` items into (train, validation) index lists.
std::array<std::vector<std::size_t>, 2> split_validation(std::size_t count, double fraction,
                                                         std::uint64_t seed);

/// Trains from `init` on high-resolution cubes; inputs are their bicubic downscales.
TrainResult train(const std::vector<HsiCube>& train_cubes, const std::vector<HsiCube>& val_cubes,
                  const SspsrParams& init, const TrainConfig& cfg, const TrainOutputs& out = {});

/// Network output for one low-resolution cube, without clipping.
HsiCube predict(const SspsrParams& params, const HsiCube& lr);

struct EvalRow {
    std::string cube_id;
    std::string method;  // "sspsr", "bicubic" or "identity"
    MetricReport report;
};

struct EvalOptions {
    // Scores each reference against itself instead of a reconstruction.
    bool identity = false;
};

struct EvalResult {
    std::size_t scale = 0;
    std::vector<EvalRow> rows;  // per cube: model row then bicubic row
    std::vector<EvalRow> means;

    void write_csv(std::ostream& os) const;
};

EvalResult evaluate(const SspsrParams& params, const std::vector<HsiCube>& test_cubes,
                    const std::vector<std::string>& ids, const EvalOptions& opt = {});

/// Upscales an HSIC file with a checkpoint, clipping to [0,1] before writing.
HsiCube super_resolve(const SspsrParams& params, const std::filesystem::path& input,
                      const std::filesystem::path& output);

}  // namespace sspsr
