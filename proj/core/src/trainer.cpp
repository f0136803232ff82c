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

#include "sspsr/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "sspsr/checkpoint.hpp"
#include "sspsr/cube_io.hpp"
#include "sspsr/resize.hpp"

namespace sspsr {
namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

struct Sample {
    HsiCube hr;
    Tensor lr;  // [1, C, h, w]
};

std::vector<Sample> prepare(const std::vector<HsiCube>& cubes, const NetworkConfig& cfg,
                            const char* which) {
    std::vector<Sample> out;
    out.reserve(cubes.size());
    for (std::size_t i = 0; i < cubes.size(); ++i) {
        if (cubes[i].bands() != cfg.bands) {
            throw std::invalid_argument(std::string(which) + " cube " + std::to_string(i) + " has " +
                                        std::to_string(cubes[i].bands()) +
                                        " bands, network expects " + std::to_string(cfg.bands));
        }
        HsiCube hr = crop_to_multiple(cubes[i], cfg.scale);
        if (hr.height() == 0 || hr.width() == 0) {
            throw std::invalid_argument(std::string(which) + " cube " + std::to_string(i) +
                                        " is smaller than the scale factor");
        }
        Tensor lr = bicubic_resize(hr, static_cast<double>(cfg.scale), ResizeDirection::down)
                        .as_batch();
        out.push_back({std::move(hr), std::move(lr)});
    }
    return out;
}

struct Batch {
    Tensor lr;
    Tensor hr;
};

Batch make_batch(const std::vector<Sample>& samples, std::span<const std::size_t> idx) {
    std::vector<HsiCube> hr;
    std::vector<HsiCube> lr;
    for (auto i : idx) {
        hr.push_back(samples[i].hr);
        lr.push_back(HsiCube::from_batch(samples[i].lr));
    }
    return {HsiCube::stack(lr), HsiCube::stack(hr)};
}

double batch_loss(const Batch& b, const SspsrParams& params, const LossConfig& loss) {
    NoGradGuard guard;
    return total_loss(sspsr_forward(b.lr, params), b.hr, loss).item();
}

double mean_val_psnr(const std::vector<Sample>& val, const SspsrParams& params) {
    double sum = 0.0;
    for (const auto& s : val) {
        NoGradGuard guard;
        sum += psnr(HsiCube::from_batch(sspsr_forward(s.lr, params)), s.hr);
    }
    return sum / static_cast<double>(val.size());
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

}  // namespace

TrainConfig TrainConfig::desk() {
    TrainConfig c;
    c.batch_size = 8;
    c.epochs = 40;
    c.steps_per_epoch = 5;
    // 1e-4 cannot undo the large initial output scale within 200 steps.
    c.lr0 = 3e-3;
    return c;
}

void TrainConfig::validate() const {
    require(lr0 >= 0.0 && std::isfinite(lr0), "lr0 must be finite and non-negative");
    require(lr_decay_factor > 0.0, "lr_decay_factor must be positive");
    require(epochs > 0, "epochs must be positive");
    require(batch_size > 0, "batch_size must be positive");
    require(beta1 >= 0.0 && beta1 < 1.0, "beta1 must lie in [0,1)");
    require(beta2 >= 0.0 && beta2 < 1.0, "beta2 must lie in [0,1)");
    require(eps > 0.0, "eps must be positive");
    require(loss.alpha >= 0.0, "alpha must be non-negative");
    require(val_fraction >= 0.0 && val_fraction < 1.0, "val_fraction must lie in [0,1)");
}

std::size_t TrainConfig::total_steps(std::size_t train_samples) const {
    const std::size_t per_epoch =
        steps_per_epoch ? steps_per_epoch : (train_samples + batch_size - 1) / batch_size;
    return per_epoch * epochs;
}

double lr_schedule(std::size_t epoch, const TrainConfig& cfg) {
    return epoch < cfg.lr_decay_epoch ? cfg.lr0 : cfg.lr0 / cfg.lr_decay_factor;
}

TrainState TrainState::for_params(const std::vector<NamedTensor>& params) {
    TrainState s;
    for (const auto& p : params) {
        s.m.emplace_back(p.tensor->shape());
        s.v.emplace_back(p.tensor->shape());
    }
    return s;
}

void adam_step(const std::vector<NamedTensor>& params, TrainState& state, double lr,
               const TrainConfig& cfg) {
    if (state.m.size() != params.size() || state.v.size() != params.size()) {
        throw std::invalid_argument("adam_step: optimizer state holds " +
                                    std::to_string(state.m.size()) + " moments for " +
                                    std::to_string(params.size()) + " parameters");
    }
    // Validate everything first so a rejected step leaves no parameter half-updated.
    for (std::size_t i = 0; i < params.size(); ++i) {
        const Tensor& t = *params[i].tensor;
        if (!t.attached() || t.node()->grad.empty()) {
            throw std::invalid_argument("adam_step: no gradient for parameter " + params[i].name);
        }
        if (state.m[i].shape() != t.shape()) {
            throw std::invalid_argument("adam_step: moment shape mismatch for " + params[i].name);
        }
    }
    ++state.step;
    state.lr = lr;
    const double t = static_cast<double>(state.step);
    const double c1 = 1.0 - std::pow(cfg.beta1, t);
    const double c2 = 1.0 - std::pow(cfg.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        auto theta = params[i].tensor->data();
        const auto& g = params[i].tensor->node()->grad;
        auto m = state.m[i].data();
        auto v = state.v[i].data();
        for (std::size_t j = 0; j < theta.size(); ++j) {
            m[j] = cfg.beta1 * m[j] + (1.0 - cfg.beta1) * g[j];
            v[j] = cfg.beta2 * v[j] + (1.0 - cfg.beta2) * g[j] * g[j];
            theta[j] -= lr * (m[j] / c1) / (std::sqrt(v[j] / c2) + cfg.eps);
        }
    }
}

HsiCube crop_to_multiple(const HsiCube& cube, std::size_t factor) {
    const std::size_t h = cube.height() / factor * factor;
    const std::size_t w = cube.width() / factor * factor;
    if (h == cube.height() && w == cube.width()) return cube;
    return crop(cube, 0, 0, h, w);
}

std::array<std::vector<std::size_t>, 2> split_validation(std::size_t count, double fraction,
                                                         std::uint64_t seed) {
    std::vector<std::size_t> idx(count);
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::size_t n_val = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(count)));
    if (fraction > 0.0 && n_val == 0 && count > 1) n_val = 1;
    n_val = std::min(n_val, count > 0 ? count - 1 : 0);
    std::vector<std::size_t> val(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_val));
    std::vector<std::size_t> tr(idx.begin() + static_cast<std::ptrdiff_t>(n_val), idx.end());
    std::sort(val.begin(), val.end());
    std::sort(tr.begin(), tr.end());
    return {std::move(tr), std::move(val)};
}

TrainResult train(const std::vector<HsiCube>& train_cubes, const std::vector<HsiCube>& val_cubes,
                  const SspsrParams& init, const TrainConfig& cfg, const TrainOutputs& out) {
    cfg.validate();
    init.config.validate();
    if (train_cubes.empty()) throw std::invalid_argument("train: empty training set");
    const auto train_set = prepare(train_cubes, init.config, "training");
    const auto val_set = prepare(val_cubes, init.config, "validation");
    for (const auto& s : train_set) {
        if (!s.hr.same_shape(train_set.front().hr)) {
            throw std::invalid_argument("train: training cubes must share one shape; got " +
                                        shape_to_string(s.hr.tensor().shape()) + " and " +
                                        shape_to_string(train_set.front().hr.tensor().shape()));
        }
    }

    SspsrParams params = clone_params(init);
    const auto named = named_parameters(params);
    TrainState state = TrainState::for_params(named);

    std::ofstream log_file;
    if (!out.log_csv.empty()) {
        log_file.open(out.log_csv);
        if (!log_file) throw std::runtime_error("cannot write log " + out.log_csv.string());
        log_file << "epoch,steps,lr,train_loss,val_psnr\n";
    }

    const std::size_t bsz = std::min(cfg.batch_size, train_set.size());
    std::vector<std::size_t> probe_idx(bsz);
    std::iota(probe_idx.begin(), probe_idx.end(), 0);
    const Batch probe = make_batch(train_set, probe_idx);

    TrainResult result;
    result.probe_loss_initial = batch_loss(probe, params, cfg.loss);
    result.best = clone_params(params);

    std::mt19937_64 rng(cfg.seed);
    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);
    std::size_t cursor = order.size();  // forces a shuffle on the first draw

    const std::size_t per_epoch = cfg.total_steps(train_set.size()) / cfg.epochs;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double lr = lr_schedule(epoch, cfg);
        state.loss_sum = 0.0;
        state.loss_count = 0;
        if (cfg.steps_per_epoch == 0) cursor = order.size();
        for (std::size_t s = 0; s < per_epoch; ++s) {
            if (cursor >= order.size()) {
                std::shuffle(order.begin(), order.end(), rng);
                cursor = 0;
            }
            const std::size_t take = std::min(bsz, order.size() - cursor);
            const Batch batch = make_batch(
                train_set, std::span<const std::size_t>(order.data() + cursor, take));
            cursor += take;

            for (const auto& p : named) p.tensor->zero_grad();
            Tensor loss = total_loss(sspsr_forward(batch.lr, params), batch.hr, cfg.loss);
            const double value = loss.item();
            if (!std::isfinite(value)) {
                throw std::runtime_error("training diverged: non-finite loss at epoch " +
                                         std::to_string(epoch) + " step " +
                                         std::to_string(state.step));
            }
            backward(loss);
            adam_step(named, state, lr, cfg);
            state.loss_sum += value;
            ++state.loss_count;
        }

        EpochLog row{epoch, state.step, lr, state.loss_sum / static_cast<double>(state.loss_count),
                     std::nullopt};
        if (!val_set.empty()) row.val_psnr = mean_val_psnr(val_set, params);
        // Strict comparison keeps the earlier epoch on ties; without a
        // validation set the latest weights win.
        const bool better = val_set.empty() || !result.best_val_psnr ||
                            *row.val_psnr > *result.best_val_psnr;
        if (better) {
            result.best = clone_params(params);
            result.best_epoch = epoch;
            result.best_val_psnr = row.val_psnr;
        }
        if (log_file) {
            log_file << row.epoch << ',' << row.steps << ',' << fmt(row.lr) << ','
                     << fmt(row.train_loss) << ','
                     << (row.val_psnr ? fmt(*row.val_psnr) : std::string()) << '\n';
            log_file.flush();
        }
        if (out.progress) {
            *out.progress << "epoch " << epoch << " steps " << row.steps << " lr " << lr
                          << " loss " << row.train_loss;
            if (row.val_psnr) *out.progress << " val_psnr " << *row.val_psnr;
            *out.progress << '\n';
        }
        result.log.push_back(row);
    }

    result.probe_loss_final = batch_loss(probe, params, cfg.loss);
    if (!out.checkpoint.empty()) save_checkpoint(result.best, out.checkpoint);
    return result;
}

HsiCube predict(const SspsrParams& params, const HsiCube& lr) {
    if (lr.bands() != params.config.bands) {
        throw std::invalid_argument("cube has " + std::to_string(lr.bands()) +
                                    " bands, checkpoint expects " +
                                    std::to_string(params.config.bands));
    }
    NoGradGuard guard;
    return HsiCube::from_batch(sspsr_forward(lr.as_batch(), params));
}

void EvalResult::write_csv(std::ostream& os) const {
    os << metrics_csv_header() << '\n';
    const double d = static_cast<double>(scale);
    for (const auto& r : rows) os << metrics_csv_row(r.cube_id + "/" + r.method, d, r.report) << '\n';
    for (const auto& r : means) os << metrics_csv_row(r.cube_id + "/" + r.method, d, r.report) << '\n';
}

EvalResult evaluate(const SspsrParams& params, const std::vector<HsiCube>& test_cubes,
                    const std::vector<std::string>& ids, const EvalOptions& opt) {
    if (test_cubes.empty()) throw std::invalid_argument("evaluate: no test cubes");
    if (ids.size() != test_cubes.size()) {
        throw std::invalid_argument("evaluate: " + std::to_string(ids.size()) + " ids for " +
                                    std::to_string(test_cubes.size()) + " cubes");
    }
    const auto samples = prepare(test_cubes, params.config, "test");
    const std::size_t d = params.config.scale;
    const std::string model = opt.identity ? "identity" : "sspsr";

    EvalResult res;
    res.scale = d;
    std::vector<MetricReport> model_reports;
    std::vector<MetricReport> bicubic_reports;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        const HsiCube lr = HsiCube::from_batch(s.lr);
        const HsiCube est = opt.identity ? s.hr : predict(params, lr);
        const HsiCube bic = bicubic_resize(lr, static_cast<double>(d), ResizeDirection::up);
        model_reports.push_back(evaluate_all(s.hr, est, static_cast<double>(d)));
        bicubic_reports.push_back(evaluate_all(s.hr, bic, static_cast<double>(d)));
        res.rows.push_back({ids[i], model, model_reports.back()});
        res.rows.push_back({ids[i], "bicubic", bicubic_reports.back()});
    }
    res.means.push_back({"mean", model, mean_report(model_reports)});
    res.means.push_back({"mean", "bicubic", mean_report(bicubic_reports)});
    return res;
}

HsiCube super_resolve(const SspsrParams& params, const std::filesystem::path& input,
                      const std::filesystem::path& output) {
    const HsiCube lr = load_cube(input);
    if (lr.bands() != params.config.bands) {
        throw std::invalid_argument(input.string() + ": cube has " + std::to_string(lr.bands()) +
                                    " bands, checkpoint expects " +
                                    std::to_string(params.config.bands));
    }
    HsiCube sr = predict(params, lr);
    for (auto& v : sr.tensor().data()) v = std::clamp(v, 0.0, 1.0);
    save_cube(sr, output);
    return sr;
}

}  // namespace sspsr
