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

// Command-line front end: synth, train, eval and sr.

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sspsr/checkpoint.hpp"
#include "sspsr/cube_io.hpp"
#include "sspsr/dataset.hpp"
#include "sspsr/network.hpp"
#include "sspsr/trainer.hpp"

namespace fs = std::filesystem;
using namespace sspsr;

namespace {

template <typename T>
void apply(std::optional<T>& from, T& to) {
    if (from) to = *from;
}

std::vector<fs::path> cube_files(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw std::runtime_error(dir.string() + ": not a directory");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".hsic") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::runtime_error(dir.string() + ": no .hsic files");
    return files;
}

struct SynthArgs {
    fs::path out;
    std::size_t count = 48;
    SynthConfig cube;
};

void run_synth(const SynthArgs& a) {
    fs::create_directories(a.out);
    for (std::size_t i = 0; i < a.count; ++i) {
        SynthConfig c = a.cube;
        c.seed = a.cube.seed * 1000003ULL + i;
        char name[32];
        std::snprintf(name, sizeof name, "cube_%03zu.hsic", i);
        save_cube(synth_cube(c), a.out / name);
    }
    std::cout << "wrote " << a.count << " cubes to " << a.out.string() << '\n';
}

struct NetArgs {
    std::string preset = "paper";
    std::size_t scale = 4;
    std::optional<std::size_t> group_size, overlap, n_feats, blocks, branch_scale;
    std::optional<bool> use_grouping, use_progressive, share_params, use_attention;
    std::string attention_source = "spectral_body";

    void add(CLI::App* app) {
        app->add_option("--preset", preset, "Base configuration")
            ->check(CLI::IsMember({"paper", "desk"}))
            ->capture_default_str();
        app->add_option("--scale", scale, "Upscaling factor d")
            ->check(CLI::IsMember({2, 4, 8}))
            ->capture_default_str();
        app->add_option("--group_size", group_size, "Bands per group (p)");
        app->add_option("--overlap", overlap, "Overlapping bands between groups (o)");
        app->add_option("--n_feats", n_feats, "Feature channels");
        app->add_option("--blocks", blocks, "Blocks per prior network (R)");
        app->add_option("--branch_scale", branch_scale, "Branch upsampling factor, 0 for auto");
        app->add_option("--use_grouping", use_grouping);
        app->add_option("--use_progressive", use_progressive);
        app->add_option("--share_params", share_params);
        app->add_option("--use_attention", use_attention);
        app->add_option("--attention_source", attention_source)
            ->check(CLI::IsMember({"spectral_body", "spatial_features"}))
            ->capture_default_str();
    }

    NetworkConfig build(std::size_t bands) {
        NetworkConfig c =
            preset == "desk" ? NetworkConfig::desk(bands, scale) : NetworkConfig::paper(bands, scale);
        apply(group_size, c.group_size);
        apply(overlap, c.overlap);
        apply(n_feats, c.n_feats);
        apply(blocks, c.blocks);
        apply(branch_scale, c.branch_scale);
        apply(use_grouping, c.flags.use_grouping);
        apply(use_progressive, c.flags.use_progressive);
        apply(share_params, c.flags.share_params);
        apply(use_attention, c.flags.use_attention);
        c.attention_source = attention_source == "spatial_features"
                                 ? AttentionSource::spatial_features
                                 : AttentionSource::spectral_body;
        c.validate();
        return c;
    }
};

struct TrainArgs {
    fs::path data;
    fs::path checkpoint = "sspsr.sspw";
    fs::path log = "train_log.csv";
    NetArgs net;
    std::optional<double> lr0, lr_decay_factor, beta1, beta2, eps, alpha, val_fraction;
    std::optional<std::size_t> lr_decay_epoch, epochs, batch_size, steps_per_epoch;
    std::uint64_t seed = 0;
    std::size_t init_seed = 0;
    std::size_t patch_size = 0;
    std::size_t patch_overlap = 0;
    std::string sstv_norm = "per_site";

    TrainConfig build() {
        TrainConfig c = net.preset == "desk" ? TrainConfig::desk() : TrainConfig{};
        apply(lr0, c.lr0);
        apply(lr_decay_factor, c.lr_decay_factor);
        apply(lr_decay_epoch, c.lr_decay_epoch);
        apply(epochs, c.epochs);
        apply(batch_size, c.batch_size);
        apply(steps_per_epoch, c.steps_per_epoch);
        apply(beta1, c.beta1);
        apply(beta2, c.beta2);
        apply(eps, c.eps);
        apply(alpha, c.loss.alpha);
        apply(val_fraction, c.val_fraction);
        c.loss.sstv_norm =
            sstv_norm == "raw_sum" ? SstvNormalization::raw_sum : SstvNormalization::per_site;
        c.seed = seed;
        c.validate();
        return c;
    }
};

void run_train(TrainArgs& a) {
    std::vector<HsiCube> cubes;
    for (const auto& f : cube_files(a.data)) cubes.push_back(load_cube(f));
    const NetworkConfig net = a.net.build(cubes.front().bands());
    if (net.grouping().clamped) {
        std::cerr << "warning: group_size " << net.group_size << " exceeds " << net.bands
                  << " bands; using a single group\n";
    }
    const TrainConfig cfg = a.build();

    const auto [train_idx, val_idx] = split_validation(cubes.size(), cfg.val_fraction, cfg.seed);
    std::vector<HsiCube> train_set, val_set;
    for (auto i : val_idx) val_set.push_back(cubes[i]);
    for (auto i : train_idx) {
        if (a.patch_size == 0) {
            train_set.push_back(cubes[i]);
            continue;
        }
        for (auto& p : extract_patches(cubes[i], {a.patch_size, a.patch_overlap}))
            train_set.push_back(std::move(p));
    }
    std::cout << "training on " << train_set.size() << " samples, validating on "
              << val_set.size() << " cubes; " << count_params(init_params(net, 0))
              << " parameters\n";

    const SspsrParams init = init_params(net, a.init_seed);
    const TrainResult r = train(train_set, val_set, init, cfg, {a.log, a.checkpoint, &std::cout});
    std::cout << "best epoch " << r.best_epoch;
    if (r.best_val_psnr) std::cout << " val_psnr " << *r.best_val_psnr;
    std::cout << "; checkpoint " << a.checkpoint.string() << '\n';
}

struct EvalArgs {
    fs::path checkpoint;
    fs::path data;
    fs::path out;
    std::optional<std::size_t> scale;
    bool identity = false;
};

void run_eval(const EvalArgs& a) {
    const SspsrParams params = load_checkpoint(a.checkpoint);
    if (a.scale && *a.scale != params.config.scale) {
        throw std::invalid_argument("--scale " + std::to_string(*a.scale) + " does not match " +
                                    a.checkpoint.string() + " (trained for x" +
                                    std::to_string(params.config.scale) + ")");
    }
    std::vector<HsiCube> cubes;
    std::vector<std::string> ids;
    for (const auto& f : cube_files(a.data)) {
        cubes.push_back(load_cube(f));
        ids.push_back(f.stem().string());
    }
    const EvalResult r = evaluate(params, cubes, ids, {a.identity});
    if (a.out.empty()) {
        r.write_csv(std::cout);
        return;
    }
    std::ofstream os(a.out);
    if (!os) throw std::runtime_error("cannot write " + a.out.string());
    r.write_csv(os);
    for (const auto& m : r.means) {
        std::cout << m.method << ": psnr " << m.report.psnr_db << " ssim " << m.report.ssim
                  << " sam " << m.report.sam_degrees << '\n';
    }
}

struct SrArgs {
    fs::path checkpoint;
    fs::path input;
    fs::path output;
    fs::path png;
    std::vector<std::size_t> rgb;
};

void run_sr(const SrArgs& a) {
    const SspsrParams params = load_checkpoint(a.checkpoint);
    const HsiCube sr = super_resolve(params, a.input, a.output);
    std::cout << "wrote " << a.output.string() << " (" << sr.bands() << "x" << sr.height() << "x"
              << sr.width() << ")\n";
    if (a.png.empty()) return;
    std::array<std::size_t, 3> rgb{};
    if (a.rgb.empty()) {
        const std::size_t c = sr.bands();
        rgb = {c - 1, c / 2, 0};
    } else {
        std::copy(a.rgb.begin(), a.rgb.end(), rgb.begin());
    }
    write_png_composite(sr, rgb, a.png);
}

// CLI11 reads config files only for the top-level app, so each subcommand
// applies its own file here. File values fill options the command line
// left unset, then required options are checked.
void apply_config(CLI::App& cmd, const std::string& path,
                  std::initializer_list<const char*> required) {
    if (!cmd) return;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot read config file " + path);
        for (const auto& item : CLI::ConfigBase().from_config(in)) {
            if (item.name == "++" || item.name == "--") continue;  // section markers
            CLI::Option* opt =
                item.parents.empty() ? cmd.get_option_no_throw("--" + item.name) : nullptr;
            if (opt == nullptr || item.name == "config") {
                throw std::invalid_argument(path + ": unknown key '" + item.fullname() + "'");
            }
            if (opt->count() > 0) continue;
            opt->add_result(item.inputs);
            opt->run_callback();
        }
    }
    for (const char* name : required) {
        if (cmd.get_option(name)->count() == 0) {
            throw std::invalid_argument(std::string(name) + " is required");
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperspectral single-image super-resolution"};
    app.require_subcommand(1);

    // One config path per subcommand, in synth/train/eval/sr order.
    std::array<std::string, 4> config_path;

    SynthArgs synth;
    auto* s = app.add_subcommand("synth", "Generate a synthetic cube dataset");
    s->add_option("--config", config_path[0], "Read key=value options from a file");
    s->add_option("--out", synth.out, "Output directory");
    s->add_option("--count", synth.count)->capture_default_str();
    s->add_option("--bands", synth.cube.bands)->capture_default_str();
    s->add_option("--height", synth.cube.height)->capture_default_str();
    s->add_option("--width", synth.cube.width)->capture_default_str();
    s->add_option("--endmembers", synth.cube.n_endmembers)->capture_default_str();
    s->add_option("--smoothness", synth.cube.smoothness)->capture_default_str();
    s->add_option("--noise", synth.cube.noise)->capture_default_str();
    s->add_option("--seed", synth.cube.seed)->capture_default_str();

    TrainArgs tr;
    auto* t = app.add_subcommand("train", "Train a network on a directory of cubes");
    t->add_option("--config", config_path[1], "Read key=value options from a file");
    t->add_option("--data", tr.data, "Directory of .hsic cubes");
    t->add_option("--checkpoint", tr.checkpoint, "Best-validation weights")->capture_default_str();
    t->add_option("--log", tr.log, "Per-epoch CSV log")->capture_default_str();
    tr.net.add(t);
    t->add_option("--lr0", tr.lr0);
    t->add_option("--lr_decay_factor", tr.lr_decay_factor);
    t->add_option("--lr_decay_epoch", tr.lr_decay_epoch);
    t->add_option("--epochs", tr.epochs);
    t->add_option("--batch_size", tr.batch_size);
    t->add_option("--steps_per_epoch", tr.steps_per_epoch, "0 for one pass per epoch");
    t->add_option("--beta1", tr.beta1);
    t->add_option("--beta2", tr.beta2);
    t->add_option("--eps", tr.eps);
    t->add_option("--alpha", tr.alpha, "SSTV weight");
    t->add_option("--sstv_norm", tr.sstv_norm)
        ->check(CLI::IsMember({"per_site", "raw_sum"}))
        ->capture_default_str();
    t->add_option("--val_fraction", tr.val_fraction);
    t->add_option("--seed", tr.seed, "Shuffling and split seed")->capture_default_str();
    t->add_option("--init_seed", tr.init_seed, "Weight initialisation seed")->capture_default_str();
    t->add_option("--patch_size", tr.patch_size, "0 trains on whole cubes")->capture_default_str();
    t->add_option("--patch_overlap", tr.patch_overlap)->capture_default_str();

    EvalArgs ev;
    auto* e = app.add_subcommand("eval", "Score a checkpoint and the bicubic baseline");
    e->add_option("--config", config_path[2], "Read key=value options from a file");
    e->add_option("--checkpoint", ev.checkpoint)->check(CLI::ExistingFile);
    e->add_option("--data", ev.data, "Directory of high-resolution .hsic cubes");
    e->add_option("--scale", ev.scale, "Must match the checkpoint");
    e->add_option("--out", ev.out, "CSV path; stdout when omitted");
    e->add_flag("--identity", ev.identity, "Score each reference against itself");

    SrArgs sr;
    auto* r = app.add_subcommand("sr", "Super-resolve one cube");
    r->add_option("--config", config_path[3], "Read key=value options from a file");
    r->add_option("--checkpoint", sr.checkpoint)->check(CLI::ExistingFile);
    r->add_option("--input", sr.input)->check(CLI::ExistingFile);
    r->add_option("--output", sr.output);
    r->add_option("--png", sr.png, "Also write a 3-band composite");
    r->add_option("--rgb", sr.rgb, "Band indices for the composite")->expected(3);

    CLI11_PARSE(app, argc, argv);

    try {
        apply_config(*s, config_path[0], {"--out"});
        apply_config(*t, config_path[1], {"--data"});
        apply_config(*e, config_path[2], {"--checkpoint", "--data"});
        apply_config(*r, config_path[3], {"--checkpoint", "--input", "--output"});
        if (*s) run_synth(synth);
        if (*t) run_train(tr);
        if (*e) run_eval(ev);
        if (*r) run_sr(sr);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 0;
}
