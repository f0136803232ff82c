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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only
// when every criterion passes. Tolerances and time limits are fixed here.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "sspsr/checkpoint.hpp"
#include "sspsr/cube_io.hpp"
#include "sspsr/grouping.hpp"
#include "sspsr/losses.hpp"
#include "sspsr/metrics.hpp"
#include "sspsr/network.hpp"
#include "sspsr/trainer.hpp"
#include "support.hpp"

namespace {

using namespace sspsr;
using Clock = std::chrono::steady_clock;

constexpr double kGradTolerance = 1e-4;
constexpr std::uint64_t kGradSeeds = 20;
constexpr double kMetricTolerance = 1e-9;
constexpr double kLossTolerance = 1e-12;
constexpr double kDeskMarginDb = 0.5;

// Records the first failed check of a criterion.
class Check {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok && failure_.empty()) failure_ = what;
    }
    void within(double seconds, double limit) {
        std::ostringstream os;
        os << "runtime " << seconds << " s exceeds " << limit << " s";
        expect(seconds < limit, os.str());
    }
    void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
    bool ok() const { return failure_.empty(); }
    const std::string& failure() const { return failure_; }
    const std::string& notes() const { return notes_; }

private:
    std::string failure_;
    std::string notes_;
};

std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_params(const SspsrParams& a, const SspsrParams& b) {
    const auto x = parameter_list(a), y = parameter_list(b);
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i]->shape() != y[i]->shape()) return false;
        if (std::memcmp(x[i]->values().data(), y[i]->values().data(),
                        x[i]->numel() * sizeof(double)) != 0)
            return false;
    }
    return a.config == b.config;
}

HsiCube float_exact(HsiCube c) {
    for (auto& v : c.tensor().data()) v = static_cast<double>(static_cast<float>(v));
    return c;
}

std::filesystem::path scratch(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("sspsr_acceptance_" + name);
}

void grouping_table(Check& c) {
    struct Row {
        std::size_t p, o, s;
    };
    for (const Row r : {Row{128, 0, 1}, Row{1, 0, 128}, Row{8, 0, 16}, Row{8, 2, 21}, Row{8, 4, 31},
                        Row{8, 6, 61}}) {
        const std::size_t got = plan_groups(128, r.p, r.o).groups();
        c.expect(got == r.s, "(p=" + num(r.p) + ", o=" + num(r.o) + ") gave S=" + num(got) +
                                 ", expected " + num(r.s));
    }
}

void gradient_suite(Check& c) {
    double worst = 0.0;
    auto record = [&](const std::string& what, double err) {
        worst = std::max(worst, err);
        c.expect(err < kGradTolerance, what + " relative error " + num(err));
    };
    for (const auto& op : testing::op_cases()) {
        for (std::uint64_t seed = 0; seed < kGradSeeds; ++seed) {
            std::mt19937_64 rng(seed);
            std::vector<Tensor> in;
            for (const auto& s : op.shapes) in.push_back(testing::random_tensor(s, rng));
            record(std::string(op.name) + " seed " + num(seed), testing::gradcheck(op.f, in, rng));
        }
    }
    for (std::uint64_t seed = 0; seed < kGradSeeds; ++seed) {
        std::mt19937_64 rng(seed);
        const Tensor p = testing::random_tensor({2, 3, 4, 4}, rng);
        const Tensor g = testing::random_tensor({2, 3, 4, 4}, rng);
        record("l1 seed " + num(seed),
               testing::gradcheck([](auto& x) { return l1_loss(x[0], x[1]); }, {p, g}, rng));
        record("sstv seed " + num(seed),
               testing::gradcheck([](auto& x) { return sstv_loss(x[0]); }, {p}, rng));
        record("ssb seed " + num(seed), testing::ssb_gradcheck(seed));
        record("micro network seed " + num(seed),
               testing::network_gradcheck(testing::micro_config(), seed));
    }
    c.note("worst relative error " + num(worst));
}

void sharing_invariance(Check& c) {
    std::size_t params = 0;
    std::uint64_t flops = 0;
    std::size_t groups = 0;
    for (std::size_t o : {0, 2, 4, 6}) {
        NetworkConfig cfg = NetworkConfig::paper(128);
        cfg.group_size = 8;
        cfg.overlap = o;
        const std::size_t s = cfg.grouping().groups();
        const std::size_t n = count_params(init_params(cfg, 0));
        const std::uint64_t f = forward_flops(cfg, {1, 128, 16, 16});
        if (o == 0) {
            params = n;
            c.note("params " + std::to_string(n));
        }
        c.expect(n == params, "params changed with o=" + num(o));
        c.expect(s > groups && f > flops, "FLOPs not strictly increasing at o=" + num(o));
        c.note("S=" + num(s) + " GFLOPs " + num(static_cast<double>(f) / 1e9));
        groups = s;
        flops = f;
    }
}

void zero_identities(Check& c) {
    std::mt19937_64 rng(11);
    const Tensor f = testing::random_tensor({2, 8, 5, 4}, rng);
    const SsbParams z = testing::zero_block(8);
    c.expect(ssb_forward(f, z).values() == f.values(), "zero SSB is not the identity");
    const Tensor doubled = sspn_forward(f, {{z, z}});
    bool twice = true;
    for (std::size_t i = 0; i < f.numel(); ++i) twice = twice && doubled[i] == 2.0 * f[i];
    c.expect(twice, "zero SSPN does not double its input");

    NetworkConfig base = NetworkConfig::desk(10, 4);
    base.n_feats = 8;
    const std::size_t s = base.grouping().groups();
    SspsrParams full = init_params(base, 0);
    std::size_t branch = 0, global = 0;
    for (auto& nt : named_parameters(full))
        (nt.name.rfind("global.", 0) == 0 ? global : branch) += nt.tensor->numel();
    const Tensor lr = testing::random_tensor({1, 10, 3, 3}, rng, 0.0, 1.0);

    NetworkConfig gs = base;
    gs.flags.use_grouping = false;
    const SspsrParams pgs = init_params(gs, 0);
    c.expect(gs.grouping().groups() == 1 && pgs.branches.size() == 1 &&
                 pgs.branches[0].shallow.in_channels() == 10 && pgs.branches[0].rec.out_channels() == 10,
             "w/o GS is not a single all-band branch");
    c.expect(sspsr_forward(lr, pgs).shape() == Shape{1, 10, 12, 12}, "w/o GS output shape");

    NetworkConfig pu = base;
    pu.flags.use_progressive = false;
    const SspsrParams ppu = init_params(pu, 0);
    const Tensor group = testing::random_tensor({1, 4, 3, 3}, rng);
    c.expect(pu.effective_branch_scale() == 1 && ppu.branches[0].up.stages.empty() &&
                 ppu.global.up.stages.size() == 2 &&
                 branch_forward(group, ppu.branches[0], pu).shape() == Shape{1, 4, 3, 3},
             "w/o PU does not upsample once at the end");
    c.expect(sspsr_forward(lr, ppu).shape() == Shape{1, 10, 12, 12}, "w/o PU output shape");

    NetworkConfig ps = base;
    ps.flags.share_params = false;
    SspsrParams pps = init_params(ps, 0);
    c.expect(pps.branches.size() == s && count_params(pps) == s * branch + global,
             "w/o PS does not hold S independent copies");
    {
        const Tensor before = sspsr_forward(lr, pps);
        const Tensor g0 = split(lr, ps.grouping())[0];
        const Tensor b0 = branch_forward(g0, pps.branch_for(0), ps);
        pps.branches[1].shallow.weight[0] += 0.5;
        c.expect(branch_forward(g0, pps.branch_for(0), ps).values() == b0.values() &&
                     sspsr_forward(lr, pps).values() != before.values(),
                 "w/o PS copies are not independent");
    }

    NetworkConfig sa = base;
    sa.flags.use_attention = false;
    const SspsrParams psa = init_params(sa, 0);
    const std::size_t h = attention_hidden(base.n_feats);
    const std::size_t fc = 2 * (base.n_feats * h) + h + base.n_feats;
    c.expect(count_params(full) - count_params(psa) == 2 * fc, "w/o SA still holds attention layers");
    const SsbParams blk = testing::random_block(8, rng);
    const Tensor spa = spatial_residual(f, blk);
    const Tensor plain = add(spa, spectral_body(spa, blk));
    c.expect(ssb_forward(f, blk, {.use_attention = false}).values() == plain.values(),
             "w/o SA block is not F_spa + B");
}

void metric_oracles(Check& c) {
    std::mt19937_64 rng(21);
    double worst = 0.0;
    auto cmp = [&](const char* what, double got, double want) {
        const double err = std::abs(got - want);
        worst = std::max(worst, err);
        c.expect(err <= kMetricTolerance, std::string(what) + " differs by " + num(err));
    };
    // The standard 11x11 SSIM window does not fit an 8x8 cube, so the 8x8
    // pairs use a 7x7 window; 16x16 pairs cover the standard window.
    const SsimOptions small{.window = 7};
    for (int i = 0; i < 100; ++i) {
        const HsiCube x = testing::random_cube(5, 8, 8, rng);
        const HsiCube y = testing::random_cube(5, 8, 8, rng);
        cmp("CC", cc(x, y), oracle::cc(x, y));
        cmp("SAM", sam(x, y), oracle::sam(x, y));
        cmp("RMSE", rmse(x, y), oracle::rmse(x, y));
        cmp("ERGAS", ergas(x, y, 4), oracle::ergas(x, y, 4));
        cmp("PSNR", psnr(x, y), oracle::psnr(x, y));
        cmp("SSIM 7x7", ssim(x, y, 1.0, small), oracle::ssim(x, y, 7));
        const HsiCube u = testing::random_cube(5, 16, 16, rng);
        const HsiCube v = testing::random_cube(5, 16, 16, rng);
        cmp("SSIM 11x11", ssim(u, v), oracle::ssim(u, v));
    }
    const HsiCube ref = testing::random_cube(5, 16, 16, rng);
    const MetricReport r = evaluate_all(ref, ref, 4);
    c.expect(r.cc == 1.0 && r.sam_degrees == 0.0 && r.rmse == 0.0 && r.ergas == 0.0 &&
                 r.psnr_db == kPsnrCapDb && r.ssim == 1.0,
             "perfect reconstruction is not (1, 0, 0, 0, " + num(kPsnrCapDb) + ", 1)");
    c.note("worst deviation " + num(worst));
}

std::vector<HsiCube> synth_set(std::size_t count, std::uint64_t first_seed) {
    std::vector<HsiCube> cubes;
    for (std::size_t i = 0; i < count; ++i) {
        SynthConfig s;  // 16 bands, 48x48
        s.seed = first_seed + i;
        cubes.push_back(synth_cube(s));
    }
    return cubes;
}

void desk_training(Check& c) {
    const auto pool = synth_set(48, 1000);
    const TrainConfig cfg = TrainConfig::desk();
    const auto [tr_idx, val_idx] = split_validation(pool.size(), cfg.val_fraction, cfg.seed);
    std::vector<HsiCube> tr, val;
    for (auto i : tr_idx) tr.push_back(pool[i]);
    for (auto i : val_idx) val.push_back(pool[i]);
    const auto test = synth_set(8, 900000);

    const NetworkConfig net = NetworkConfig::desk(16, 4);
    const TrainResult r = train(tr, val, init_params(net, 0), cfg);
    const std::size_t steps = r.log.empty() ? 0 : r.log.back().steps;
    c.expect(steps == 200, "ran " + num(steps) + " steps, expected 200");

    const EvalResult e = evaluate(r.best, test, std::vector<std::string>(test.size(), "test"));
    const double model = e.means[0].report.psnr_db;
    const double bicubic = e.means[1].report.psnr_db;
    c.note("held-out PSNR " + num(model) + " dB vs bicubic " + num(bicubic) + " dB");
    c.note("loss " + num(r.probe_loss_initial) + " -> " + num(r.probe_loss_final));
    c.expect(model >= bicubic + kDeskMarginDb,
             "model beats bicubic by " + num(model - bicubic) + " dB, needs " + num(kDeskMarginDb));
    c.expect(r.probe_loss_final < r.probe_loss_initial, "loss did not decrease");
}

void loss_exactness(Check& c) {
    double worst = 0.0;
    auto cmp = [&](const char* what, double got, double want) {
        const double err = std::abs(got - want);
        worst = std::max(worst, err);
        c.expect(err <= kLossTolerance, std::string(what) + " differs by " + num(err));
    };
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed);
        const Tensor p = testing::random_tensor({1, 3, 4, 4}, rng, 0.0, 1.0);
        const Tensor g = testing::random_tensor({1, 3, 4, 4}, rng, 0.0, 1.0);
        cmp("l1", l1_loss(p, g).item(), oracle::l1(p, g));
        cmp("sstv", sstv_loss(p).item(), oracle::sstv(p, true));
        cmp("sstv raw", sstv_loss(p, SstvNormalization::raw_sum).item(), oracle::sstv(p, false));
        c.expect(bit_equal(total_loss(p, g, {.alpha = 0.0}).item(), l1_loss(p, g).item()),
                 "alpha=0 total loss is not bit-identical to l1");
    }
    c.note("worst deviation " + num(worst));
}

void io_round_trips(Check& c) {
    std::mt19937_64 rng(31);
    const auto cube_path = scratch("cube.hsic");
    for (int i = 0; i < 50; ++i) {
        std::uniform_int_distribution<std::size_t> dim(1, 9);
        const HsiCube cube = float_exact(testing::random_cube(dim(rng), dim(rng), dim(rng), rng));
        save_cube(cube, cube_path);
        const auto bytes = read_file(cube_path);
        const HsiCube back = load_cube(cube_path);
        c.expect(back.tensor().shape() == cube.tensor().shape() &&
                     std::memcmp(back.tensor().values().data(), cube.tensor().values().data(),
                                 cube.tensor().numel() * sizeof(double)) == 0,
                 "HSIC values changed in a round trip");
        c.expect(encode_cube(back) == bytes, "HSIC bytes changed in a round trip");
    }

    const auto ckpt = scratch("model.sspw");
    for (bool share : {true, false}) {
        NetworkConfig cfg = NetworkConfig::desk(16, 4);
        cfg.flags.share_params = share;
        const SspsrParams p = init_params(cfg, 7);
        save_checkpoint(p, ckpt);
        const auto bytes = read_file(ckpt);
        const SspsrParams q = load_checkpoint(ckpt);
        c.expect(same_params(p, q), "SSPW parameters changed in a round trip");
        c.expect(encode_checkpoint(q) == bytes, "SSPW bytes changed in a round trip");
    }

    const auto lr_path = scratch("lr.hsic"), sr_path = scratch("sr.hsic");
    save_cube(testing::random_cube(16, 5, 7, rng), lr_path);
    const SspsrParams d4 = load_checkpoint(ckpt);
    super_resolve(d4, lr_path, sr_path);
    const HsiCube sr = load_cube(sr_path);
    c.expect(sr.bands() == 16 && sr.height() == 20 && sr.width() == 28,
             "sr output is " + num(sr.height()) + "x" + num(sr.width()) + ", expected 20x28");
    for (const auto& f : {cube_path, ckpt, lr_path, sr_path}) std::filesystem::remove(f);
}

struct Criterion {
    int id;
    const char* name;
    double limit_seconds;  // 0: no limit
    std::function<void(Check&)> run;
};

}  // namespace

// Optional arguments select criteria by number; none runs all of them.
int main(int argc, char** argv) {
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
    const std::vector<Criterion> criteria = {
        {1, "grouping arithmetic", 1.0, grouping_table},
        {2, "gradient suite", 120.0, gradient_suite},
        {3, "parameter-sharing invariance", 0.0, sharing_invariance},
        {4, "zero-weight identities and ablations", 0.0, zero_identities},
        {5, "metric oracles", 30.0, metric_oracles},
        {6, "desk-scale learning", 600.0, desk_training},
        {7, "SSTV/L1 exactness", 0.0, loss_exactness},
        {8, "I/O round trips", 0.0, io_round_trips},
    };
    int failed = 0;
    for (const auto& cr : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), cr.id) == only.end()) continue;
        Check check;
        const auto t0 = Clock::now();
        try {
            cr.run(check);
        } catch (const std::exception& e) {
            check.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        if (cr.limit_seconds > 0) check.within(secs, cr.limit_seconds);
        std::printf("%s %d %s (%.1f s)", check.ok() ? "PASS" : "FAIL", cr.id, cr.name, secs);
        if (!check.ok()) std::printf(": %s", check.failure().c_str());
        if (!check.notes().empty()) std::printf(" [%s]", check.notes().c_str());
        std::printf("\n");
        std::fflush(stdout);
        failed += check.ok() ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
