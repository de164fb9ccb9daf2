// SPDX-License-Identifier: Apache-2.0
//
// sarsc: scattering-center extraction from complex SAR imagery by sparse coding
// Copyright (C) 2026 The sarsc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "sarsc/commands.hpp"
#include "sarsc/dictionary.hpp"
#include "sarsc/forward_model.hpp"
#include "sarsc/io.hpp"
#include "sarsc/metrics.hpp"
#include "sarsc/soft_threshold.hpp"
#include "sarsc/solvers.hpp"
#include "sarsc/training.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace sarsc;
namespace fs = std::filesystem;

namespace
{

struct Outcome
{
    bool ok = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 4)
{
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

Dictionary image_dictionary(const RadarGeometry &g)
{
    return to_image_domain(build_freq_dictionary(g), g);
}

ComplexSignal image_of(const Scene &s, const RadarGeometry &g, std::uint64_t noise_seed = 0)
{
    return signal_to_image_domain(synthesize_echo(s, noise_seed), g);
}

ComplexSignal clean_image_of(Scene s, const RadarGeometry &g)
{
    s.noise_snr_db.reset();
    return image_of(s, g);
}

Outcome soft_threshold_laws()
{
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0.0, 2.0);
    std::uniform_real_distribution<double> r(0.0, 3.0);
    long failures = 0;
    const auto bad = [&](bool cond) { failures += cond ? 0 : 1; };
    for (int i = 0; i < 100000; ++i)
    {
        const Complex x(n(rng), n(rng)), y(n(rng), n(rng));
        double r1 = r(rng), r2 = r(rng);
        if (r1 > r2)
            std::swap(r1, r2);
        const Complex sx = soft_threshold(x, r1), sy = soft_threshold(y, r1);
        bad(std::abs(sx) <= std::abs(x));
        bad(std::abs(sx - sy) <= std::abs(x - y) * (1.0 + 1e-12));
        bad(soft_threshold(x, 0.0) == x);
        if (std::abs(sx) > 0.0)
            bad(std::abs(sx / std::abs(sx) - x / std::abs(x)) <= 1e-12);
        bad(std::abs(std::abs(sx) - std::max(std::abs(x) - r1, 0.0)) <= 1e-12 * std::max(1.0, std::abs(x)));
        bad(std::abs(soft_threshold(x, r2)) <= std::abs(sx));
    }
    return {failures == 0, std::to_string(failures) + " failures over 1e5 inputs"};
}

Outcome forward_consistency()
{
    const RadarGeometry g = benchmark_geometry(8, 16);
    const Dictionary phi = build_freq_dictionary(g);
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
        const Scene s = random_on_grid_scene(g, SceneSpec{1 + static_cast<Index>(seed % 8)}, seed);
        const CVector echo = synthesize_echo(s).values();
        const CVector model = phi.matrix * scene_to_sparse_code(s).values();
        worst = std::max(worst, (echo - model).norm() / echo.norm());
    }
    return {worst <= 1e-10, "worst relative error " + fmt(worst)};
}

Outcome omp_exhaustive()
{
    const RadarGeometry g = benchmark_geometry(8, 16);
    const Dictionary phi = image_dictionary(g);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> mag(0.5, 2.0), ph(0.0, 2.0 * std::numbers::pi);
    int pass = 0;
    for (Index node = 0; node < phi.cols(); ++node)
    {
        const Complex a = std::polar(mag(rng), ph(rng));
        CVector z = CVector::Zero(phi.cols());
        z[node] = a;
        const ComplexSignal sig = reconstruct(phi, SparseCode(z, g.grid_dims()));
        const SolveResult r = omp_solve(phi, sig, 40, true);
        Index first = -1;
        if (!r.trace.empty())
            r.trace.front().values().cwiseAbs().maxCoeff(&first);
        if (first == node && std::abs(r.code.values()[node] - a) <= 1e-9 * std::abs(a))
            ++pass;
    }
    return {pass == phi.cols(), std::to_string(pass) + "/" + std::to_string(phi.cols())};
}

Outcome ista_monotone()
{
    const RadarGeometry g = benchmark_geometry(8, 16);
    const Dictionary phi = image_dictionary(g);
    const double L = lipschitz_constant(phi);
    SolverConfig cfg;
    cfg.max_iters = 200;
    cfg.tol = 0.0;
    cfg.capture_trace = true;
    const double t = 0.9 / L;
    int violations = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        const Scene s = random_on_grid_scene(g, SceneSpec{5, 20.0}, 100 + seed);
        const ComplexSignal sig = image_of(s, g, seed);
        const SolveResult r = ista_solve(phi, sig, cfg, t, cfg.lambda * t / 2.0);
        double prev = sig.values().squaredNorm();
        for (const auto &z : r.trace)
        {
            const double obj = lasso_objective(phi, z, sig, cfg.lambda);
            if (obj > prev + 1e-10 * std::max(1.0, prev))
                ++violations;
            prev = obj;
        }
    }
    return {violations == 0, std::to_string(violations) + " increases over 20 seeds x 200 iterations"};
}

Outcome unfolded_matches_ista()
{
    const RadarGeometry g = benchmark_geometry(8, 16);
    const Dictionary phi = image_dictionary(g);
    const double L = lipschitz_constant(phi);
    double worst = 0.0;
    for (Index stages = 1; stages <= 6; ++stages)
        for (std::uint64_t seed = 0; seed < 10; ++seed)
        {
            const Scene s = random_on_grid_scene(g, SceneSpec{4, 20.0}, 200 + seed);
            const ComplexSignal sig = image_of(s, g, seed);
            SolverConfig cfg;
            cfg.max_iters = stages;
            cfg.tol = 0.0;
            const double t = 0.8 / L, rho = 0.01;
            const CVector a = ista_solve(phi, sig, cfg, t, rho).code.values();
            const CVector b = unfolded_ista_solve(phi, sig, UnfoldedParams::constant(stages, t, rho)).code.values();
            const double denom = std::max(a.norm(), 1e-300);
            worst = std::max(worst, (a - b).norm() / denom);
        }
    return {worst <= 1e-12, "worst relative difference " + fmt(worst)};
}

Outcome training_improves()
{
    const RadarGeometry g = benchmark_geometry(32, 32);
    const Dictionary phi = image_dictionary(g);
    std::vector<ComplexSignal> signals, clean;
    for (std::uint64_t i = 0; i < 50; ++i)
    {
        const Scene s = random_on_grid_scene(g, SceneSpec{5, 20.0}, 1000 + i);
        signals.push_back(image_of(s, g, 77 + i));
        clean.push_back(clean_image_of(s, g));
    }
    const UnfoldedParams fixed = UnfoldedParams::constant(3);
    TrainConfig cfg;
    cfg.epochs = 200;
    const TrainReport rep = train_unfolded(phi, signals, fixed, cfg);

    double fixed_db = 0.0, trained_db = 0.0;
    for (std::size_t i = 0; i < signals.size(); ++i)
    {
        fixed_db += psnr(clean[i], reconstruct(phi, unfolded_ista_solve(phi, signals[i], fixed).code));
        trained_db += psnr(clean[i], reconstruct(phi, unfolded_ista_solve(phi, signals[i], rep.final_params).code));
    }
    fixed_db /= static_cast<double>(signals.size());
    trained_db /= static_cast<double>(signals.size());

    const BatchLoss loss(phi, signals, cfg.lambda);
    const auto eval = [&](const UnfoldedParams &p) { return loss(p); };
    const double L = lipschitz_constant(phi);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> t(0.3 / L, 1.0 / L), r(0.01, 0.1);
    double worst_fd = 0.0;
    for (int point = 0; point < 3; ++point)
    {
        const UnfoldedParams p{{t(rng), t(rng), t(rng)}, {r(rng), r(rng), r(rng)}};
        for (Index i = 0; i < 6; ++i)
        {
            const double g2 = fd_gradient(eval, p, i, cfg.fd_rel_step);
            const double g5 = fd_gradient_5pt(eval, p, i, cfg.fd_rel_step);
            worst_fd = std::max(worst_fd, std::abs(g2 - g5) / std::max(std::abs(g5), 1e-300));
        }
    }
    const bool ok = trained_db >= fixed_db + 1.0 && worst_fd <= 1e-3;
    return {ok, "fixed " + fmt(fixed_db) + " dB, trained " + fmt(trained_db) + " dB, worst FD mismatch " +
                    fmt(worst_fd)};
}

Outcome timing_order()
{
    const RadarGeometry g = benchmark_geometry(32, 32);
    const Dictionary phi = image_dictionary(g);
    std::vector<ComplexSignal> signals;
    for (std::uint64_t i = 0; i < 5; ++i)
        signals.push_back(image_of(random_on_grid_scene(g, SceneSpec{5, 20.0}, 300 + i), g, i));
    const double L = lipschitz_constant(phi);

    SolverSpec unfolded;
    unfolded.kind = SolverKind::Unfolded;
    unfolded.unfolded = UnfoldedParams::constant(3, 0.9 / L, 0.01);
    SolverSpec ista;
    ista.kind = SolverKind::Ista;
    ista.config.max_iters = 500;
    ista.config.tol = 0.0;
    ista.ista_step = 0.9 / L;
    ista.ista_threshold = ista.config.lambda * ista.ista_step / 2.0;
    SolverSpec omp;
    omp.kind = SolverKind::Omp;
    omp.config.omp_k = 40;

    const std::vector<BenchRow> rows = bench_solvers(phi, signals, std::vector<SolverSpec>{unfolded, ista, omp});
    const double tu = rows[0].mean_s, ti = rows[1].mean_s, to = rows[2].mean_s;
    bool ok = true;
    for (const auto &row : rows)
        ok = ok && row.error.empty();
    ok = ok && 2.0 * tu <= ti && 2.0 * ti <= to;
    return {ok, "unfolded(3) " + fmt(tu) + " s, ista(500) " + fmt(ti) + " s, omp(40) " + fmt(to) + " s"};
}

Outcome shear_and_embedding()
{
    bool ok = true;
    RMatrix m4(4, 4);
    for (Index i = 0; i < 16; ++i)
        m4.data()[i] = static_cast<double>(i + 1);
    const auto c4 = diagonal_shear_chips(m4, 2);
    ok = ok && c4.size() == 2 && c4[0] == m4.block(0, 0, 2, 2) && c4[1] == m4.block(2, 2, 2, 2);

    RMatrix m5(5, 5);
    for (Index i = 0; i < 25; ++i)
        m5.data()[i] = static_cast<double>(i + 1);
    const auto c5 = diagonal_shear_chips(m5, 2);
    RMatrix tail = RMatrix::Zero(3, 3);
    tail.block(0, 0, 2, 2) = m5.block(3, 3, 2, 2);
    ok = ok && c5.size() == 2 && c5[0] == m5.block(0, 0, 3, 3) && c5[1] == tail;

    int mismatched = 0;
    for (Index n = 1; n <= 16; ++n)
    {
        const BinaryMatrix e = angle_embedding(std::numbers::pi / 4.0, n, n);
        for (Index r = 0; r < n; ++r)
            for (Index c = 0; c < n; ++c)
            {
                // Cell centre (c, n-1-r) relative to the bottom-left centre lies on or under the diagonal.
                const int expect = (n - 1 - r) <= c ? 1 : 0;
                mismatched += e(r, c) == expect ? 0 : 1;
            }
    }
    return {ok && mismatched == 0, std::string("hand traces ") + (ok ? "match" : "differ") + ", " +
                                       std::to_string(mismatched) + " embedding cells off"};
}

Outcome format_round_trips()
{
    const fs::path dir = fs::temp_directory_path() / "sarsc_acceptance_formats";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const RadarGeometry g = benchmark_geometry(8, 16);
    bool ok = true;

    const Scene s = random_on_grid_scene(g, SceneSpec{5, 20.0}, 9);
    const ComplexSignal echo = synthesize_echo(s, 3);
    io::write_signal(dir / "a.csig", echo);
    io::write_signal(dir / "b.csig", io::read_signal(dir / "a.csig"));
    ok = ok && io::read_bytes(dir / "a.csig") == io::read_bytes(dir / "b.csig");

    const Dictionary phi = image_dictionary(g);
    io::write_dictionary(dir / "a.scdt", phi);
    io::write_dictionary(dir / "b.scdt", io::read_dictionary(dir / "a.scdt", g));
    ok = ok && io::read_bytes(dir / "a.scdt") == io::read_bytes(dir / "b.scdt");

    io::write_text(dir / "a.json", io::dump(io::scene_to_json(s)));
    io::write_text(dir / "b.json", io::dump(io::scene_to_json(io::scene_from_json(io::read_json(dir / "a.json")))));
    ok = ok && io::read_bytes(dir / "a.json") == io::read_bytes(dir / "b.json");

    const UnfoldedParams p{{0.1, 1.0 / 3.0, 2.5e-7}, {0.0, 1e-3, 0.7}};
    io::write_text(dir / "pa.json", io::dump(io::params_to_json(p)));
    io::write_text(dir / "pb.json",
                   io::dump(io::params_to_json(io::params_from_json(io::read_json(dir / "pa.json")))));
    ok = ok && io::read_bytes(dir / "pa.json") == io::read_bytes(dir / "pb.json");
    fs::remove_all(dir);
    return {ok, ok ? "all four formats byte-identical" : "a format changed on rewrite"};
}

Outcome pipeline_deterministic()
{
    const fs::path root = fs::temp_directory_path() / "sarsc_acceptance_pipeline";
    fs::remove_all(root);
    std::string csv[2][2];
    std::ostringstream log, err;
    for (int run = 0; run < 2; ++run)
    {
        const fs::path base = root / ("run" + std::to_string(run));
        cli::RunConfig cfg;
        cfg.seed = 42;
        cfg.count = 5;
        cfg.snr_db = 20.0;
        cfg.dict_cache = base / "cache";
        cfg.out = base / "scenes";
        if (cli::run("gen", cfg, log, err) != 0)
            return {false, "gen failed: " + err.str()};
        cfg.scenes = base / "scenes";
        cfg.out = base / "dict";
        if (cli::run("dict", cfg, log, err) != 0)
            return {false, "dict failed: " + err.str()};
        cfg.solvers = {"unfolded", "ista", "omp", "amp"};
        cfg.out = base / "results";
        if (cli::run("solve", cfg, log, err) != 0)
            return {false, "solve failed: " + err.str()};
        cfg.results = base / "results";
        cfg.out = base / "eval";
        if (cli::run("eval", cfg, log, err) != 0)
            return {false, "eval failed: " + err.str()};
        csv[run][0] = io::read_bytes(base / "eval" / "psnr.csv");
        csv[run][1] = io::read_bytes(base / "eval" / "support.csv");
    }
    fs::remove_all(root);
    const bool ok = csv[0][0] == csv[1][0] && csv[0][1] == csv[1][1] && !csv[0][0].empty();
    return {ok, ok ? "psnr.csv and support.csv identical" : "metric CSVs differ between runs"};
}

struct Criterion
{
    int id;
    const char *name;
    double budget_s;
    std::function<Outcome()> run;
};

} // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {1, "soft-threshold laws", 1.0, soft_threshold_laws},
        {2, "forward model matches dictionary", 10.0, forward_consistency},
        {3, "OMP exhaustive 1-sparse recovery", 30.0, omp_exhaustive},
        {4, "ISTA monotonicity", 60.0, ista_monotone},
        {5, "unfolded equals truncated ISTA", 10.0, unfolded_matches_ista},
        {6, "training improves PSNR", 600.0, training_improves},
        {7, "timing order unfolded < ista < omp", 300.0, timing_order},
        {8, "diagonal shear and angle embedding", 1.0, shear_and_embedding},
        {9, "format round trips", 5.0, format_round_trips},
        {10, "end-to-end determinism", 600.0, pipeline_deterministic},
    };
    int failed = 0;
    for (const auto &c : criteria)
    {
        const auto t0 = Clock::now();
        Outcome o;
        try
        {
            o = c.run();
        }
        catch (const std::exception &e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double elapsed = seconds_since(t0);
        if (elapsed > c.budget_s)
        {
            o.ok = false;
            o.detail += "; over the " + fmt(c.budget_s) + " s budget";
        }
        failed += o.ok ? 0 : 1;
        std::printf("%s %2d %s (%.2f s): %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, elapsed, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
