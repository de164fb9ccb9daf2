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

#include "sarsc/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace
{

void add_common(CLI::App *app, sarsc::cli::RunConfig &cfg)
{
    app->add_option("--geometry", cfg.geometry, "Geometry JSON");
    app->add_option("--scenes", cfg.scenes, "Directory of scene_*.json / echo_*.csig");
    app->add_option("--dict-cache", cfg.dict_cache, "Dictionary cache directory (overrides SARSC_CACHE_DIR)");
    app->add_option("--out", cfg.out, "Output directory")->capture_default_str();
    app->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    app->add_option("--jobs", cfg.jobs, "Worker threads across signals")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_flag("-v,--verbose", cfg.verbosity, "More log output");
}

void add_solver_opts(CLI::App *app, sarsc::cli::RunConfig &cfg)
{
    app->add_option("--solver", cfg.solvers, "ista|unfolded|omp|amp (repeatable)")
        ->check(CLI::IsMember({"ista", "unfolded", "omp", "amp"}));
    app->add_option("--params", cfg.params, "UnfoldedParams JSON");
    app->add_option("--lambda", cfg.lambda, "LASSO weight")->capture_default_str();
    app->add_option("--stages", cfg.stages, "Unfolded stages when --params is absent")->capture_default_str();
    app->add_option("--ista-step", cfg.ista_step, "ISTA step size (default 0.9/L)");
    app->add_option("--ista-threshold", cfg.ista_threshold, "ISTA threshold (default lambda*t/2)");
    app->add_option("--max-iters", cfg.max_iters, "ISTA/AMP iteration cap")->capture_default_str();
    app->add_option("--tol", cfg.tol, "Relative objective-change stop")->capture_default_str();
    app->add_option("--omp-k", cfg.omp_k, "OMP sparsity")->capture_default_str();
    app->add_option("--amp-damping", cfg.amp_damping, "AMP damping in (0,1]")->capture_default_str();
}

void add_train_opts(CLI::App *app, sarsc::cli::RunConfig &cfg)
{
    app->add_option("--epochs", cfg.epochs, "Training epochs")->capture_default_str();
    app->add_option("--learning-rate", cfg.learning_rate, "Gradient step")->capture_default_str();
    app->add_option("--fd-step", cfg.fd_rel_step, "Relative finite-difference step")->capture_default_str();
    app->add_option("--min-step", cfg.min_step, "Lower bound on learned step sizes")->capture_default_str();
}

} // namespace

int main(int argc, char **argv)
{
    sarsc::cli::RunConfig cfg;
    for (int i = 0; i < argc; ++i)
        cfg.argv.emplace_back(argv[i]);

    CLI::App app{"sarsc: scattering-center extraction by sparse coding"};
    app.set_version_flag("--version", SARSC_VERSION);
    app.require_subcommand(1);

    auto *gen = app.add_subcommand("gen", "Generate random on-grid scenes and echoes");
    add_common(gen, cfg);
    gen->add_option("--count", cfg.count, "Number of scenes")->capture_default_str();
    gen->add_option("--sparsity", cfg.sparsity, "Centers per scene")->capture_default_str();
    gen->add_option("--snr", cfg.snr_db, "Noise SNR in dB (noiseless if absent)");
    gen->add_option("--grid", cfg.grid, "Grid size for the built-in geometry")->capture_default_str();
    gen->add_option("--samples", cfg.samples, "Sample count for the built-in geometry")->capture_default_str();

    auto *dict = app.add_subcommand("dict", "Build or reuse cached dictionaries");
    add_common(dict, cfg);

    auto *solve = app.add_subcommand("solve", "Sparse-code every echo in --scenes");
    add_common(solve, cfg);
    add_solver_opts(solve, cfg);
    solve->add_option("--gammas", cfg.gammas, "Weights for fusing intermediate reconstructions");

    auto *train = app.add_subcommand("train", "Learn unfolded step sizes and thresholds");
    add_common(train, cfg);
    add_solver_opts(train, cfg);
    add_train_opts(train, cfg);

    auto *eval = app.add_subcommand("eval", "PSNR and support metrics for solve results");
    add_common(eval, cfg);
    eval->add_option("--results", cfg.results, "Output directory of a solve run");
    eval->add_option("--solver", cfg.solvers, "Restrict to these solvers");

    auto *bench = app.add_subcommand("bench", "Time all solvers");
    add_common(bench, cfg);
    add_solver_opts(bench, cfg);
    bench->add_flag("--parallel", cfg.parallel, "Run solvers concurrently (timings marked contended)");

    auto *sweep = app.add_subcommand("sweep", "Train and evaluate over several lambdas");
    add_common(sweep, cfg);
    add_solver_opts(sweep, cfg);
    add_train_opts(sweep, cfg);
    sweep->add_option("--lambdas", cfg.lambdas, "Lambda values")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : sarsc::cli::kUsage;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    return sarsc::cli::run(command, cfg, std::cout, std::cerr);
}
