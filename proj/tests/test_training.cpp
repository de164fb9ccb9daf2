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

#include <catch_amalgamated.hpp>

#include "sarsc/dictionary.hpp"
#include "sarsc/forward_model.hpp"
#include "sarsc/training.hpp"

#include <cmath>
#include <random>

using namespace sarsc;

namespace
{

struct Fixture
{
    RadarGeometry geom = benchmark_geometry(8, 16);
    Dictionary phi;
    std::vector<ComplexSignal> signals;

    explicit Fixture(Index count = 8)
    {
        phi = to_image_domain(build_freq_dictionary(geom), geom);
        for (Index i = 0; i < count; ++i)
        {
            const Scene s = random_on_grid_scene(geom, SceneSpec{3, 20.0}, 40 + static_cast<std::uint64_t>(i));
            signals.push_back(signal_to_image_domain(synthesize_echo(s, 7 + static_cast<std::uint64_t>(i)), geom));
        }
    }
};

const Fixture &fixture()
{
    static const Fixture f;
    return f;
}

} // namespace

TEST_CASE("batch loss matches per-signal unfolded reconstruction loss")
{
    const Fixture &f = fixture();
    const double L = lipschitz_constant(f.phi);
    const UnfoldedParams p{{0.9 / L, 0.5 / L, 1.1 / L}, {0.02, 0.0, 0.05}};
    const BatchLoss loss(f.phi, f.signals, 300.0);
    double expect = 0.0;
    for (const auto &s : f.signals)
        expect += reconstruction_loss(f.phi, unfolded_ista_solve(f.phi, s, p).code, s, 300.0);
    expect /= static_cast<double>(f.signals.size());
    CHECK(loss(p) == Catch::Approx(expect).epsilon(1e-9));
    CHECK(loss.batch_size() == static_cast<Index>(f.signals.size()));
}

TEST_CASE("parameter addressing")
{
    UnfoldedParams p{{1.0, 2.0}, {3.0, 4.0}};
    CHECK(get_param(p, 0) == 1.0);
    CHECK(get_param(p, 1) == 2.0);
    CHECK(get_param(p, 2) == 3.0);
    CHECK(get_param(p, 3) == 4.0);
    set_param(p, 3, 9.0);
    CHECK(p.thresholds[1] == 9.0);
    CHECK_THROWS_AS(get_param(p, 4), std::invalid_argument);
    CHECK_THROWS_AS(set_param(p, -1, 0.0), std::invalid_argument);
}

TEST_CASE("finite differences are exact on a quadratic probe")
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 50; ++trial)
    {
        const double a = u(rng), b = u(rng), c = u(rng);
        const auto probe = [&](const UnfoldedParams &p) {
            const double x = p.step_sizes[0], y = p.thresholds[0];
            return a * x * x + b * x * y + c * y + 1.0;
        };
        const UnfoldedParams at{{u(rng)}, {u(rng)}};
        const double x = at.step_sizes[0], y = at.thresholds[0];
        REQUIRE(fd_gradient(probe, at, 0, 1e-4) == Catch::Approx(2.0 * a * x + b * y).margin(1e-8));
        REQUIRE(fd_gradient(probe, at, 1, 1e-4) == Catch::Approx(b * x + c).margin(1e-8));
    }
}

TEST_CASE("finite differences vanish on an all-zero training set")
{
    const Fixture &f = fixture();
    const std::vector<ComplexSignal> zeros(3, ComplexSignal::zeros(Layout::ImageDomain, f.geom.sample_dims()));
    const UnfoldedParams p = UnfoldedParams::constant(3);
    for (Index i = 0; i < 6; ++i)
        CHECK(std::abs(fd_gradient(f.phi, zeros, p, i, 1e-4)) <= 1e-10);

    TrainConfig cfg;
    cfg.epochs = 5;
    const TrainReport r = train_unfolded(f.phi, zeros, p, cfg);
    for (std::size_t k = 0; k < 3; ++k)
    {
        CHECK(std::abs(r.final_params.step_sizes[k] - p.step_sizes[k]) <= 1e-8);
        CHECK(std::abs(r.final_params.thresholds[k] - p.thresholds[k]) <= 1e-8);
    }
}

TEST_CASE("central differences agree with a five-point stencil")
{
    const Fixture &f = fixture();
    const double L = lipschitz_constant(f.phi);
    const BatchLoss loss(f.phi, f.signals, 300.0);
    const auto eval = [&](const UnfoldedParams &p) { return loss(p); };
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> t(0.3 / L, 1.0 / L), r(0.01, 0.1);
    for (int point = 0; point < 3; ++point)
    {
        const UnfoldedParams p{{t(rng), t(rng), t(rng)}, {r(rng), r(rng), r(rng)}};
        for (Index i = 0; i < 6; ++i)
        {
            const double g2 = fd_gradient(eval, p, i, 1e-4);
            const double g5 = fd_gradient_5pt(eval, p, i, 1e-4);
            REQUIRE(std::abs(g2 - g5) <= 1e-3 * std::abs(g5));
        }
    }
}

TEST_CASE("training edge cases")
{
    const Fixture &f = fixture();
    const UnfoldedParams init = UnfoldedParams::constant(3);

    TrainConfig none;
    none.epochs = 0;
    const TrainReport r0 = train_unfolded(f.phi, f.signals, init, none);
    CHECK(r0.final_params == init);
    CHECK(r0.loss_history.empty());

    TrainConfig frozen;
    frozen.epochs = 1;
    frozen.learning_rate = 0.0;
    const TrainReport r1 = train_unfolded(f.phi, f.signals, init, frozen);
    CHECK(r1.final_params == init);
    CHECK(r1.loss_history.size() == 1);

    CHECK_THROWS_AS(train_unfolded(f.phi, {}, init, frozen), std::invalid_argument);
    TrainConfig bad;
    bad.min_step = 0.0;
    CHECK_THROWS_AS(train_unfolded(f.phi, f.signals, init, bad), std::invalid_argument);
}

TEST_CASE("training lowers the loss, respects the projection and is reproducible")
{
    const Fixture &f = fixture();
    const UnfoldedParams init = UnfoldedParams::constant(3);
    TrainConfig cfg;
    cfg.epochs = 40;
    cfg.seed = 5;
    const TrainReport a = train_unfolded(f.phi, f.signals, init, cfg);
    CHECK(a.loss_history.size() == 40);
    CHECK(a.final_loss < a.initial_loss);
    CHECK(a.improved);
    for (std::size_t k = 0; k < 3; ++k)
    {
        CHECK(a.final_params.step_sizes[k] >= cfg.min_step);
        CHECK(a.final_params.thresholds[k] >= 0.0);
    }
    const TrainReport b = train_unfolded(f.phi, f.signals, init, cfg);
    CHECK(a.final_params == b.final_params);
    CHECK(a.loss_history == b.loss_history);
}

TEST_CASE("non-finite loss raises with the last good parameters")
{
    const Fixture &f = fixture();
    const UnfoldedParams init = UnfoldedParams::constant(3, 1e150, 0.0);
    TrainConfig cfg;
    cfg.epochs = 3;
    try
    {
        (void)train_unfolded(f.phi, f.signals, init, cfg);
        FAIL("expected TrainingDivergedError");
    }
    catch (const TrainingDivergedError &e)
    {
        CHECK(e.last_good() == init);
    }
}
