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
#include "sarsc/errors.hpp"
#include "sarsc/forward_model.hpp"
#include "sarsc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace sarsc;

namespace
{

ComplexSignal uniform_image(Index n, double magnitude)
{
    CVector v(n * n);
    std::mt19937_64 rng(n);
    std::uniform_real_distribution<double> ph(0.0, 6.283185307179586);
    for (Index i = 0; i < v.size(); ++i)
        v[i] = std::polar(magnitude, ph(rng));
    return {v, Layout::ImageDomain, {n, n}};
}

Scene scene_at(const RadarGeometry &g, const std::vector<std::pair<Index, Index>> &nodes)
{
    const Grids grids = make_grids(g);
    Scene s;
    s.geometry = g;
    for (const auto &[m, n] : nodes)
        s.centers.push_back({Complex(1.0 + 0.1 * static_cast<double>(m), -0.5), grids.x[m], grids.y[n]});
    return s;
}

} // namespace

TEST_CASE("psnr examples")
{
    const ComplexSignal ref = uniform_image(8, 1.0);
    CHECK(psnr(ref, ref) == kPsnrCapDb);
    CHECK(psnr(ref, ComplexSignal::zeros(Layout::ImageDomain, {8, 8})) == Catch::Approx(0.0).margin(1e-12));
    const ComplexSignal half({ref.values() * 0.5}, Layout::ImageDomain, {8, 8});
    CHECK(psnr(ref, half) == Catch::Approx(20.0 * std::log10(2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(psnr(ComplexSignal::zeros(Layout::ImageDomain, {8, 8}), ref), UndefinedMetricError);
    CHECK_THROWS_AS(psnr(ref, ComplexSignal::zeros(Layout::ImageDomain, {4, 16})), std::invalid_argument);
}

TEST_CASE("psnr is scale invariant and falls with noise")
{
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n;
    CVector r(256), e(256);
    for (Index i = 0; i < 256; ++i)
    {
        r[i] = Complex(n(rng), n(rng));
        e[i] = r[i] + Complex(0.1 * n(rng), 0.1 * n(rng));
    }
    const ComplexSignal ref(r, Layout::ImageDomain, {16, 16});
    const ComplexSignal est(e, Layout::ImageDomain, {16, 16});
    for (double k : {0.001, 3.0, 1e6})
    {
        const ComplexSignal rk(r * k, Layout::ImageDomain, {16, 16});
        const ComplexSignal ek(e * k, Layout::ImageDomain, {16, 16});
        CHECK(psnr(rk, ek) == Catch::Approx(psnr(ref, est)).epsilon(1e-10));
    }

    CVector noise(256);
    for (Index i = 0; i < 256; ++i)
        noise[i] = Complex(n(rng), n(rng));
    double prev = kPsnrCapDb + 1.0;
    for (double level : {0.01, 0.03, 0.1, 0.3, 1.0})
    {
        const ComplexSignal noisy(r + level * noise, Layout::ImageDomain, {16, 16});
        const double v = psnr(ref, noisy);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("support match examples")
{
    const RadarGeometry g = benchmark_geometry(8, 8);
    const Scene one = scene_at(g, {{3, 4}});
    const SparseCode exact = scene_to_sparse_code(one);
    const SupportMatchReport perfect = support_match(one, exact);
    CHECK(perfect.precision == 1.0);
    CHECK(perfect.recall == 1.0);
    REQUIRE(perfect.matched_pairs.size() == 1);
    CHECK(perfect.matched_pairs[0].amplitude_rel_error <= 1e-9);

    const SupportMatchReport none = support_match(one, SparseCode::zeros(g.grid_dims()));
    CHECK(none.no_detections);
    CHECK(none.precision == 1.0);
    CHECK(none.recall == 0.0);

    // Three true, two found plus one spurious far from everything.
    const Scene three = scene_at(g, {{1, 1}, {4, 6}, {6, 2}});
    CVector z = CVector::Zero(64);
    z[1 * 8 + 1] = 1.0;
    z[4 * 8 + 6] = 1.0;
    z[1 * 8 + 6] = 1.0;
    const SupportMatchReport r = support_match(three, SparseCode(z, g.grid_dims()));
    CHECK(r.n_detected == 3);
    CHECK(r.precision == Catch::Approx(2.0 / 3.0));
    CHECK(r.recall == Catch::Approx(2.0 / 3.0));

    // One cell away still matches within the default tolerance; two cells do not.
    CVector shifted = CVector::Zero(64);
    shifted[4 * 8 + 5] = 1.0;
    CHECK(support_match(one, SparseCode(shifted, g.grid_dims())).recall == 1.0);
    shifted.setZero();
    shifted[5 * 8 + 6] = 1.0;
    CHECK(support_match(one, SparseCode(shifted, g.grid_dims())).recall == 0.0);
}

TEST_CASE("support match is invariant to truth order")
{
    const RadarGeometry g = benchmark_geometry(8, 8);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n;
    for (int trial = 0; trial < 30; ++trial)
    {
        Scene s = random_on_grid_scene(g, SceneSpec{4}, static_cast<std::uint64_t>(trial));
        CVector z = scene_to_sparse_code(s).values();
        for (Index i = 0; i < z.size(); ++i)
            z[i] += Complex(0.2 * n(rng), 0.2 * n(rng));
        const SparseCode code(z, g.grid_dims());
        const SupportMatchReport a = support_match(s, code);
        std::shuffle(s.centers.begin(), s.centers.end(), rng);
        const SupportMatchReport b = support_match(s, code);
        REQUIRE(a.precision == b.precision);
        REQUIRE(a.recall == b.recall);
        REQUIRE(a.matched_pairs.size() == b.matched_pairs.size());
        for (std::size_t k = 0; k < a.matched_pairs.size(); ++k)
            REQUIRE(a.matched_pairs[k].true_index == b.matched_pairs[k].true_index);
    }
}

TEST_CASE("bench rows and timing csv")
{
    const RadarGeometry g = benchmark_geometry(8, 16);
    const Dictionary phi = to_image_domain(build_freq_dictionary(g), g);
    const std::vector<ComplexSignal> one{
        signal_to_image_domain(synthesize_echo(random_on_grid_scene(g, SceneSpec{3}, 1)), g)};

    SolverSpec omp;
    omp.kind = SolverKind::Omp;
    SolverSpec ista;
    ista.kind = SolverKind::Ista; // default step diverges here and lands on the row
    const std::vector<SolverSpec> specs{omp, ista};
    const std::vector<BenchRow> rows = bench_solvers(phi, one, specs);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].solver == "omp");
    CHECK(rows[0].n_ok == 1);
    CHECK(rows[0].std_s == 0.0);
    CHECK(rows[0].mean_s > 0.0);
    CHECK(rows[0].mean_psnr_db > 100.0);
    CHECK(rows[1].n_ok == 0);
    CHECK_FALSE(rows[1].error.empty());

    std::ostringstream os;
    write_timing_csv(os, rows);
    const std::string csv = os.str();
    CHECK(csv.rfind("solver,mean_s,std_s,mean_psnr_db\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);

    CHECK_THROWS_AS(bench_solvers(phi, {}, specs), std::invalid_argument);
}
