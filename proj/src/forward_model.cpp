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

#include "sarsc/forward_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace sarsc
{

namespace
{

// Scatterers may sit on the grid boundary up to rounding.
constexpr double kExtentSlack = 1e-9;
// Node snapping tolerance, in units of grid spacing.
constexpr double kNodeTolerance = 1e-6;

double axis_position(double lo, double hi, Index count, double v)
{
    if (count == 1)
        return 0.0;
    return (v - lo) / (hi - lo) * static_cast<double>(count - 1);
}

void require_in_extent(const RadarGeometry &g, const ScatteringCenter &c, std::size_t i)
{
    const double sx = kExtentSlack * (g.grid_x_max - g.grid_x_min);
    const double sy = kExtentSlack * (g.grid_y_max - g.grid_y_min);
    if (!std::isfinite(c.amplitude.real()) || !std::isfinite(c.amplitude.imag()))
        throw std::invalid_argument("scatterer " + std::to_string(i) + " has a non-finite amplitude");
    if (!(c.x >= g.grid_x_min - sx && c.x <= g.grid_x_max + sx && c.y >= g.grid_y_min - sy &&
          c.y <= g.grid_y_max + sy))
    {
        std::ostringstream os;
        os << "scatterer " << i << " at (" << c.x << ", " << c.y << ") lies outside the grid extent ["
           << g.grid_x_min << ", " << g.grid_x_max << "] x [" << g.grid_y_min << ", " << g.grid_y_max << "]";
        throw std::invalid_argument(os.str());
    }
}

} // namespace

GridNode nearest_node(const RadarGeometry &geom, double x, double y)
{
    const double px = axis_position(geom.grid_x_min, geom.grid_x_max, geom.n_x, x);
    const double py = axis_position(geom.grid_y_min, geom.grid_y_max, geom.n_y, y);
    const auto clamp = [](double v, Index count) {
        return std::clamp<Index>(static_cast<Index>(std::llround(v)), 0, count - 1);
    };
    return {clamp(px, geom.n_x), clamp(py, geom.n_y)};
}

ComplexSignal synthesize_echo(const Scene &scene, std::uint64_t noise_seed)
{
    const RadarGeometry &g = scene.geometry;
    const Grids grids = make_grids(g);
    for (std::size_t i = 0; i < scene.centers.size(); ++i)
        require_in_extent(g, scene.centers[i], i);

    const double k0 = -4.0 * std::numbers::pi / g.wave_speed;
    CVector echo = CVector::Zero(g.n_samples());
    for (Index p = 0; p < g.n_freq; ++p)
    {
        const double kf = k0 * grids.freq[p];
        for (Index q = 0; q < g.n_aspect; ++q)
        {
            const double c = std::cos(grids.aspect[q]);
            const double s = std::sin(grids.aspect[q]);
            Complex acc{0.0, 0.0};
            for (const auto &sc : scene.centers)
                acc += sc.amplitude * std::polar(1.0, kf * (sc.x * c + sc.y * s));
            echo[p * g.n_aspect + q] = acc;
        }
    }

    if (scene.noise_snr_db)
    {
        if (!std::isfinite(*scene.noise_snr_db))
            throw std::invalid_argument("synthesize_echo: noise_snr_db must be finite");
        const double signal_power = echo.squaredNorm() / static_cast<double>(echo.size());
        const double noise_power = signal_power / std::pow(10.0, *scene.noise_snr_db / 10.0);
        const double sigma = std::sqrt(noise_power / 2.0);
        std::mt19937_64 rng(noise_seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (Index i = 0; i < echo.size(); ++i)
        {
            const double re = normal(rng);
            const double im = normal(rng);
            echo[i] += Complex(sigma * re, sigma * im);
        }
    }
    return {std::move(echo), Layout::EchoFreqDomain, g.sample_dims()};
}

SparseCode scene_to_sparse_code(const Scene &scene)
{
    const RadarGeometry &g = scene.geometry;
    g.validate();
    CVector z = CVector::Zero(g.n_atoms());
    for (std::size_t i = 0; i < scene.centers.size(); ++i)
    {
        const auto &c = scene.centers[i];
        require_in_extent(g, c, i);
        const GridNode node = nearest_node(g, c.x, c.y);
        const double px = axis_position(g.grid_x_min, g.grid_x_max, g.n_x, c.x);
        const double py = axis_position(g.grid_y_min, g.grid_y_max, g.n_y, c.y);
        const double ex = g.n_x == 1 ? std::abs(c.x - 0.5 * (g.grid_x_min + g.grid_x_max)) /
                                           (g.grid_x_max - g.grid_x_min)
                                     : std::abs(px - static_cast<double>(node.m));
        const double ey = g.n_y == 1 ? std::abs(c.y - 0.5 * (g.grid_y_min + g.grid_y_max)) /
                                           (g.grid_y_max - g.grid_y_min)
                                     : std::abs(py - static_cast<double>(node.n));
        if (ex > kNodeTolerance || ey > kNodeTolerance)
        {
            std::ostringstream os;
            os << "scatterer " << i << " at (" << c.x << ", " << c.y << ") is not on a grid node; nearest node is (m="
               << node.m << ", n=" << node.n << ")";
            throw OffGridError(os.str(), node);
        }
        z[node.flat(g.n_y)] += c.amplitude;
    }
    return {std::move(z), g.grid_dims()};
}

ComplexSignal vectorize(const CMatrix &img, Layout layout)
{
    if (img.rows() < 1 || img.cols() < 1)
        throw std::invalid_argument("vectorize: empty array");
    const CMatrixRowMajor rm = img;
    return {Eigen::Map<const CVector>(rm.data(), rm.size()), layout, {img.rows(), img.cols()}};
}

CMatrix devectorize(const ComplexSignal &s)
{
    const Dims d = s.dims();
    if (s.size() != d.size())
        throw std::invalid_argument("devectorize: dims mismatch");
    return Eigen::Map<const CMatrixRowMajor>(s.values().data(), d.rows, d.cols);
}

double measured_snr_db(const ComplexSignal &noisy, const ComplexSignal &clean)
{
    if (noisy.size() != clean.size())
        throw std::invalid_argument("measured_snr_db: length mismatch");
    const double noise = (noisy.values() - clean.values()).squaredNorm();
    return 10.0 * std::log10(clean.values().squaredNorm() / noise);
}

Scene random_on_grid_scene(const RadarGeometry &geom, const SceneSpec &spec, std::uint64_t seed)
{
    geom.validate();
    if (spec.n_centers < 0 || spec.n_centers > geom.n_atoms())
        throw std::invalid_argument("random_on_grid_scene: n_centers must lie in [0, N_x*N_y]");
    if (!(spec.min_amplitude > 0.0) || !(spec.max_amplitude >= spec.min_amplitude))
        throw std::invalid_argument("random_on_grid_scene: invalid amplitude range");

    const Grids grids = make_grids(geom);
    std::mt19937_64 rng(seed);
    std::vector<Index> nodes(static_cast<std::size_t>(geom.n_atoms()));
    for (std::size_t i = 0; i < nodes.size(); ++i)
        nodes[i] = static_cast<Index>(i);
    // Partial Fisher-Yates with explicit index draws keeps the sequence stable across stdlibs.
    for (Index k = 0; k < spec.n_centers; ++k)
    {
        const auto remaining = static_cast<std::uint64_t>(geom.n_atoms() - k);
        const auto pick = static_cast<std::size_t>(k) + static_cast<std::size_t>(rng() % remaining);
        std::swap(nodes[static_cast<std::size_t>(k)], nodes[pick]);
    }

    Scene scene;
    scene.geometry = geom;
    scene.noise_snr_db = spec.snr_db;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (Index k = 0; k < spec.n_centers; ++k)
    {
        const Index flat = nodes[static_cast<std::size_t>(k)];
        const Index m = flat / geom.n_y;
        const Index n = flat % geom.n_y;
        const double mag = spec.min_amplitude + (spec.max_amplitude - spec.min_amplitude) * unit(rng);
        const double phase = 2.0 * std::numbers::pi * unit(rng);
        scene.centers.push_back({std::polar(mag, phase), grids.x[m], grids.y[n]});
    }
    return scene;
}

} // namespace sarsc
