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

#pragma once

#include "sarsc/geometry.hpp"
#include "sarsc/types.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sarsc
{

struct ScatteringCenter
{
    Complex amplitude;
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const ScatteringCenter &, const ScatteringCenter &) = default;
};

struct Scene
{
    std::vector<ScatteringCenter> centers;
    RadarGeometry geometry;
    std::optional<double> noise_snr_db;

    friend bool operator==(const Scene &, const Scene &) = default;
};

struct GridNode
{
    Index m = 0;
    Index n = 0;

    [[nodiscard]] Index flat(Index n_y) const noexcept { return m * n_y + n; }
    friend bool operator==(const GridNode &, const GridNode &) = default;
};

/// Raised when a scatterer does not sit on a grid node; carries the nearest node.
class OffGridError : public std::invalid_argument
{
  public:
    OffGridError(const std::string &what, GridNode nearest) : std::invalid_argument(what), nearest_(nearest) {}
    [[nodiscard]] GridNode nearest() const noexcept { return nearest_; }

  private:
    GridNode nearest_;
};

GridNode nearest_node(const RadarGeometry &geom, double x, double y);

/// Echo E(f, phi) = sum_i A_i exp(-j 4 pi f / c (x_i cos phi + y_i sin phi)) on the geometry
/// sample grid, plus circular white Gaussian noise at scene.noise_snr_db (seeded) when set.
ComplexSignal synthesize_echo(const Scene &scene, std::uint64_t noise_seed = 0);

/// One-hot coefficients at each occupied node; colocated scatterers add.
SparseCode scene_to_sparse_code(const Scene &scene);

/// Row-major flattening: element (r, c) goes to r * cols + c.
ComplexSignal vectorize(const CMatrix &img, Layout layout);
CMatrix devectorize(const ComplexSignal &s);

/// 10 log10(P_signal / P_noise) with noise = noisy - clean.
double measured_snr_db(const ComplexSignal &noisy, const ComplexSignal &clean);

struct SceneSpec
{
    Index n_centers = 5;
    std::optional<double> snr_db;
    double min_amplitude = 1.0;
    double max_amplitude = 2.0;
};

/// K_0 scatterers on distinct grid nodes, amplitude modulus uniform in [min, max],
/// phase uniform.
Scene random_on_grid_scene(const RadarGeometry &geom, const SceneSpec &spec, std::uint64_t seed);

} // namespace sarsc
