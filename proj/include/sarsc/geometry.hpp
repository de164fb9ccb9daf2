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

#include "sarsc/types.hpp"

#include <cstdint>
#include <optional>

namespace sarsc
{

inline constexpr double kSpeedOfLight = 299792458.0;

/// Radar acquisition and reconstruction-grid description. Angles are radians.
///
/// The frequency axis is sampled over [f_c - B/2, f_c + B/2], the aspect axis over
/// [-span/2, +span/2]; both with inclusive endpoints. The reconstruction grid spans
/// [grid_x_min, grid_x_max] x [grid_y_min, grid_y_max], also inclusive.
struct RadarGeometry
{
    double center_frequency = 9.6e9;
    double bandwidth = 0.6e9;
    Index n_freq = 32;
    double aspect_span = 0.0625;
    Index n_aspect = 32;
    double wave_speed = kSpeedOfLight;
    double grid_x_min = -1.0;
    double grid_x_max = 1.0;
    double grid_y_min = -1.0;
    double grid_y_max = 1.0;
    Index n_x = 32;
    Index n_y = 32;
    std::optional<double> depression_angle;
    std::optional<double> altitude;
    std::optional<double> aperture_length;
    std::optional<double> slant_range;

    /// Throws std::invalid_argument naming the first violated invariant.
    void validate() const;

    [[nodiscard]] Index n_samples() const noexcept { return n_freq * n_aspect; }
    [[nodiscard]] Index n_atoms() const noexcept { return n_x * n_y; }
    [[nodiscard]] Dims sample_dims() const noexcept { return {n_freq, n_aspect}; }
    [[nodiscard]] Dims grid_dims() const noexcept { return {n_x, n_y}; }

    friend bool operator==(const RadarGeometry &, const RadarGeometry &) = default;
};

struct Grids
{
    RVector freq;
    RVector aspect;
    RVector x;
    RVector y;
};

/// Uniform inclusive-endpoint samples on [lo, hi]; a single sample sits at the midpoint.
RVector uniform_samples(double lo, double hi, Index count);

Grids make_grids(const RadarGeometry &geom);

/// FNV-1a digest over the canonical binary encoding of every geometry field.
std::uint64_t geometry_hash(const RadarGeometry &geom);

/// Aspect extent swept over a synthetic aperture of length L_s flown at altitude H,
/// seen at depression angle beta: tan(phi / 2) = L_s sin(beta) / (2 H).
double aspect_from_depression(double depression, double aperture_length, double altitude);

/// X-band geometry with an n_grid x n_grid reconstruction grid spaced at the range
/// resolution c / 2B and n_samples x n_samples echo samples. The aspect span is chosen
/// so cross-range resolution matches range resolution.
RadarGeometry benchmark_geometry(Index n_grid = 32, Index n_samples = 32);

} // namespace sarsc
