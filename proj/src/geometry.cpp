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

#include "sarsc/geometry.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sarsc
{

namespace
{

void require(bool ok, const char *what)
{
    if (!ok)
        throw std::invalid_argument(std::string("RadarGeometry: ") + what);
}

class Fnv1a
{
  public:
    void bytes(const void *data, std::size_t n)
    {
        const auto *p = static_cast<const unsigned char *>(data);
        for (std::size_t i = 0; i < n; ++i)
        {
            state_ ^= p[i];
            state_ *= 0x100000001b3ULL;
        }
    }
    void u64(std::uint64_t v)
    {
        unsigned char b[8];
        for (int i = 0; i < 8; ++i)
            b[i] = static_cast<unsigned char>(v >> (8 * i));
        bytes(b, 8);
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void opt(const std::optional<double> &v)
    {
        const unsigned char present = v.has_value() ? 1 : 0;
        bytes(&present, 1);
        if (v)
            f64(*v);
    }
    [[nodiscard]] std::uint64_t digest() const { return state_; }

  private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

} // namespace

void RadarGeometry::validate() const
{
    require(n_freq >= 1, "n_freq must be >= 1");
    require(n_aspect >= 1, "n_aspect must be >= 1");
    require(n_x >= 1, "n_x must be >= 1");
    require(n_y >= 1, "n_y must be >= 1");
    require(std::isfinite(bandwidth) && bandwidth > 0.0, "bandwidth must be > 0");
    require(std::isfinite(center_frequency) && center_frequency > bandwidth / 2.0,
            "center_frequency must exceed bandwidth / 2");
    require(std::isfinite(wave_speed) && wave_speed > 0.0, "wave_speed must be > 0");
    require(std::isfinite(aspect_span) && aspect_span >= 0.0, "aspect_span must be finite and >= 0");
    require(std::isfinite(grid_x_min) && std::isfinite(grid_x_max) && grid_x_min < grid_x_max,
            "grid_x_min must be < grid_x_max");
    require(std::isfinite(grid_y_min) && std::isfinite(grid_y_max) && grid_y_min < grid_y_max,
            "grid_y_min must be < grid_y_max");
    if (depression_angle)
        require(*depression_angle > 0.0 && *depression_angle < std::numbers::pi / 2,
                "depression_angle must lie in (0, pi/2)");
    if (altitude)
        require(std::isfinite(*altitude) && *altitude > 0.0, "altitude must be > 0");
    if (aperture_length)
        require(std::isfinite(*aperture_length) && *aperture_length > 0.0, "aperture_length must be > 0");
    if (slant_range)
        require(std::isfinite(*slant_range) && *slant_range > 0.0, "slant_range must be > 0");
}

RVector uniform_samples(double lo, double hi, Index count)
{
    if (count < 1)
        throw std::invalid_argument("uniform_samples: count must be >= 1");
    if (count == 1)
        return RVector::Constant(1, 0.5 * (lo + hi));
    RVector out(count);
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (Index i = 0; i < count; ++i)
        out[i] = lo + step * static_cast<double>(i);
    out[count - 1] = hi;
    return out;
}

Grids make_grids(const RadarGeometry &geom)
{
    geom.validate();
    const double half_b = geom.bandwidth / 2.0;
    const double half_span = geom.aspect_span / 2.0;
    return {
        uniform_samples(geom.center_frequency - half_b, geom.center_frequency + half_b, geom.n_freq),
        uniform_samples(-half_span, half_span, geom.n_aspect),
        uniform_samples(geom.grid_x_min, geom.grid_x_max, geom.n_x),
        uniform_samples(geom.grid_y_min, geom.grid_y_max, geom.n_y),
    };
}

std::uint64_t geometry_hash(const RadarGeometry &geom)
{
    static constexpr char kTag[] = "sarsc.RadarGeometry.v1";
    Fnv1a h;
    h.bytes(kTag, sizeof(kTag) - 1);
    h.f64(geom.center_frequency);
    h.f64(geom.bandwidth);
    h.u64(static_cast<std::uint64_t>(geom.n_freq));
    h.f64(geom.aspect_span);
    h.u64(static_cast<std::uint64_t>(geom.n_aspect));
    h.f64(geom.wave_speed);
    h.f64(geom.grid_x_min);
    h.f64(geom.grid_x_max);
    h.f64(geom.grid_y_min);
    h.f64(geom.grid_y_max);
    h.u64(static_cast<std::uint64_t>(geom.n_x));
    h.u64(static_cast<std::uint64_t>(geom.n_y));
    h.opt(geom.depression_angle);
    h.opt(geom.altitude);
    h.opt(geom.aperture_length);
    h.opt(geom.slant_range);
    return h.digest();
}

double aspect_from_depression(double depression, double aperture_length, double altitude)
{
    if (!(depression > 0.0 && depression < std::numbers::pi / 2))
        throw std::invalid_argument("aspect_from_depression: depression must lie in (0, pi/2)");
    if (!(aperture_length > 0.0) || !(altitude > 0.0))
        throw std::invalid_argument("aspect_from_depression: aperture_length and altitude must be > 0");
    return 2.0 * std::atan(aperture_length * std::sin(depression) / (2.0 * altitude));
}

RadarGeometry benchmark_geometry(Index n_grid, Index n_samples)
{
    RadarGeometry g;
    g.center_frequency = 9.6e9;
    g.bandwidth = 0.6e9;
    g.n_freq = n_samples;
    g.n_aspect = n_samples;
    g.wave_speed = kSpeedOfLight;
    g.aspect_span = g.bandwidth / g.center_frequency;
    const double resolution = g.wave_speed / (2.0 * g.bandwidth);
    const double half_extent = 0.5 * static_cast<double>(n_grid - 1) * resolution;
    g.grid_x_min = -half_extent;
    g.grid_x_max = half_extent;
    g.grid_y_min = -half_extent;
    g.grid_y_max = half_extent;
    if (n_grid == 1)
    {
        g.grid_x_min = g.grid_y_min = -0.5 * resolution;
        g.grid_x_max = g.grid_y_max = 0.5 * resolution;
    }
    g.n_x = n_grid;
    g.n_y = n_grid;
    g.depression_angle = 17.0 * std::numbers::pi / 180.0;
    g.validate();
    return g;
}

} // namespace sarsc
