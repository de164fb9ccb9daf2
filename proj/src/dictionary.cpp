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

#include "sarsc/dictionary.hpp"

#include "sarsc/errors.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

namespace sarsc
{

namespace
{

using Fft = Eigen::FFT<double>;

Fft make_fft()
{
    Fft fft;
    fft.SetFlag(Fft::Unscaled);
    return fft;
}

// In-place 2-D DFT of a row-major (rows x cols) buffer; orthonormal in both directions.
void dft2(Fft &fft, CVector &buf, Dims dims, bool inverse)
{
    const auto rows = static_cast<std::size_t>(dims.rows);
    const auto cols = static_cast<std::size_t>(dims.cols);
    std::vector<Complex> in, out;

    in.resize(cols);
    for (std::size_t r = 0; r < rows; ++r)
    {
        for (std::size_t c = 0; c < cols; ++c)
            in[c] = buf[static_cast<Index>(r * cols + c)];
        inverse ? fft.inv(out, in) : fft.fwd(out, in);
        for (std::size_t c = 0; c < cols; ++c)
            buf[static_cast<Index>(r * cols + c)] = out[c];
    }
    in.resize(rows);
    for (std::size_t c = 0; c < cols; ++c)
    {
        for (std::size_t r = 0; r < rows; ++r)
            in[r] = buf[static_cast<Index>(r * cols + c)];
        inverse ? fft.inv(out, in) : fft.fwd(out, in);
        for (std::size_t r = 0; r < rows; ++r)
            buf[static_cast<Index>(r * cols + c)] = out[r];
    }
    buf *= 1.0 / std::sqrt(static_cast<double>(rows * cols));
}

void require_geometry_match(const Dictionary &d, const RadarGeometry &geom)
{
    if (d.rows() != geom.n_samples() || d.cols() != geom.n_atoms())
        throw std::invalid_argument("dictionary shape " + std::to_string(d.rows()) + "x" + std::to_string(d.cols()) +
                                    " does not match geometry " + std::to_string(geom.n_samples()) + "x" +
                                    std::to_string(geom.n_atoms()));
}

Dictionary transform_columns(const Dictionary &d, const RadarGeometry &geom, const ChirpCompensation &cs,
                             bool to_image)
{
    require_geometry_match(d, geom);
    Fft fft = make_fft();
    const Dims dims = geom.sample_dims();
    Dictionary out = d;
    out.domain = to_image ? Domain::Image : Domain::Frequency;
    out.sample_dims = dims;
    out.grid_dims = geom.grid_dims();
    CVector col(d.rows());
    for (Index j = 0; j < d.cols(); ++j)
    {
        col = d.matrix.col(j);
        if (to_image)
        {
            cs.apply(col);
            dft2(fft, col, dims, true);
        }
        else
        {
            dft2(fft, col, dims, false);
            cs.unapply(col);
        }
        out.matrix.col(j) = col;
    }
    return out;
}

} // namespace

Dictionary Dictionary::from_matrix(CMatrix m, Domain domain)
{
    Dictionary d;
    d.sample_dims = {m.rows(), 1};
    d.grid_dims = {m.cols(), 1};
    d.matrix = std::move(m);
    d.domain = domain;
    return d;
}

Dictionary build_freq_dictionary(const RadarGeometry &geom, std::size_t memory_budget)
{
    geom.validate();
    const auto rows = static_cast<std::size_t>(geom.n_samples());
    const auto cols = static_cast<std::size_t>(geom.n_atoms());
    constexpr std::size_t kEntryBytes = sizeof(Complex);
    if (cols != 0 && rows > std::numeric_limits<std::size_t>::max() / cols / kEntryBytes)
        throw ResourceError("build_freq_dictionary: dictionary size overflows");
    const std::size_t bytes = rows * cols * kEntryBytes;
    if (bytes > memory_budget)
        throw ResourceError("build_freq_dictionary: " + std::to_string(rows) + "x" + std::to_string(cols) +
                            " dictionary needs " + std::to_string(bytes) + " bytes, budget is " +
                            std::to_string(memory_budget));

    const Grids g = make_grids(geom);
    const double k0 = -4.0 * std::numbers::pi / geom.wave_speed;
    RVector cos_phi(g.aspect.size());
    RVector sin_phi(g.aspect.size());
    for (Index q = 0; q < g.aspect.size(); ++q)
    {
        cos_phi[q] = std::cos(g.aspect[q]);
        sin_phi[q] = std::sin(g.aspect[q]);
    }

    Dictionary d;
    d.matrix.resize(geom.n_samples(), geom.n_atoms());
    d.domain = Domain::Frequency;
    d.geometry_hash = geometry_hash(geom);
    d.sample_dims = geom.sample_dims();
    d.grid_dims = geom.grid_dims();
    for (Index m = 0; m < geom.n_x; ++m)
    {
        for (Index n = 0; n < geom.n_y; ++n)
        {
            const Index col = m * geom.n_y + n;
            for (Index p = 0; p < geom.n_freq; ++p)
            {
                const double kf = k0 * g.freq[p];
                for (Index q = 0; q < geom.n_aspect; ++q)
                {
                    const double phase = kf * (g.x[m] * cos_phi[q] + g.y[n] * sin_phi[q]);
                    d.matrix(p * geom.n_aspect + q, col) = std::polar(1.0, phase);
                }
            }
        }
    }
    return d;
}

ChirpCompensation ChirpCompensation::from_phases(const RVector &phases)
{
    ChirpCompensation cs;
    cs.factors_.resize(phases.size());
    for (Index i = 0; i < phases.size(); ++i)
        cs.factors_[i] = std::polar(1.0, phases[i]);
    return cs;
}

void ChirpCompensation::apply(Eigen::Ref<CVector> samples) const
{
    if (is_identity())
        return;
    if (samples.size() != factors_.size())
        throw std::invalid_argument("ChirpCompensation: sample count mismatch");
    samples.array() *= factors_.array();
}

void ChirpCompensation::unapply(Eigen::Ref<CVector> samples) const
{
    if (is_identity())
        return;
    if (samples.size() != factors_.size())
        throw std::invalid_argument("ChirpCompensation: sample count mismatch");
    samples.array() *= factors_.array().conjugate();
}

ImageTransform::ImageTransform(Dims sample_dims, ChirpCompensation compensation)
    : dims_(sample_dims), compensation_(std::move(compensation))
{
    if (dims_.rows < 1 || dims_.cols < 1)
        throw std::invalid_argument("ImageTransform: sample dims must be positive");
}

CVector ImageTransform::forward(const CVector &echo) const
{
    if (echo.size() != dims_.size())
        throw std::invalid_argument("ImageTransform: echo length mismatch");
    Fft fft = make_fft();
    CVector buf = echo;
    compensation_.apply(buf);
    dft2(fft, buf, dims_, true);
    return buf;
}

CVector ImageTransform::inverse(const CVector &image) const
{
    if (image.size() != dims_.size())
        throw std::invalid_argument("ImageTransform: image length mismatch");
    Fft fft = make_fft();
    CVector buf = image;
    dft2(fft, buf, dims_, false);
    compensation_.unapply(buf);
    return buf;
}

Dictionary to_image_domain(const Dictionary &d, const RadarGeometry &geom, const ChirpCompensation &cs)
{
    if (d.domain != Domain::Frequency)
        throw std::invalid_argument("to_image_domain: dictionary is not in the frequency domain");
    return transform_columns(d, geom, cs, true);
}

Dictionary to_frequency_domain(const Dictionary &d, const RadarGeometry &geom, const ChirpCompensation &cs)
{
    if (d.domain != Domain::Image)
        throw std::invalid_argument("to_frequency_domain: dictionary is not in the image domain");
    return transform_columns(d, geom, cs, false);
}

ComplexSignal signal_to_image_domain(const ComplexSignal &s, const RadarGeometry &geom, const ChirpCompensation &cs)
{
    if (s.layout() != Layout::EchoFreqDomain)
        throw std::invalid_argument("signal_to_image_domain: signal is not a frequency-domain echo");
    if (s.dims() != geom.sample_dims())
        throw std::invalid_argument("signal_to_image_domain: echo dims do not match geometry");
    ImageTransform tr(geom.sample_dims(), cs);
    return {tr.forward(s.values()), Layout::ImageDomain, geom.sample_dims()};
}

BinaryMatrix angle_embedding(double beta, Index rows, Index cols)
{
    if (!(beta > 0.0 && beta < std::numbers::pi / 2))
        throw std::invalid_argument("angle_embedding: beta must lie in (0, pi/2)");
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("angle_embedding: dims must be positive");
    // Compared as angles: tan(pi/4) rounds below 1 and would drop the 45 degree diagonal.
    constexpr double kOnLine = 1e-12;
    BinaryMatrix out = BinaryMatrix::Zero(rows, cols);
    for (Index i = 0; i < rows; ++i)     // i: height above the bottom row
        for (Index j = 0; j < cols; ++j) // j: distance from the left column
            if (std::atan2(static_cast<double>(i), static_cast<double>(j)) <= beta + kOnLine)
                out(rows - 1 - i, j) = 1;
    return out;
}

RMatrix gaussian_random_embedding(Index rows, Index cols, std::uint64_t seed)
{
    if (rows < 0 || cols < 0)
        throw std::invalid_argument("gaussian_random_embedding: negative dims");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    RMatrix out(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            out(i, j) = normal(rng);
    return out;
}

PriorMatrices diagonal_shear(const Dictionary &d, Index chips)
{
    PriorMatrices p;
    p.shear_chips = diagonal_shear_chips(d.matrix, chips);
    p.n_chips = chips;
    p.chip_dims = {p.shear_chips.front().rows(), p.shear_chips.front().cols()};
    p.source_dims = {d.rows(), d.cols()};
    return p;
}

PriorMatrices build_priors(const Dictionary &d, const RadarGeometry &geom, Index chips)
{
    PriorMatrices p = diagonal_shear(d, chips);
    if (geom.depression_angle)
        p.angle_prior = angle_embedding(*geom.depression_angle, p.chip_dims.rows, p.chip_dims.cols);
    return p;
}

Dictionary fuse_priors(const Dictionary &d, const PriorMatrices &p, FuseMode mode, double residual_scale)
{
    if (p.source_dims != Dims{d.rows(), d.cols()} || p.shear_chips.empty())
        throw std::invalid_argument("fuse_priors: priors were not derived from a dictionary of this shape");
    for (const auto &chip : p.shear_chips)
        if (chip.rows() != p.chip_dims.rows || chip.cols() != p.chip_dims.cols)
            throw std::invalid_argument("fuse_priors: shear chip dims are inconsistent");
    if (p.angle_prior && (p.angle_prior->rows() != p.chip_dims.rows || p.angle_prior->cols() != p.chip_dims.cols))
        throw std::invalid_argument("fuse_priors: angle prior dims differ from chip dims");
    if (!std::isfinite(residual_scale))
        throw std::invalid_argument("fuse_priors: residual scale must be finite");

    if (mode == FuseMode::Identity)
        return d;

    CMatrix mean = CMatrix::Zero(p.chip_dims.rows, p.chip_dims.cols);
    for (const auto &chip : p.shear_chips)
        mean += chip;
    mean /= static_cast<double>(p.shear_chips.size());

    Dictionary out = d;
    const Index h = p.chip_dims.rows;
    const Index w = p.chip_dims.cols;
    for (Index r0 = 0; r0 < d.rows(); r0 += h)
        for (Index c0 = 0; c0 < d.cols(); c0 += w)
        {
            const Index bh = std::min(h, d.rows() - r0);
            const Index bw = std::min(w, d.cols() - c0);
            out.matrix.block(r0, c0, bh, bw) += residual_scale * mean.topLeftCorner(bh, bw);
        }
    return out;
}

} // namespace sarsc
