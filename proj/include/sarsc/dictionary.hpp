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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace sarsc
{

enum class Domain : std::uint8_t
{
    Frequency = 0,
    Image = 1
};

/// Dense dictionary with one column per grid node (index m * N_y + n) and one row per
/// sample. Frequency rows are ordered p * N_phi + q; image rows follow the row-major
/// (N_f, N_phi) image produced by the image transform.
struct Dictionary
{
    CMatrix matrix;
    Domain domain = Domain::Frequency;
    std::uint64_t geometry_hash = 0;
    Dims sample_dims{};
    Dims grid_dims{};

    [[nodiscard]] Index rows() const noexcept { return matrix.rows(); }
    [[nodiscard]] Index cols() const noexcept { return matrix.cols(); }

    /// Wraps a bare matrix (tests, toy problems): sample dims (rows, 1), grid dims (cols, 1).
    static Dictionary from_matrix(CMatrix m, Domain domain = Domain::Image);
};

inline constexpr std::size_t kDefaultMemoryBudget = std::size_t{2} << 30;

Dictionary build_freq_dictionary(const RadarGeometry &geom, std::size_t memory_budget = kDefaultMemoryBudget);

/// Per-sample phase multiplier applied ahead of the inverse DFT. Empty means identity,
/// which is the default: range migration is negligible for desk-scale apertures.
class ChirpCompensation
{
  public:
    ChirpCompensation() = default;

    /// phases: one value in radians per echo sample, frequency-major.
    static ChirpCompensation from_phases(const RVector &phases);

    [[nodiscard]] bool is_identity() const noexcept { return factors_.size() == 0; }
    void apply(Eigen::Ref<CVector> samples) const;
    void unapply(Eigen::Ref<CVector> samples) const;

  private:
    CVector factors_;
};

/// Orthonormal 2-D inverse DFT over the (N_f, N_phi) sample grid, preceded by chirp
/// compensation. `inverse` undoes it exactly (up to rounding).
class ImageTransform
{
  public:
    ImageTransform(Dims sample_dims, ChirpCompensation compensation = {});

    [[nodiscard]] CVector forward(const CVector &echo) const;
    [[nodiscard]] CVector inverse(const CVector &image) const;
    [[nodiscard]] Dims sample_dims() const noexcept { return dims_; }

  private:
    Dims dims_;
    ChirpCompensation compensation_;
};

Dictionary to_image_domain(const Dictionary &d, const RadarGeometry &geom, const ChirpCompensation &cs = {});
Dictionary to_frequency_domain(const Dictionary &d, const RadarGeometry &geom, const ChirpCompensation &cs = {});
ComplexSignal signal_to_image_domain(const ComplexSignal &s, const RadarGeometry &geom,
                                     const ChirpCompensation &cs = {});

using BinaryMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Binary wedge below a line through the bottom-left cell at angle beta.
///
/// Cells are addressed with the origin at the centre of the bottom-left cell, so cell
/// (i, j) counted from the bottom-left sits at (j - 1, i - 1); it is set when
/// (i - 1) <= tan(beta) (j - 1). Storage is display order: row 0 is the top row.
BinaryMatrix angle_embedding(double beta, Index rows, Index cols);

/// I.i.d. standard normal matrix from a seeded 64-bit Mersenne twister.
RMatrix gaussian_random_embedding(Index rows, Index cols, std::uint64_t seed);

inline constexpr Index kDefaultShearChips = 20;

/// Splits a matrix into T diagonal chips of size ceil(H/T) x ceil(W/T). Chip i covers
/// rows [i h, min((i+1) h, H)) and columns [i w, min((i+1) w, W)); the short tail of a
/// ragged chip is zero-filled.
template <typename Derived>
std::vector<typename Derived::PlainObject> diagonal_shear_chips(const Eigen::MatrixBase<Derived> &m, Index chips)
{
    using Plain = typename Derived::PlainObject;
    const Index h = m.rows();
    const Index w = m.cols();
    if (chips < 1 || chips > std::min(h, w))
        throw std::invalid_argument("diagonal_shear: T must lie in [1, min(rows, cols)]");
    const Index h_sub = (h + chips - 1) / chips;
    const Index w_sub = (w + chips - 1) / chips;
    std::vector<Plain> out;
    out.reserve(static_cast<std::size_t>(chips));
    for (Index i = 0; i < chips; ++i)
    {
        Plain chip = Plain::Zero(h_sub, w_sub);
        const Index r0 = i * h_sub;
        const Index c0 = i * w_sub;
        const Index r1 = std::min((i + 1) * h_sub, h);
        const Index c1 = std::min((i + 1) * w_sub, w);
        if (r1 > r0 && c1 > c0)
            chip.topLeftCorner(r1 - r0, c1 - c0) = m.block(r0, c0, r1 - r0, c1 - c0);
        out.push_back(std::move(chip));
    }
    return out;
}

struct PriorMatrices
{
    std::optional<BinaryMatrix> angle_prior;
    std::vector<CMatrix> shear_chips;
    Index n_chips = 0;
    Dims chip_dims{};
    /// Shape of the dictionary the chips were cut from.
    Dims source_dims{};
};

PriorMatrices diagonal_shear(const Dictionary &d, Index chips = kDefaultShearChips);

/// Adds the angle prior sized to the chip dims (when the geometry carries a depression angle).
PriorMatrices build_priors(const Dictionary &d, const RadarGeometry &geom, Index chips = kDefaultShearChips);

enum class FuseMode
{
    Identity,
    ScaledResidual
};

/// Identity returns the dictionary unchanged. ScaledResidual adds
/// residual_scale * tile(mean of shear chips), cropped to the dictionary shape.
Dictionary fuse_priors(const Dictionary &d, const PriorMatrices &p, FuseMode mode = FuseMode::Identity,
                       double residual_scale = 0.0);

} // namespace sarsc
