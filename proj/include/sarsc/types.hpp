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

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace sarsc
{

using Index = Eigen::Index;

template <typename Real = double>
using ComplexT = std::complex<Real>;

template <typename Real = double>
using CVectorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real = double>
using CMatrixT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

using Complex = ComplexT<double>;
using CVector = CVectorT<double>;
using CMatrix = CMatrixT<double>;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/// Row-major view type used to reshape vectorized data without copies.
using CMatrixRowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Dims
{
    Index rows = 0;
    Index cols = 0;

    [[nodiscard]] Index size() const noexcept { return rows * cols; }
    friend bool operator==(const Dims &, const Dims &) = default;
};

/// Sample layout tag carried by every vectorized signal.
enum class Layout : std::uint8_t
{
    EchoFreqDomain = 0, ///< (N_f, N_phi) frequency/aspect samples, frequency-major.
    ImageDomain = 1     ///< 2-D image, row-major.
};

/// A vectorized complex echo or image. Element (r, c) lives at index r * cols + c.
class ComplexSignal
{
  public:
    ComplexSignal() = default;
    ComplexSignal(CVector values, Layout layout, Dims dims)
        : values_(std::move(values)), layout_(layout), dims_(dims)
    {
        if (dims_.rows < 1 || dims_.cols < 1)
            throw std::invalid_argument("ComplexSignal: dims must be positive");
        if (values_.size() != dims_.size())
            throw std::invalid_argument("ComplexSignal: values length " + std::to_string(values_.size()) +
                                        " != rows*cols " + std::to_string(dims_.size()));
    }

    static ComplexSignal zeros(Layout layout, Dims dims) { return {CVector::Zero(dims.size()), layout, dims}; }

    [[nodiscard]] const CVector &values() const noexcept { return values_; }
    [[nodiscard]] Layout layout() const noexcept { return layout_; }
    [[nodiscard]] Dims dims() const noexcept { return dims_; }
    [[nodiscard]] Index size() const noexcept { return values_.size(); }

  private:
    CVector values_;
    Layout layout_ = Layout::ImageDomain;
    Dims dims_{};
};

/// Complex coefficients over the N_x x N_y spatial grid; index m * N_y + n.
class SparseCode
{
  public:
    SparseCode() = default;
    SparseCode(CVector values, Dims grid_dims) : values_(std::move(values)), grid_dims_(grid_dims)
    {
        if (values_.size() != grid_dims_.size())
            throw std::invalid_argument("SparseCode: values length " + std::to_string(values_.size()) +
                                        " != N_x*N_y " + std::to_string(grid_dims_.size()));
    }

    static SparseCode zeros(Dims grid_dims) { return {CVector::Zero(grid_dims.size()), grid_dims}; }

    [[nodiscard]] const CVector &values() const noexcept { return values_; }
    [[nodiscard]] Dims grid_dims() const noexcept { return grid_dims_; }
    [[nodiscard]] Index size() const noexcept { return values_.size(); }

  private:
    CVector values_;
    Dims grid_dims_{};
};

} // namespace sarsc
