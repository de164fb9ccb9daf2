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

#include <cmath>
#include <complex>
#include <stdexcept>

namespace sarsc
{

namespace detail
{

// Unchecked shrink used by solver inner loops. Scaling by a nonnegative real keeps the
// phase bit-exact, and rho = 0 gives back x exactly since |x| / |x| == 1.
template <typename Real>
inline std::complex<Real> shrink(const std::complex<Real> &x, Real rho) noexcept
{
    const Real mag = std::abs(x);
    if (!(mag > rho) || mag == Real(0))
        return {Real(0), Real(0)};
    return x * ((mag - rho) / mag);
}

template <typename Real>
inline void check_threshold(Real rho)
{
    if (!(rho >= Real(0)) || !std::isfinite(rho))
        throw std::invalid_argument("soft_threshold: rho must be finite and >= 0");
}

} // namespace detail

/// Complex soft-thresholding S_rho(x) = sign(x) max(|x| - rho, 0), sign(0) = 0.
template <typename Real>
std::complex<Real> soft_threshold(const std::complex<Real> &x, Real rho)
{
    detail::check_threshold(rho);
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
        throw std::invalid_argument("soft_threshold: input must be finite");
    return detail::shrink(x, rho);
}

/// Elementwise soft-thresholding of any complex Eigen expression.
template <typename Derived>
auto soft_threshold(const Eigen::MatrixBase<Derived> &x, typename Derived::RealScalar rho)
{
    using Real = typename Derived::RealScalar;
    detail::check_threshold(rho);
    typename Derived::PlainObject out = x;
    for (Index i = 0; i < out.size(); ++i)
    {
        const auto v = out.data()[i];
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("soft_threshold: input element " + std::to_string(i) + " is not finite");
        out.data()[i] = detail::shrink<Real>(v, rho);
    }
    return out;
}

inline SparseCode soft_threshold_vec(const SparseCode &z, double rho)
{
    return {soft_threshold(z.values(), rho), z.grid_dims()};
}

} // namespace sarsc
