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

#include "sarsc/solvers.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace sarsc
{

struct TrainConfig
{
    double learning_rate = 1e-12;
    Index epochs = 200;
    double fd_rel_step = 1e-4;
    double lambda = kDefaultLambda;
    double min_step = 1e-4;
    /// Recorded with the report; full-batch training itself draws no random numbers.
    std::uint64_t seed = 0;

    void validate() const;
};

struct TrainReport
{
    std::vector<double> loss_history; ///< mean L_c at the start of each epoch
    UnfoldedParams initial_params;
    UnfoldedParams final_params;
    double initial_loss = 0.0;
    double final_loss = 0.0;
    bool improved = false;
};

class TrainingDivergedError : public std::runtime_error
{
  public:
    TrainingDivergedError(const std::string &what, UnfoldedParams last_good)
        : std::runtime_error(what), last_good_(std::move(last_good))
    {
    }
    [[nodiscard]] const UnfoldedParams &last_good() const noexcept { return last_good_; }

  private:
    UnfoldedParams last_good_;
};

/// Mean reconstruction loss of an unfolded network over a fixed batch of signals.
///
/// Precomputes G = Phi^H Phi and B = Phi^H S once, then runs every stage as
/// z <- S_rho(z + t (b - G z)) for the whole batch, and evaluates
/// ||s - Phi z||^2 = ||s||^2 - 2 Re(b^H z) + z^H G z. Thresholds and steps are not
/// validated so finite differences may straddle zero.
class BatchLoss
{
  public:
    BatchLoss(const Dictionary &d, std::span<const ComplexSignal> signals, double lambda);

    [[nodiscard]] double operator()(std::span<const double> steps, std::span<const double> thresholds) const;
    [[nodiscard]] double operator()(const UnfoldedParams &p) const { return (*this)(p.step_sizes, p.thresholds); }
    [[nodiscard]] Index batch_size() const noexcept { return b_.cols(); }

  private:
    CMatrix gram_;
    CMatrix b_;
    RVector s_energy_;
    double lambda_;
};

/// Flat parameter addressing: [0, N) are step sizes, [N, 2N) thresholds.
double get_param(const UnfoldedParams &p, Index index);
void set_param(UnfoldedParams &p, Index index, double value);

/// Central difference (L(theta + h) - L(theta - h)) / 2h, h = rel_step * max(|theta|, 1e-6).
double fd_gradient(const std::function<double(const UnfoldedParams &)> &loss, const UnfoldedParams &params,
                   Index param_index, double fd_rel_step);

double fd_gradient(const Dictionary &d, std::span<const ComplexSignal> train_set, const UnfoldedParams &params,
                   Index param_index, double fd_rel_step, double lambda = kDefaultLambda);

/// Five-point stencil (-L(+2h) + 8L(+h) - 8L(-h) + L(-2h)) / 12h with the same h rule.
double fd_gradient_5pt(const std::function<double(const UnfoldedParams &)> &loss, const UnfoldedParams &params,
                       Index param_index, double fd_rel_step);

/// Projected full-batch gradient descent on the 2N unfolded scalars.
TrainReport train_unfolded(const Dictionary &d, std::span<const ComplexSignal> train_set,
                           const UnfoldedParams &init, const TrainConfig &cfg);

} // namespace sarsc
