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

#include "sarsc/training.hpp"

#include "sarsc/soft_threshold.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sarsc
{

void TrainConfig::validate() const
{
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
        throw std::invalid_argument("TrainConfig: learning_rate must be finite and >= 0");
    if (epochs < 0)
        throw std::invalid_argument("TrainConfig: epochs must be >= 0");
    if (!(fd_rel_step > 0.0) || !std::isfinite(fd_rel_step))
        throw std::invalid_argument("TrainConfig: fd_rel_step must be finite and > 0");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("TrainConfig: lambda must be finite and >= 0");
    if (!(min_step > 0.0) || !std::isfinite(min_step))
        throw std::invalid_argument("TrainConfig: min_step must be finite and > 0");
}

BatchLoss::BatchLoss(const Dictionary &d, std::span<const ComplexSignal> signals, double lambda) : lambda_(lambda)
{
    if (signals.empty())
        throw std::invalid_argument("BatchLoss: training set is empty");
    const auto n = static_cast<Index>(signals.size());
    CMatrix s(d.rows(), n);
    s_energy_.resize(n);
    for (Index i = 0; i < n; ++i)
    {
        const auto &sig = signals[static_cast<std::size_t>(i)];
        if (sig.size() != d.rows())
            throw std::invalid_argument("BatchLoss: signal " + std::to_string(i) + " has length " +
                                        std::to_string(sig.size()) + ", dictionary expects " +
                                        std::to_string(d.rows()));
        s.col(i) = sig.values();
        s_energy_[i] = sig.values().squaredNorm();
    }
    gram_.noalias() = d.matrix.adjoint() * d.matrix;
    b_.noalias() = d.matrix.adjoint() * s;
}

double BatchLoss::operator()(std::span<const double> steps, std::span<const double> thresholds) const
{
    if (steps.empty() || steps.size() != thresholds.size())
        throw std::invalid_argument("BatchLoss: steps and thresholds must be nonempty and equal in length");
    const Index n = b_.cols();
    CMatrix z = CMatrix::Zero(b_.rows(), n);
    CMatrix gz(b_.rows(), n);
    CMatrix x(b_.rows(), n);
    for (std::size_t k = 0; k < steps.size(); ++k)
    {
        if (k == 0)
        {
            x = steps[k] * b_;
        }
        else
        {
            gz.noalias() = gram_ * z;
            x = z + steps[k] * (b_ - gz);
        }
        for (Index i = 0; i < x.size(); ++i)
            z.data()[i] = detail::shrink(x.data()[i], thresholds[k]);
    }
    gz.noalias() = gram_ * z;

    double total = 0.0;
    for (Index j = 0; j < n; ++j)
    {
        const double cross = b_.col(j).dot(z.col(j)).real();
        const double quad = z.col(j).dot(gz.col(j)).real();
        double l1 = 0.0;
        for (Index i = 0; i < z.rows(); ++i)
            l1 += std::abs(z(i, j));
        total += s_energy_[j] - 2.0 * cross + quad + lambda_ * l1;
    }
    return total / static_cast<double>(n);
}

double get_param(const UnfoldedParams &p, Index index)
{
    const Index n = p.n_stages();
    if (index < 0 || index >= 2 * n)
        throw std::invalid_argument("parameter index " + std::to_string(index) + " outside [0, 2N)");
    return index < n ? p.step_sizes[static_cast<std::size_t>(index)]
                     : p.thresholds[static_cast<std::size_t>(index - n)];
}

void set_param(UnfoldedParams &p, Index index, double value)
{
    const Index n = p.n_stages();
    if (index < 0 || index >= 2 * n)
        throw std::invalid_argument("parameter index " + std::to_string(index) + " outside [0, 2N)");
    if (index < n)
        p.step_sizes[static_cast<std::size_t>(index)] = value;
    else
        p.thresholds[static_cast<std::size_t>(index - n)] = value;
}

namespace
{

double fd_step(double theta, double rel)
{
    return rel * std::max(std::abs(theta), 1e-6);
}

double shifted(const std::function<double(const UnfoldedParams &)> &loss, UnfoldedParams p, Index index,
               double delta)
{
    set_param(p, index, get_param(p, index) + delta);
    return loss(p);
}

} // namespace

double fd_gradient(const std::function<double(const UnfoldedParams &)> &loss, const UnfoldedParams &params,
                   Index param_index, double fd_rel_step)
{
    const double h = fd_step(get_param(params, param_index), fd_rel_step);
    const double up = shifted(loss, params, param_index, h);
    const double down = shifted(loss, params, param_index, -h);
    return (up - down) / (2.0 * h);
}

double fd_gradient_5pt(const std::function<double(const UnfoldedParams &)> &loss, const UnfoldedParams &params,
                       Index param_index, double fd_rel_step)
{
    const double h = fd_step(get_param(params, param_index), fd_rel_step);
    const double p2 = shifted(loss, params, param_index, 2.0 * h);
    const double p1 = shifted(loss, params, param_index, h);
    const double m1 = shifted(loss, params, param_index, -h);
    const double m2 = shifted(loss, params, param_index, -2.0 * h);
    return (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h);
}

double fd_gradient(const Dictionary &d, std::span<const ComplexSignal> train_set, const UnfoldedParams &params,
                   Index param_index, double fd_rel_step, double lambda)
{
    const BatchLoss loss(d, train_set, lambda);
    return fd_gradient([&](const UnfoldedParams &p) { return loss(p); }, params, param_index, fd_rel_step);
}

TrainReport train_unfolded(const Dictionary &d, std::span<const ComplexSignal> train_set, const UnfoldedParams &init,
                           const TrainConfig &cfg)
{
    if (train_set.empty())
        throw std::invalid_argument("train_unfolded: training set is empty");
    init.validate();
    cfg.validate();

    const BatchLoss loss(d, train_set, cfg.lambda);
    const auto eval = [&](const UnfoldedParams &p) { return loss(p); };
    const Index n_params = 2 * init.n_stages();

    TrainReport report;
    report.initial_params = init;
    report.loss_history.reserve(static_cast<std::size_t>(cfg.epochs));

    UnfoldedParams params = init;
    UnfoldedParams last_good = init;
    std::vector<double> grad(static_cast<std::size_t>(n_params));
    for (Index epoch = 0; epoch < cfg.epochs; ++epoch)
    {
        const double current = eval(params);
        if (!std::isfinite(current))
            throw TrainingDivergedError("train_unfolded: non-finite loss at epoch " + std::to_string(epoch),
                                        last_good);
        if (epoch == 0)
            report.initial_loss = current;
        report.loss_history.push_back(current);
        last_good = params;

        for (Index i = 0; i < n_params; ++i)
        {
            const double g = fd_gradient(eval, params, i, cfg.fd_rel_step);
            if (!std::isfinite(g))
            {
                std::ostringstream os;
                os << "train_unfolded: non-finite gradient for parameter " << i << " at epoch " << epoch;
                throw TrainingDivergedError(os.str(), last_good);
            }
            grad[static_cast<std::size_t>(i)] = g;
        }
        const Index n = params.n_stages();
        for (Index i = 0; i < n_params; ++i)
        {
            const double updated = get_param(params, i) - cfg.learning_rate * grad[static_cast<std::size_t>(i)];
            set_param(params, i, std::max(updated, i < n ? cfg.min_step : 0.0));
        }
    }

    report.final_loss = eval(params);
    if (!std::isfinite(report.final_loss))
        throw TrainingDivergedError("train_unfolded: non-finite loss after the final update", last_good);
    if (cfg.epochs == 0)
        report.initial_loss = report.final_loss;
    report.final_params = params;
    report.improved = report.final_loss <= report.initial_loss;
    return report;
}

} // namespace sarsc
