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

#include "sarsc/dictionary.hpp"
#include "sarsc/types.hpp"

#include <span>
#include <string>
#include <vector>

namespace sarsc
{

inline constexpr double kDefaultLambda = 300.0;
inline constexpr double kDefaultIstaStep = 0.01;
inline constexpr double kDefaultIstaThreshold = 0.005;
inline constexpr Index kDefaultStages = 3;

/// Per-stage step sizes t^(k) > 0 and thresholds rho^(k) >= 0 of the unfolded network.
struct UnfoldedParams
{
    std::vector<double> step_sizes;
    std::vector<double> thresholds;

    [[nodiscard]] Index n_stages() const noexcept { return static_cast<Index>(step_sizes.size()); }
    void validate() const;

    static UnfoldedParams constant(Index stages, double step = kDefaultIstaStep,
                                   double threshold = kDefaultIstaThreshold);

    friend bool operator==(const UnfoldedParams &, const UnfoldedParams &) = default;
};

struct SolverConfig
{
    double lambda = kDefaultLambda;
    Index max_iters = 500;
    double tol = 1e-8;
    Index omp_k = 40;
    double amp_damping = 0.01;
    /// AMP threshold = amp_threshold_scale * residual standard deviation.
    double amp_threshold_scale = 1.5;
    bool capture_trace = false;

    void validate() const;
};

struct SolveResult
{
    SparseCode code;
    std::vector<SparseCode> trace;
    std::vector<ComplexSignal> reconstructions;
    double objective = 0.0;
    Index iterations = 0;
    double wall_time = 0.0;
    /// OMP only: atoms rejected because they made the support rank deficient.
    std::vector<Index> dropped_atoms;
};

double lasso_objective(const Dictionary &d, const SparseCode &z, const ComplexSignal &s, double lambda);

/// Same expression as lasso_objective, evaluated on the final unfolded iterate.
double reconstruction_loss(const Dictionary &d, const SparseCode &z_final, const ComplexSignal &s,
                           double lambda = kDefaultLambda);

ComplexSignal reconstruct(const Dictionary &d, const SparseCode &z);

/// Largest eigenvalue of Phi^H Phi by power iteration from a fixed start vector.
double lipschitz_constant(const Dictionary &d, Index iterations = 200);

/// Fixed-parameter ISTA from z = 0: x = z - t Phi^H (Phi z - s); z = S_rho(x).
/// Stops after cfg.max_iters or when the relative objective change drops below cfg.tol.
SolveResult ista_solve(const Dictionary &d, const ComplexSignal &s, const SolverConfig &cfg,
                       double step = kDefaultIstaStep, double threshold = kDefaultIstaThreshold);

/// Exactly N unfolded stages z = S_{rho_k}(z + t_k Phi^H (s - Phi z)) from z = 0.
SolveResult unfolded_ista_solve(const Dictionary &d, const ComplexSignal &s, const UnfoldedParams &params,
                                bool capture = false, double lambda = kDefaultLambda);

/// Orthogonal matching pursuit with normalized correlations and a column-pivoted QR
/// refit on the support after every selection. Ties go to the lowest column index.
SolveResult omp_solve(const Dictionary &d, const ComplexSignal &s, Index k_atoms, bool capture = false,
                      double lambda = kDefaultLambda);

/// Damped complex AMP with a soft-threshold denoiser and Onsager correction, run on the
/// column-normalized dictionary.
SolveResult amp_solve(const Dictionary &d, const ComplexSignal &s, const SolverConfig &cfg);

/// s_F = gammas[N] s + sum_i gammas[i] s_hat^(i).
ComplexSignal aggregate_reconstructions(const ComplexSignal &s, std::span<const ComplexSignal> recon_trace,
                                        std::span<const double> gammas);

enum class SolverKind
{
    Ista,
    Unfolded,
    Omp,
    Amp
};

std::string to_string(SolverKind kind);
SolverKind solver_from_string(const std::string &name);

/// Everything needed to run one solver; unused fields are ignored by the others.
struct SolverSpec
{
    SolverKind kind = SolverKind::Unfolded;
    SolverConfig config;
    double ista_step = kDefaultIstaStep;
    double ista_threshold = kDefaultIstaThreshold;
    UnfoldedParams unfolded = UnfoldedParams::constant(kDefaultStages);
    std::string label;

    [[nodiscard]] std::string name() const { return label.empty() ? to_string(kind) : label; }
};

SolveResult run_solver(const Dictionary &d, const ComplexSignal &s, const SolverSpec &spec);

} // namespace sarsc
