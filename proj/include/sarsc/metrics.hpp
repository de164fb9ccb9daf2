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

#include "sarsc/forward_model.hpp"
#include "sarsc/solvers.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sarsc
{

inline constexpr double kPsnrCapDb = 300.0;

/// PSNR over magnitude images: 20 log10(max|ref| / rms(|ref| - |est|)), capped at 300 dB.
double psnr(const ComplexSignal &reference, const ComplexSignal &estimate);

struct MatchedPair
{
    Index true_index = 0;
    Index recovered_index = 0;
    double amplitude_rel_error = 0.0;
};

struct SupportMatchReport
{
    double precision = 1.0;
    double recall = 0.0;
    std::vector<MatchedPair> matched_pairs;
    double magnitude_threshold = 0.0;
    Index position_tolerance = 1;
    Index n_true = 0;
    Index n_detected = 0;
    /// Set when nothing cleared the threshold; precision is then reported as 1.
    bool no_detections = false;
};

inline constexpr double kDefaultRelativeMagnitudeThreshold = 0.05;

/// Detections are local magnitude maxima (8-neighbourhood on the N_x x N_y grid) above the
/// threshold, which defaults to 0.05 max|z|. Truth/detection pairs within position_tol
/// cells (Chebyshev distance) are matched greedily by distance, then by grid index.
SupportMatchReport support_match(const Scene &truth, const SparseCode &z,
                                 std::optional<double> magnitude_threshold = std::nullopt, Index position_tol = 1);

struct BenchRow
{
    std::string solver;
    double mean_s = 0.0;
    double std_s = 0.0;
    double mean_psnr_db = 0.0;
    Index n_ok = 0;
    std::string error;
};

/// Runs each solver sequentially over the batch; PSNR is measured against `references`
/// (or the inputs themselves when empty). Solver failures are recorded on the row.
std::vector<BenchRow> bench_solvers(const Dictionary &d, std::span<const ComplexSignal> signals,
                                    std::span<const SolverSpec> solvers,
                                    std::span<const ComplexSignal> references = {});

void write_timing_csv(std::ostream &os, std::span<const BenchRow> rows);

} // namespace sarsc
