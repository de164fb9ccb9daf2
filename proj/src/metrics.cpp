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

#include "sarsc/metrics.hpp"

#include "sarsc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <tuple>

namespace sarsc
{

double psnr(const ComplexSignal &reference, const ComplexSignal &estimate)
{
    if (reference.size() != estimate.size() || reference.dims() != estimate.dims())
        throw std::invalid_argument("psnr: reference and estimate dims differ");
    const RVector ref = reference.values().cwiseAbs();
    const RVector est = estimate.values().cwiseAbs();
    const double peak = ref.maxCoeff();
    if (!(peak > 0.0))
        throw UndefinedMetricError("psnr: reference peak magnitude is zero");
    const double mse = (ref - est).squaredNorm() / static_cast<double>(ref.size());
    if (mse == 0.0)
        return kPsnrCapDb;
    return std::min(kPsnrCapDb, 20.0 * std::log10(peak / std::sqrt(mse)));
}

SupportMatchReport support_match(const Scene &truth, const SparseCode &z, std::optional<double> magnitude_threshold,
                                 Index position_tol)
{
    const RadarGeometry &g = truth.geometry;
    if (z.grid_dims() != g.grid_dims())
        throw std::invalid_argument("support_match: code grid does not match the scene geometry");
    const SparseCode truth_code = scene_to_sparse_code(truth);

    const RVector mag = z.values().cwiseAbs();
    const double peak = mag.size() ? mag.maxCoeff() : 0.0;
    SupportMatchReport rep;
    rep.position_tolerance = position_tol;
    rep.magnitude_threshold = magnitude_threshold.value_or(kDefaultRelativeMagnitudeThreshold * peak);

    std::vector<Index> detected;
    for (Index m = 0; m < g.n_x; ++m)
        for (Index n = 0; n < g.n_y; ++n)
        {
            const double v = mag[m * g.n_y + n];
            if (!(v > rep.magnitude_threshold))
                continue;
            bool is_peak = true;
            for (Index dm = -1; dm <= 1 && is_peak; ++dm)
                for (Index dn = -1; dn <= 1; ++dn)
                {
                    const Index mm = m + dm, nn = n + dn;
                    if ((dm == 0 && dn == 0) || mm < 0 || nn < 0 || mm >= g.n_x || nn >= g.n_y)
                        continue;
                    const Index other = mm * g.n_y + nn;
                    // Plateaus resolve to the lowest index.
                    if (mag[other] > v || (mag[other] == v && other < m * g.n_y + n))
                    {
                        is_peak = false;
                        break;
                    }
                }
            if (is_peak)
                detected.push_back(m * g.n_y + n);
        }

    std::vector<Index> truth_nodes;
    for (Index i = 0; i < truth_code.size(); ++i)
        if (truth_code.values()[i] != Complex(0.0, 0.0))
            truth_nodes.push_back(i);

    std::vector<std::tuple<Index, Index, Index>> candidates; // distance, true, detected
    for (Index t : truth_nodes)
        for (Index r : detected)
        {
            const Index dist = std::max(std::abs(t / g.n_y - r / g.n_y), std::abs(t % g.n_y - r % g.n_y));
            if (dist <= position_tol)
                candidates.emplace_back(dist, t, r);
        }
    std::sort(candidates.begin(), candidates.end());
    std::vector<Index> used_true, used_det;
    for (const auto &[dist, t, r] : candidates)
    {
        if (std::find(used_true.begin(), used_true.end(), t) != used_true.end() ||
            std::find(used_det.begin(), used_det.end(), r) != used_det.end())
            continue;
        used_true.push_back(t);
        used_det.push_back(r);
        const Complex a = truth_code.values()[t];
        rep.matched_pairs.push_back({t, r, std::abs(z.values()[r] - a) / std::abs(a)});
    }

    rep.n_true = static_cast<Index>(truth_nodes.size());
    rep.n_detected = static_cast<Index>(detected.size());
    const auto matched = static_cast<double>(rep.matched_pairs.size());
    rep.no_detections = detected.empty();
    rep.precision = detected.empty() ? 1.0 : matched / static_cast<double>(detected.size());
    rep.recall = truth_nodes.empty() ? 1.0 : matched / static_cast<double>(truth_nodes.size());
    return rep;
}

std::vector<BenchRow> bench_solvers(const Dictionary &d, std::span<const ComplexSignal> signals,
                                    std::span<const SolverSpec> solvers, std::span<const ComplexSignal> references)
{
    if (signals.empty() || solvers.empty())
        throw std::invalid_argument("bench_solvers: signals and solvers must be nonempty");
    if (!references.empty() && references.size() != signals.size())
        throw std::invalid_argument("bench_solvers: references must pair 1:1 with signals");

    std::vector<BenchRow> rows;
    for (const auto &spec : solvers)
    {
        BenchRow row;
        row.solver = spec.name();
        std::vector<double> times, psnrs;
        for (std::size_t i = 0; i < signals.size(); ++i)
        {
            try
            {
                const SolveResult res = run_solver(d, signals[i], spec);
                const ComplexSignal recon = reconstruct(d, res.code);
                const ComplexSignal &ref = references.empty() ? signals[i] : references[i];
                times.push_back(res.wall_time);
                psnrs.push_back(psnr(ref, recon));
            }
            catch (const std::exception &e)
            {
                if (row.error.empty())
                    row.error = "signal " + std::to_string(i) + ": " + e.what();
            }
        }
        row.n_ok = static_cast<Index>(times.size());
        if (!times.empty())
        {
            const auto n = static_cast<double>(times.size());
            double sum = 0.0, psum = 0.0;
            for (std::size_t i = 0; i < times.size(); ++i)
            {
                sum += times[i];
                psum += psnrs[i];
            }
            row.mean_s = sum / n;
            row.mean_psnr_db = psum / n;
            double var = 0.0;
            for (double t : times)
                var += (t - row.mean_s) * (t - row.mean_s);
            row.std_s = std::sqrt(var / n);
        }
        else
        {
            row.mean_s = row.std_s = row.mean_psnr_db = std::nan("");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_timing_csv(std::ostream &os, std::span<const BenchRow> rows)
{
    os << "solver,mean_s,std_s,mean_psnr_db\n";
    const auto old_precision = os.precision(9);
    for (const auto &r : rows)
        os << r.solver << ',' << r.mean_s << ',' << r.std_s << ',' << r.mean_psnr_db << '\n';
    os.precision(old_precision);
}

} // namespace sarsc
