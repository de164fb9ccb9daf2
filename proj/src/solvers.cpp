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

#include "sarsc/solvers.hpp"

#include "sarsc/errors.hpp"
#include "sarsc/soft_threshold.hpp"

#include <Eigen/QR>

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

namespace sarsc
{

namespace
{

using Clock = std::chrono::steady_clock;

constexpr double kDivergenceFactor = 1e6;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void require_compatible(const Dictionary &d, const ComplexSignal &s, const char *who)
{
    if (s.size() != d.rows())
        throw std::invalid_argument(std::string(who) + ": signal length " + std::to_string(s.size()) +
                                    " != dictionary rows " + std::to_string(d.rows()));
    if (d.grid_dims.size() != d.cols())
        throw std::invalid_argument(std::string(who) + ": dictionary grid dims do not match its column count");
}

void require_compatible(const Dictionary &d, const SparseCode &z, const char *who)
{
    if (z.size() != d.cols())
        throw std::invalid_argument(std::string(who) + ": code length " + std::to_string(z.size()) +
                                    " != dictionary cols " + std::to_string(d.cols()));
}

double l1_norm(const CVector &z)
{
    double acc = 0.0;
    for (Index i = 0; i < z.size(); ++i)
        acc += std::abs(z[i]);
    return acc;
}

bool all_finite(const CVector &v)
{
    for (Index i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag()))
            return false;
    return true;
}

Layout layout_of(const Dictionary &d)
{
    return d.domain == Domain::Frequency ? Layout::EchoFreqDomain : Layout::ImageDomain;
}

ComplexSignal as_signal(const Dictionary &d, CVector v)
{
    return {std::move(v), layout_of(d), d.sample_dims};
}

// One proximal-gradient sweep shared by fixed and unfolded ISTA, so the two agree
// bit for bit. On entry residual = Phi z - s; on exit phi_z and residual describe
// the updated z.
struct IstaState
{
    CVector z;
    CVector phi_z;
    CVector residual;
    CVector scratch;

    IstaState(const Dictionary &d, const ComplexSignal &s)
        : z(CVector::Zero(d.cols())), phi_z(CVector::Zero(d.rows())), residual(-s.values()), scratch(d.cols())
    {
    }

    void step(const CMatrix &phi, const CVector &s, double t, double rho)
    {
        scratch.noalias() = phi.adjoint() * residual;
        scratch = z - t * scratch;
        for (Index i = 0; i < z.size(); ++i)
            z[i] = detail::shrink(scratch[i], rho);
        phi_z.noalias() = phi * z;
        residual = phi_z - s;
    }

    [[nodiscard]] double objective(double lambda) const { return residual.squaredNorm() + lambda * l1_norm(z); }
};

} // namespace

void UnfoldedParams::validate() const
{
    if (step_sizes.empty())
        throw std::invalid_argument("UnfoldedParams: at least one stage is required");
    if (step_sizes.size() != thresholds.size())
        throw std::invalid_argument("UnfoldedParams: step_sizes and thresholds differ in length");
    for (std::size_t k = 0; k < step_sizes.size(); ++k)
    {
        if (!(step_sizes[k] > 0.0) || !std::isfinite(step_sizes[k]))
            throw std::invalid_argument("UnfoldedParams: step size " + std::to_string(k) + " must be finite and > 0");
        if (!(thresholds[k] >= 0.0) || !std::isfinite(thresholds[k]))
            throw std::invalid_argument("UnfoldedParams: threshold " + std::to_string(k) + " must be finite and >= 0");
    }
}

UnfoldedParams UnfoldedParams::constant(Index stages, double step, double threshold)
{
    const auto n = static_cast<std::size_t>(std::max<Index>(stages, 0));
    return {std::vector<double>(n, step), std::vector<double>(n, threshold)};
}

void SolverConfig::validate() const
{
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("SolverConfig: lambda must be finite and >= 0");
    if (max_iters < 1)
        throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
    if (!(tol >= 0.0))
        throw std::invalid_argument("SolverConfig: tol must be >= 0");
    if (omp_k < 1)
        throw std::invalid_argument("SolverConfig: omp_k must be >= 1");
    if (!(amp_damping > 0.0 && amp_damping <= 1.0))
        throw std::invalid_argument("SolverConfig: amp_damping must lie in (0, 1]");
    if (!(amp_threshold_scale >= 0.0) || !std::isfinite(amp_threshold_scale))
        throw std::invalid_argument("SolverConfig: amp_threshold_scale must be finite and >= 0");
}

double lasso_objective(const Dictionary &d, const SparseCode &z, const ComplexSignal &s, double lambda)
{
    require_compatible(d, s, "lasso_objective");
    require_compatible(d, z, "lasso_objective");
    CVector r(d.rows());
    r.noalias() = d.matrix * z.values();
    r -= s.values();
    return r.squaredNorm() + lambda * l1_norm(z.values());
}

double reconstruction_loss(const Dictionary &d, const SparseCode &z_final, const ComplexSignal &s, double lambda)
{
    return lasso_objective(d, z_final, s, lambda);
}

ComplexSignal reconstruct(const Dictionary &d, const SparseCode &z)
{
    require_compatible(d, z, "reconstruct");
    CVector out(d.rows());
    out.noalias() = d.matrix * z.values();
    return as_signal(d, std::move(out));
}

double lipschitz_constant(const Dictionary &d, Index iterations)
{
    if (d.cols() == 0 || d.rows() == 0)
        return 0.0;
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> normal;
    CVector v(d.cols());
    for (Index i = 0; i < v.size(); ++i)
        v[i] = Complex(normal(rng), normal(rng));
    v.normalize();
    CVector av(d.rows());
    double estimate = 0.0;
    for (Index it = 0; it < iterations; ++it)
    {
        av.noalias() = d.matrix * v;
        const double next = av.squaredNorm();
        v.noalias() = d.matrix.adjoint() * av;
        const double n = v.norm();
        if (n == 0.0)
            return 0.0;
        v /= n;
        if (std::abs(next - estimate) <= 1e-13 * next)
        {
            estimate = next;
            break;
        }
        estimate = next;
    }
    return estimate;
}

SolveResult ista_solve(const Dictionary &d, const ComplexSignal &s, const SolverConfig &cfg, double step,
                       double threshold)
{
    require_compatible(d, s, "ista_solve");
    cfg.validate();
    if (!(step > 0.0) || !std::isfinite(step))
        throw std::invalid_argument("ista_solve: step size must be finite and > 0");
    if (!(threshold >= 0.0) || !std::isfinite(threshold))
        throw std::invalid_argument("ista_solve: threshold must be finite and >= 0");

    const auto t0 = Clock::now();
    SolveResult out;
    IstaState st(d, s);
    const double initial = s.values().squaredNorm();
    double previous = initial;
    for (Index k = 1; k <= cfg.max_iters; ++k)
    {
        st.step(d.matrix, s.values(), step, threshold);
        const double obj = st.objective(cfg.lambda);
        if (!std::isfinite(obj) || (initial > 0.0 && obj > kDivergenceFactor * initial))
        {
            std::ostringstream os;
            os << "ISTA diverged at iteration " << k << " with step size t = " << step
               << "; the step must not exceed 1 / L (L = largest eigenvalue of Phi^H Phi)";
            throw DivergenceError(os.str());
        }
        if (cfg.capture_trace)
        {
            out.trace.emplace_back(st.z, d.grid_dims);
            out.reconstructions.push_back(as_signal(d, st.phi_z));
        }
        out.iterations = k;
        out.objective = obj;
        const double change = std::abs(previous - obj);
        if (change == 0.0 || change < cfg.tol * std::abs(previous))
            break;
        previous = obj;
    }
    out.code = SparseCode(st.z, d.grid_dims);
    out.wall_time = seconds_since(t0);
    return out;
}

SolveResult unfolded_ista_solve(const Dictionary &d, const ComplexSignal &s, const UnfoldedParams &params,
                                bool capture, double lambda)
{
    require_compatible(d, s, "unfolded_ista_solve");
    params.validate();
    const auto t0 = Clock::now();
    SolveResult out;
    IstaState st(d, s);
    for (std::size_t k = 0; k < params.step_sizes.size(); ++k)
    {
        st.step(d.matrix, s.values(), params.step_sizes[k], params.thresholds[k]);
        if (capture)
        {
            out.trace.emplace_back(st.z, d.grid_dims);
            out.reconstructions.push_back(as_signal(d, st.phi_z));
        }
    }
    out.iterations = params.n_stages();
    out.objective = st.objective(lambda);
    out.code = SparseCode(st.z, d.grid_dims);
    out.wall_time = seconds_since(t0);
    return out;
}

SolveResult omp_solve(const Dictionary &d, const ComplexSignal &s, Index k_atoms, bool capture, double lambda)
{
    require_compatible(d, s, "omp_solve");
    if (k_atoms < 1 || k_atoms > d.cols())
        throw std::invalid_argument("omp_solve: k_atoms must lie in [1, cols]");

    const auto t0 = Clock::now();
    SolveResult out;
    const Index cols = d.cols();
    const RVector norms = d.matrix.colwise().norm().transpose();
    const double s_norm = s.values().norm();
    CVector z = CVector::Zero(cols);

    std::vector<Index> support;
    std::vector<char> blocked(static_cast<std::size_t>(cols), 0);
    CVector residual = s.values();
    CVector corr(cols);
    CMatrix basis(d.rows(), 0);

    while (s_norm > 0.0 && static_cast<Index>(support.size()) < k_atoms)
    {
        corr.noalias() = d.matrix.adjoint() * residual;
        Index best = -1;
        double best_score = -1.0;
        for (Index j = 0; j < cols; ++j)
        {
            if (blocked[static_cast<std::size_t>(j)] || norms[j] == 0.0)
                continue;
            const double score = std::abs(corr[j]) / norms[j];
            if (score > best_score)
            {
                best_score = score;
                best = j;
            }
        }
        if (best < 0)
            break;

        CMatrix candidate(d.rows(), basis.cols() + 1);
        candidate.leftCols(basis.cols()) = basis;
        candidate.col(basis.cols()) = d.matrix.col(best);
        Eigen::ColPivHouseholderQR<CMatrix> qr(candidate);
        qr.setThreshold(1e-10);
        blocked[static_cast<std::size_t>(best)] = 1;
        if (qr.rank() < candidate.cols())
        {
            out.dropped_atoms.push_back(best);
            continue;
        }
        basis = std::move(candidate);
        support.push_back(best);
        const CVector coef = qr.solve(s.values());
        residual = s.values() - basis * coef;

        z.setZero();
        for (std::size_t i = 0; i < support.size(); ++i)
            z[support[i]] = coef[static_cast<Index>(i)];
        if (capture)
        {
            out.trace.emplace_back(z, d.grid_dims);
            out.reconstructions.push_back(as_signal(d, s.values() - residual));
        }
        if (residual.norm() < 1e-10 * s_norm)
            break;
    }

    out.iterations = static_cast<Index>(support.size());
    out.code = SparseCode(z, d.grid_dims);
    out.objective = residual.squaredNorm() + lambda * l1_norm(z);
    out.wall_time = seconds_since(t0);
    return out;
}

SolveResult amp_solve(const Dictionary &d, const ComplexSignal &s, const SolverConfig &cfg)
{
    require_compatible(d, s, "amp_solve");
    cfg.validate();
    const auto t0 = Clock::now();

    const Index m = d.rows();
    const Index n = d.cols();
    RVector inv_norm = d.matrix.colwise().norm().transpose();
    for (Index j = 0; j < n; ++j)
        inv_norm[j] = inv_norm[j] > 0.0 ? 1.0 / inv_norm[j] : 0.0;
    const double ratio = static_cast<double>(n) / static_cast<double>(m);
    const double s_norm = s.values().norm();

    SolveResult out;
    CVector x = CVector::Zero(n); // coefficients against unit-norm columns
    CVector residual = s.values();
    CVector pseudo(n), denoised(n), scaled(n), ax(m);
    for (Index it = 1; it <= cfg.max_iters; ++it)
    {
        pseudo.noalias() = d.matrix.adjoint() * residual;
        pseudo = x + inv_norm.cwiseProduct(pseudo);

        const double sigma = residual.norm() / std::sqrt(static_cast<double>(m));
        const double theta = cfg.amp_threshold_scale * sigma;
        double divergence = 0.0;
        for (Index j = 0; j < n; ++j)
        {
            denoised[j] = detail::shrink(pseudo[j], theta);
            const double mag = std::abs(pseudo[j]);
            if (mag > theta && mag > 0.0)
                divergence += 1.0 - theta / (2.0 * mag);
        }
        const double onsager = ratio * divergence / static_cast<double>(n);

        const CVector previous = x;
        x = (1.0 - cfg.amp_damping) * x + cfg.amp_damping * denoised;
        scaled = inv_norm.cwiseProduct(x);
        ax.noalias() = d.matrix * scaled;
        residual = s.values() - ax + onsager * residual;

        const double r_norm = residual.norm();
        if (!std::isfinite(r_norm) || !all_finite(x) || (s_norm > 0.0 && r_norm > kDivergenceFactor * s_norm))
        {
            std::ostringstream os;
            os << "AMP diverged at iteration " << it << " with amp_damping = " << cfg.amp_damping
               << "; increase damping by lowering amp_damping";
            throw DivergenceError(os.str());
        }
        if (cfg.capture_trace)
        {
            out.trace.emplace_back(scaled, d.grid_dims);
            out.reconstructions.push_back(as_signal(d, ax));
        }
        out.iterations = it;
        const double change = (x - previous).norm();
        if (change == 0.0 || change < cfg.tol * previous.norm())
            break;
    }
    out.code = SparseCode(inv_norm.cwiseProduct(x), d.grid_dims);
    out.objective = lasso_objective(d, out.code, s, cfg.lambda);
    out.wall_time = seconds_since(t0);
    return out;
}

ComplexSignal aggregate_reconstructions(const ComplexSignal &s, std::span<const ComplexSignal> recon_trace,
                                        std::span<const double> gammas)
{
    if (gammas.size() != recon_trace.size() + 1)
        throw std::invalid_argument("aggregate_reconstructions: expected " + std::to_string(recon_trace.size() + 1) +
                                    " weights, got " + std::to_string(gammas.size()));
    CVector out = gammas.back() * s.values();
    for (std::size_t i = 0; i < recon_trace.size(); ++i)
    {
        if (recon_trace[i].size() != s.size())
            throw std::invalid_argument("aggregate_reconstructions: reconstruction " + std::to_string(i) +
                                        " has the wrong length");
        out += gammas[i] * recon_trace[i].values();
    }
    return {std::move(out), s.layout(), s.dims()};
}

std::string to_string(SolverKind kind)
{
    switch (kind)
    {
    case SolverKind::Ista:
        return "ista";
    case SolverKind::Unfolded:
        return "unfolded";
    case SolverKind::Omp:
        return "omp";
    case SolverKind::Amp:
        return "amp";
    }
    return "unknown";
}

SolverKind solver_from_string(const std::string &name)
{
    if (name == "ista")
        return SolverKind::Ista;
    if (name == "unfolded")
        return SolverKind::Unfolded;
    if (name == "omp")
        return SolverKind::Omp;
    if (name == "amp")
        return SolverKind::Amp;
    throw std::invalid_argument("unknown solver '" + name + "' (expected ista|unfolded|omp|amp)");
}

SolveResult run_solver(const Dictionary &d, const ComplexSignal &s, const SolverSpec &spec)
{
    switch (spec.kind)
    {
    case SolverKind::Ista:
        return ista_solve(d, s, spec.config, spec.ista_step, spec.ista_threshold);
    case SolverKind::Unfolded:
        return unfolded_ista_solve(d, s, spec.unfolded, spec.config.capture_trace, spec.config.lambda);
    case SolverKind::Omp:
        return omp_solve(d, s, spec.config.omp_k, spec.config.capture_trace, spec.config.lambda);
    case SolverKind::Amp:
        return amp_solve(d, s, spec.config);
    }
    throw std::invalid_argument("run_solver: unknown solver kind");
}

} // namespace sarsc
