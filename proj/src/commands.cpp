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

#include "sarsc/commands.hpp"

#include "sarsc/errors.hpp"
#include "sarsc/forward_model.hpp"
#include "sarsc/io.hpp"
#include "sarsc/metrics.hpp"
#include "sarsc/solvers.hpp"
#include "sarsc/training.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace sarsc::cli
{

namespace
{

using io::Json;

std::string make_id(std::size_t i)
{
    std::ostringstream os;
    os << std::setw(3) << std::setfill('0') << i;
    return os.str();
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void ensure_dir(const fs::path &dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw CliError(kDataError, "cannot create output directory " + dir.string() + ": " + ec.message());
    const fs::path probe = dir / ".sarsc_write_probe";
    {
        std::ofstream os(probe);
        if (!os)
            throw CliError(kDataError, "output directory " + dir.string() + " is not writable");
    }
    fs::remove(probe, ec);
}

void require_file(const fs::path &p, const char *what)
{
    if (!fs::is_regular_file(p))
        throw CliError(kDataError, std::string(what) + " not found: " + p.string());
}

template <typename F>
void parallel_for(std::size_t n, int jobs, F &&body)
{
    if (jobs <= 1 || n <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        const auto workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++)
                {
                    try
                    {
                        body(i);
                    }
                    catch (...)
                    {
                        errors[i] = std::current_exception();
                    }
                }
            });
    }
    for (auto &e : errors)
        if (e)
            std::rethrow_exception(e);
}

Json config_to_json(const RunConfig &c)
{
    const auto opt_path = [](const std::optional<fs::path> &p) { return p ? Json(p->string()) : Json(nullptr); };
    const auto opt_num = [](const std::optional<double> &v) { return v ? Json(*v) : Json(nullptr); };
    Json j;
    j["geometry"] = opt_path(c.geometry);
    j["scenes"] = opt_path(c.scenes);
    j["dict_cache"] = opt_path(c.dict_cache);
    j["results"] = opt_path(c.results);
    j["params"] = opt_path(c.params);
    j["out"] = c.out.string();
    j["solvers"] = c.solvers;
    j["lambda"] = c.lambda;
    j["stages"] = c.stages;
    j["seed"] = c.seed;
    j["jobs"] = c.jobs;
    j["count"] = c.count;
    j["sparsity"] = c.sparsity;
    j["snr_db"] = opt_num(c.snr_db);
    j["grid"] = c.grid;
    j["samples"] = c.samples;
    j["ista_step"] = opt_num(c.ista_step);
    j["ista_threshold"] = opt_num(c.ista_threshold);
    j["max_iters"] = c.max_iters;
    j["tol"] = c.tol;
    j["omp_k"] = c.omp_k;
    j["amp_damping"] = c.amp_damping;
    j["gammas"] = c.gammas;
    j["parallel"] = c.parallel;
    j["epochs"] = c.epochs;
    j["learning_rate"] = c.learning_rate;
    j["fd_rel_step"] = c.fd_rel_step;
    j["min_step"] = c.min_step;
    j["lambdas"] = c.lambdas;
    return j;
}

void write_manifest(const fs::path &dir, const std::string &command, const RunConfig &cfg,
                    const std::vector<fs::path> &inputs, std::optional<std::uint64_t> geometry_hash,
                    const std::vector<std::string> &outputs)
{
    Json j;
    j["tool"] = "sarsc";
    j["version"] = SARSC_VERSION;
    j["command"] = command;
    j["argv"] = cfg.argv;
    j["config"] = config_to_json(cfg);
    Json in = Json::array();
    for (const auto &p : inputs)
        in.push_back(Json{{"path", p.string()}, {"fnv1a", io::hex64(io::fnv1a(io::read_bytes(p)))}});
    j["inputs"] = std::move(in);
    j["geometry_hash"] = geometry_hash ? Json(io::hex64(*geometry_hash)) : Json(nullptr);
    j["outputs"] = outputs;
    io::write_text(dir / "manifest.json", io::dump(j));
}

RadarGeometry load_geometry(const fs::path &p)
{
    require_file(p, "geometry file");
    return io::geometry_from_json(io::read_json(p));
}

struct SceneSet
{
    RadarGeometry geometry;
    fs::path geometry_source;
    std::vector<std::string> ids;
    std::vector<fs::path> echo_paths;
    std::vector<std::optional<Scene>> scenes;
    std::vector<fs::path> scene_paths;

    [[nodiscard]] bool has_truth() const
    {
        return !scenes.empty() && std::all_of(scenes.begin(), scenes.end(), [](const auto &s) { return s.has_value(); });
    }

    [[nodiscard]] std::vector<fs::path> inputs() const
    {
        std::vector<fs::path> all = echo_paths;
        all.insert(all.end(), scene_paths.begin(), scene_paths.end());
        if (!geometry_source.empty())
            all.push_back(geometry_source);
        return all;
    }
};

SceneSet load_scene_set(const RunConfig &cfg)
{
    if (!cfg.scenes)
        throw CliError(kUsage, "--scenes is required");
    const fs::path dir = *cfg.scenes;
    if (!fs::is_directory(dir))
        throw CliError(kDataError, "scene directory not found: " + dir.string());

    SceneSet set;
    std::vector<fs::path> echoes;
    for (const auto &entry : fs::directory_iterator(dir))
    {
        const std::string name = entry.path().filename().string();
        if (entry.is_regular_file() && name.starts_with("echo_") && name.ends_with(".csig"))
            echoes.push_back(entry.path());
    }
    std::sort(echoes.begin(), echoes.end());
    if (echoes.empty())
        throw CliError(kDataError, "no echo_*.csig files in " + dir.string());

    if (cfg.geometry)
        set.geometry_source = *cfg.geometry;
    else if (fs::is_regular_file(dir / "geometry.json"))
        set.geometry_source = dir / "geometry.json";
    else
        throw CliError(kUsage, "--geometry is required when " + dir.string() + " has no geometry.json");
    set.geometry = load_geometry(set.geometry_source);

    const std::uint64_t ghash = geometry_hash(set.geometry);
    for (const auto &e : echoes)
    {
        const std::string stem = e.stem().string();
        const std::string id = stem.substr(std::string("echo_").size());
        set.ids.push_back(id);
        set.echo_paths.push_back(e);
        const fs::path scene_path = dir / ("scene_" + id + ".json");
        if (fs::is_regular_file(scene_path))
        {
            Scene s = io::scene_from_json(io::read_json(scene_path));
            if (geometry_hash(s.geometry) != ghash)
                throw CliError(kDataError, scene_path.string() + ": scene geometry hash " +
                                               io::hex64(geometry_hash(s.geometry)) + " != expected " +
                                               io::hex64(ghash));
            set.scenes.emplace_back(std::move(s));
            set.scene_paths.push_back(scene_path);
        }
        else
        {
            set.scenes.emplace_back(std::nullopt);
        }
    }
    return set;
}

ComplexSignal load_image(const SceneSet &set, std::size_t i)
{
    const ComplexSignal echo = io::read_signal(set.echo_paths[i]);
    if (echo.layout() != Layout::EchoFreqDomain || echo.dims() != set.geometry.sample_dims())
    {
        std::ostringstream os;
        os << set.echo_paths[i].string() << ": echo " << echo.dims().rows << "x" << echo.dims().cols
           << " is incompatible with geometry " << io::hex64(geometry_hash(set.geometry)) << " (expects "
           << set.geometry.n_freq << "x" << set.geometry.n_aspect << " frequency-domain samples)";
        throw CliError(kDataError, os.str());
    }
    return signal_to_image_domain(echo, set.geometry);
}

std::vector<ComplexSignal> load_images(const SceneSet &set)
{
    std::vector<ComplexSignal> out;
    out.reserve(set.echo_paths.size());
    for (std::size_t i = 0; i < set.echo_paths.size(); ++i)
        out.push_back(load_image(set, i));
    return out;
}

ComplexSignal clean_image(const Scene &scene)
{
    Scene clean = scene;
    clean.noise_snr_db.reset();
    return signal_to_image_domain(synthesize_echo(clean), clean.geometry);
}

UnfoldedParams initial_params(const RunConfig &cfg, std::vector<fs::path> &inputs)
{
    if (cfg.params)
    {
        require_file(*cfg.params, "params file");
        inputs.push_back(*cfg.params);
        return io::params_from_json(io::read_json(*cfg.params));
    }
    if (cfg.stages < 1)
        throw CliError(kUsage, "--stages must be >= 1");
    return UnfoldedParams::constant(cfg.stages);
}

SolverConfig solver_config(const RunConfig &cfg)
{
    SolverConfig sc;
    sc.lambda = cfg.lambda;
    sc.max_iters = cfg.max_iters;
    sc.tol = cfg.tol;
    sc.omp_k = cfg.omp_k;
    sc.amp_damping = cfg.amp_damping;
    sc.capture_trace = !cfg.gammas.empty();
    sc.validate();
    return sc;
}

/// ISTA defaults to t = 0.9 / L and the threshold matching lambda (rho = lambda t / 2).
std::vector<SolverSpec> solver_specs(const RunConfig &cfg, const Dictionary &image, const UnfoldedParams &unfolded,
                                     const std::vector<std::string> &names)
{
    std::vector<SolverSpec> specs;
    std::optional<double> lipschitz;
    for (const auto &name : names)
    {
        SolverSpec spec;
        try
        {
            spec.kind = solver_from_string(name);
        }
        catch (const std::invalid_argument &e)
        {
            throw CliError(kUsage, e.what());
        }
        spec.config = solver_config(cfg);
        spec.unfolded = unfolded;
        if (spec.kind == SolverKind::Ista)
        {
            if (cfg.ista_step)
            {
                spec.ista_step = *cfg.ista_step;
            }
            else
            {
                if (!lipschitz)
                    lipschitz = lipschitz_constant(image);
                spec.ista_step = 0.9 / *lipschitz;
            }
            spec.ista_threshold = cfg.ista_threshold.value_or(cfg.lambda * spec.ista_step / 2.0);
        }
        specs.push_back(spec);
    }
    return specs;
}

std::vector<std::string> solver_names(const RunConfig &cfg)
{
    if (!cfg.solvers.empty())
        return cfg.solvers;
    return {"unfolded", "ista", "omp", "amp"};
}

std::string fmt_num(double v)
{
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

} // namespace

fs::path resolve_cache_dir(const RunConfig &cfg)
{
    if (cfg.dict_cache)
        return *cfg.dict_cache;
    if (const char *env = std::getenv("SARSC_CACHE_DIR"); env && *env)
        return env;
    return ".sarsc_cache";
}

CachedDictionaries obtain_dictionaries(const RadarGeometry &geom, const fs::path &cache_dir, std::ostream &log)
{
    ensure_dir(cache_dir);
    const std::string key = io::hex64(geometry_hash(geom));
    CachedDictionaries out;
    out.frequency_path = cache_dir / ("dict_" + key + "_freq.scdt");
    out.image_path = cache_dir / ("dict_" + key + "_image.scdt");

    if (fs::exists(out.frequency_path) && fs::exists(out.image_path))
    {
        try
        {
            out.frequency = io::read_dictionary(out.frequency_path, geom);
            out.image = io::read_dictionary(out.image_path, geom);
            if (out.frequency.domain != Domain::Frequency || out.image.domain != Domain::Image)
                throw FormatError("domain tags are swapped");
            out.cache_hit = true;
            log << "cache hit: " << out.image_path.string() << "\n";
            return out;
        }
        catch (const HashMismatchError &e)
        {
            log << "warning: dictionary cache hash mismatch (" << e.what() << "); rebuilding\n";
        }
        catch (const FormatError &e)
        {
            log << "warning: dictionary cache invalid (" << e.what() << "); rebuilding\n";
        }
    }

    out.frequency = build_freq_dictionary(geom);
    out.image = to_image_domain(out.frequency, geom);
    io::write_dictionary(out.frequency_path, out.frequency);
    io::write_dictionary(out.image_path, out.image);
    log << "built dictionaries " << out.frequency.rows() << "x" << out.frequency.cols() << " -> "
        << out.image_path.string() << "\n";
    return out;
}

void cmd_gen(const RunConfig &cfg, std::ostream &log)
{
    RadarGeometry geom = cfg.geometry ? load_geometry(*cfg.geometry) : benchmark_geometry(cfg.grid, cfg.samples);
    if (cfg.count < 1)
        throw CliError(kUsage, "--count must be >= 1");
    if (cfg.sparsity < 0 || cfg.sparsity > geom.n_atoms())
        throw CliError(kUsage, "--sparsity must lie in [0, N_x*N_y]");
    ensure_dir(cfg.out);

    std::vector<std::string> outputs{"geometry.json"};
    io::write_text(cfg.out / "geometry.json", io::dump(io::geometry_to_json(geom)));
    const SceneSpec spec{cfg.sparsity, cfg.snr_db};
    for (Index i = 0; i < cfg.count; ++i)
    {
        const std::uint64_t scene_seed = splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(i)));
        const Scene scene = random_on_grid_scene(geom, spec, scene_seed);
        const ComplexSignal echo = synthesize_echo(scene, splitmix64(scene_seed));
        const std::string id = make_id(static_cast<std::size_t>(i));
        io::write_text(cfg.out / ("scene_" + id + ".json"), io::dump(io::scene_to_json(scene)));
        io::write_signal(cfg.out / ("echo_" + id + ".csig"), echo);
        outputs.push_back("scene_" + id + ".json");
        outputs.push_back("echo_" + id + ".csig");
    }
    std::vector<fs::path> inputs;
    if (cfg.geometry)
        inputs.push_back(*cfg.geometry);
    write_manifest(cfg.out, "gen", cfg, inputs, geometry_hash(geom), outputs);
    log << "generated " << cfg.count << " scene(s) in " << cfg.out.string() << "\n";
}

void cmd_dict(const RunConfig &cfg, std::ostream &log)
{
    fs::path geom_path;
    if (cfg.geometry)
        geom_path = *cfg.geometry;
    else if (cfg.scenes)
        geom_path = *cfg.scenes / "geometry.json";
    else
        throw CliError(kUsage, "--geometry is required");
    const RadarGeometry geom = load_geometry(geom_path);
    ensure_dir(cfg.out);
    const CachedDictionaries dicts = obtain_dictionaries(geom, resolve_cache_dir(cfg), log);
    write_manifest(cfg.out, "dict", cfg, {geom_path}, geometry_hash(geom),
                   {dicts.frequency_path.string(), dicts.image_path.string()});
}

void cmd_solve(const RunConfig &cfg, std::ostream &log)
{
    const SceneSet set = load_scene_set(cfg);
    std::vector<fs::path> inputs = set.inputs();
    const UnfoldedParams unfolded = initial_params(cfg, inputs);
    if (cfg.solvers.empty())
        throw CliError(kUsage, "--solver is required");
    ensure_dir(cfg.out);

    const CachedDictionaries dicts = obtain_dictionaries(set.geometry, resolve_cache_dir(cfg), log);
    const Dictionary &phi = dicts.image;
    const std::vector<SolverSpec> specs = solver_specs(cfg, phi, unfolded, cfg.solvers);
    const std::vector<ComplexSignal> images = load_images(set);

    std::vector<std::string> outputs;
    for (const auto &spec : specs)
    {
        const std::string name = spec.name();
        const fs::path dir = cfg.out / name;
        ensure_dir(dir);
        std::vector<std::optional<SupportMatchReport>> support(images.size());
        parallel_for(images.size(), cfg.jobs, [&](std::size_t i) {
            const std::string &id = set.ids[i];
            const SolveResult res = run_solver(phi, images[i], spec);
            io::write_text(dir / ("result_" + id + ".json"), io::dump(io::solve_summary_to_json(res, name)));
            io::write_signal(dir / ("z_" + id + ".csig"), io::code_as_signal(res.code));
            io::write_signal(dir / ("recon_" + id + ".csig"), reconstruct(phi, res.code));
            if (!cfg.gammas.empty())
            {
                if (res.reconstructions.size() + 1 != cfg.gammas.size())
                    throw CliError(kUsage, name + " produced " + std::to_string(res.reconstructions.size()) +
                                               " intermediate reconstructions; --gammas needs one more weight than that");
                const ComplexSignal fused = aggregate_reconstructions(images[i], res.reconstructions, cfg.gammas);
                io::write_signal(dir / ("sF_" + id + ".csig"), fused);
            }
            if (set.scenes[i])
                support[i] = support_match(*set.scenes[i], res.code);
        });

        if (set.has_truth())
        {
            std::ostringstream csv;
            csv << "scene_id,solver,precision,recall\n";
            for (std::size_t i = 0; i < images.size(); ++i)
                csv << set.ids[i] << ',' << name << ',' << fmt_num(support[i]->precision) << ','
                    << fmt_num(support[i]->recall) << '\n';
            io::write_text(dir / "support.csv", csv.str());
        }
        outputs.push_back(name + "/");
        log << "solved " << images.size() << " signal(s) with " << name << "\n";
    }
    write_manifest(cfg.out, "solve", cfg, inputs, geometry_hash(set.geometry), outputs);
}

void cmd_train(const RunConfig &cfg, std::ostream &log)
{
    const SceneSet set = load_scene_set(cfg);
    std::vector<fs::path> inputs = set.inputs();
    const UnfoldedParams init = initial_params(cfg, inputs);
    ensure_dir(cfg.out);
    const CachedDictionaries dicts = obtain_dictionaries(set.geometry, resolve_cache_dir(cfg), log);
    const std::vector<ComplexSignal> images = load_images(set);

    TrainConfig tc;
    tc.learning_rate = cfg.learning_rate;
    tc.epochs = cfg.epochs;
    tc.fd_rel_step = cfg.fd_rel_step;
    tc.lambda = cfg.lambda;
    tc.min_step = cfg.min_step;
    tc.seed = cfg.seed;
    const TrainReport report = train_unfolded(dicts.image, images, init, tc);

    io::write_text(cfg.out / "params.json", io::dump(io::params_to_json(report.final_params)));
    io::write_text(cfg.out / "train_report.json", io::dump(io::train_report_to_json(report)));
    write_manifest(cfg.out, "train", cfg, inputs, geometry_hash(set.geometry), {"params.json", "train_report.json"});
    log << "trained " << init.n_stages() << " stage(s) for " << cfg.epochs << " epoch(s): loss "
        << report.initial_loss << " -> " << report.final_loss << (report.improved ? "" : " (no improvement)") << "\n";
}

void cmd_eval(const RunConfig &cfg, std::ostream &log)
{
    const SceneSet set = load_scene_set(cfg);
    if (!set.has_truth())
        throw CliError(kDataError, "eval needs a scene_<id>.json next to every echo in " + cfg.scenes->string());
    if (!cfg.results)
        throw CliError(kUsage, "--results is required");
    const fs::path root = *cfg.results;

    std::vector<std::string> names = cfg.solvers;
    if (names.empty())
    {
        if (!fs::is_directory(root))
            throw CliError(kDataError, "results directory not found: " + root.string());
        for (const auto &entry : fs::directory_iterator(root))
            if (entry.is_directory() && fs::exists(entry.path() / ("recon_" + set.ids.front() + ".csig")))
                names.push_back(entry.path().filename().string());
        std::sort(names.begin(), names.end());
    }
    if (names.empty())
        throw CliError(kDataError, "no solver results under " + root.string());

    std::vector<fs::path> inputs = set.inputs();
    for (const auto &name : names)
        for (const auto &id : set.ids)
        {
            for (const char *kind : {"recon_", "z_"})
            {
                const fs::path p = root / name / (kind + id + ".csig");
                require_file(p, "result file");
                inputs.push_back(p);
            }
        }
    ensure_dir(cfg.out);

    std::vector<ComplexSignal> refs;
    for (const auto &s : set.scenes)
        refs.push_back(clean_image(*s));

    std::ostringstream psnr_csv, support_csv;
    psnr_csv << "signal_id,solver,psnr_db\n";
    support_csv << "scene_id,solver,precision,recall\n";
    for (const auto &name : names)
        for (std::size_t i = 0; i < set.ids.size(); ++i)
        {
            const std::string &id = set.ids[i];
            const ComplexSignal recon = io::read_signal(root / name / ("recon_" + id + ".csig"));
            const SparseCode z = io::signal_as_code(io::read_signal(root / name / ("z_" + id + ".csig")));
            if (recon.dims() != refs[i].dims())
                throw CliError(kDataError, (root / name / ("recon_" + id + ".csig")).string() +
                                               ": reconstruction dims do not match geometry " +
                                               io::hex64(geometry_hash(set.geometry)));
            psnr_csv << id << ',' << name << ',' << fmt_num(psnr(refs[i], recon)) << '\n';
            const SupportMatchReport rep = support_match(*set.scenes[i], z);
            support_csv << id << ',' << name << ',' << fmt_num(rep.precision) << ',' << fmt_num(rep.recall) << '\n';
        }
    io::write_text(cfg.out / "psnr.csv", psnr_csv.str());
    io::write_text(cfg.out / "support.csv", support_csv.str());
    write_manifest(cfg.out, "eval", cfg, inputs, geometry_hash(set.geometry), {"psnr.csv", "support.csv"});
    log << "evaluated " << names.size() << " solver(s) over " << set.ids.size() << " scene(s)\n";
}

void cmd_bench(const RunConfig &cfg, std::ostream &log)
{
    const SceneSet set = load_scene_set(cfg);
    std::vector<fs::path> inputs = set.inputs();
    const UnfoldedParams unfolded = initial_params(cfg, inputs);
    ensure_dir(cfg.out);
    const CachedDictionaries dicts = obtain_dictionaries(set.geometry, resolve_cache_dir(cfg), log);
    const std::vector<SolverSpec> specs = solver_specs(cfg, dicts.image, unfolded, solver_names(cfg));
    const std::vector<ComplexSignal> images = load_images(set);
    std::vector<ComplexSignal> refs;
    if (set.has_truth())
        for (const auto &s : set.scenes)
            refs.push_back(clean_image(*s));

    std::vector<BenchRow> rows;
    if (cfg.parallel)
    {
        rows.resize(specs.size());
        parallel_for(specs.size(), static_cast<int>(specs.size()), [&](std::size_t i) {
            rows[i] = bench_solvers(dicts.image, images, std::span(&specs[i], 1), refs).front();
            rows[i].solver += ":contended";
        });
    }
    else
    {
        rows = bench_solvers(dicts.image, images, specs, refs);
    }
    std::ostringstream csv;
    write_timing_csv(csv, rows);
    io::write_text(cfg.out / "timing.csv", csv.str());
    for (const auto &r : rows)
        if (!r.error.empty())
            log << "warning: " << r.solver << ": " << r.error << "\n";
    write_manifest(cfg.out, "bench", cfg, inputs, geometry_hash(set.geometry), {"timing.csv"});
    log << csv.str();
}

void cmd_sweep(const RunConfig &cfg, std::ostream &log)
{
    if (cfg.lambdas.empty())
        throw CliError(kUsage, "--lambdas is required");
    const SceneSet set = load_scene_set(cfg);
    std::vector<fs::path> inputs = set.inputs();
    const UnfoldedParams init = initial_params(cfg, inputs);
    ensure_dir(cfg.out);
    const CachedDictionaries dicts = obtain_dictionaries(set.geometry, resolve_cache_dir(cfg), log);
    const std::vector<ComplexSignal> images = load_images(set);
    std::vector<ComplexSignal> refs;
    if (set.has_truth())
        for (const auto &s : set.scenes)
            refs.push_back(clean_image(*s));
    else
        refs = images;

    std::ostringstream csv;
    csv << "lambda,final_loss,mean_psnr_db\n";
    for (double lambda : cfg.lambdas)
    {
        TrainConfig tc;
        tc.learning_rate = cfg.learning_rate;
        tc.epochs = cfg.epochs;
        tc.fd_rel_step = cfg.fd_rel_step;
        tc.lambda = lambda;
        tc.min_step = cfg.min_step;
        tc.seed = cfg.seed;
        const TrainReport report = train_unfolded(dicts.image, images, init, tc);
        double acc = 0.0;
        for (std::size_t i = 0; i < images.size(); ++i)
        {
            const SolveResult r = unfolded_ista_solve(dicts.image, images[i], report.final_params, false, lambda);
            acc += psnr(refs[i], reconstruct(dicts.image, r.code));
        }
        csv << fmt_num(lambda) << ',' << fmt_num(report.final_loss) << ','
            << fmt_num(acc / static_cast<double>(images.size())) << '\n';
        log << "lambda " << lambda << ": loss " << report.final_loss << "\n";
    }
    io::write_text(cfg.out / "sweep.csv", csv.str());
    write_manifest(cfg.out, "sweep", cfg, inputs, geometry_hash(set.geometry), {"sweep.csv"});
}

int exit_code_for(const std::exception &e)
{
    if (const auto *c = dynamic_cast<const CliError *>(&e))
        return c->code();
    if (dynamic_cast<const DivergenceError *>(&e) || dynamic_cast<const TrainingDivergedError *>(&e) ||
        dynamic_cast<const UndefinedMetricError *>(&e))
        return kNumericalFailure;
    return kDataError;
}

int run(const std::string &command, const RunConfig &cfg, std::ostream &log, std::ostream &err)
{
    static const std::map<std::string, void (*)(const RunConfig &, std::ostream &)> table{
        {"gen", cmd_gen},   {"dict", cmd_dict},   {"solve", cmd_solve}, {"train", cmd_train},
        {"eval", cmd_eval}, {"bench", cmd_bench}, {"sweep", cmd_sweep},
    };
    const auto it = table.find(command);
    if (it == table.end())
    {
        err << "error: unknown command '" << command << "'\n";
        return kUsage;
    }
    try
    {
        it->second(cfg, log);
        return kOk;
    }
    catch (const std::exception &e)
    {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

} // namespace sarsc::cli
