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
#include "sarsc/geometry.hpp"
#include "sarsc/types.hpp"

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sarsc::cli
{

namespace fs = std::filesystem;

enum ExitCode : int
{
    kOk = 0,
    kUsage = 2,
    kDataError = 3,
    kNumericalFailure = 4
};

class CliError : public std::runtime_error
{
  public:
    CliError(int code, const std::string &what) : std::runtime_error(what), code_(code) {}
    [[nodiscard]] int code() const noexcept { return code_; }

  private:
    int code_;
};

/// Options shared by every subcommand; each command reads the subset it needs.
struct RunConfig
{
    std::optional<fs::path> geometry;
    std::optional<fs::path> scenes;
    std::optional<fs::path> dict_cache;
    std::optional<fs::path> results;
    std::optional<fs::path> params;
    fs::path out = "sarsc_out";
    std::vector<std::string> solvers;
    double lambda = 300.0;
    Index stages = 3;
    std::uint64_t seed = 42;
    int jobs = 1;
    int verbosity = 0;

    // gen
    Index count = 1;
    Index sparsity = 5;
    std::optional<double> snr_db;
    Index grid = 32;
    Index samples = 32;

    // solve / bench
    std::optional<double> ista_step;
    std::optional<double> ista_threshold;
    Index max_iters = 500;
    double tol = 1e-8;
    Index omp_k = 40;
    double amp_damping = 0.01;
    std::vector<double> gammas;
    bool parallel = false;

    // train / sweep
    Index epochs = 200;
    double learning_rate = 1e-12;
    double fd_rel_step = 1e-4;
    double min_step = 1e-4;
    std::vector<double> lambdas;

    /// Original command line, copied into the manifest.
    std::vector<std::string> argv;
};

void cmd_gen(const RunConfig &cfg, std::ostream &log);
void cmd_dict(const RunConfig &cfg, std::ostream &log);
void cmd_solve(const RunConfig &cfg, std::ostream &log);
void cmd_train(const RunConfig &cfg, std::ostream &log);
void cmd_eval(const RunConfig &cfg, std::ostream &log);
void cmd_bench(const RunConfig &cfg, std::ostream &log);
void cmd_sweep(const RunConfig &cfg, std::ostream &log);

/// Dispatches by name and maps failures to exit codes, printing the error to `err`.
int run(const std::string &command, const RunConfig &cfg, std::ostream &log, std::ostream &err);

int exit_code_for(const std::exception &e);

/// Flag > SARSC_CACHE_DIR > ".sarsc_cache".
fs::path resolve_cache_dir(const RunConfig &cfg);

struct CachedDictionaries
{
    Dictionary frequency;
    Dictionary image;
    bool cache_hit = false;
    fs::path frequency_path;
    fs::path image_path;
};

/// Loads both dictionaries from the cache or rebuilds (and rewrites) them.
CachedDictionaries obtain_dictionaries(const RadarGeometry &geom, const fs::path &cache_dir, std::ostream &log);

} // namespace sarsc::cli
