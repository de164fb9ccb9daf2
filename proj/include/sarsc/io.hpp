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
#include "sarsc/forward_model.hpp"
#include "sarsc/geometry.hpp"
#include "sarsc/metrics.hpp"
#include "sarsc/solvers.hpp"
#include "sarsc/training.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace sarsc::io
{

using Json = nlohmann::ordered_json;

// --- CSIG: complex signal -------------------------------------------------------------
// "CSIG" | u16 version | u8 layout | u32 rows | u32 cols | rows*cols x (f32 re, f32 im)
// All integers and floats little-endian.
inline constexpr std::uint16_t kSignalVersion = 1;

std::string encode_signal(const ComplexSignal &s);
ComplexSignal decode_signal(std::string_view bytes);
void write_signal(const std::filesystem::path &path, const ComplexSignal &s);
ComplexSignal read_signal(const std::filesystem::path &path);

/// CSV with header "row,col,re,im", one line per element in row-major order.
void write_signal_csv(std::ostream &os, const ComplexSignal &s);

/// A sparse code reinterpreted as an (N_x, N_y) image for CSIG export.
ComplexSignal code_as_signal(const SparseCode &z);
SparseCode signal_as_code(const ComplexSignal &s);

// --- SCDT: dictionary cache -----------------------------------------------------------
// "SCDT" | u16 version | u8 domain | u32 rows | u32 cols | u64 geometry_hash |
// rows*cols x (f64 re, f64 im), row-major.
inline constexpr std::uint16_t kDictionaryVersion = 1;

std::string encode_dictionary(const Dictionary &d);
/// Decodes and checks the stored hash and shape against `geom`.
Dictionary decode_dictionary(std::string_view bytes, const RadarGeometry &geom);
void write_dictionary(const std::filesystem::path &path, const Dictionary &d);
Dictionary read_dictionary(const std::filesystem::path &path, const RadarGeometry &geom);
std::uintmax_t dictionary_file_size(Index rows, Index cols);

// --- JSON ----------------------------------------------------------------------------
Json geometry_to_json(const RadarGeometry &g);
RadarGeometry geometry_from_json(const Json &j);
Json scene_to_json(const Scene &s);
Scene scene_from_json(const Json &j);
Json params_to_json(const UnfoldedParams &p);
UnfoldedParams params_from_json(const Json &j);
Json train_report_to_json(const TrainReport &r);
TrainReport train_report_from_json(const Json &j);
/// objective, iterations, wall_time, nnz (|z| > 1e-6).
Json solve_summary_to_json(const SolveResult &r, const std::string &solver);

/// Deterministic text form: two-space indent, trailing newline.
std::string dump(const Json &j);
Json read_json(const std::filesystem::path &path);
void write_text(const std::filesystem::path &path, std::string_view text);
std::string read_bytes(const std::filesystem::path &path);

/// 64-bit FNV-1a over raw bytes.
std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t v);

} // namespace sarsc::io
