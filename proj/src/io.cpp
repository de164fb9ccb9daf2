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

#include "sarsc/io.hpp"

#include "sarsc/errors.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace sarsc::io
{

namespace
{

class Writer
{
  public:
    explicit Writer(std::size_t reserve) { buf_.reserve(reserve); }
    void raw(std::string_view s) { buf_.append(s); }
    template <typename U>
    void uint(U v)
    {
        for (std::size_t i = 0; i < sizeof(U); ++i)
            buf_.push_back(static_cast<char>(static_cast<unsigned char>(v >> (8 * i))));
    }
    void f32(float v) { uint(std::bit_cast<std::uint32_t>(v)); }
    void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }
    std::string take() { return std::move(buf_); }

  private:
    std::string buf_;
};

class Reader
{
  public:
    Reader(std::string_view bytes, const char *what) : bytes_(bytes), what_(what) {}

    void expect_magic(std::string_view magic)
    {
        need(magic.size());
        if (bytes_.substr(pos_, magic.size()) != magic)
            throw FormatError(std::string(what_) + ": bad magic, expected \"" + std::string(magic) + "\"");
        pos_ += magic.size();
    }
    template <typename U>
    U uint()
    {
        need(sizeof(U));
        U v = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i)
            v |= static_cast<U>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        pos_ += sizeof(U);
        return v;
    }
    float f32() { return std::bit_cast<float>(uint<std::uint32_t>()); }
    double f64() { return std::bit_cast<double>(uint<std::uint64_t>()); }
    [[nodiscard]] std::size_t remaining() const { return bytes_.size() - pos_; }

  private:
    void need(std::size_t n) const
    {
        if (bytes_.size() - pos_ < n)
            throw FormatError(std::string(what_) + ": truncated input");
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
    const char *what_;
};

constexpr std::size_t kSignalHeader = 4 + 2 + 1 + 4 + 4;
constexpr std::size_t kDictionaryHeader = 4 + 2 + 1 + 4 + 4 + 8;

double deg_to_rad(double deg)
{
    return deg * (std::numbers::pi / 180.0);
}

// Picks a degree value that converts back to exactly `rad`, so that
// write -> read -> write is byte-stable.
double rad_to_deg(double rad)
{
    const double d = rad * (180.0 / std::numbers::pi);
    if (deg_to_rad(d) == rad)
        return d;
    double lo = d, hi = d;
    for (int i = 0; i < 64; ++i)
    {
        lo = std::nextafter(lo, -std::numeric_limits<double>::infinity());
        if (deg_to_rad(lo) == rad)
            return lo;
        hi = std::nextafter(hi, std::numeric_limits<double>::infinity());
        if (deg_to_rad(hi) == rad)
            return hi;
    }
    return d;
}

Json opt_json(const std::optional<double> &v, bool angle)
{
    if (!v)
        return nullptr;
    return angle ? rad_to_deg(*v) : *v;
}

std::optional<double> opt_from(const Json &j, const char *key, bool angle)
{
    if (!j.contains(key) || j.at(key).is_null())
        return std::nullopt;
    const double v = j.at(key).get<double>();
    return angle ? deg_to_rad(v) : v;
}

Index count_from(const Json &j, const char *key)
{
    const auto &v = j.at(key);
    if (!v.is_number_integer())
        throw FormatError(std::string("geometry field '") + key + "' must be an integer");
    return v.get<Index>();
}

template <typename F>
auto json_guard(const char *what, F &&f)
{
    try
    {
        return f();
    }
    catch (const nlohmann::json::exception &e)
    {
        throw FormatError(std::string(what) + ": " + e.what());
    }
}

} // namespace

std::string encode_signal(const ComplexSignal &s)
{
    const Dims d = s.dims();
    if (d.rows > std::numeric_limits<std::uint32_t>::max() || d.cols > std::numeric_limits<std::uint32_t>::max())
        throw std::invalid_argument("encode_signal: dims exceed u32");
    Writer w(kSignalHeader + static_cast<std::size_t>(s.size()) * 8);
    w.raw("CSIG");
    w.uint<std::uint16_t>(kSignalVersion);
    w.uint<std::uint8_t>(static_cast<std::uint8_t>(s.layout()));
    w.uint<std::uint32_t>(static_cast<std::uint32_t>(d.rows));
    w.uint<std::uint32_t>(static_cast<std::uint32_t>(d.cols));
    for (Index i = 0; i < s.size(); ++i)
    {
        w.f32(static_cast<float>(s.values()[i].real()));
        w.f32(static_cast<float>(s.values()[i].imag()));
    }
    return w.take();
}

ComplexSignal decode_signal(std::string_view bytes)
{
    Reader r(bytes, "CSIG");
    r.expect_magic("CSIG");
    const auto version = r.uint<std::uint16_t>();
    if (version != kSignalVersion)
        throw FormatError("CSIG: unsupported version " + std::to_string(version));
    const auto layout = r.uint<std::uint8_t>();
    if (layout > static_cast<std::uint8_t>(Layout::ImageDomain))
        throw FormatError("CSIG: unknown layout tag " + std::to_string(layout));
    const auto rows = r.uint<std::uint32_t>();
    const auto cols = r.uint<std::uint32_t>();
    const std::uint64_t n = std::uint64_t{rows} * cols;
    if (rows == 0 || cols == 0 || r.remaining() != n * 8)
        throw FormatError("CSIG: payload size does not match " + std::to_string(rows) + "x" + std::to_string(cols));
    CVector v(static_cast<Index>(n));
    for (Index i = 0; i < v.size(); ++i)
    {
        const float re = r.f32();
        const float im = r.f32();
        v[i] = Complex(re, im);
    }
    return {std::move(v), static_cast<Layout>(layout), {static_cast<Index>(rows), static_cast<Index>(cols)}};
}

void write_signal(const std::filesystem::path &path, const ComplexSignal &s)
{
    write_text(path, encode_signal(s));
}

ComplexSignal read_signal(const std::filesystem::path &path)
{
    try
    {
        return decode_signal(read_bytes(path));
    }
    catch (const FormatError &e)
    {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_signal_csv(std::ostream &os, const ComplexSignal &s)
{
    os << "row,col,re,im\n";
    const auto old = os.precision(17);
    const Dims d = s.dims();
    for (Index r = 0; r < d.rows; ++r)
        for (Index c = 0; c < d.cols; ++c)
        {
            const Complex v = s.values()[r * d.cols + c];
            os << r << ',' << c << ',' << v.real() << ',' << v.imag() << '\n';
        }
    os.precision(old);
}

ComplexSignal code_as_signal(const SparseCode &z)
{
    return {z.values(), Layout::ImageDomain, z.grid_dims()};
}

SparseCode signal_as_code(const ComplexSignal &s)
{
    return {s.values(), s.dims()};
}

std::string encode_dictionary(const Dictionary &d)
{
    if (d.rows() > std::numeric_limits<std::uint32_t>::max() || d.cols() > std::numeric_limits<std::uint32_t>::max())
        throw std::invalid_argument("encode_dictionary: dims exceed u32");
    Writer w(static_cast<std::size_t>(dictionary_file_size(d.rows(), d.cols())));
    w.raw("SCDT");
    w.uint<std::uint16_t>(kDictionaryVersion);
    w.uint<std::uint8_t>(static_cast<std::uint8_t>(d.domain));
    w.uint<std::uint32_t>(static_cast<std::uint32_t>(d.rows()));
    w.uint<std::uint32_t>(static_cast<std::uint32_t>(d.cols()));
    w.uint<std::uint64_t>(d.geometry_hash);
    for (Index i = 0; i < d.rows(); ++i)
        for (Index j = 0; j < d.cols(); ++j)
        {
            w.f64(d.matrix(i, j).real());
            w.f64(d.matrix(i, j).imag());
        }
    return w.take();
}

Dictionary decode_dictionary(std::string_view bytes, const RadarGeometry &geom)
{
    Reader r(bytes, "SCDT");
    r.expect_magic("SCDT");
    const auto version = r.uint<std::uint16_t>();
    if (version != kDictionaryVersion)
        throw FormatError("SCDT: unsupported version " + std::to_string(version));
    const auto domain = r.uint<std::uint8_t>();
    if (domain > static_cast<std::uint8_t>(Domain::Image))
        throw FormatError("SCDT: unknown domain tag " + std::to_string(domain));
    const auto rows = r.uint<std::uint32_t>();
    const auto cols = r.uint<std::uint32_t>();
    const auto hash = r.uint<std::uint64_t>();
    const std::uint64_t expected = geometry_hash(geom);
    if (hash != expected)
        throw HashMismatchError("SCDT: geometry hash " + hex64(hash) + " does not match requested geometry " +
                                    hex64(expected),
                                expected, hash);
    if (rows != geom.n_samples() || cols != geom.n_atoms())
        throw FormatError("SCDT: shape does not match geometry");
    if (r.remaining() != std::uint64_t{rows} * cols * 16)
        throw FormatError("SCDT: payload size does not match header");

    Dictionary d;
    d.domain = static_cast<Domain>(domain);
    d.geometry_hash = hash;
    d.sample_dims = geom.sample_dims();
    d.grid_dims = geom.grid_dims();
    d.matrix.resize(rows, cols);
    for (Index i = 0; i < d.rows(); ++i)
        for (Index j = 0; j < d.cols(); ++j)
        {
            const double re = r.f64();
            const double im = r.f64();
            d.matrix(i, j) = Complex(re, im);
        }
    return d;
}

void write_dictionary(const std::filesystem::path &path, const Dictionary &d)
{
    write_text(path, encode_dictionary(d));
}

Dictionary read_dictionary(const std::filesystem::path &path, const RadarGeometry &geom)
{
    return decode_dictionary(read_bytes(path), geom);
}

std::uintmax_t dictionary_file_size(Index rows, Index cols)
{
    return kDictionaryHeader + static_cast<std::uintmax_t>(rows) * static_cast<std::uintmax_t>(cols) * 16;
}

Json geometry_to_json(const RadarGeometry &g)
{
    Json j;
    j["center_frequency"] = g.center_frequency;
    j["bandwidth"] = g.bandwidth;
    j["n_freq"] = g.n_freq;
    j["aspect_span"] = rad_to_deg(g.aspect_span);
    j["n_aspect"] = g.n_aspect;
    j["wave_speed"] = g.wave_speed;
    j["grid_x_min"] = g.grid_x_min;
    j["grid_x_max"] = g.grid_x_max;
    j["grid_y_min"] = g.grid_y_min;
    j["grid_y_max"] = g.grid_y_max;
    j["n_x"] = g.n_x;
    j["n_y"] = g.n_y;
    j["depression_angle"] = opt_json(g.depression_angle, true);
    j["altitude"] = opt_json(g.altitude, false);
    j["aperture_length"] = opt_json(g.aperture_length, false);
    j["slant_range"] = opt_json(g.slant_range, false);
    return j;
}

RadarGeometry geometry_from_json(const Json &j)
{
    return json_guard("geometry", [&] {
        RadarGeometry g;
        g.center_frequency = j.at("center_frequency").get<double>();
        g.bandwidth = j.at("bandwidth").get<double>();
        g.n_freq = count_from(j, "n_freq");
        g.aspect_span = deg_to_rad(j.at("aspect_span").get<double>());
        g.n_aspect = count_from(j, "n_aspect");
        g.wave_speed = j.contains("wave_speed") ? j.at("wave_speed").get<double>() : kSpeedOfLight;
        g.grid_x_min = j.at("grid_x_min").get<double>();
        g.grid_x_max = j.at("grid_x_max").get<double>();
        g.grid_y_min = j.at("grid_y_min").get<double>();
        g.grid_y_max = j.at("grid_y_max").get<double>();
        g.n_x = count_from(j, "n_x");
        g.n_y = count_from(j, "n_y");
        g.depression_angle = opt_from(j, "depression_angle", true);
        g.altitude = opt_from(j, "altitude", false);
        g.aperture_length = opt_from(j, "aperture_length", false);
        g.slant_range = opt_from(j, "slant_range", false);
        g.validate();
        return g;
    });
}

Json scene_to_json(const Scene &s)
{
    Json j;
    j["geometry"] = geometry_to_json(s.geometry);
    j["noise_snr_db"] = s.noise_snr_db ? Json(*s.noise_snr_db) : Json(nullptr);
    Json centers = Json::array();
    for (const auto &c : s.centers)
        centers.push_back(Json{{"re", c.amplitude.real()}, {"im", c.amplitude.imag()}, {"x", c.x}, {"y", c.y}});
    j["centers"] = std::move(centers);
    return j;
}

Scene scene_from_json(const Json &j)
{
    return json_guard("scene", [&] {
        Scene s;
        s.geometry = geometry_from_json(j.at("geometry"));
        if (j.contains("noise_snr_db") && !j.at("noise_snr_db").is_null())
            s.noise_snr_db = j.at("noise_snr_db").get<double>();
        for (const auto &c : j.at("centers"))
            s.centers.push_back({Complex(c.at("re").get<double>(), c.at("im").get<double>()), c.at("x").get<double>(),
                                 c.at("y").get<double>()});
        return s;
    });
}

Json params_to_json(const UnfoldedParams &p)
{
    return Json{{"t", p.step_sizes}, {"rho", p.thresholds}};
}

UnfoldedParams params_from_json(const Json &j)
{
    return json_guard("unfolded params", [&] {
        UnfoldedParams p{j.at("t").get<std::vector<double>>(), j.at("rho").get<std::vector<double>>()};
        p.validate();
        return p;
    });
}

Json train_report_to_json(const TrainReport &r)
{
    Json j;
    j["initial"] = params_to_json(r.initial_params);
    j["final"] = params_to_json(r.final_params);
    j["loss_history"] = r.loss_history;
    j["initial_loss"] = r.initial_loss;
    j["final_loss"] = r.final_loss;
    j["improved"] = r.improved;
    return j;
}

TrainReport train_report_from_json(const Json &j)
{
    return json_guard("train report", [&] {
        TrainReport r;
        r.initial_params = params_from_json(j.at("initial"));
        r.final_params = params_from_json(j.at("final"));
        r.loss_history = j.at("loss_history").get<std::vector<double>>();
        r.initial_loss = j.value("initial_loss", 0.0);
        r.final_loss = j.value("final_loss", 0.0);
        r.improved = j.value("improved", false);
        return r;
    });
}

Json solve_summary_to_json(const SolveResult &r, const std::string &solver)
{
    Index nnz = 0;
    for (Index i = 0; i < r.code.size(); ++i)
        if (std::abs(r.code.values()[i]) > 1e-6)
            ++nnz;
    Json j;
    j["solver"] = solver;
    j["objective"] = r.objective;
    j["iterations"] = r.iterations;
    j["wall_time"] = r.wall_time;
    j["nnz"] = nnz;
    if (!r.dropped_atoms.empty())
        j["dropped_atoms"] = r.dropped_atoms;
    return j;
}

std::string dump(const Json &j)
{
    return j.dump(2) + "\n";
}

Json read_json(const std::filesystem::path &path)
{
    const std::string text = read_bytes(path);
    try
    {
        return Json::parse(text);
    }
    catch (const nlohmann::json::exception &e)
    {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_text(const std::filesystem::path &path, std::string_view text)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!os)
        throw std::runtime_error("failed writing " + path.string());
}

std::string read_bytes(const std::filesystem::path &path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw FormatError("cannot open " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::uint64_t fnv1a(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes)
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v)
{
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

} // namespace sarsc::io
