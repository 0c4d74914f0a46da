// SPDX-License-Identifier: Apache-2.0
//
// nfpr - near-field passive radar imaging toolkit
// Copyright (C) 2026 The nfpr Authors
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

#ifndef NFPR_EXPORT_HPP
#define NFPR_EXPORT_HPP

#include "nfpr/metrics.hpp"

#include <openssl/evp.h>

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace nfpr
{
    // Shortest round-trip decimal form
    inline std::string format_double(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        std::array<char, 64> buf{};
        auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
        return std::string(buf.data(), end);
    }

    inline double parse_double(const std::string &s)
    {
        double v = 0.0;
        const char *b = s.data(), *e = s.data() + s.size();
        auto [ptr, ec] = std::from_chars(b, e, v);
        if (ec != std::errc{} || ptr != e)
            throw std::invalid_argument("not a number: '" + s + "'");
        return v;
    }

    // ============================================================================================
    // 16-bit PGM maps
    // ============================================================================================
    enum class MapScale
    {
        db,
        linear
    };

    struct PgmOptions
    {
        MapScale scale = MapScale::db;
        double floor_db = -30.0; // amplitude dB mapped to gray 0
        double pitch_col = 0.0;  // m, recorded in the sidecar
        double pitch_row = 0.0;
    };

    // Values are expected normalized to peak 1
    inline std::uint16_t gray_level(double v, const PgmOptions &opt)
    {
        double t = 0.0;
        if (opt.scale == MapScale::linear)
            t = std::clamp(v, 0.0, 1.0);
        else
        {
            if (!(opt.floor_db < 0.0))
                throw std::invalid_argument("pgm: dB floor must be negative");
            if (!(v > 0.0))
                return 0;
            t = std::clamp((20.0 * std::log10(v) - opt.floor_db) / -opt.floor_db, 0.0, 1.0);
        }
        return std::uint16_t(std::lround(t * 65535.0));
    }

    // Writes `path` (binary P5, maxval 65535, big-endian) and `path`.txt. Rows are written top to bottom.
    inline std::vector<std::filesystem::path> write_pgm(const std::filesystem::path &path, const Array2D<double> &map,
                                                        const PgmOptions &opt = {})
    {
        if (map.size() == 0)
            throw std::invalid_argument("pgm: empty map");
        std::string bytes;
        bytes.reserve(map.size() * 2);
        for (double v : map.data())
        {
            const std::uint16_t g = gray_level(v, opt);
            bytes.push_back(char(g >> 8));
            bytes.push_back(char(g & 0xFF));
        }
        {
            std::ofstream os(path, std::ios::binary);
            if (!os)
                throw IoError("cannot open '" + path.string() + "' for writing");
            os << "P5\n"
               << map.cols() << ' ' << map.rows() << "\n65535\n";
            os.write(bytes.data(), std::streamsize(bytes.size()));
            if (!os)
                throw IoError("write failed: '" + path.string() + "'");
        }
        std::filesystem::path side = path;
        side += ".txt";
        std::ofstream ss(side);
        if (!ss)
            throw IoError("cannot open '" + side.string() + "' for writing");
        ss << "scale = " << (opt.scale == MapScale::db ? "db" : "linear") << '\n'
           << "floor_db = " << format_double(opt.floor_db) << '\n'
           << "width = " << map.cols() << '\n'
           << "height = " << map.rows() << '\n'
           << "pitch_col_m = " << format_double(opt.pitch_col) << '\n'
           << "pitch_row_m = " << format_double(opt.pitch_row) << '\n';
        if (!ss)
            throw IoError("write failed: '" + side.string() + "'");
        return {path, side};
    }

    inline Array2D<std::uint16_t> read_pgm(const std::filesystem::path &path)
    {
        std::ifstream is(path, std::ios::binary);
        if (!is)
            throw IoError("cannot open '" + path.string() + "'");
        std::string magic;
        std::size_t w = 0, h = 0, maxval = 0;
        is >> magic >> w >> h >> maxval;
        is.get();
        if (magic != "P5" || maxval != 65535 || w == 0 || h == 0)
            throw IoError("'" + path.string() + "' is not a 16-bit binary PGM");
        Array2D<std::uint16_t> out(h, w);
        std::vector<unsigned char> raw(w * h * 2);
        is.read(reinterpret_cast<char *>(raw.data()), std::streamsize(raw.size()));
        if (!is)
            throw IoError("'" + path.string() + "' is truncated");
        for (std::size_t i = 0; i < w * h; ++i)
            out.data()[i] = std::uint16_t((raw[2 * i] << 8) | raw[2 * i + 1]);
        return out;
    }

    // ============================================================================================
    // Raw volumes: little-endian float32, x fastest, with a key = value header
    // ============================================================================================
    inline std::string provenance_string(const CombinedImage &image)
    {
        std::string s;
        for (const auto &[n, f] : image.provenance)
        {
            if (!s.empty())
                s += ',';
            s += std::to_string(n) + ':' + std::to_string(f);
        }
        return s;
    }

    // Writes base.raw and base.hdr
    inline std::vector<std::filesystem::path> write_volume(const std::filesystem::path &base, const CombinedImage &image)
    {
        const ImagingVolume &g = image.geometry;
        if (image.intensity.size() != g.voxel_count())
            throw std::invalid_argument("write_volume: intensity does not match the geometry");
        std::filesystem::path raw = base, hdr = base;
        raw += ".raw";
        hdr += ".hdr";

        std::string bytes(image.intensity.size() * 4, '\0');
        for (std::size_t i = 0; i < image.intensity.size(); ++i)
        {
            const auto u = std::bit_cast<std::uint32_t>(float(image.intensity[i]));
            for (int b = 0; b < 4; ++b)
                bytes[4 * i + std::size_t(b)] = char((u >> (8 * b)) & 0xFF);
        }
        {
            std::ofstream os(raw, std::ios::binary);
            if (!os)
                throw IoError("cannot open '" + raw.string() + "' for writing");
            os.write(bytes.data(), std::streamsize(bytes.size()));
            if (!os)
                throw IoError("write failed: '" + raw.string() + "'");
        }
        std::ofstream hs(hdr);
        if (!hs)
            throw IoError("cannot open '" + hdr.string() + "' for writing");
        hs << "format = nfpr-volume\n"
           << "version = 1\n"
           << "data_file = " << raw.filename().string() << '\n'
           << "dtype = float32_le\n"
           << "order = x_fastest\n"
           << "nx = " << g.nx() << "\nny = " << g.ny() << "\nnz = " << g.nz() << '\n'
           << "x_min = " << format_double(g.min(0)) << "\nx_max = " << format_double(g.max(0)) << '\n'
           << "y_min = " << format_double(g.min(1)) << "\ny_max = " << format_double(g.max(1)) << '\n'
           << "z_min = " << format_double(g.min(2)) << "\nz_max = " << format_double(g.max(2)) << '\n'
           << "pitch_x_m = " << format_double(g.pitch(0)) << "\npitch_y_m = " << format_double(g.pitch(1))
           << "\npitch_z_m = " << format_double(g.pitch(2)) << '\n'
           << "mode = " << to_string(image.mode) << '\n'
           << "peak = " << format_double(image.peak) << '\n'
           << "empty = " << (image.empty ? 1 : 0) << '\n'
           << "terms = " << provenance_string(image) << '\n';
        if (!hs)
            throw IoError("write failed: '" + hdr.string() + "'");
        return {raw, hdr};
    }

    inline std::map<std::string, std::string> read_key_values(const std::filesystem::path &path)
    {
        std::ifstream is(path);
        if (!is)
            throw IoError("cannot open '" + path.string() + "'");
        std::map<std::string, std::string> kv;
        std::string line;
        while (std::getline(is, line))
        {
            const auto eq = line.find(" = ");
            if (eq == std::string::npos)
                continue;
            kv[line.substr(0, eq)] = line.substr(eq + 3);
        }
        return kv;
    }

    // Accepts the header, the raw file or the common base path
    inline CombinedImage read_volume(std::filesystem::path path)
    {
        if (path.extension() == ".raw" || path.extension() == ".hdr")
            path.replace_extension();
        std::filesystem::path hdr = path;
        hdr += ".hdr";
        const auto kv = read_key_values(hdr);
        auto get = [&](const std::string &key) -> const std::string &
        {
            auto it = kv.find(key);
            if (it == kv.end())
                throw IoError("'" + hdr.string() + "': missing key '" + key + "'");
            return it->second;
        };
        if (get("format") != "nfpr-volume" || get("dtype") != "float32_le")
            throw IoError("'" + hdr.string() + "' is not a volume header");
        try
        {
            ImagingVolume g(parse_double(get("x_min")), parse_double(get("x_max")), std::stoull(get("nx")),
                            parse_double(get("y_min")), parse_double(get("y_max")), std::stoull(get("ny")),
                            parse_double(get("z_min")), parse_double(get("z_max")), std::stoull(get("nz")));
            CombinedImage image(g);
            image.mode = combine_mode_from_string(get("mode"));
            image.peak = parse_double(get("peak"));
            image.empty = get("empty") == "1";
            std::stringstream terms(get("terms"));
            std::string term;
            while (std::getline(terms, term, ','))
            {
                const auto colon = term.find(':');
                image.provenance.emplace_back(std::stoull(term.substr(0, colon)), std::stoull(term.substr(colon + 1)));
            }

            const std::filesystem::path raw = hdr.parent_path() / get("data_file");
            std::ifstream is(raw, std::ios::binary);
            if (!is)
                throw IoError("cannot open '" + raw.string() + "'");
            std::vector<unsigned char> bytes(g.voxel_count() * 4);
            is.read(reinterpret_cast<char *>(bytes.data()), std::streamsize(bytes.size()));
            if (!is || is.peek() != std::char_traits<char>::eof())
                throw IoError("'" + raw.string() + "' does not match the header size");
            image.intensity.resize(g.voxel_count());
            for (std::size_t i = 0; i < image.intensity.size(); ++i)
            {
                std::uint32_t u = 0;
                for (int b = 0; b < 4; ++b)
                    u |= std::uint32_t(bytes[4 * i + std::size_t(b)]) << (8 * b);
                image.intensity[i] = double(std::bit_cast<float>(u));
            }
            return image;
        }
        catch (const std::invalid_argument &e)
        {
            throw IoError("'" + hdr.string() + "': " + e.what());
        }
    }

    // ============================================================================================
    // Metrics table
    // ============================================================================================
    inline std::string metrics_csv(std::span<const MetricsReport> reports)
    {
        std::string out = "label,peak_x_m,peak_y_m,peak_z_m,localization_error_m,ghost_to_target_db,"
                          "peak_to_artifact_db,coverage,entropy,peak_sidelobe_db,empty_image,terms\n";
        for (const auto &r : reports)
        {
            auto truth = [&](double v)
            { return r.has_truth ? format_double(v) : std::string(); };
            out += r.label + ',' + format_double(r.peak_position.x()) + ',' + format_double(r.peak_position.y()) + ',' +
                   format_double(r.peak_position.z()) + ',' + truth(r.localization_error) + ',' +
                   truth(r.ghost_to_target_db) + ',' + truth(-r.ghost_to_target_db) + ',' + truth(r.coverage) + ',' +
                   format_double(r.entropy) + ',' + format_double(r.peak_sidelobe_db) + ',' +
                   (r.empty_image ? "1" : "0") + ',' + r.provenance + '\n';
        }
        return out;
    }

    inline void write_text(const std::filesystem::path &path, const std::string &text)
    {
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw IoError("cannot open '" + path.string() + "' for writing");
        os << text;
        if (!os)
            throw IoError("write failed: '" + path.string() + "'");
    }

    inline std::string sha256_file(const std::filesystem::path &path)
    {
        std::ifstream is(path, std::ios::binary);
        if (!is)
            throw IoError("cannot open '" + path.string() + "'");
        std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
        if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
            throw NumericError("sha256: digest initialisation failed");
        std::array<char, 1 << 16> buf;
        while (is)
        {
            is.read(buf.data(), buf.size());
            if (is.gcount() > 0)
                EVP_DigestUpdate(ctx.get(), buf.data(), std::size_t(is.gcount()));
        }
        unsigned char md[EVP_MAX_MD_SIZE];
        unsigned int len = 0;
        EVP_DigestFinal_ex(ctx.get(), md, &len);
        static const char *hex = "0123456789abcdef";
        std::string out;
        for (unsigned i = 0; i < len; ++i)
        {
            out += hex[md[i] >> 4];
            out += hex[md[i] & 0xF];
        }
        return out;
    }
}

#endif
