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

#include "nfpr/export.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>

using namespace nfpr;
namespace fs = std::filesystem;

namespace
{
    struct TempDir
    {
        fs::path path;
        TempDir()
        {
            path = fs::temp_directory_path() / ("nfpr_export_" + std::to_string(std::random_device{}()));
            fs::create_directories(path);
        }
        ~TempDir()
        {
            std::error_code ec;
            fs::remove_all(path, ec);
        }
    };

    std::string read_bytes(const fs::path &p)
    {
        std::ifstream is(p, std::ios::binary);
        return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
    }

    Array2D<double> two_by_two()
    {
        Array2D<double> m(2, 2);
        m(0, 0) = 0.0;
        m(0, 1) = 1.0;
        m(1, 0) = 0.5;
        m(1, 1) = 0.25;
        return m;
    }
}

TEST_CASE("2 x 2 map is written as a 16-bit big-endian P5 image", "[export]")
{
    TempDir tmp;
    const fs::path p = tmp.path / "map.pgm";
    PgmOptions lin;
    lin.scale = MapScale::linear;
    const auto files = write_pgm(p, two_by_two(), lin);
    REQUIRE(files.size() == 2);
    CHECK(fs::exists(files[1]));

    const std::string bytes = read_bytes(p);
    const std::string header = "P5\n2 2\n65535\n";
    REQUIRE(bytes.size() == header.size() + 8);
    CHECK(bytes.substr(0, header.size()) == header);
    // row-major: 0, 65535, 32768, 16384 as big-endian words
    const unsigned char expect[8] = {0x00, 0x00, 0xFF, 0xFF, 0x80, 0x00, 0x40, 0x00};
    for (int i = 0; i < 8; ++i)
        CHECK((unsigned char)bytes[header.size() + std::size_t(i)] == expect[i]);

    const auto back = read_pgm(p);
    CHECK(back(0, 0) == 0);
    CHECK(back(0, 1) == 65535);
    CHECK(back(1, 0) == 32768);
    CHECK(back(1, 1) == 16384);
}

TEST_CASE("dB scale maps amplitude onto the floor range", "[export]")
{
    TempDir tmp;
    const fs::path p = tmp.path / "map_db.pgm";
    write_pgm(p, two_by_two());
    const auto g = read_pgm(p);
    // (20 log10 v + 30) / 30 * 65535, rounded
    auto oracle = [](double v)
    { return std::uint16_t(std::floor((20.0 * std::log10(v) + 30.0) / 30.0 * 65535.0 + 0.5)); };
    CHECK(g(0, 0) == 0);
    CHECK(g(0, 1) == 65535);
    CHECK(g(1, 0) == oracle(0.5));
    CHECK(g(1, 1) == oracle(0.25));
    CHECK(g(1, 0) == 52383);
    CHECK(g(1, 1) == 39231);

    const auto side = read_key_values(fs::path(p.string() + ".txt"));
    CHECK(side.at("scale") == "db");
    CHECK(side.at("width") == "2");
    CHECK(side.at("floor_db") == "-30");
}

TEST_CASE("gray levels saturate and reject a non-negative floor", "[export]")
{
    PgmOptions db;
    CHECK(gray_level(1e-9, db) == 0);
    CHECK(gray_level(2.0, db) == 65535);
    CHECK(gray_level(-1.0, db) == 0);
    PgmOptions lin;
    lin.scale = MapScale::linear;
    CHECK(gray_level(1.5, lin) == 65535);
    CHECK(gray_level(-0.5, lin) == 0);
    db.floor_db = 0.0;
    CHECK_THROWS_AS(gray_level(0.5, db), std::invalid_argument);
    CHECK_THROWS_AS(write_pgm("unused.pgm", Array2D<double>()), std::invalid_argument);
}

TEST_CASE("volume export roundtrip is lossless", "[export][property]")
{
    TempDir tmp;
    const ImagingVolume g(-0.02, 0.03, 6, -0.01, 0.01, 3, 0.0, 0.04, 5);
    CombinedImage img(g);
    img.mode = CombineMode::incoherent;
    img.peak = 12.5;
    img.empty = false;
    img.provenance = {{0, 0}, {0, 3}, {2, 1}};
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    img.intensity.resize(g.voxel_count());
    for (double &v : img.intensity)
        v = double(float(u(rng))); // float32 storage is exact for float-representable values

    const auto files = write_volume(tmp.path / "vol", img);
    REQUIRE(files.size() == 2);
    CHECK(fs::file_size(files[0]) == g.voxel_count() * 4);

    for (const fs::path &p : {tmp.path / "vol", files[0], files[1]})
    {
        const auto back = read_volume(p);
        CHECK(back.geometry.nx() == 6);
        CHECK(back.geometry.ny() == 3);
        CHECK(back.geometry.nz() == 5);
        CHECK(back.geometry.min(0) == -0.02);
        CHECK(back.geometry.max(2) == 0.04);
        CHECK(back.mode == CombineMode::incoherent);
        CHECK(back.peak == 12.5);
        CHECK_FALSE(back.empty);
        CHECK(back.provenance == img.provenance);
        CHECK(back.intensity == img.intensity);
    }

    // little-endian float32, x fastest
    const std::string raw = read_bytes(files[0]);
    std::uint32_t w = 0;
    for (int b = 0; b < 4; ++b)
        w |= std::uint32_t((unsigned char)raw[4 + std::size_t(b)]) << (8 * b);
    CHECK(std::bit_cast<float>(w) == float(img.intensity[g.index(1, 0, 0)]));
}

TEST_CASE("volume export is byte-reproducible", "[export][property]")
{
    TempDir tmp;
    const ImagingVolume g(0.0, 0.01, 2, 0.0, 0.01, 2, 0.0, 0.0, 1);
    CombinedImage img(g);
    img.intensity = {0.1, 0.2, 1.0, 0.3};
    img.peak = 3.0;
    img.empty = false;
    write_volume(tmp.path / "a", img);
    write_volume(tmp.path / "b", img);
    CHECK(read_bytes(tmp.path / "a.raw") == read_bytes(tmp.path / "b.raw"));
    CHECK(sha256_file(tmp.path / "a.raw") == sha256_file(tmp.path / "b.raw"));
}

TEST_CASE("truncated or missing volume files raise I/O errors with the path", "[export]")
{
    TempDir tmp;
    const ImagingVolume g(0.0, 0.01, 2, 0.0, 0.01, 2, 0.0, 0.0, 1);
    CombinedImage img(g);
    img.intensity = {0.1, 0.2, 1.0, 0.3};
    write_volume(tmp.path / "v", img);
    fs::resize_file(tmp.path / "v.raw", 10);
    CHECK_THROWS_AS(read_volume(tmp.path / "v"), IoError);
    try
    {
        read_volume(tmp.path / "missing");
        FAIL("expected an I/O error");
    }
    catch (const IoError &e)
    {
        CHECK(std::string(e.what()).find("missing.hdr") != std::string::npos);
    }
    CHECK_THROWS_AS(write_text(tmp.path / "no_such_dir" / "x.txt", "x"), IoError);
}

TEST_CASE("metrics CSV has one header row and a stable column order", "[export]")
{
    MetricsReport a;
    a.label = "coherent";
    a.peak_position = Vec3(0.005, 0.0, -0.01);
    a.has_truth = true;
    a.localization_error = 0.005;
    a.ghost_to_target_db = -10.5;
    a.coverage = 0.25;
    a.entropy = 0.5;
    a.peak_sidelobe_db = 3.0;
    a.provenance = "0:0,0:1";
    MetricsReport b;
    b.label = "incoherent";
    b.empty_image = true;
    const std::vector<MetricsReport> rows{a, b};
    const std::string csv = metrics_csv(rows);

    std::stringstream ss(csv);
    std::vector<std::string> lines;
    for (std::string l; std::getline(ss, l);)
        lines.push_back(l);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "label,peak_x_m,peak_y_m,peak_z_m,localization_error_m,ghost_to_target_db,"
                      "peak_to_artifact_db,coverage,entropy,peak_sidelobe_db,empty_image,terms");
    CHECK(lines[1] == "coherent,0.005,0,-0.01,0.005,-10.5,10.5,0.25,0.5,3,0,0:0,0:1");
    CHECK(lines[2] == "incoherent,0,0,0,,,,,0,0,1,");
    CHECK(metrics_csv(std::span<const MetricsReport>()) == lines[0] + "\n");
}

TEST_CASE("decimal formatting round-trips doubles", "[export][property]")
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> n(0.0, 1e3);
    for (int i = 0; i < 200; ++i)
    {
        const double v = n(rng);
        CHECK(parse_double(format_double(v)) == v);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK_THROWS_AS(parse_double("1.0x"), std::invalid_argument);
}

TEST_CASE("sha256 matches the standard test vector", "[export]")
{
    TempDir tmp;
    write_text(tmp.path / "abc.txt", "abc");
    CHECK(sha256_file(tmp.path / "abc.txt") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
