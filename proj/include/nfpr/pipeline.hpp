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

#ifndef NFPR_PIPELINE_HPP
#define NFPR_PIPELINE_HPP

#include "nfpr/config.hpp"
#include "nfpr/export.hpp"
#include "nfpr/forward.hpp"
#include "nfpr/image.hpp"

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace nfpr
{
    // Error raised by a pipeline stage; carries the stage name and the process exit code
    class StageError : public std::runtime_error
    {
    public:
        StageError(std::string stage, int exit_code, const std::string &what)
            : std::runtime_error(stage + ": " + what), stage_(std::move(stage)), exit_code_(exit_code) {}

        const std::string &stage() const { return stage_; }
        int exit_code() const { return exit_code_; }

    private:
        std::string stage_;
        int exit_code_;
    };

    enum ExitCode : int
    {
        exit_ok = 0,
        exit_config = 1,
        exit_runtime = 2,
        exit_io = 3
    };

    inline int exit_code_of(const std::exception &e)
    {
        if (const auto *s = dynamic_cast<const StageError *>(&e))
            return s->exit_code();
        if (dynamic_cast<const ConfigError *>(&e))
            return exit_config;
        if (dynamic_cast<const IoError *>(&e) || dynamic_cast<const std::filesystem::filesystem_error *>(&e))
            return exit_io;
        return exit_runtime;
    }

    struct RunOverrides
    {
        std::optional<CombineMode> mode;
        std::optional<std::vector<std::size_t>> tx_subset;   // 0-based
        std::optional<std::vector<std::size_t>> freq_subset; // 0-based
        std::optional<unsigned> threads;
        std::optional<std::string> out;
    };

    inline ScenarioConfig apply_overrides(ScenarioConfig c, const RunOverrides &o)
    {
        if (o.mode)
            c.pipeline.modes = {*o.mode};
        if (o.tx_subset)
            c.pipeline.tx_subset = *o.tx_subset;
        if (o.freq_subset)
            c.pipeline.freq_subset = *o.freq_subset;
        if (o.threads)
            c.pipeline.threads = *o.threads;
        if (o.out)
            c.output_dir = *o.out;
        validate_config(c);
        return c;
    }

    struct PipelineResult
    {
        std::filesystem::path out_dir;
        std::vector<std::filesystem::path> artifacts; // relative to out_dir, sorted
        std::vector<CombinedImage> images;            // one per mode
        std::vector<MetricsReport> reports;
    };

    namespace detail
    {
        class StageTimer
        {
        public:
            StageTimer(std::ostream *log, std::string name) : log_(log), name_(std::move(name)), t0_(std::chrono::steady_clock::now()) {}

            void done() const
            {
                if (!log_)
                    return;
                const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
                *log_ << "[nfpr] stage " << name_ << ": " << s << " s\n";
            }

        private:
            std::ostream *log_;
            std::string name_;
            std::chrono::steady_clock::time_point t0_;
        };

        template <typename F>
        auto run_stage(const std::string &name, std::ostream *log, F &&body)
        {
            StageTimer timer(log, name);
            try
            {
                if constexpr (std::is_void_v<decltype(body())>)
                {
                    body();
                    timer.done();
                }
                else
                {
                    auto r = body();
                    timer.done();
                    return r;
                }
            }
            catch (const StageError &)
            {
                throw;
            }
            catch (const ConfigError &e)
            {
                throw StageError(name, exit_config, e.what());
            }
            catch (const IoError &e)
            {
                throw StageError(name, exit_io, e.what());
            }
            catch (const std::filesystem::filesystem_error &e)
            {
                throw StageError(name, exit_io, e.what());
            }
            catch (const std::exception &e)
            {
                throw StageError(name, exit_runtime, e.what());
            }
        }

        inline std::string cube_summary(const ScenarioConfig &c, const MeasurementDataCube &cube)
        {
            ojson j;
            j["tx_count"] = cube.tx_count();
            j["frequency_count"] = cube.frequency_count();
            ojson comps = ojson::array();
            for (FieldComponent f : cube.components().list())
                comps.push_back(to_string(f));
            j["components"] = comps;
            j["plane_samples"] = {cube.plane().nx(), cube.plane().ny()};
            j["incident_included"] = cube.incident_included();
            j["noise_snr_db"] = std::isinf(c.pipeline.noise_snr_db) ? ojson(nullptr) : ojson(c.pipeline.noise_snr_db);
            j["seed"] = c.pipeline.seed;
            ojson rms = ojson::array();
            for (std::size_t n = 0; n < cube.tx_count(); ++n)
            {
                double s = 0.0;
                std::size_t count = 0;
                for (std::size_t f = 0; f < cube.frequency_count(); ++f)
                    for (std::size_t p = 0; p < cube.component_count(); ++p)
                        for (const cplx &v : cube.slice(n, f, p))
                        {
                            s += std::norm(v);
                            ++count;
                        }
                rms.push_back(format_double(std::sqrt(s / double(count))));
            }
            j["rms_per_tx"] = rms;
            const auto warn = cube.plane().sampling_warning(cube.grid());
            j["sampling_warning"] = warn ? ojson(*warn) : ojson(nullptr);
            return j.dump(2) + "\n";
        }

        // Removes everything written so far unless released
        class OutputGuard
        {
        public:
            OutputGuard(std::filesystem::path dir, bool created) : dir_(std::move(dir)), created_(created) {}
            ~OutputGuard()
            {
                if (released_)
                    return;
                std::error_code ec;
                for (const auto &f : files_)
                    std::filesystem::remove(dir_ / f, ec);
                if (created_)
                    std::filesystem::remove(dir_, ec);
            }

            void add(const std::filesystem::path &p) { files_.push_back(p.filename()); }
            void release() { released_ = true; }
            const std::vector<std::filesystem::path> &files() const { return files_; }

        private:
            std::filesystem::path dir_;
            bool created_;
            bool released_ = false;
            std::vector<std::filesystem::path> files_;
        };
    }

    // simulate -> single-frequency images -> combination per mode -> maps, volumes and metrics.
    // Every artifact is listed with its SHA-256 in manifest.txt.
    inline PipelineResult run_pipeline(const ScenarioConfig &config, std::ostream *log = &std::cerr)
    {
        detail::run_stage("validate", log, [&] { validate_config(config); });

        PipelineResult result;
        result.out_dir = config.output_dir;
        const bool created = detail::run_stage("prepare", log, [&]
        {
            const bool existed = std::filesystem::exists(result.out_dir);
            if (existed && !std::filesystem::is_directory(result.out_dir))
                throw IoError("'" + result.out_dir.string() + "' exists and is not a directory");
            std::filesystem::create_directories(result.out_dir);
            return !existed;
        });
        detail::OutputGuard guard(result.out_dir, created);
        const PipelineSettings &st = config.pipeline;

        const MeasurementDataCube cube = detail::run_stage("simulate", log, [&]
        {
            SimulateOptions opt;
            opt.include_incident = st.include_incident;
            opt.noise_snr_db = st.noise_snr_db;
            opt.seed = st.seed;
            opt.threads = st.threads;
            return simulate(config.scene, config.txs, config.grid, config.plane, config.components, opt);
        });
        if (log)
            if (const auto warn = config.plane.sampling_warning(config.grid))
                *log << "[nfpr] warning: " << *warn << '\n';

        auto freqs = config.freq_indices();
        auto tx_ids = config.tx_indices();
        std::sort(freqs.begin(), freqs.end());
        std::sort(tx_ids.begin(), tx_ids.end());

        detail::run_stage("image", log, [&]
        {
            std::vector<CombineAccumulator> accs;
            CombineOptions copt;
            copt.use_magnitude = st.use_magnitude;
            for (CombineMode m : st.modes)
                accs.emplace_back(config.volume, config.grid, config.txs, freqs, tx_ids, m, copt);
            ImagingOptions iopt;
            iopt.padding = st.padding;
            iopt.threads = st.threads;
            for (std::size_t n : tx_ids)
                for (std::size_t f : freqs)
                {
                    const ImageVolume img = single_frequency_image(cube, n, f, config.volume, iopt);
                    for (auto &a : accs)
                        a.add(img);
                }
            for (auto &a : accs)
                result.images.push_back(a.finish());
        });

        detail::run_stage("export", log, [&]
        {
            auto track = [&](const std::vector<std::filesystem::path> &paths)
            {
                for (const auto &p : paths)
                    guard.add(p);
            };
            const std::filesystem::path dir = result.out_dir;
            write_text(dir / "cube_summary.json", detail::cube_summary(config, cube));
            guard.add(dir / "cube_summary.json");
            write_text(dir / "config.json", emit_config(config, false));
            guard.add(dir / "config.json");

            const GroundTruthMask truth = make_ground_truth(config.scene, config.volume, st.target_dilation, st.ghost_exclusion);
            for (const CombinedImage &img : result.images)
            {
                const std::string mode = to_string(img.mode);
                track(write_volume(dir / (mode + "_volume"), img));
                for (Axis a : st.mip_axes)
                {
                    PgmOptions po;
                    po.floor_db = st.db_floor;
                    const int col_axis = a == Axis::x ? 1 : 0;
                    const int row_axis = a == Axis::z ? 1 : 2;
                    po.pitch_col = config.volume.pitch(col_axis);
                    po.pitch_row = config.volume.pitch(row_axis);
                    track(write_pgm(dir / (mode + "_mip_" + to_string(a) + ".pgm"), mip(img, a), po));
                }
                result.reports.push_back(score(img, truth, st.coverage_threshold_db, mode, provenance_string(img)));
            }
            write_text(dir / "metrics.csv", metrics_csv(result.reports));
            guard.add(dir / "metrics.csv");

            std::vector<std::filesystem::path> names = guard.files();
            std::sort(names.begin(), names.end());
            std::string manifest;
            for (const auto &name : names)
                manifest += sha256_file(dir / name) + "  " + name.string() + "\n";
            write_text(dir / "manifest.txt", manifest);
            guard.add(dir / "manifest.txt");
            result.artifacts = names;
            result.artifacts.push_back("manifest.txt");
        });
        guard.release();
        return result;
    }
}

#endif
