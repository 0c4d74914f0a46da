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

#include "nfpr/nfpr.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace
{
    // "1,3,5" or "start:stop[:step]" (inclusive), 1-based on the command line
    std::vector<std::size_t> parse_index_list(const std::string &text, const std::string &flag)
    {
        auto number = [&](const std::string &s)
        {
            std::size_t pos = 0;
            unsigned long long v = 0;
            try
            {
                v = std::stoull(s, &pos);
            }
            catch (const std::exception &)
            {
                pos = 0;
            }
            if (pos == 0 || pos != s.size() || v < 1)
                throw nfpr::ConfigError(flag + ": expected 1-based indices, got '" + text + "'");
            return std::size_t(v);
        };

        std::vector<std::size_t> out;
        if (text.find(':') != std::string::npos)
        {
            std::vector<std::string> parts;
            std::stringstream ss(text);
            std::string part;
            while (std::getline(ss, part, ':'))
                parts.push_back(part);
            if (parts.size() < 2 || parts.size() > 3)
                throw nfpr::ConfigError(flag + ": range must be start:stop or start:stop:step");
            const std::size_t start = number(parts[0]), stop = number(parts[1]);
            const std::size_t step = parts.size() == 3 ? number(parts[2]) : 1;
            if (stop < start)
                throw nfpr::ConfigError(flag + ": empty range '" + text + "'");
            for (std::size_t i = start; i <= stop; i += step)
                out.push_back(i - 1);
            return out;
        }
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ','))
            out.push_back(number(item) - 1);
        if (out.empty())
            throw nfpr::ConfigError(flag + ": empty index list");
        return out;
    }

    struct RunFlags
    {
        std::string mode, tx_subset, freq_subset, out;
        unsigned threads = 0;
        bool threads_set = false;

        void attach(CLI::App *app)
        {
            app->add_option("--mode", mode, "Combination mode")->check(CLI::IsMember({"coherent", "incoherent"}));
            app->add_option("--tx-subset", tx_subset, "Transmitters, 1-based: list '1,2' or range 'a:b[:step]'");
            app->add_option("--freq-subset", freq_subset, "Frequencies, 1-based: list or range 'a:b[:step]'");
            app->add_option_function<unsigned>("--threads", [this](unsigned t)
                                               { threads = t; threads_set = true; }, "Worker threads (0 = all cores)");
            app->add_option("--out", out, "Output directory");
        }

        nfpr::RunOverrides overrides() const
        {
            nfpr::RunOverrides o;
            if (!mode.empty())
                o.mode = nfpr::combine_mode_from_string(mode);
            if (!tx_subset.empty())
                o.tx_subset = parse_index_list(tx_subset, "--tx-subset");
            if (!freq_subset.empty())
                o.freq_subset = parse_index_list(freq_subset, "--freq-subset");
            if (threads_set)
                o.threads = threads;
            if (!out.empty())
                o.out = out;
            return o;
        }
    };

    int run_config(nfpr::ScenarioConfig config, const RunFlags &flags)
    {
        config = nfpr::apply_overrides(std::move(config), flags.overrides());
        const auto result = nfpr::run_pipeline(config, &std::cerr);
        std::cout << "wrote " << result.artifacts.size() << " artifacts to " << result.out_dir.string() << '\n';
        std::cout << nfpr::metrics_csv(result.reports);
        return nfpr::exit_ok;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Near-field passive radar imaging: simulate, image, combine and score scenarios"};
    app.require_subcommand(1);

    std::string config_path;
    RunFlags run_flags;
    auto *run = app.add_subcommand("run", "Run the full pipeline on a JSON scenario");
    run->add_option("config", config_path, "Scenario file")->required();
    run_flags.attach(run);

    std::string preset_name;
    bool fast = false, emit = false;
    RunFlags preset_flags;
    auto *pre = app.add_subcommand("preset", "Run or print a built-in scenario");
    pre->add_option("name", preset_name, "pyramid, dihedral or pointcal")->required();
    pre->add_flag("--fast", fast, "Reduced plane and frequency count");
    pre->add_flag("--emit-config", emit, "Print the scenario JSON instead of running it");
    preset_flags.attach(pre);

    std::string volume_path, truth_path;
    auto *met = app.add_subcommand("metrics", "Score an exported volume against a scenario's ground truth");
    met->add_option("volume", volume_path, "Volume header or raw file")->required();
    met->add_option("truth", truth_path, "Scenario file providing the scene")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? nfpr::exit_ok : nfpr::exit_config;
    }

    try
    {
        if (*run)
            return run_config(nfpr::parse_config(config_path), run_flags);
        if (*pre)
        {
            nfpr::ScenarioConfig config = nfpr::preset(preset_name, fast);
            if (emit)
            {
                std::cout << nfpr::emit_config(nfpr::apply_overrides(config, preset_flags.overrides()));
                return nfpr::exit_ok;
            }
            return run_config(std::move(config), preset_flags);
        }
        const nfpr::CombinedImage image = nfpr::read_volume(volume_path);
        const nfpr::ScenarioConfig truth_cfg = nfpr::parse_config(truth_path);
        const auto &st = truth_cfg.pipeline;
        const auto truth = nfpr::make_ground_truth(truth_cfg.scene, image.geometry, st.target_dilation, st.ghost_exclusion);
        const auto report = nfpr::score(image, truth, st.coverage_threshold_db, nfpr::to_string(image.mode),
                                        nfpr::provenance_string(image));
        std::cout << nfpr::metrics_csv(std::span(&report, 1));
        return nfpr::exit_ok;
    }
    catch (const std::exception &e)
    {
        std::cerr << "nfpr: error: " << e.what() << '\n';
        return nfpr::exit_code_of(e);
    }
}
