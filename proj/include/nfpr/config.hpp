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

#ifndef NFPR_CONFIG_HPP
#define NFPR_CONFIG_HPP

#include "nfpr/image.hpp"
#include "nfpr/metrics.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace nfpr
{
    inline constexpr int schema_version = 1;

    struct PipelineSettings
    {
        std::vector<CombineMode> modes{CombineMode::coherent};
        std::vector<std::size_t> tx_subset;   // 0-based; empty selects every transmitter
        std::vector<std::size_t> freq_subset; // 0-based; empty selects every frequency
        bool include_incident = false;
        double noise_snr_db = std::numeric_limits<double>::infinity();
        std::uint64_t seed = 0;
        unsigned padding = 1;
        double db_floor = -30.0;
        std::vector<Axis> mip_axes{Axis::z};
        std::size_t target_dilation = 1;
        std::size_t ghost_exclusion = 2;
        double coverage_threshold_db = -10.0;
        bool use_magnitude = true;
        unsigned threads = 0;
    };

    struct ScenarioConfig
    {
        ScenarioConfig(FrequencyGrid g, MeasurementPlane p, ImagingVolume v, ComponentSet c)
            : grid(g), plane(p), volume(v), components(std::move(c)) {}

        std::string name;
        std::vector<std::string> notes;
        FrequencyGrid grid;
        MeasurementPlane plane;
        ImagingVolume volume;
        ComponentSet components;
        std::vector<TxSource> txs;
        SceneDescription scene;
        PipelineSettings pipeline;
        std::string output_dir = "out";

        std::vector<std::size_t> tx_indices() const
        {
            if (!pipeline.tx_subset.empty())
                return pipeline.tx_subset;
            std::vector<std::size_t> all(txs.size());
            for (std::size_t i = 0; i < all.size(); ++i)
                all[i] = i;
            return all;
        }

        std::vector<std::size_t> freq_indices() const
        {
            if (!pipeline.freq_subset.empty())
                return pipeline.freq_subset;
            std::vector<std::size_t> all(grid.size());
            for (std::size_t i = 0; i < all.size(); ++i)
                all[i] = i;
            return all;
        }
    };

    namespace detail
    {
        using json = nlohmann::json;
        using ojson = nlohmann::ordered_json;

        [[noreturn]] inline void config_fail(const std::string &path, const std::string &msg)
        {
            throw ConfigError(path + ": " + msg);
        }

        // Object view that tracks consumed keys so leftovers can be reported
        class ObjectReader
        {
        public:
            ObjectReader(const json &j, std::string path) : j_(j), path_(std::move(path))
            {
                if (!j.is_object())
                    config_fail(path_, "expected an object");
            }

            std::string child(const std::string &key) const { return path_.empty() ? key : path_ + "." + key; }

            const json *optional(const std::string &key)
            {
                seen_.insert(key);
                auto it = j_.find(key);
                if (it == j_.end() || it->is_null())
                    return nullptr;
                return &*it;
            }

            const json &required(const std::string &key)
            {
                const json *v = optional(key);
                if (!v)
                    config_fail(child(key), "missing required key");
                return *v;
            }

            void finish() const
            {
                for (auto it = j_.begin(); it != j_.end(); ++it)
                    if (!seen_.count(it.key()))
                        config_fail(child(it.key()), "unknown key");
            }

        private:
            const json &j_;
            std::string path_;
            std::set<std::string> seen_;
        };

        inline double get_number(const json &j, const std::string &path)
        {
            if (!j.is_number())
                config_fail(path, "expected a number");
            const double v = j.get<double>();
            if (!std::isfinite(v))
                config_fail(path, "expected a finite number");
            return v;
        }

        inline std::size_t get_count(const json &j, const std::string &path)
        {
            if (!j.is_number_integer() || j.get<long long>() < 0)
                config_fail(path, "expected a non-negative integer");
            return std::size_t(j.get<long long>());
        }

        inline bool get_bool(const json &j, const std::string &path)
        {
            if (!j.is_boolean())
                config_fail(path, "expected true or false");
            return j.get<bool>();
        }

        inline std::string get_string(const json &j, const std::string &path)
        {
            if (!j.is_string())
                config_fail(path, "expected a string");
            return j.get<std::string>();
        }

        inline Vec3 get_vec3(const json &j, const std::string &path)
        {
            if (!j.is_array() || j.size() != 3)
                config_fail(path, "expected an array of 3 numbers");
            return {get_number(j[0], path + "[0]"), get_number(j[1], path + "[1]"), get_number(j[2], path + "[2]")};
        }

        // A real number or [re, im]
        inline cplx get_complex(const json &j, const std::string &path)
        {
            if (j.is_number())
                return get_number(j, path);
            if (!j.is_array() || j.size() != 2)
                config_fail(path, "expected a number or [re, im]");
            return {get_number(j[0], path + "[0]"), get_number(j[1], path + "[1]")};
        }

        // 1-based index list in the file, 0-based in memory
        inline std::vector<std::size_t> get_index_list(const json &j, const std::string &path, std::size_t limit)
        {
            if (!j.is_array())
                config_fail(path, "expected an array of 1-based indices");
            std::vector<std::size_t> out;
            for (std::size_t i = 0; i < j.size(); ++i)
            {
                const std::string p = path + "[" + std::to_string(i) + "]";
                const std::size_t v = get_count(j[i], p);
                if (v < 1 || v > limit)
                    config_fail(p, "index " + std::to_string(v) + " outside 1.." + std::to_string(limit));
                out.push_back(v - 1);
            }
            return out;
        }

        template <typename F>
        auto guarded(const std::string &path, F &&make)
        {
            try
            {
                return make();
            }
            catch (const ConfigError &)
            {
                throw;
            }
            catch (const std::invalid_argument &e)
            {
                config_fail(path, e.what());
            }
        }

        inline std::pair<std::size_t, std::size_t> line_column(const std::string &text, std::size_t byte)
        {
            std::size_t line = 1, col = 1;
            for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i)
            {
                if (text[i] == '\n')
                {
                    ++line;
                    col = 1;
                }
                else
                    ++col;
            }
            return {line, col};
        }

        inline TxSource parse_tx(const json &j, const std::string &path)
        {
            ObjectReader r(j, path);
            const Vec3 pos = get_vec3(r.required("position"), r.child("position"));
            const Vec3 pol = get_vec3(r.required("polarization"), r.child("polarization"));
            cplx moment = 1.0;
            if (const json *m = r.optional("moment"))
                moment = get_complex(*m, r.child("moment"));
            r.finish();
            return guarded(path, [&] { return TxSource(pos, pol, moment); });
        }

        inline PointScatterer parse_scatterer(const json &j, const std::string &path)
        {
            ObjectReader r(j, path);
            PointScatterer s;
            s.position = get_vec3(r.required("position"), r.child("position"));
            if (const json *v = r.optional("reflectivity"))
                s.reflectivity = get_complex(*v, r.child("reflectivity"));
            r.finish();
            return s;
        }

        inline ReflectivePlate parse_plate(const json &j, const std::string &path)
        {
            ObjectReader r(j, path);
            ReflectivePlate p;
            p.corner = get_vec3(r.required("corner"), r.child("corner"));
            p.edge_u = get_vec3(r.required("edge_u"), r.child("edge_u"));
            p.edge_v = get_vec3(r.required("edge_v"), r.child("edge_v"));
            if (const json *v = r.optional("shape"))
            {
                const std::string s = get_string(*v, r.child("shape"));
                if (s == "rectangle")
                    p.shape = PlateShape::rectangle;
                else if (s == "triangle")
                    p.shape = PlateShape::triangle;
                else
                    config_fail(r.child("shape"), "expected 'rectangle' or 'triangle'");
            }
            if (const json *v = r.optional("facet_density"))
                p.facet_density = get_number(*v, r.child("facet_density"));
            if (const json *v = r.optional("reflection_coefficient"))
                p.reflection_coefficient = get_complex(*v, r.child("reflection_coefficient"));
            r.finish();
            guarded(path, [&] { p.validate(); return 0; });
            return p;
        }

        template <typename T, typename F>
        std::vector<T> parse_array(const json &j, const std::string &path, F &&item)
        {
            if (!j.is_array())
                config_fail(path, "expected an array");
            std::vector<T> out;
            for (std::size_t i = 0; i < j.size(); ++i)
                out.push_back(item(j[i], path + "[" + std::to_string(i) + "]"));
            return out;
        }

        inline bool inside_box(const Vec3 &p, const ImagingVolume &v, double tol = 1e-9)
        {
            for (int a = 0; a < 3; ++a)
                if (p[a] < v.min(a) - tol || p[a] > v.max(a) + tol)
                    return false;
            return true;
        }

        inline ojson complex_json(cplx c)
        {
            if (c.imag() == 0.0)
                return c.real();
            return ojson::array({c.real(), c.imag()});
        }

        inline ojson vec_json(const Vec3 &v) { return ojson::array({v.x(), v.y(), v.z()}); }

        inline ojson index_json(const std::vector<std::size_t> &idx)
        {
            ojson a = ojson::array();
            for (std::size_t i : idx)
                a.push_back(i + 1);
            return a;
        }
    }

    // Cross-field checks shared by the parser, the presets and command-line overrides
    inline void validate_config(const ScenarioConfig &c)
    {
        using detail::config_fail;
        if (c.txs.empty())
            config_fail("transmitters", "at least one transmitter is required");
        detail::guarded("volume", [&] { c.volume.check_clear_of(c.plane); return 0; });
        detail::guarded("volume", [&] { check_lattice(c.volume, c.plane, c.pipeline.padding); return 0; });
        detail::guarded("scene", [&] { c.scene.validate(); return 0; });
        for (std::size_t i = 0; i < c.txs.size(); ++i)
        {
            const std::string path = "transmitters[" + std::to_string(i) + "].position";
            if (std::abs(c.txs[i].position.z() - c.plane.z()) < 1e-9)
                config_fail(path, "transmitter lies on the measurement plane");
            if (detail::inside_box(c.txs[i].position, c.volume))
                config_fail(path, "transmitter lies inside the imaging volume");
        }
        for (std::size_t i = 0; i < c.scene.scatterers.size(); ++i)
            if (!detail::inside_box(c.scene.scatterers[i].position, c.volume))
                config_fail("scene.scatterers[" + std::to_string(i) + "].position", "outside the imaging volume");
        for (std::size_t i = 0; i < c.scene.plates.size(); ++i)
        {
            const auto &p = c.scene.plates[i];
            const Vec3 corners[3] = {p.corner, p.corner + p.edge_u, p.corner + p.edge_v};
            for (const Vec3 &q : corners)
                if (!detail::inside_box(q, c.volume, 1e-6))
                    config_fail("scene.plates[" + std::to_string(i) + "]", "plate extends outside the imaging volume");
        }
        for (std::size_t i = 0; i < c.scene.parasitic.size(); ++i)
            if (std::abs(c.scene.parasitic[i].position.z() - c.plane.z()) < 1e-9)
                config_fail("scene.parasitic[" + std::to_string(i) + "].position", "lies on the measurement plane");

        const PipelineSettings &s = c.pipeline;
        if (s.modes.empty())
            config_fail("pipeline.modes", "at least one mode is required");
        if (s.mip_axes.empty())
            config_fail("pipeline.mip_axes", "at least one axis is required");
        for (std::size_t i : s.tx_subset)
            if (i >= c.txs.size())
                config_fail("pipeline.tx_subset", "transmitter index out of range");
        for (std::size_t i : s.freq_subset)
            if (i >= c.grid.size())
                config_fail("pipeline.freq_subset", "frequency index out of range");
        {
            auto sorted = c.tx_indices();
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                config_fail("pipeline.tx_subset", "duplicate transmitter index");
        }
        if (!s.freq_subset.empty())
        {
            auto sorted = s.freq_subset;
            std::sort(sorted.begin(), sorted.end());
            detail::guarded("pipeline.freq_subset", [&] { return subset_delta_k(c.grid, sorted); });
        }
        if (!(s.db_floor < 0.0))
            config_fail("pipeline.db_floor", "must be negative");
        if (!(s.coverage_threshold_db < 0.0))
            config_fail("pipeline.coverage_threshold_db", "must be negative");
        if (std::isnan(s.noise_snr_db))
            config_fail("pipeline.noise_snr_db", "must be a number or null");
    }

    inline ScenarioConfig parse_config_text(const std::string &text, const std::string &origin = "<config>")
    {
        using namespace detail;
        json root;
        try
        {
            root = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            const auto [line, col] = line_column(text, e.byte);
            throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": syntax error: " + e.what());
        }

        ObjectReader r(root, "");
        {
            const json &v = r.required("schema_version");
            if (!v.is_number_integer() || v.get<long long>() != schema_version)
                config_fail("schema_version", "unsupported schema version (expected " + std::to_string(schema_version) + ")");
        }

        FrequencyGrid grid = [&]
        {
            ObjectReader f(r.required("frequency"), "frequency");
            const double lo = get_number(f.required("f_min_hz"), "frequency.f_min_hz");
            const double hi = get_number(f.required("f_max_hz"), "frequency.f_max_hz");
            const std::size_t n = get_count(f.required("count"), "frequency.count");
            f.finish();
            return guarded("frequency", [&] { return FrequencyGrid(lo, hi, n); });
        }();

        MeasurementPlane plane = [&]
        {
            ObjectReader p(r.required("plane"), "plane");
            const double z = get_number(p.required("z"), "plane.z");
            const double x0 = get_number(p.required("x_min"), "plane.x_min");
            const double x1 = get_number(p.required("x_max"), "plane.x_max");
            const double y0 = get_number(p.required("y_min"), "plane.y_min");
            const double y1 = get_number(p.required("y_max"), "plane.y_max");
            const std::size_t nx = get_count(p.required("nx"), "plane.nx");
            const std::size_t ny = get_count(p.required("ny"), "plane.ny");
            p.finish();
            return guarded("plane", [&] { return MeasurementPlane(z, x0, x1, y0, y1, nx, ny); });
        }();

        ImagingVolume volume = [&]
        {
            ObjectReader v(r.required("volume"), "volume");
            double lo[3], hi[3];
            std::size_t n[3];
            const char *ax[3] = {"x", "y", "z"};
            for (int a = 0; a < 3; ++a)
            {
                const std::string k = ax[a];
                lo[a] = get_number(v.required(k + "_min"), "volume." + k + "_min");
                hi[a] = get_number(v.required(k + "_max"), "volume." + k + "_max");
                n[a] = get_count(v.required("n" + k), "volume.n" + k);
            }
            v.finish();
            return guarded("volume", [&]
                           { return ImagingVolume(lo[0], hi[0], n[0], lo[1], hi[1], n[1], lo[2], hi[2], n[2]); });
        }();

        ComponentSet comps = [&]
        {
            const json &j = r.required("components");
            std::vector<FieldComponent> list = parse_array<FieldComponent>(j, "components", [](const json &e, const std::string &p)
            { return guarded(p, [&] { return component_from_string(get_string(e, p)); }); });
            return guarded("components", [&] { return ComponentSet(list); });
        }();

        ScenarioConfig c(grid, plane, volume, comps);
        if (const json *v = r.optional("name"))
            c.name = get_string(*v, "name");
        if (const json *v = r.optional("notes"))
            c.notes = parse_array<std::string>(*v, "notes", get_string);
        if (const json *v = r.optional("output_dir"))
            c.output_dir = get_string(*v, "output_dir");

        c.txs = parse_array<TxSource>(r.required("transmitters"), "transmitters", parse_tx);

        if (const json *sj = r.optional("scene"))
        {
            ObjectReader s(*sj, "scene");
            if (const json *v = s.optional("scatterers"))
                c.scene.scatterers = parse_array<PointScatterer>(*v, "scene.scatterers", parse_scatterer);
            if (const json *v = s.optional("plates"))
                c.scene.plates = parse_array<ReflectivePlate>(*v, "scene.plates", parse_plate);
            if (const json *v = s.optional("parasitic"))
                c.scene.parasitic = parse_array<PointScatterer>(*v, "scene.parasitic", parse_scatterer);
            if (const json *v = s.optional("occlusion"))
                c.scene.occlusion_enabled = get_bool(*v, "scene.occlusion");
            if (const json *v = s.optional("double_bounce"))
                c.scene.double_bounce_enabled = get_bool(*v, "scene.double_bounce");
            s.finish();
        }

        if (const json *pj = r.optional("pipeline"))
        {
            ObjectReader p(*pj, "pipeline");
            PipelineSettings &st = c.pipeline;
            if (const json *v = p.optional("modes"))
                st.modes = parse_array<CombineMode>(*v, "pipeline.modes", [](const json &e, const std::string &path)
                { return guarded(path, [&] { return combine_mode_from_string(get_string(e, path)); }); });
            if (const json *v = p.optional("tx_subset"))
                st.tx_subset = get_index_list(*v, "pipeline.tx_subset", c.txs.size());
            if (const json *v = p.optional("freq_subset"))
                st.freq_subset = get_index_list(*v, "pipeline.freq_subset", c.grid.size());
            if (const json *v = p.optional("include_incident"))
                st.include_incident = get_bool(*v, "pipeline.include_incident");
            if (const json *v = p.optional("noise_snr_db"))
                st.noise_snr_db = get_number(*v, "pipeline.noise_snr_db");
            if (const json *v = p.optional("seed"))
            {
                if (!v->is_number_unsigned())
                    config_fail("pipeline.seed", "expected a non-negative integer");
                st.seed = v->get<std::uint64_t>();
            }
            if (const json *v = p.optional("padding"))
            {
                const std::size_t pad = get_count(*v, "pipeline.padding");
                if (pad < 1 || pad > 16)
                    config_fail("pipeline.padding", "expected an integer in 1..16");
                st.padding = unsigned(pad);
            }
            if (const json *v = p.optional("db_floor"))
                st.db_floor = get_number(*v, "pipeline.db_floor");
            if (const json *v = p.optional("mip_axes"))
                st.mip_axes = parse_array<Axis>(*v, "pipeline.mip_axes", [](const json &e, const std::string &path)
                { return guarded(path, [&] { return axis_from_string(get_string(e, path)); }); });
            if (const json *v = p.optional("target_dilation"))
                st.target_dilation = get_count(*v, "pipeline.target_dilation");
            if (const json *v = p.optional("ghost_exclusion"))
                st.ghost_exclusion = get_count(*v, "pipeline.ghost_exclusion");
            if (const json *v = p.optional("coverage_threshold_db"))
                st.coverage_threshold_db = get_number(*v, "pipeline.coverage_threshold_db");
            if (const json *v = p.optional("magnitude_correction"))
                st.use_magnitude = get_bool(*v, "pipeline.magnitude_correction");
            if (const json *v = p.optional("threads"))
                st.threads = unsigned(get_count(*v, "pipeline.threads"));
            p.finish();
        }
        r.finish();
        validate_config(c);
        return c;
    }

    inline ScenarioConfig parse_config(const std::filesystem::path &path)
    {
        std::ifstream is(path, std::ios::binary);
        if (!is)
            throw IoError("cannot open '" + path.string() + "'");
        std::stringstream ss;
        ss << is.rdbuf();
        return parse_config_text(ss.str(), path.string());
    }

    // The run snapshot omits output_dir so that artifacts do not depend on where they are written
    inline std::string emit_config(const ScenarioConfig &c, bool with_output_dir = true)
    {
        using namespace detail;
        ojson root;
        root["schema_version"] = schema_version;
        root["name"] = c.name;
        root["notes"] = c.notes;
        root["frequency"] = {{"f_min_hz", c.grid.f_min()}, {"f_max_hz", c.grid.f_max()}, {"count", c.grid.size()}};
        root["plane"] = {{"z", c.plane.z()}, {"x_min", c.plane.x_min()}, {"x_max", c.plane.x_max()},
                         {"y_min", c.plane.y_min()}, {"y_max", c.plane.y_max()}, {"nx", c.plane.nx()}, {"ny", c.plane.ny()}};
        root["volume"] = {{"x_min", c.volume.min(0)}, {"x_max", c.volume.max(0)}, {"nx", c.volume.nx()},
                          {"y_min", c.volume.min(1)}, {"y_max", c.volume.max(1)}, {"ny", c.volume.ny()},
                          {"z_min", c.volume.min(2)}, {"z_max", c.volume.max(2)}, {"nz", c.volume.nz()}};
        ojson comps = ojson::array();
        for (FieldComponent f : c.components.list())
            comps.push_back(to_string(f));
        root["components"] = comps;

        ojson txs = ojson::array();
        for (const TxSource &t : c.txs)
            txs.push_back({{"position", vec_json(t.position)}, {"polarization", vec_json(t.polarization)},
                           {"moment", complex_json(t.moment)}});
        root["transmitters"] = txs;

        auto scatterers = [](const std::vector<PointScatterer> &list)
        {
            ojson a = ojson::array();
            for (const auto &s : list)
                a.push_back({{"position", vec_json(s.position)}, {"reflectivity", complex_json(s.reflectivity)}});
            return a;
        };
        ojson plates = ojson::array();
        for (const auto &p : c.scene.plates)
            plates.push_back({{"corner", vec_json(p.corner)}, {"edge_u", vec_json(p.edge_u)}, {"edge_v", vec_json(p.edge_v)},
                              {"shape", p.shape == PlateShape::triangle ? "triangle" : "rectangle"},
                              {"facet_density", p.facet_density},
                              {"reflection_coefficient", complex_json(p.reflection_coefficient)}});
        root["scene"] = {{"scatterers", scatterers(c.scene.scatterers)}, {"plates", plates},
                         {"parasitic", scatterers(c.scene.parasitic)}, {"occlusion", c.scene.occlusion_enabled},
                         {"double_bounce", c.scene.double_bounce_enabled}};

        const PipelineSettings &s = c.pipeline;
        ojson modes = ojson::array(), axes = ojson::array();
        for (CombineMode m : s.modes)
            modes.push_back(to_string(m));
        for (Axis a : s.mip_axes)
            axes.push_back(to_string(a));
        ojson pipe;
        pipe["modes"] = modes;
        pipe["tx_subset"] = s.tx_subset.empty() ? ojson(nullptr) : index_json(s.tx_subset);
        pipe["freq_subset"] = s.freq_subset.empty() ? ojson(nullptr) : index_json(s.freq_subset);
        pipe["include_incident"] = s.include_incident;
        pipe["noise_snr_db"] = std::isinf(s.noise_snr_db) ? ojson(nullptr) : ojson(s.noise_snr_db);
        pipe["seed"] = s.seed;
        pipe["padding"] = s.padding;
        pipe["db_floor"] = s.db_floor;
        pipe["mip_axes"] = axes;
        pipe["target_dilation"] = s.target_dilation;
        pipe["ghost_exclusion"] = s.ghost_exclusion;
        pipe["coverage_threshold_db"] = s.coverage_threshold_db;
        pipe["magnitude_correction"] = s.use_magnitude;
        pipe["threads"] = s.threads;
        root["pipeline"] = pipe;
        if (with_output_dir)
            root["output_dir"] = c.output_dir;
        return root.dump(2) + "\n";
    }
}

#endif
