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

#ifndef NFPR_PRESETS_HPP
#define NFPR_PRESETS_HPP

#include "nfpr/config.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace nfpr
{
    inline const std::vector<std::string> &preset_names()
    {
        static const std::vector<std::string> names{"pyramid", "dihedral", "pointcal"};
        return names;
    }

    namespace detail
    {
        // 101 x 101 samples over 1.5 m x 1.5 m at z = 1 m; the fast variant keeps the 15 mm pitch
        // on a 51 x 51 aperture so the lateral sampling stays unchanged.
        inline MeasurementPlane preset_plane(bool fast)
        {
            return fast ? MeasurementPlane(1.0, -0.375, 0.375, -0.375, 0.375, 51, 51)
                        : MeasurementPlane(1.0, -0.75, 0.75, -0.75, 0.75, 101, 101);
        }

        // Facets every quarter of the shortest wavelength
        inline double preset_facet_density(double f_max) { return std::ceil(4.0 * f_max / speed_of_light); }

        // Square-base shell, base 0.3 m centred at the origin, apex height 0.15 m. Each face is split
        // along its apex-to-base-midpoint line into two right triangles.
        inline std::vector<ReflectivePlate> pyramid_plates(double facet_density)
        {
            const double half = 0.15, height = 0.15;
            const Vec3 apex(0.0, 0.0, height);
            const Vec3 mids[4] = {{half, 0, 0}, {-half, 0, 0}, {0, half, 0}, {0, -half, 0}};
            std::vector<ReflectivePlate> plates;
            for (const Vec3 &m : mids)
            {
                const Vec3 along = Vec3(-m.y(), m.x(), 0.0); // half base edge
                for (double sgn : {1.0, -1.0})
                {
                    ReflectivePlate p;
                    p.corner = m;
                    p.edge_u = sgn * along;
                    p.edge_v = apex - m;
                    p.shape = PlateShape::triangle;
                    p.facet_density = facet_density;
                    p.reflection_coefficient = -1.0;
                    plates.push_back(p);
                }
            }
            return plates;
        }

        // Two 0.3 m x 0.3 m plates meeting along the y axis, each 45 degrees from the xy-plane
        inline std::vector<ReflectivePlate> dihedral_plates(double facet_density)
        {
            const double side = 0.3;
            const double r = side / std::sqrt(2.0);
            std::vector<ReflectivePlate> plates;
            for (double sx : {-1.0, 1.0})
            {
                ReflectivePlate p;
                p.corner = Vec3(0.0, -side / 2, 0.0);
                p.edge_u = Vec3(sx * r, 0.0, r);
                p.edge_v = Vec3(0.0, side, 0.0);
                p.facet_density = facet_density;
                p.reflection_coefficient = -1.0;
                plates.push_back(p);
            }
            return plates;
        }

        inline ComponentSet xy_components() { return ComponentSet({FieldComponent::x, FieldComponent::y}); }

        inline std::vector<TxSource> pyramid_txs()
        {
            return {TxSource(Vec3(-0.25, 0.0, 0.25), Vec3::UnitY()), TxSource(Vec3(0.25, 0.0, 0.25), Vec3::UnitY())};
        }
    }

    inline ScenarioConfig preset_pyramid(bool fast = false)
    {
        const FrequencyGrid grid(6e9, 10e9, fast ? 11 : 21);
        const double xy = fast ? 0.3 : 0.4;
        const std::size_t nxy = fast ? 121 : 161;
        ScenarioConfig c(grid, detail::preset_plane(fast), ImagingVolume(-xy, xy, nxy, -xy, xy, nxy, -0.1, 0.2, 61),
                         detail::xy_components());
        c.name = fast ? "pyramid-fast" : "pyramid";
        c.notes = {"Pyramid dimensions are an assumption: square base 0.3 m centred at the origin, apex height 0.15 m.",
                   "Shell modelled as 8 right-triangle plates, facet spacing a quarter of the shortest wavelength.",
                   "Volume z range stops below the transmitters at z = 0.25 m."};
        c.txs = detail::pyramid_txs();
        c.scene.plates = detail::pyramid_plates(detail::preset_facet_density(grid.f_max()));
        c.scene.occlusion_enabled = true;
        c.scene.double_bounce_enabled = false;
        c.pipeline.padding = 3;
        c.pipeline.mip_axes = {Axis::z, Axis::y};
        c.output_dir = fast ? "out/pyramid-fast" : "out/pyramid";
        validate_config(c);
        return c;
    }

    inline ScenarioConfig preset_dihedral(bool fast = false)
    {
        const FrequencyGrid grid(2e9, 12e9, fast ? 21 : 41);
        const double x = fast ? 0.3 : 0.4;
        const std::size_t nx = fast ? 121 : 161;
        ScenarioConfig c(grid, detail::preset_plane(fast), ImagingVolume(-x, x, nx, -0.15, 0.15, 61, -0.2, 0.35, 111),
                         detail::xy_components());
        c.name = fast ? "dihedral-fast" : "dihedral";
        c.notes = {"Plate dimensions are an assumption: two 0.3 m x 0.3 m plates meeting along the y axis, 90 degree interior angle opening towards +z.",
                   "Transmitters are y-polarized like the pyramid scenario.",
                   "Volume z range stops below the transmitters at z = 0.4 m."};
        for (double xn : {-0.3, -0.2, -0.1, 0.0, 0.1, 0.2, 0.3})
            c.txs.emplace_back(Vec3(xn, 0.0, 0.4), Vec3::UnitY());
        c.scene.plates = detail::dihedral_plates(detail::preset_facet_density(grid.f_max()));
        c.scene.occlusion_enabled = true;
        c.scene.double_bounce_enabled = true;
        c.pipeline.padding = 3;
        c.pipeline.mip_axes = {Axis::y};
        c.output_dir = fast ? "out/dihedral-fast" : "out/dihedral";
        validate_config(c);
        return c;
    }

    inline ScenarioConfig preset_pointcal(bool fast = false)
    {
        const FrequencyGrid grid(6e9, 10e9, fast ? 11 : 21);
        ScenarioConfig c(grid, detail::preset_plane(fast), ImagingVolume(-0.1, 0.1, 41, -0.1, 0.1, 41, -0.1, 0.1, 41),
                         detail::xy_components());
        c.name = fast ? "pointcal-fast" : "pointcal";
        c.notes = {"Calibration scene: one unit point scatterer at the origin."};
        c.txs = detail::pyramid_txs();
        c.scene.scatterers.push_back({Vec3::Zero(), 1.0});
        c.pipeline.padding = 3;
        c.pipeline.mip_axes = {Axis::z, Axis::y};
        c.output_dir = fast ? "out/pointcal-fast" : "out/pointcal";
        validate_config(c);
        return c;
    }

    inline ScenarioConfig preset(const std::string &name, bool fast = false)
    {
        if (name == "pyramid")
            return preset_pyramid(fast);
        if (name == "dihedral")
            return preset_dihedral(fast);
        if (name == "pointcal")
            return preset_pointcal(fast);
        throw ConfigError("unknown preset '" + name + "' (expected pyramid, dihedral or pointcal)");
    }
}

#endif
