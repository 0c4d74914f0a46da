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

#ifndef NFPR_SCENE_HPP
#define NFPR_SCENE_HPP

#include "nfpr/grids.hpp"

#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace nfpr
{
    struct PointScatterer
    {
        Vec3 position = Vec3::Zero();
        cplx reflectivity = 1.0; // dimensionless Born coefficient
    };

    enum class PlateShape
    {
        rectangle, // corner + s u + t v, 0 <= s, t <= 1
        triangle   // right triangle corner + s u + t v, s, t >= 0, s + t <= 1
    };

    // Planar reflector spanned by two orthogonal edges. Facets are point scatterers of
    // reflectivity gamma * facet area placed at cell centres.
    struct ReflectivePlate
    {
        Vec3 corner = Vec3::Zero();
        Vec3 edge_u = Vec3::UnitX();
        Vec3 edge_v = Vec3::UnitY();
        double facet_density = 100.0; // facets per metre along each edge
        cplx reflection_coefficient = -1.0;
        PlateShape shape = PlateShape::rectangle;

        Vec3 normal() const { return edge_u.cross(edge_v).normalized(); }

        double area() const
        {
            const double a = edge_u.norm() * edge_v.norm();
            return shape == PlateShape::triangle ? 0.5 * a : a;
        }

        // Plate coordinates (s, t) of a point assumed to lie in the plate's plane
        std::pair<double, double> local(const Vec3 &p) const
        {
            const Vec3 d = p - corner;
            return {d.dot(edge_u) / edge_u.squaredNorm(), d.dot(edge_v) / edge_v.squaredNorm()};
        }

        // Open-set membership: points on the boundary are outside
        bool interior(double s, double t, double tol = 1e-9) const
        {
            if (s <= tol || t <= tol)
                return false;
            if (shape == PlateShape::triangle)
                return s + t < 1.0 - tol;
            return s < 1.0 - tol && t < 1.0 - tol;
        }

        void validate() const
        {
            if (!corner.allFinite() || !edge_u.allFinite() || !edge_v.allFinite())
                throw std::invalid_argument("plate: non-finite geometry");
            const double lu = edge_u.norm(), lv = edge_v.norm();
            if (!(lu > 0.0) || !(lv > 0.0))
                throw std::invalid_argument("plate: edges must have positive length");
            if (std::abs(edge_u.dot(edge_v)) > 1e-9)
                throw std::invalid_argument("plate: edges must be orthogonal");
            if (!(facet_density > 0.0) || !std::isfinite(facet_density))
                throw std::invalid_argument("plate: facet density must be positive");
        }
    };

    struct Facet
    {
        Vec3 position;
        cplx reflectivity;
        std::size_t plate;
    };

    inline std::vector<Facet> plate_facets(const ReflectivePlate &plate, std::size_t plate_index)
    {
        plate.validate();
        const auto nu = std::size_t(std::max(1.0, std::ceil(plate.edge_u.norm() * plate.facet_density - 1e-9)));
        const auto nv = std::size_t(std::max(1.0, std::ceil(plate.edge_v.norm() * plate.facet_density - 1e-9)));
        const double cell_area = plate.edge_u.norm() * plate.edge_v.norm() / double(nu * nv);

        std::vector<Facet> out;
        out.reserve(nu * nv);
        for (std::size_t j = 0; j < nv; ++j)
            for (std::size_t i = 0; i < nu; ++i)
            {
                const double s = (double(i) + 0.5) / double(nu);
                const double t = (double(j) + 0.5) / double(nv);
                if (plate.shape == PlateShape::triangle && s + t >= 1.0)
                    continue;
                out.push_back({plate.corner + s * plate.edge_u + t * plate.edge_v,
                               plate.reflection_coefficient * cell_area, plate_index});
            }
        return out;
    }

    struct SceneDescription
    {
        std::vector<PointScatterer> scatterers;
        std::vector<ReflectivePlate> plates;
        std::vector<PointScatterer> parasitic; // clutter outside the targets of interest
        bool occlusion_enabled = false;
        bool double_bounce_enabled = false;

        void validate() const
        {
            for (const auto &s : scatterers)
                if (!s.position.allFinite() || !std::isfinite(s.reflectivity.real()) || !std::isfinite(s.reflectivity.imag()))
                    throw std::invalid_argument("scene: non-finite scatterer");
            for (const auto &s : parasitic)
                if (!s.position.allFinite() || !std::isfinite(s.reflectivity.real()) || !std::isfinite(s.reflectivity.imag()))
                    throw std::invalid_argument("scene: non-finite parasitic scatterer");
            for (const auto &p : plates)
                p.validate();
        }

        std::vector<Facet> facets() const
        {
            std::vector<Facet> out;
            for (std::size_t i = 0; i < plates.size(); ++i)
            {
                auto f = plate_facets(plates[i], i);
                out.insert(out.end(), f.begin(), f.end());
            }
            return out;
        }

        // Positions of the targets of interest (point scatterers and plate facets)
        std::vector<Vec3> target_points() const
        {
            std::vector<Vec3> out;
            for (const auto &s : scatterers)
                out.push_back(s.position);
            for (const auto &f : facets())
                out.push_back(f.position);
            return out;
        }

        bool empty() const { return scatterers.empty() && plates.empty() && parasitic.empty(); }
    };

    // ============================================================================================
    // Segment / plate intersection and image sources
    // ============================================================================================

    // Crossing point of the open segment (a, b) with the plate's open interior
    inline std::optional<Vec3> segment_plate_crossing(const Vec3 &a, const Vec3 &b, const ReflectivePlate &plate)
    {
        const Vec3 n = plate.edge_u.cross(plate.edge_v);
        const Vec3 d = b - a;
        const double denom = n.dot(d);
        if (std::abs(denom) <= 1e-14 * n.norm() * d.norm())
            return std::nullopt;
        const double t = n.dot(plate.corner - a) / denom;
        if (t <= 1e-9 || t >= 1.0 - 1e-9)
            return std::nullopt;
        const Vec3 p = a + t * d;
        const auto [s, w] = plate.local(p);
        if (!plate.interior(s, w))
            return std::nullopt;
        return p;
    }

    // True iff the open segment (a, b) crosses the interior of any plate
    inline bool is_occluded(const Vec3 &a, const Vec3 &b, std::span<const ReflectivePlate> plates)
    {
        for (const auto &plate : plates)
            if (segment_plate_crossing(a, b, plate))
                return true;
        return false;
    }

    inline Vec3 mirror_point(const Vec3 &p, const ReflectivePlate &plate)
    {
        const Vec3 n = plate.normal();
        return p - 2.0 * (p - plate.corner).dot(n) * n;
    }

    // Image of a dipole in the plate's infinite plane: position and polarization reflected,
    // moment scaled by the plate's reflection coefficient.
    inline TxSource mirror_source(const TxSource &src, const ReflectivePlate &plate)
    {
        const Vec3 n = plate.normal();
        const double dist = (src.position - plate.corner).dot(n);
        if (std::abs(dist) < 1e-12)
            throw std::invalid_argument("mirror_source: source lies in the plate's plane");
        TxSource out;
        out.position = src.position - 2.0 * dist * n;
        out.polarization = src.polarization - 2.0 * src.polarization.dot(n) * n;
        out.moment = src.moment * plate.reflection_coefficient;
        return out;
    }
}

#endif
