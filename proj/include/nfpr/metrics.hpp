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

#ifndef NFPR_METRICS_HPP
#define NFPR_METRICS_HPP

#include "nfpr/combine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nfpr
{
    enum class Axis
    {
        x = 0,
        y = 1,
        z = 2
    };

    inline const char *to_string(Axis a) { return a == Axis::x ? "x" : a == Axis::y ? "y" : "z"; }

    inline Axis axis_from_string(const std::string &s)
    {
        if (s == "x")
            return Axis::x;
        if (s == "y")
            return Axis::y;
        if (s == "z")
            return Axis::z;
        throw std::invalid_argument("unknown axis '" + s + "'");
    }

    // Reports clamp infinite dB values to +-99
    inline constexpr double db_clamp = 99.0;

    inline double clamp_db(double db)
    {
        if (std::isnan(db))
            return -db_clamp;
        return std::clamp(db, -db_clamp, db_clamp);
    }

    struct VoxelIndex
    {
        std::size_t ix = 0, iy = 0, iz = 0;
        bool operator==(const VoxelIndex &) const = default;
    };

    inline VoxelIndex unravel(const ImagingVolume &g, std::size_t v)
    {
        return {v % g.nx(), (v / g.nx()) % g.ny(), v / (g.nx() * g.ny())};
    }

    inline std::size_t chebyshev_distance(const VoxelIndex &a, const VoxelIndex &b)
    {
        auto d = [](std::size_t p, std::size_t q)
        { return p > q ? p - q : q - p; };
        return std::max({d(a.ix, b.ix), d(a.iy, b.iy), d(a.iz, b.iz)});
    }

    // ============================================================================================
    // Maximum intensity projections
    // ============================================================================================

    // axis z -> [y][x], axis y -> [z][x], axis x -> [z][y]
    inline Array2D<double> mip(const ImagingVolume &g, std::span<const double> intensity, Axis axis)
    {
        if (intensity.size() != g.voxel_count() || intensity.empty())
            throw std::invalid_argument("mip: intensity does not match the volume");
        const std::size_t nx = g.nx(), ny = g.ny(), nz = g.nz();
        Array2D<double> out;
        switch (axis)
        {
        case Axis::z:
            out = Array2D<double>(ny, nx, -std::numeric_limits<double>::infinity());
            break;
        case Axis::y:
            out = Array2D<double>(nz, nx, -std::numeric_limits<double>::infinity());
            break;
        case Axis::x:
            out = Array2D<double>(nz, ny, -std::numeric_limits<double>::infinity());
            break;
        }
        for (std::size_t iz = 0; iz < nz; ++iz)
            for (std::size_t iy = 0; iy < ny; ++iy)
                for (std::size_t ix = 0; ix < nx; ++ix)
                {
                    const double v = intensity[g.index(ix, iy, iz)];
                    double &o = axis == Axis::z ? out(iy, ix) : axis == Axis::y ? out(iz, ix) : out(iz, iy);
                    o = std::max(o, v);
                }
        return out;
    }

    inline Array2D<double> mip(const CombinedImage &image, Axis axis) { return mip(image.geometry, image.intensity, axis); }

    // ============================================================================================
    // Ground truth
    // ============================================================================================
    struct GroundTruthMask
    {
        explicit GroundTruthMask(ImagingVolume geom) : geometry(geom) {}

        ImagingVolume geometry;
        std::vector<std::uint8_t> target;    // target voxels dilated by the target dilation
        std::vector<std::uint8_t> exclusion; // target dilated further; its complement is the ghost region
        std::vector<Vec3> points;            // undilated truth positions inside the volume
        std::size_t target_count = 0;

        bool empty() const { return target_count == 0; }
    };

    namespace detail
    {
        // Chebyshev dilation by `radius` voxels as three separable running-max passes
        inline std::vector<std::uint8_t> dilate(const ImagingVolume &g, std::vector<std::uint8_t> mask, std::size_t radius)
        {
            if (radius == 0)
                return mask;
            const std::size_t n[3] = {g.nx(), g.ny(), g.nz()};
            const std::size_t stride[3] = {1, g.nx(), g.nx() * g.ny()};
            for (int a = 0; a < 3; ++a)
            {
                std::vector<std::uint8_t> next(mask.size(), 0);
                for (std::size_t v = 0; v < mask.size(); ++v)
                {
                    if (!mask[v])
                        continue;
                    const std::size_t i = (v / stride[a]) % n[a];
                    const std::size_t lo = i >= radius ? i - radius : 0;
                    const std::size_t hi = std::min(n[a] - 1, i + radius);
                    const std::size_t base = v - i * stride[a];
                    for (std::size_t j = lo; j <= hi; ++j)
                        next[base + j * stride[a]] = 1;
                }
                mask.swap(next);
            }
            return mask;
        }

        inline std::optional<std::size_t> nearest_index(const ImagingVolume &g, int axis, double p)
        {
            if (g.count(axis) == 1)
                return 0;
            const double pos = (p - g.min(axis)) / g.pitch(axis);
            const double r = std::round(pos);
            if (r < 0.0 || r > double(g.count(axis) - 1))
                return std::nullopt;
            return std::size_t(r);
        }
    }

    inline GroundTruthMask make_ground_truth(std::span<const Vec3> points, const ImagingVolume &g,
                                             std::size_t target_dilation = 1, std::size_t ghost_exclusion = 2)
    {
        GroundTruthMask mask(g);
        std::vector<std::uint8_t> seed(g.voxel_count(), 0);
        for (const Vec3 &p : points)
        {
            const auto ix = detail::nearest_index(g, 0, p.x());
            const auto iy = detail::nearest_index(g, 1, p.y());
            const auto iz = detail::nearest_index(g, 2, p.z());
            if (!ix || !iy || !iz)
                continue;
            seed[g.index(*ix, *iy, *iz)] = 1;
            mask.points.push_back(p);
        }
        mask.target = detail::dilate(g, seed, target_dilation);
        mask.exclusion = detail::dilate(g, mask.target, ghost_exclusion);
        mask.target_count = std::size_t(std::count(mask.target.begin(), mask.target.end(), std::uint8_t(1)));
        return mask;
    }

    inline GroundTruthMask make_ground_truth(const SceneDescription &scene, const ImagingVolume &g,
                                             std::size_t target_dilation = 1, std::size_t ghost_exclusion = 2)
    {
        const auto pts = scene.target_points();
        return make_ground_truth(pts, g, target_dilation, ghost_exclusion);
    }

    // ============================================================================================
    // Scalar metrics on intensity volumes
    // ============================================================================================
    inline std::size_t argmax(std::span<const double> intensity)
    {
        if (intensity.empty())
            throw std::invalid_argument("argmax: empty intensity");
        return std::size_t(std::max_element(intensity.begin(), intensity.end()) - intensity.begin());
    }

    // Strongest voxel of the ghost region (outside the exclusion mask)
    inline std::optional<std::size_t> ghost_peak(std::span<const double> intensity, const GroundTruthMask &truth)
    {
        std::optional<std::size_t> best;
        for (std::size_t v = 0; v < intensity.size(); ++v)
            if (!truth.exclusion[v] && (!best || intensity[v] > intensity[*best]))
                best = v;
        return best;
    }

    // 20 log10(max outside the dilated target / max inside the target); negative means suppression
    inline double ghost_to_target_ratio_db(std::span<const double> intensity, const GroundTruthMask &truth)
    {
        if (truth.empty())
            throw std::invalid_argument("ghost_to_target_ratio: empty ground truth mask");
        if (intensity.size() != truth.target.size())
            throw std::invalid_argument("ghost_to_target_ratio: mask does not match the image");
        double inside = 0.0, outside = 0.0;
        for (std::size_t v = 0; v < intensity.size(); ++v)
        {
            if (truth.target[v])
                inside = std::max(inside, intensity[v]);
            if (!truth.exclusion[v])
                outside = std::max(outside, intensity[v]);
        }
        if (outside == 0.0)
            return -db_clamp;
        if (inside == 0.0)
            return db_clamp;
        return clamp_db(20.0 * std::log10(outside / inside));
    }

    inline double ghost_to_target_ratio_db(const CombinedImage &image, const GroundTruthMask &truth)
    {
        return ghost_to_target_ratio_db(image.intensity, truth);
    }

    // Fraction of target voxels above threshold_db relative to the image peak
    inline double coverage(std::span<const double> intensity, const GroundTruthMask &truth, double threshold_db)
    {
        if (truth.empty())
            throw std::invalid_argument("coverage: empty ground truth mask");
        if (!(threshold_db < 0.0))
            throw std::invalid_argument("coverage: threshold must be negative");
        const double peak = intensity.empty() ? 0.0 : *std::max_element(intensity.begin(), intensity.end());
        if (!(peak > 0.0))
            return 0.0;
        const double level = peak * std::pow(10.0, threshold_db / 20.0);
        std::size_t hit = 0;
        for (std::size_t v = 0; v < intensity.size(); ++v)
            if (truth.target[v] && intensity[v] > level)
                ++hit;
        return double(hit) / double(truth.target_count);
    }

    inline double coverage(const CombinedImage &image, const GroundTruthMask &truth, double threshold_db)
    {
        return coverage(image.intensity, truth, threshold_db);
    }

    // Shannon entropy of the unit-sum intensity divided by log(voxel count)
    inline double normalized_entropy(std::span<const double> intensity)
    {
        if (intensity.size() < 2)
            return 0.0;
        double sum = 0.0;
        for (double v : intensity)
            sum += v;
        if (!(sum > 0.0))
            return 0.0;
        double h = 0.0;
        for (double v : intensity)
            if (v > 0.0)
            {
                const double q = v / sum;
                h -= q * std::log(q);
            }
        return h / std::log(double(intensity.size()));
    }

    // Peak over the strongest voxel farther than `radius` voxels (Euclidean) from the peak, in dB
    inline double peak_sidelobe_ratio_db(const ImagingVolume &g, std::span<const double> intensity, double radius = 3.0)
    {
        const std::size_t p = argmax(intensity);
        const VoxelIndex pk = unravel(g, p);
        double side = 0.0;
        for (std::size_t v = 0; v < intensity.size(); ++v)
        {
            const VoxelIndex q = unravel(g, v);
            const double dx = double(q.ix) - double(pk.ix), dy = double(q.iy) - double(pk.iy), dz = double(q.iz) - double(pk.iz);
            if (dx * dx + dy * dy + dz * dz > radius * radius)
                side = std::max(side, intensity[v]);
        }
        if (!(intensity[p] > 0.0))
            return 0.0;
        if (side == 0.0)
            return db_clamp;
        return clamp_db(20.0 * std::log10(intensity[p] / side));
    }

    // Distance from the peak voxel centre to the nearest truth point
    inline double localization_error(const ImagingVolume &g, std::span<const double> intensity, std::span<const Vec3> truth)
    {
        if (truth.empty())
            throw std::invalid_argument("localization_error: no truth points");
        const Vec3 peak = g.voxel(argmax(intensity));
        double best = std::numeric_limits<double>::infinity();
        for (const Vec3 &t : truth)
            best = std::min(best, (t - peak).norm());
        return best;
    }

    struct MetricsReport
    {
        std::string label;
        Vec3 peak_position = Vec3::Zero();
        bool has_truth = false;
        double localization_error = 0.0; // m
        double ghost_to_target_db = 0.0;
        double coverage = 0.0;
        double entropy = 0.0;
        double peak_sidelobe_db = 0.0;
        bool empty_image = false;
        std::string provenance;
    };

    inline MetricsReport score(const CombinedImage &image, const GroundTruthMask &truth, double threshold_db,
                               std::string label, std::string provenance = {})
    {
        MetricsReport r;
        r.label = std::move(label);
        r.provenance = std::move(provenance);
        r.empty_image = image.empty;
        r.peak_position = image.geometry.voxel(argmax(image.intensity));
        r.entropy = normalized_entropy(image.intensity);
        r.peak_sidelobe_db = peak_sidelobe_ratio_db(image.geometry, image.intensity);
        if (!truth.empty())
        {
            r.has_truth = true;
            r.localization_error = localization_error(image.geometry, image.intensity, truth.points);
            r.ghost_to_target_db = ghost_to_target_ratio_db(image.intensity, truth);
            r.coverage = coverage(image.intensity, truth, threshold_db);
        }
        return r;
    }

    // ============================================================================================
    // Transmitter localization from incident-inclusive data
    // ============================================================================================
    struct SearchGrid
    {
        Vec3 origin = Vec3::Zero();
        double step = 0.02;
        std::size_t nx = 1, ny = 1, nz = 1;

        std::size_t size() const { return nx * ny * nz; }
        Vec3 point(std::size_t i, std::size_t j, std::size_t k) const { return origin + step * Vec3(double(i), double(j), double(k)); }
    };

    struct TxEstimate
    {
        Vec3 position = Vec3::Zero();
        double score = 0.0;
        bool on_boundary = false; // maximum on the search-grid boundary: the grid may exclude the source
    };

    // Exhaustive matched-filter focus: score(r) = sum_p | sum_f sum_m U(n,f,p,m) conj(g(r_m, r)) |
    inline TxEstimate tx_localize(const MeasurementDataCube &cube, std::size_t n, const SearchGrid &search,
                                  unsigned threads = 0)
    {
        if (!cube.incident_included())
            throw std::invalid_argument("tx_localize: cube must include the incident field");
        if (n >= cube.tx_count())
            throw std::out_of_range("tx_localize: tx index out of range");
        if (search.size() == 0 || !(search.step > 0.0))
            throw std::invalid_argument("tx_localize: empty search grid");

        const std::size_t F = cube.frequency_count(), P = cube.component_count(), M = cube.sample_count();
        // [m][f][p] layout for the inner loop
        std::vector<double> u_re(M * F * P), u_im(M * F * P);
        for (std::size_t f = 0; f < F; ++f)
            for (std::size_t p = 0; p < P; ++p)
            {
                const auto s = cube.slice(n, f, p);
                for (std::size_t m = 0; m < M; ++m)
                {
                    u_re[(m * F + f) * P + p] = s[m].real();
                    u_im[(m * F + f) * P + p] = s[m].imag();
                }
            }
        const auto positions = cube.plane().sample_positions();
        const double k0 = cube.grid().wavenumber(0);
        const double dk = cube.grid().wavenumber_step();

        std::vector<double> scores(search.size());
        parallel_for(search.size(), threads, [&](std::size_t c)
        {
            const std::size_t i = c % search.nx, j = (c / search.nx) % search.ny, k = c / (search.nx * search.ny);
            const Vec3 r = search.point(i, j, k);
            std::vector<double> acc_re(P, 0.0), acc_im(P, 0.0);
            for (std::size_t m = 0; m < M; ++m)
            {
                const double R = (positions[m] - r).norm();
                if (!(R > 0.0))
                    continue;
                const double mag = 1.0 / (4.0 * pi * R);
                double g_re = mag * std::cos(k0 * R), g_im = mag * std::sin(k0 * R);
                const double s_re = std::cos(dk * R), s_im = std::sin(dk * R);
                const double *ur = &u_re[m * F * P];
                const double *ui = &u_im[m * F * P];
                for (std::size_t f = 0; f < F; ++f)
                {
                    for (std::size_t p = 0; p < P; ++p)
                    {
                        const double a = ur[f * P + p], b = ui[f * P + p];
                        acc_re[p] += a * g_re - b * g_im;
                        acc_im[p] += a * g_im + b * g_re;
                    }
                    const double nr = g_re * s_re - g_im * s_im;
                    g_im = g_re * s_im + g_im * s_re;
                    g_re = nr;
                }
            }
            double s = 0.0;
            for (std::size_t p = 0; p < P; ++p)
                s += std::hypot(acc_re[p], acc_im[p]);
            scores[c] = s;
        });

        const std::size_t best = argmax(scores);
        const std::size_t i = best % search.nx, j = (best / search.nx) % search.ny, k = best / (search.nx * search.ny);
        auto edge = [](std::size_t idx, std::size_t count)
        { return count > 1 && (idx == 0 || idx + 1 == count); };

        TxEstimate est;
        est.position = search.point(i, j, k);
        est.score = scores[best];
        est.on_boundary = edge(i, search.nx) || edge(j, search.ny) || edge(k, search.nz);
        return est;
    }
}

#endif
