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

#ifndef NFPR_FORWARD_HPP
#define NFPR_FORWARD_HPP

#include "nfpr/dipole.hpp"
#include "nfpr/parallel.hpp"
#include "nfpr/scene.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

namespace nfpr
{
    // ============================================================================================
    // Sampled probe signals U indexed [tx n][frequency f][component slot p][plane sample m]
    // ============================================================================================
    class MeasurementDataCube
    {
    public:
        MeasurementDataCube(std::vector<TxSource> txs, FrequencyGrid grid, MeasurementPlane plane,
                            ComponentSet components, bool incident_included)
            : txs_(std::move(txs)), grid_(grid), plane_(plane), components_(std::move(components)),
              incident_included_(incident_included),
              values_(txs_.size() * grid_.size() * components_.size() * plane_.sample_count())
        {
        }

        std::size_t tx_count() const { return txs_.size(); }
        std::size_t frequency_count() const { return grid_.size(); }
        std::size_t component_count() const { return components_.size(); }
        std::size_t sample_count() const { return plane_.sample_count(); }

        const std::vector<TxSource> &txs() const { return txs_; }
        const FrequencyGrid &grid() const { return grid_; }
        const MeasurementPlane &plane() const { return plane_; }
        const ComponentSet &components() const { return components_; }
        bool incident_included() const { return incident_included_; }

        std::size_t offset(std::size_t n, std::size_t f, std::size_t slot) const
        {
            return ((n * grid_.size() + f) * components_.size() + slot) * plane_.sample_count();
        }

        cplx &at(std::size_t n, std::size_t f, std::size_t slot, std::size_t m) { return values_[offset(n, f, slot) + m]; }
        const cplx &at(std::size_t n, std::size_t f, std::size_t slot, std::size_t m) const { return values_[offset(n, f, slot) + m]; }

        std::span<const cplx> slice(std::size_t n, std::size_t f, std::size_t slot) const
        {
            check(n, f, slot);
            return {values_.data() + offset(n, f, slot), plane_.sample_count()};
        }

        std::span<cplx> slice(std::size_t n, std::size_t f, std::size_t slot)
        {
            check(n, f, slot);
            return {values_.data() + offset(n, f, slot), plane_.sample_count()};
        }

        // Plane slice as a (ny, nx) array
        Array2D<cplx> plane_field(std::size_t n, std::size_t f, std::size_t slot) const
        {
            Array2D<cplx> out(plane_.ny(), plane_.nx());
            const auto s = slice(n, f, slot);
            std::copy(s.begin(), s.end(), out.data().begin());
            return out;
        }

        std::vector<cplx> &values() { return values_; }
        const std::vector<cplx> &values() const { return values_; }

    private:
        void check(std::size_t n, std::size_t f, std::size_t slot) const
        {
            if (n >= txs_.size() || f >= grid_.size() || slot >= components_.size())
                throw std::out_of_range("measurement cube index out of range");
        }

        std::vector<TxSource> txs_;
        FrequencyGrid grid_;
        MeasurementPlane plane_;
        ComponentSet components_;
        bool incident_included_;
        std::vector<cplx> values_;
    };

    // A secondary source: a scatterer (or plate facet) of reflectivity `weight` that reradiates
    // the field of `illumination` at its position through the scalar Green's function.
    struct Radiator
    {
        Vec3 position;
        cplx weight;
        TxSource illumination;
    };

    struct RadiatorSelection
    {
        bool single_bounce = true;
        bool double_bounce = true;
        bool parasitic = true;
    };

    inline std::vector<Radiator> build_radiators(const SceneDescription &scene, const TxSource &src,
                                                 RadiatorSelection sel = {})
    {
        std::vector<Radiator> out;
        const std::span<const ReflectivePlate> plates(scene.plates);
        auto lit = [&](const Vec3 &p)
        { return !scene.occlusion_enabled || !is_occluded(src.position, p, plates); };

        const auto facets = scene.facets();

        if (sel.single_bounce)
        {
            for (const auto &s : scene.scatterers)
                if (lit(s.position))
                    out.push_back({s.position, s.reflectivity, src});
            for (const auto &f : facets)
                if (lit(f.position))
                    out.push_back({f.position, f.reflectivity, src});
        }

        // Image method: facets of plate B lit by the image of the source in plate A, kept only
        // where the specular bounce point lies on A.
        if (sel.double_bounce && scene.double_bounce_enabled && scene.plates.size() >= 2)
        {
            for (std::size_t a = 0; a < scene.plates.size(); ++a)
            {
                const ReflectivePlate &A = scene.plates[a];
                const TxSource image = mirror_source(src, A);
                for (const auto &f : facets)
                {
                    if (f.plate == a)
                        continue;
                    const auto bounce = segment_plate_crossing(image.position, f.position, A);
                    if (!bounce)
                        continue;
                    if (scene.occlusion_enabled &&
                        (is_occluded(src.position, *bounce, plates) || is_occluded(*bounce, f.position, plates)))
                        continue;
                    out.push_back({f.position, f.reflectivity, image});
                }
            }
        }

        if (sel.parasitic)
            for (const auto &s : scene.parasitic)
                if (lit(s.position))
                    out.push_back({s.position, s.reflectivity, src});
        return out;
    }

    // Field at r_m radiated by a set of secondary sources at wavenumber k
    inline CVec3 radiated_field(std::span<const Radiator> radiators, const SceneDescription &scene,
                                const Vec3 &r_m, double k)
    {
        CVec3 E = CVec3::Zero();
        for (const auto &rad : radiators)
        {
            if (scene.occlusion_enabled && is_occluded(rad.position, r_m, scene.plates))
                continue;
            const cplx g = green(r_m, rad.position, k);
            E += (rad.weight * g) * dipole_field(rad.illumination, rad.position, k);
        }
        return E;
    }

    // Born single-bounce field of the scatterers and plate facets
    inline CVec3 scattered_field_single_bounce(const SceneDescription &scene, const TxSource &src,
                                               const Vec3 &r_m, double k)
    {
        const auto rads = build_radiators(scene, src, {true, false, false});
        return radiated_field(rads, scene, r_m, k);
    }

    // Plate-to-plate double-bounce field (zero unless enabled with at least two plates)
    inline CVec3 scattered_field_double_bounce(const SceneDescription &scene, const TxSource &src,
                                               const Vec3 &r_m, double k)
    {
        const auto rads = build_radiators(scene, src, {false, true, false});
        return radiated_field(rads, scene, r_m, k);
    }

    // Single-bounce field of the parasitic scatterers
    inline CVec3 parasitic_field(const SceneDescription &scene, const TxSource &src, const Vec3 &r_m, double k)
    {
        const auto rads = build_radiators(scene, src, {false, false, true});
        return radiated_field(rads, scene, r_m, k);
    }

    struct SimulateOptions
    {
        bool include_incident = false;
        double noise_snr_db = std::numeric_limits<double>::infinity(); // infinity disables noise
        std::uint64_t seed = 0;
        unsigned threads = 0;
    };

    namespace detail
    {
        inline void check_off_plane(const Vec3 &p, const MeasurementPlane &plane, const char *what)
        {
            if (std::abs(p.z() - plane.z()) < 1e-9)
                throw std::invalid_argument(std::string("simulate: ") + what + " lies on the measurement plane");
        }

        // Scattered part of one tx slab of the cube. Frequencies are stepped with the phasor
        // recurrence e^{-j k_{f+1} R} = e^{-j k_f R} e^{-j dk R}.
        inline void simulate_tx(const SceneDescription &scene, const TxSource &src, std::size_t n,
                                MeasurementDataCube &cube, unsigned threads)
        {
            const auto rads = build_radiators(scene, src);
            const FrequencyGrid &grid = cube.grid();
            const MeasurementPlane &plane = cube.plane();
            const std::size_t F = grid.size(), P = cube.component_count(), M = plane.sample_count();
            const std::size_t R = rads.size();
            if (R == 0)
                return;

            std::vector<int> comp_axis(P);
            for (std::size_t p = 0; p < P; ++p)
                comp_axis[p] = int(cube.components()[p]);

            // amplitude of radiator i at frequency f, component p
            std::vector<double> amp_re(R * F * P), amp_im(R * F * P);
            for (std::size_t i = 0; i < R; ++i)
                for (std::size_t f = 0; f < F; ++f)
                {
                    const CVec3 E = dipole_field(rads[i].illumination, rads[i].position, grid.wavenumber(f));
                    for (std::size_t p = 0; p < P; ++p)
                    {
                        const cplx a = rads[i].weight * E[comp_axis[p]];
                        amp_re[(i * F + f) * P + p] = a.real();
                        amp_im[(i * F + f) * P + p] = a.imag();
                    }
                }

            const double k0 = grid.wavenumber(0);
            const double dk = grid.wavenumber_step();
            const bool occlusion = scene.occlusion_enabled && !scene.plates.empty();
            constexpr std::size_t S = 16;
            const std::size_t blocks = (M + S - 1) / S;

            parallel_for(blocks, threads, [&](std::size_t b)
            {
                const std::size_t m0 = b * S;
                const std::size_t count = std::min(S, M - m0);
                std::vector<double> acc_re(F * P * S, 0.0), acc_im(F * P * S, 0.0);
                std::array<Vec3, S> pos;
                for (std::size_t s = 0; s < count; ++s)
                    pos[s] = plane.position(m0 + s);

                alignas(64) double g_re[S], g_im[S], st_re[S], st_im[S];
                for (std::size_t i = 0; i < R; ++i)
                {
                    const Vec3 &ri = rads[i].position;
                    bool any = false;
                    for (std::size_t s = 0; s < S; ++s)
                    {
                        g_re[s] = g_im[s] = 0.0;
                        st_re[s] = 1.0;
                        st_im[s] = 0.0;
                        if (s >= count)
                            continue;
                        const double dist = (pos[s] - ri).norm();
                        if (!(dist > 1e-12))
                            throw std::invalid_argument("simulate: scatterer coincides with a plane sample");
                        if (occlusion && is_occluded(ri, pos[s], scene.plates))
                            continue;
                        const double mag = 1.0 / (4.0 * pi * dist);
                        g_re[s] = mag * std::cos(k0 * dist);
                        g_im[s] = -mag * std::sin(k0 * dist);
                        st_re[s] = std::cos(dk * dist);
                        st_im[s] = -std::sin(dk * dist);
                        any = true;
                    }
                    if (!any)
                        continue;

                    const double *ar = &amp_re[i * F * P];
                    const double *ai = &amp_im[i * F * P];
                    for (std::size_t f = 0; f < F; ++f)
                    {
                        for (std::size_t p = 0; p < P; ++p)
                        {
                            const double a_re = ar[f * P + p], a_im = ai[f * P + p];
                            double *cr = &acc_re[(f * P + p) * S];
                            double *ci = &acc_im[(f * P + p) * S];
                            for (std::size_t s = 0; s < S; ++s)
                            {
                                cr[s] += a_re * g_re[s] - a_im * g_im[s];
                                ci[s] += a_re * g_im[s] + a_im * g_re[s];
                            }
                        }
                        for (std::size_t s = 0; s < S; ++s)
                        {
                            const double nr = g_re[s] * st_re[s] - g_im[s] * st_im[s];
                            const double ni = g_re[s] * st_im[s] + g_im[s] * st_re[s];
                            g_re[s] = nr;
                            g_im[s] = ni;
                        }
                    }
                }

                for (std::size_t f = 0; f < F; ++f)
                    for (std::size_t p = 0; p < P; ++p)
                        for (std::size_t s = 0; s < count; ++s)
                            cube.at(n, f, p, m0 + s) = {acc_re[(f * P + p) * S + s], acc_im[(f * P + p) * S + s]};
            });
        }
    }

    // Synthesizes U(S_n, r_m) = [E_i] + single bounce + double bounce + parasitic at every plane
    // sample, with optional circular white Gaussian noise at the requested SNR relative to the
    // mean scattered power of the cube.
    inline MeasurementDataCube simulate(const SceneDescription &scene, const std::vector<TxSource> &txs,
                                        const FrequencyGrid &grid, const MeasurementPlane &plane,
                                        const ComponentSet &components, const SimulateOptions &opt = {})
    {
        scene.validate();
        if (txs.empty())
            throw std::invalid_argument("simulate: no transmitters");
        for (const auto &tx : txs)
            detail::check_off_plane(tx.position, plane, "transmitter");
        for (const auto &s : scene.scatterers)
            detail::check_off_plane(s.position, plane, "scatterer");
        for (const auto &s : scene.parasitic)
            detail::check_off_plane(s.position, plane, "parasitic scatterer");
        for (const auto &f : scene.facets())
            detail::check_off_plane(f.position, plane, "plate facet");

        MeasurementDataCube cube(txs, grid, plane, components, opt.include_incident);
        for (std::size_t n = 0; n < txs.size(); ++n)
            detail::simulate_tx(scene, txs[n], n, cube, opt.threads);

        double scattered_power = 0.0;
        for (const cplx &v : cube.values())
            scattered_power += std::norm(v);
        scattered_power /= double(cube.values().size());

        if (opt.include_incident)
        {
            const std::size_t M = plane.sample_count();
            for (std::size_t n = 0; n < txs.size(); ++n)
                parallel_for(M, opt.threads, [&](std::size_t m)
                {
                    const Vec3 r = plane.position(m);
                    if (scene.occlusion_enabled && is_occluded(txs[n].position, r, scene.plates))
                        return;
                    for (std::size_t f = 0; f < grid.size(); ++f)
                    {
                        const CVec3 E = dipole_field(txs[n], r, grid.wavenumber(f));
                        for (std::size_t p = 0; p < components.size(); ++p)
                            cube.at(n, f, p, m) += E[int(components[p])];
                    }
                });
        }

        if (std::isfinite(opt.noise_snr_db) && scattered_power > 0.0)
        {
            const double sigma = std::sqrt(scattered_power / std::pow(10.0, opt.noise_snr_db / 10.0) / 2.0);
            std::mt19937_64 rng(opt.seed);
            std::normal_distribution<double> normal(0.0, 1.0);
            for (cplx &v : cube.values())
            {
                const double re = normal(rng);
                const double im = normal(rng);
                v += cplx(sigma * re, sigma * im);
            }
        }
        return cube;
    }
}

#endif
