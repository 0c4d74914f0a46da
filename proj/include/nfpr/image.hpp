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

#ifndef NFPR_IMAGE_HPP
#define NFPR_IMAGE_HPP

#include "nfpr/forward.hpp"
#include "nfpr/pws.hpp"

#include <array>
#include <cmath>
#include <span>

namespace nfpr
{
    struct ImageProvenance
    {
        std::size_t tx = 0;
        std::size_t freq = 0;
        bool combined = false;
    };

    // Complex voxel values per Cartesian component; a component without storage is identically zero.
    class ImageVolume
    {
    public:
        explicit ImageVolume(ImagingVolume geometry) : geometry_(geometry) {}

        const ImagingVolume &geometry() const { return geometry_; }

        bool has(FieldComponent c) const { return !comps_[int(c)].empty(); }

        std::span<const cplx> component(FieldComponent c) const { return comps_[int(c)]; }

        // Allocates (zero-filled) on first access
        std::span<cplx> component(FieldComponent c)
        {
            auto &v = comps_[int(c)];
            if (v.empty())
                v.assign(geometry_.voxel_count(), cplx{});
            return v;
        }

        cplx value(FieldComponent c, std::size_t voxel) const
        {
            const auto &v = comps_[int(c)];
            return v.empty() ? cplx{} : v[voxel];
        }

        double magnitude(std::size_t voxel) const
        {
            double s = 0.0;
            for (const auto &v : comps_)
                if (!v.empty())
                    s += std::norm(v[voxel]);
            return std::sqrt(s);
        }

        ImageProvenance provenance;

    private:
        ImagingVolume geometry_;
        std::array<std::vector<cplx>, 3> comps_;
    };

    struct ImagingOptions
    {
        unsigned padding = 1; // lateral lattice refinement factor
        unsigned threads = 0;
    };

    // The x/y voxel grid must coincide with the measurement lattice refined by `padding` and stay
    // inside the plane's extent.
    inline void check_lattice(const ImagingVolume &volume, const MeasurementPlane &plane, unsigned padding)
    {
        if (padding == 0)
            throw std::invalid_argument("imaging: padding factor must be at least 1");
        const double origin[2] = {plane.x_min(), plane.y_min()};
        const double extent[2] = {plane.x_max(), plane.y_max()};
        const double step[2] = {plane.dx() / padding, plane.dy() / padding};
        const char *name[2] = {"x", "y"};
        for (int a = 0; a < 2; ++a)
        {
            const double pos = (volume.min(a) - origin[a]) / step[a];
            if (std::abs(pos - std::round(pos)) > 1e-6)
                throw std::invalid_argument(std::string("imaging: volume ") + name[a] + " origin is not on the plane lattice");
            if (volume.count(a) > 1 && std::abs(volume.pitch(a) - step[a]) > 1e-6 * step[a])
                throw std::invalid_argument(std::string("imaging: volume ") + name[a] + " pitch must equal plane spacing / padding");
            const double tol = 1e-9 + 1e-6 * step[a];
            if (volume.min(a) < origin[a] - tol || volume.max(a) > extent[a] + tol)
                throw std::invalid_argument(std::string("imaging: volume ") + name[a] + " window exceeds the plane extent");
        }
    }

    // Single-frequency image of one transmitter: every measured component is decomposed into its
    // plane-wave spectrum, backpropagated to each z slice of the volume and evaluated on the
    // volume's x/y window. Unmeasured components stay zero.
    inline ImageVolume single_frequency_image(const MeasurementDataCube &cube, std::size_t n, std::size_t f,
                                              const ImagingVolume &volume, const ImagingOptions &opt = {})
    {
        if (n >= cube.tx_count() || f >= cube.frequency_count())
            throw std::out_of_range("single_frequency_image: tx or frequency index out of range");
        const MeasurementPlane &plane = cube.plane();
        volume.check_clear_of(plane);
        check_lattice(volume, plane, opt.padding);

        const double k = cube.grid().wavenumber(f);
        const auto xs = volume.coords(0);
        const auto ys = volume.coords(1);
        const auto zs = volume.coords(2);
        const std::size_t nxy = volume.nx() * volume.ny();

        ImageVolume image(volume);
        image.provenance = {n, f, false};

        std::optional<LatticeEvaluator> evaluator;
        Eigen::MatrixXd kz; // negative marks evanescent bins

        for (std::size_t slot = 0; slot < cube.component_count(); ++slot)
        {
            const PlaneWaveSpectrum spec = pws_decompose(cube.plane_field(n, f, slot), plane, k);
            if (!evaluator)
            {
                evaluator.emplace(spec, xs, ys, true);
                const auto &rows = evaluator->rows();
                const auto &cols = evaluator->cols();
                kz.resize(Eigen::Index(rows.size()), Eigen::Index(cols.size()));
                for (std::size_t b = 0; b < rows.size(); ++b)
                    for (std::size_t a = 0; a < cols.size(); ++a)
                    {
                        const double kt2 = spec.kx[cols[a]] * spec.kx[cols[a]] + spec.ky[rows[b]] * spec.ky[rows[b]];
                        kz(Eigen::Index(b), Eigen::Index(a)) = kt2 <= k * k ? std::sqrt(k * k - kt2) : -1.0;
                    }
            }
            const Eigen::MatrixXcd S0 = evaluator->reduce(spec);
            std::span<cplx> out = image.component(cube.components()[slot]);

            // Slices are processed in chunks; inside a chunk the propagation phase is advanced by a
            // constant per-bin step, re-seeded exactly at each chunk start.
            constexpr std::size_t chunk = 16;
            const std::size_t nchunks = (zs.size() + chunk - 1) / chunk;
            const double dz = volume.pitch(2);
            parallel_for(nchunks, opt.threads, [&](std::size_t c)
            {
                const std::size_t z_begin = c * chunk;
                const std::size_t z_end = std::min(zs.size(), z_begin + chunk);
                Eigen::MatrixXcd phase(S0.rows(), S0.cols()), step(S0.rows(), S0.cols());
                for (Eigen::Index b = 0; b < S0.rows(); ++b)
                    for (Eigen::Index a = 0; a < S0.cols(); ++a)
                    {
                        const double q = kz(b, a);
                        phase(b, a) = q < 0.0 ? cplx{} : std::polar(1.0, q * (spec.z_ref - zs[z_begin]));
                        step(b, a) = q < 0.0 ? cplx{} : std::polar(1.0, -q * dz);
                    }
                Eigen::MatrixXcd Sz;
                for (std::size_t iz = z_begin; iz < z_end; ++iz)
                {
                    Sz = S0.cwiseProduct(phase);
                    const Eigen::MatrixXcd field = evaluator->apply(Sz);
                    cplx *dst = out.data() + iz * nxy;
                    for (Eigen::Index j = 0; j < field.rows(); ++j)
                        for (Eigen::Index i = 0; i < field.cols(); ++i)
                            dst[std::size_t(j) * volume.nx() + std::size_t(i)] = field(j, i);
                    phase = phase.cwiseProduct(step);
                }
            });
        }
        return image;
    }
}

#endif
