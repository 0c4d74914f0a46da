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

#ifndef NFPR_PWS_HPP
#define NFPR_PWS_HPP

#include "nfpr/fft.hpp"
#include "nfpr/grids.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace nfpr
{
    // Angular spectrum of one planar field component. The field is represented as
    //   E(x, y) = sum S(kx, ky) exp(-j (kx (x - x0) + ky (y - y0)))
    // with bins in standard DFT order.
    struct PlaneWaveSpectrum
    {
        Array2D<cplx> values; // [ky index][kx index]
        std::vector<double> kx;
        std::vector<double> ky;
        double k = 0.0;
        double z_ref = 0.0;
        double x0 = 0.0;
        double y0 = 0.0;

        bool propagating(std::size_t iy, std::size_t ix) const { return kx[ix] * kx[ix] + ky[iy] * ky[iy] <= k * k; }
    };

    // DFT bin wavenumbers 2 pi m / (n spacing), m in standard DFT order (non-negative first)
    inline std::vector<double> dft_wavenumbers(std::size_t n, double spacing)
    {
        std::vector<double> out(n);
        const std::size_t half = (n - 1) / 2;
        for (std::size_t i = 0; i < n; ++i)
        {
            const double m = i <= half ? double(i) : double(i) - double(n);
            out[i] = 2.0 * pi * m / (double(n) * spacing);
        }
        return out;
    }

    inline PlaneWaveSpectrum pws_decompose(const Array2D<cplx> &field, const MeasurementPlane &plane, double k)
    {
        if (field.rows() != plane.ny() || field.cols() != plane.nx())
            throw std::invalid_argument("pws_decompose: field shape does not match the plane");
        if (!(k > 0.0))
            throw std::invalid_argument("pws_decompose: wavenumber must be positive");

        PlaneWaveSpectrum spec;
        spec.values = field;
        dft2d(spec.values.data(), field.rows(), field.cols(), +1);
        const double scale = 1.0 / double(field.size());
        for (cplx &v : spec.values.data())
            v *= scale;
        spec.kx = dft_wavenumbers(plane.nx(), plane.dx());
        spec.ky = dft_wavenumbers(plane.ny(), plane.dy());
        spec.k = k;
        spec.z_ref = plane.z();
        spec.x0 = plane.x_min();
        spec.y0 = plane.y_min();
        return spec;
    }

    // Field on the originating sample lattice
    inline Array2D<cplx> pws_recompose(const PlaneWaveSpectrum &spec)
    {
        Array2D<cplx> out = spec.values;
        dft2d(out.data(), out.rows(), out.cols(), -1);
        return out;
    }

    // Moves the plane of validity to z_target: propagating bins pick up exp(-j kz (z_target - z_ref)),
    // evanescent bins are zeroed.
    inline PlaneWaveSpectrum propagate(const PlaneWaveSpectrum &spec, double z_target)
    {
        PlaneWaveSpectrum out = spec;
        const double dz = z_target - spec.z_ref;
        for (std::size_t iy = 0; iy < spec.ky.size(); ++iy)
            for (std::size_t ix = 0; ix < spec.kx.size(); ++ix)
            {
                const double kt2 = spec.kx[ix] * spec.kx[ix] + spec.ky[iy] * spec.ky[iy];
                if (kt2 > spec.k * spec.k)
                {
                    out.values(iy, ix) = 0.0;
                    continue;
                }
                const double kz = std::sqrt(spec.k * spec.k - kt2);
                out.values(iy, ix) *= std::polar(1.0, -kz * dz);
            }
        out.z_ref = z_target;
        return out;
    }

    // Towards the sources, which lie below the plane of validity
    inline PlaneWaveSpectrum backpropagate(const PlaneWaveSpectrum &spec, double z_target)
    {
        if (z_target > spec.z_ref)
            throw std::invalid_argument("backpropagate: target plane lies above the plane of validity");
        return propagate(spec, z_target);
    }

    // Evaluates a spectrum on an arbitrary rectilinear (ys x xs) grid through separable DFT
    // matrices. On the sample lattice refined by an integer factor this equals the zero-padded
    // inverse transform.
    class LatticeEvaluator
    {
    public:
        // With propagating_only, bins with |kx| > k or |ky| > k are dropped (they are zero after
        // propagation).
        LatticeEvaluator(const PlaneWaveSpectrum &layout, std::span<const double> xs, std::span<const double> ys,
                         bool propagating_only)
        {
            for (std::size_t i = 0; i < layout.kx.size(); ++i)
                if (!propagating_only || std::abs(layout.kx[i]) <= layout.k)
                    cols_.push_back(i);
            for (std::size_t i = 0; i < layout.ky.size(); ++i)
                if (!propagating_only || std::abs(layout.ky[i]) <= layout.k)
                    rows_.push_back(i);

            ex_.resize(Eigen::Index(cols_.size()), Eigen::Index(xs.size()));
            for (std::size_t a = 0; a < cols_.size(); ++a)
                for (std::size_t i = 0; i < xs.size(); ++i)
                    ex_(Eigen::Index(a), Eigen::Index(i)) = std::polar(1.0, -layout.kx[cols_[a]] * (xs[i] - layout.x0));
            ey_.resize(Eigen::Index(ys.size()), Eigen::Index(rows_.size()));
            for (std::size_t j = 0; j < ys.size(); ++j)
                for (std::size_t b = 0; b < rows_.size(); ++b)
                    ey_(Eigen::Index(j), Eigen::Index(b)) = std::polar(1.0, -layout.ky[rows_[b]] * (ys[j] - layout.y0));
        }

        const std::vector<std::size_t> &rows() const { return rows_; }
        const std::vector<std::size_t> &cols() const { return cols_; }

        Eigen::MatrixXcd reduce(const PlaneWaveSpectrum &spec) const
        {
            Eigen::MatrixXcd S(Eigen::Index(rows_.size()), Eigen::Index(cols_.size()));
            for (std::size_t b = 0; b < rows_.size(); ++b)
                for (std::size_t a = 0; a < cols_.size(); ++a)
                    S(Eigen::Index(b), Eigen::Index(a)) = spec.values(rows_[b], cols_[a]);
            return S;
        }

        // out (ny_out x nx_out) = Ey * S * Ex, multiplied in the cheaper order
        Eigen::MatrixXcd apply(const Eigen::MatrixXcd &S) const
        {
            const double nyo = double(ey_.rows()), nb = double(ey_.cols());
            const double na = double(ex_.rows()), nxo = double(ex_.cols());
            const double left_first = nyo * nb * na + nyo * na * nxo;
            const double right_first = nb * na * nxo + nyo * nb * nxo;
            if (left_first <= right_first)
            {
                Eigen::MatrixXcd t = ey_ * S;
                return t * ex_;
            }
            Eigen::MatrixXcd t = S * ex_;
            return ey_ * t;
        }

        Array2D<cplx> evaluate(const PlaneWaveSpectrum &spec) const
        {
            const Eigen::MatrixXcd out = apply(reduce(spec));
            Array2D<cplx> field(std::size_t(out.rows()), std::size_t(out.cols()));
            for (Eigen::Index j = 0; j < out.rows(); ++j)
                for (Eigen::Index i = 0; i < out.cols(); ++i)
                    field(std::size_t(j), std::size_t(i)) = out(j, i);
            return field;
        }

    private:
        std::vector<std::size_t> rows_;
        std::vector<std::size_t> cols_;
        Eigen::MatrixXcd ex_;
        Eigen::MatrixXcd ey_;
    };

    inline Array2D<cplx> evaluate_field(const PlaneWaveSpectrum &spec, std::span<const double> xs, std::span<const double> ys)
    {
        return LatticeEvaluator(spec, xs, ys, false).evaluate(spec);
    }
}

#endif
