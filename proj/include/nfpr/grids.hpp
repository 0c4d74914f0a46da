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

#ifndef NFPR_GRIDS_HPP
#define NFPR_GRIDS_HPP

#include "nfpr/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace nfpr
{
    inline double wavenumber_of(double frequency_hz) { return 2.0 * pi * frequency_hz / speed_of_light; }

    // ============================================================================================
    // Uniform frequency grid with per-entry wavenumbers k_f = 2 pi f / c
    // ============================================================================================
    class FrequencyGrid
    {
    public:
        FrequencyGrid(double f_min, double f_max, std::size_t count)
            : f_min_(f_min), f_max_(f_max), count_(count)
        {
            if (count == 0)
                throw std::invalid_argument("frequency grid: count must be positive");
            if (!(f_min > 0.0) || !std::isfinite(f_min) || !std::isfinite(f_max))
                throw std::invalid_argument("frequency grid: frequencies must be positive and finite");
            if (f_min > f_max)
                throw std::invalid_argument("frequency grid: f_min exceeds f_max");
            if (count == 1 && f_min != f_max)
                throw std::invalid_argument("frequency grid: a single-entry grid requires f_min == f_max");
            if (count > 1 && f_min == f_max)
                throw std::invalid_argument("frequency grid: multiple entries require f_min < f_max");
        }

        std::size_t size() const { return count_; }
        double f_min() const { return f_min_; }
        double f_max() const { return f_max_; }

        // Spacing in Hz, 0 for a single-entry grid
        double step_hz() const { return count_ > 1 ? (f_max_ - f_min_) / double(count_ - 1) : 0.0; }

        double frequency(std::size_t i) const
        {
            if (count_ == 1)
                return f_min_;
            if (i + 1 == count_)
                return f_max_;
            return f_min_ + (f_max_ - f_min_) * double(i) / double(count_ - 1);
        }

        double wavenumber(std::size_t i) const { return wavenumber_of(frequency(i)); }

        // Spacing between consecutive wavenumbers; 1 for a single-entry grid so that the
        // k_f dk_f weighting degenerates to a plain sum.
        double delta_k() const { return count_ > 1 ? wavenumber_of(step_hz()) : 1.0; }

        // Wavenumber increment between neighbouring entries (0 for a single entry)
        double wavenumber_step() const { return wavenumber_of(step_hz()); }

        std::size_t index_of(double frequency_hz) const
        {
            if (count_ == 1)
            {
                if (std::abs(frequency_hz - f_min_) > 1e-9 * f_min_)
                    throw std::invalid_argument("frequency not on grid");
                return 0;
            }
            const double pos = (frequency_hz - f_min_) / step_hz();
            const double idx = std::round(pos);
            if (idx < 0.0 || idx >= double(count_) || std::abs(pos - idx) > 1e-6)
                throw std::invalid_argument("frequency not on grid");
            return std::size_t(idx);
        }

        std::vector<double> frequencies() const
        {
            std::vector<double> out(count_);
            for (std::size_t i = 0; i < count_; ++i)
                out[i] = frequency(i);
            return out;
        }

    private:
        double f_min_;
        double f_max_;
        std::size_t count_;
    };

    inline FrequencyGrid make_frequency_grid(double f_min, double f_max, std::size_t count)
    {
        return FrequencyGrid(f_min, f_max, count);
    }

    // ============================================================================================
    // Transmitter modelled as an ideal Hertzian dipole
    // ============================================================================================
    struct TxSource
    {
        Vec3 position = Vec3::Zero(); // r'_n in m
        Vec3 polarization = Vec3::UnitY();
        cplx moment = 1.0;

        TxSource() = default;
        TxSource(const Vec3 &pos, const Vec3 &pol, cplx dipole_moment = 1.0)
            : position(pos), polarization(pol), moment(dipole_moment)
        {
            if (std::abs(pol.norm() - 1.0) > 1e-12)
                throw std::invalid_argument("tx source: polarization must be a unit vector");
            if (!position.allFinite() || !std::isfinite(moment.real()) || !std::isfinite(moment.imag()))
                throw std::invalid_argument("tx source: non-finite parameters");
        }
    };

    // ============================================================================================
    // Cartesian field components
    // ============================================================================================
    enum class FieldComponent
    {
        x = 0,
        y = 1,
        z = 2
    };

    inline const char *to_string(FieldComponent c)
    {
        switch (c)
        {
        case FieldComponent::x:
            return "x";
        case FieldComponent::y:
            return "y";
        default:
            return "z";
        }
    }

    inline FieldComponent component_from_string(const std::string &s)
    {
        if (s == "x")
            return FieldComponent::x;
        if (s == "y")
            return FieldComponent::y;
        if (s == "z")
            return FieldComponent::z;
        throw std::invalid_argument("unknown field component '" + s + "'");
    }

    // Non-empty, sorted, duplicate-free subset of {x, y, z}
    class ComponentSet
    {
    public:
        ComponentSet(std::vector<FieldComponent> comps) : comps_(std::move(comps))
        {
            std::sort(comps_.begin(), comps_.end());
            comps_.erase(std::unique(comps_.begin(), comps_.end()), comps_.end());
            if (comps_.empty())
                throw std::invalid_argument("component set must not be empty");
        }

        std::size_t size() const { return comps_.size(); }
        FieldComponent operator[](std::size_t slot) const { return comps_[slot]; }
        const std::vector<FieldComponent> &list() const { return comps_; }

        std::optional<std::size_t> slot_of(FieldComponent c) const
        {
            for (std::size_t i = 0; i < comps_.size(); ++i)
                if (comps_[i] == c)
                    return i;
            return std::nullopt;
        }

        bool contains(FieldComponent c) const { return slot_of(c).has_value(); }

    private:
        std::vector<FieldComponent> comps_;
    };

    // ============================================================================================
    // Planar measurement surface; samples are row-major with y outer and x inner
    // ============================================================================================
    class MeasurementPlane
    {
    public:
        MeasurementPlane(double z_plane, double x_min, double x_max, double y_min, double y_max,
                         std::size_t nx, std::size_t ny)
            : z_(z_plane), x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max), nx_(nx), ny_(ny)
        {
            if (nx < 2 || ny < 2)
                throw std::invalid_argument("measurement plane: nx and ny must be at least 2");
            if (!(x_max > x_min) || !(y_max > y_min))
                throw std::invalid_argument("measurement plane: extents must be increasing");
            if (!std::isfinite(z_plane))
                throw std::invalid_argument("measurement plane: z must be finite");
        }

        double z() const { return z_; }
        double x_min() const { return x_min_; }
        double x_max() const { return x_max_; }
        double y_min() const { return y_min_; }
        double y_max() const { return y_max_; }
        std::size_t nx() const { return nx_; }
        std::size_t ny() const { return ny_; }
        std::size_t sample_count() const { return nx_ * ny_; }

        double dx() const { return (x_max_ - x_min_) / double(nx_ - 1); }
        double dy() const { return (y_max_ - y_min_) / double(ny_ - 1); }

        // lerp keeps samples inside [min, max] and hits both ends exactly
        double x(std::size_t ix) const { return std::lerp(x_min_, x_max_, double(ix) / double(nx_ - 1)); }
        double y(std::size_t iy) const { return std::lerp(y_min_, y_max_, double(iy) / double(ny_ - 1)); }

        std::size_t index(std::size_t ix, std::size_t iy) const { return iy * nx_ + ix; }
        Vec3 position(std::size_t ix, std::size_t iy) const { return {x(ix), y(iy), z_}; }
        Vec3 position(std::size_t m) const { return position(m % nx_, m / nx_); }

        std::vector<Vec3> sample_positions() const
        {
            std::vector<Vec3> out;
            out.reserve(sample_count());
            for (std::size_t iy = 0; iy < ny_; ++iy)
                for (std::size_t ix = 0; ix < nx_; ++ix)
                    out.push_back(position(ix, iy));
            return out;
        }

        // Non-empty when either spacing exceeds half the shortest wavelength of the grid
        std::optional<std::string> sampling_warning(const FrequencyGrid &grid) const
        {
            const double limit = speed_of_light / (2.0 * grid.f_max());
            if (dx() > limit || dy() > limit)
            {
                char buf[256];
                std::snprintf(buf, sizeof(buf),
                              "plane spacing (%.4g m, %.4g m) exceeds lambda_min/2 = %.4g m; spectrum will alias",
                              dx(), dy(), limit);
                return std::string(buf);
            }
            return std::nullopt;
        }

    private:
        double z_, x_min_, x_max_, y_min_, y_max_;
        std::size_t nx_, ny_;
    };

    // ============================================================================================
    // Regular voxel grid of the reconstruction; voxel (ix, iy, iz) at (iz * ny + iy) * nx + ix
    // ============================================================================================
    class ImagingVolume
    {
    public:
        ImagingVolume(double x_min, double x_max, std::size_t nx,
                      double y_min, double y_max, std::size_t ny,
                      double z_min, double z_max, std::size_t nz)
            : lo_{x_min, y_min, z_min}, hi_{x_max, y_max, z_max}, n_{nx, ny, nz}
        {
            for (int a = 0; a < 3; ++a)
            {
                if (n_[a] == 0)
                    throw std::invalid_argument("imaging volume: voxel counts must be positive");
                if (!std::isfinite(lo_[a]) || !std::isfinite(hi_[a]))
                    throw std::invalid_argument("imaging volume: extents must be finite");
                if (n_[a] == 1 && lo_[a] != hi_[a])
                    throw std::invalid_argument("imaging volume: a single-voxel axis requires min == max");
                if (n_[a] > 1 && !(hi_[a] > lo_[a]))
                    throw std::invalid_argument("imaging volume: extents must be increasing");
            }
        }

        std::size_t nx() const { return n_[0]; }
        std::size_t ny() const { return n_[1]; }
        std::size_t nz() const { return n_[2]; }
        std::size_t count(int axis) const { return n_[axis]; }
        std::size_t voxel_count() const { return n_[0] * n_[1] * n_[2]; }

        double min(int axis) const { return lo_[axis]; }
        double max(int axis) const { return hi_[axis]; }
        double pitch(int axis) const { return n_[axis] > 1 ? (hi_[axis] - lo_[axis]) / double(n_[axis] - 1) : 0.0; }

        double coord(int axis, std::size_t i) const
        {
            if (n_[axis] == 1)
                return lo_[axis];
            return std::lerp(lo_[axis], hi_[axis], double(i) / double(n_[axis] - 1));
        }

        std::vector<double> coords(int axis) const
        {
            std::vector<double> out(n_[axis]);
            for (std::size_t i = 0; i < n_[axis]; ++i)
                out[i] = coord(axis, i);
            return out;
        }

        std::size_t index(std::size_t ix, std::size_t iy, std::size_t iz) const { return (iz * n_[1] + iy) * n_[0] + ix; }
        Vec3 voxel(std::size_t ix, std::size_t iy, std::size_t iz) const { return {coord(0, ix), coord(1, iy), coord(2, iz)}; }
        Vec3 voxel(std::size_t idx) const { return voxel(idx % n_[0], (idx / n_[0]) % n_[1], idx / (n_[0] * n_[1])); }

        bool same_geometry(const ImagingVolume &o) const
        {
            return n_[0] == o.n_[0] && n_[1] == o.n_[1] && n_[2] == o.n_[2] &&
                   lo_[0] == o.lo_[0] && lo_[1] == o.lo_[1] && lo_[2] == o.lo_[2] &&
                   hi_[0] == o.hi_[0] && hi_[1] == o.hi_[1] && hi_[2] == o.hi_[2];
        }

        // The volume must lie strictly below the measurement plane
        void check_clear_of(const MeasurementPlane &plane) const
        {
            if (!(hi_[2] < plane.z()))
                throw std::invalid_argument("imaging volume intersects or lies above the measurement plane");
        }

    private:
        double lo_[3];
        double hi_[3];
        std::size_t n_[3];
    };
}

#endif
