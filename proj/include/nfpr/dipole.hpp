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

#ifndef NFPR_DIPOLE_HPP
#define NFPR_DIPOLE_HPP

#include "nfpr/grids.hpp"

#include <cmath>

namespace nfpr
{
    // Electric field of a Hertzian dipole including the 1/R, 1/R^2 and 1/R^3 terms, e^{+j omega t}
    // convention (outgoing waves carry e^{-jkR}). The moment absorbs 1/epsilon_0:
    //   E = m e^{-jkR} / (4 pi) [ k^2/R (p - r (r.p)) + (1/R^3 + jk/R^2) (3 r (r.p) - p) ]
    inline CVec3 dipole_field(const TxSource &src, const Vec3 &r, double k)
    {
        if (!(k > 0.0))
            throw std::invalid_argument("dipole_field: wavenumber must be positive");
        const Vec3 d = r - src.position;
        const double R = d.norm();
        if (!(R > 0.0))
            throw std::invalid_argument("dipole_field: evaluation at the source point");

        const Vec3 rh = d / R;
        const Vec3 &p = src.polarization;
        const double rp = rh.dot(p);
        const Vec3 radiation = p - rp * rh;
        const Vec3 near = 3.0 * rp * rh - p;

        const cplx amplitude = src.moment * std::polar(1.0 / (4.0 * pi), -k * R);
        const double c_rad = k * k / R;
        const cplx c_near(1.0 / (R * R * R), k / (R * R));

        CVec3 E;
        for (int a = 0; a < 3; ++a)
            E[a] = amplitude * (c_rad * radiation[a] + c_near * near[a]);
        return E;
    }

    // Scalar free-space Green's function e^{-jkR} / (4 pi R)
    inline cplx green(const Vec3 &r, const Vec3 &r_src, double k)
    {
        const double R = (r - r_src).norm();
        if (!(R > 0.0))
            throw std::invalid_argument("green: coincident points");
        return std::polar(1.0 / (4.0 * pi * R), -k * R);
    }
}

#endif
