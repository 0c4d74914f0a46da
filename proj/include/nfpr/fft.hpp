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

#ifndef NFPR_FFT_HPP
#define NFPR_FFT_HPP

#include "nfpr/types.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <tuple>

namespace nfpr
{
    namespace detail
    {
        struct FftwPlanDeleter
        {
            void operator()(fftw_plan_s *p) const { fftw_destroy_plan(p); }
        };

        // FFTW planning is not thread-safe; execution of an existing plan on new arrays is.
        inline fftw_plan fftw_plan_2d(std::size_t rows, std::size_t cols, int sign)
        {
            static std::mutex mutex;
            static std::map<std::tuple<std::size_t, std::size_t, int>,
                            std::unique_ptr<fftw_plan_s, FftwPlanDeleter>>
                cache;

            std::lock_guard lock(mutex);
            auto key = std::make_tuple(rows, cols, sign);
            auto it = cache.find(key);
            if (it != cache.end())
                return it->second.get();

            std::vector<cplx> scratch(rows * cols);
            auto *buf = reinterpret_cast<fftw_complex *>(scratch.data());
            fftw_plan plan = fftw_plan_dft_2d(int(rows), int(cols), buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
            if (!plan)
                throw NumericError("FFTW failed to create a plan");
            cache.emplace(key, std::unique_ptr<fftw_plan_s, FftwPlanDeleter>(plan));
            return plan;
        }
    }

    // Unnormalized in-place 2-D DFT of a row-major (rows, cols) array:
    //   X[a][b] = sum x[r][c] exp(sign * 2 pi j (a r / rows + b c / cols))
    inline void dft2d(std::span<cplx> data, std::size_t rows, std::size_t cols, int sign)
    {
        if (data.size() != rows * cols)
            throw std::invalid_argument("dft2d: size mismatch");
        fftw_plan plan = detail::fftw_plan_2d(rows, cols, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
        auto *buf = reinterpret_cast<fftw_complex *>(data.data());
        fftw_execute_dft(plan, buf, buf);
    }
}

#endif
