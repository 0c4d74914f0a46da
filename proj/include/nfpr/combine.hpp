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

#ifndef NFPR_COMBINE_HPP
#define NFPR_COMBINE_HPP

#include "nfpr/image.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <utility>
#include <vector>

namespace nfpr
{
    // Removes the incident-path phase Tx -> voxel: psi = exp(+j k |r' - r'_n|)
    inline cplx phase_correction(double k, const TxSource &tx, const Vec3 &voxel)
    {
        const double d = (voxel - tx.position).norm();
        if (!(d > 0.0))
            throw std::invalid_argument("phase_correction: voxel coincides with the transmitter");
        return std::polar(1.0, k * d);
    }

    // Compensates the 1/R spreading of the incident field: M = |r' - r'_n| in metres
    inline double magnitude_correction(const TxSource &tx, const Vec3 &voxel)
    {
        const double d = (voxel - tx.position).norm();
        if (!(d > 0.0))
            throw std::invalid_argument("magnitude_correction: voxel coincides with the transmitter");
        return d;
    }

    enum class CombineMode
    {
        coherent,
        incoherent
    };

    inline const char *to_string(CombineMode m) { return m == CombineMode::coherent ? "coherent" : "incoherent"; }

    inline CombineMode combine_mode_from_string(const std::string &s)
    {
        if (s == "coherent")
            return CombineMode::coherent;
        if (s == "incoherent")
            return CombineMode::incoherent;
        throw std::invalid_argument("unknown combine mode '" + s + "'");
    }

    // Wavenumber spacing of a frequency subset. The subset must be strictly increasing and
    // uniformly strided; a single entry gives the fallback value 1.
    inline double subset_delta_k(const FrequencyGrid &grid, std::span<const std::size_t> freq_subset)
    {
        if (freq_subset.empty())
            throw std::invalid_argument("frequency subset must not be empty");
        for (std::size_t i = 0; i < freq_subset.size(); ++i)
        {
            if (freq_subset[i] >= grid.size())
                throw std::invalid_argument("frequency subset index out of range");
            if (i > 0 && freq_subset[i] <= freq_subset[i - 1])
                throw std::invalid_argument("frequency subset must be strictly increasing");
        }
        if (freq_subset.size() == 1)
            return 1.0;
        const std::size_t stride = freq_subset[1] - freq_subset[0];
        for (std::size_t i = 2; i < freq_subset.size(); ++i)
            if (freq_subset[i] - freq_subset[i - 1] != stride)
                throw std::invalid_argument("non-uniform frequency subset");
        return double(stride) * grid.wavenumber_step();
    }

    // psi, M and k_f dk_f for a fixed frequency subset, evaluated on demand. The same psi and M
    // apply to every component.
    class CombineWeights
    {
    public:
        CombineWeights(const FrequencyGrid &grid, std::vector<TxSource> txs, const ImagingVolume &volume,
                       std::vector<std::size_t> freq_subset, bool use_magnitude = true)
            : grid_(grid), txs_(std::move(txs)), volume_(volume), use_magnitude_(use_magnitude),
              delta_k_(subset_delta_k(grid, freq_subset))
        {
        }

        double delta_k() const { return delta_k_; }
        double spectral(std::size_t f) const { return grid_.wavenumber(f) * delta_k_; }
        cplx psi(std::size_t f, std::size_t n, std::size_t voxel) const { return phase_correction(grid_.wavenumber(f), txs_.at(n), volume_.voxel(voxel)); }
        double mag(std::size_t n, std::size_t voxel) const { return use_magnitude_ ? magnitude_correction(txs_.at(n), volume_.voxel(voxel)) : 1.0; }
        bool use_magnitude() const { return use_magnitude_; }

    private:
        FrequencyGrid grid_;
        std::vector<TxSource> txs_;
        ImagingVolume volume_;
        bool use_magnitude_;
        double delta_k_;
    };

    struct CombinedImage
    {
        explicit CombinedImage(ImagingVolume geom) : geometry(geom) {}

        ImagingVolume geometry;
        CombineMode mode = CombineMode::coherent;
        std::array<std::vector<cplx>, 3> values; // unnormalized J per component, coherent mode only
        std::vector<double> intensity;           // vector magnitude normalized to peak 1
        double peak = 0.0;                       // intensity peak before normalization
        bool empty = true;                       // no nonzero voxel
        std::vector<std::pair<std::size_t, std::size_t>> provenance; // (tx, frequency) terms

        double raw_intensity(std::size_t voxel) const { return intensity[voxel] * peak; }
    };

    struct CombineOptions
    {
        bool use_magnitude = true;
    };

    // Streaming form of the multi-frequency multi-transmitter superposition. Terms are summed in
    // the order they are added; callers feed (tx, frequency) in index order for reproducible output.
    class CombineAccumulator
    {
    public:
        CombineAccumulator(const ImagingVolume &volume, const FrequencyGrid &grid, std::vector<TxSource> txs,
                           std::vector<std::size_t> freq_subset, std::vector<std::size_t> tx_subset,
                           CombineMode mode, CombineOptions opt = {})
            : volume_(volume), grid_(grid), txs_(txs), freq_subset_(freq_subset), tx_subset_(std::move(tx_subset)),
              mode_(mode), weights_(grid, std::move(txs), volume, std::move(freq_subset), opt.use_magnitude)
        {
            if (tx_subset_.empty())
                throw std::invalid_argument("transmitter subset must not be empty");
            for (std::size_t i = 0; i < tx_subset_.size(); ++i)
            {
                if (tx_subset_[i] >= txs_.size())
                    throw std::invalid_argument("transmitter subset index out of range");
                if (i > 0 && tx_subset_[i] <= tx_subset_[i - 1])
                    throw std::invalid_argument("transmitter subset must be strictly increasing");
            }
            if (mode_ == CombineMode::incoherent)
                raw_.assign(volume_.voxel_count(), 0.0);
        }

        bool accepts(std::size_t n, std::size_t f) const
        {
            return std::binary_search(tx_subset_.begin(), tx_subset_.end(), n) &&
                   std::binary_search(freq_subset_.begin(), freq_subset_.end(), f);
        }

        // Returns false when (tx, frequency) of the image lies outside the subsets
        bool add(const ImageVolume &image)
        {
            const std::size_t n = image.provenance.tx, f = image.provenance.freq;
            if (image.provenance.combined)
                throw std::invalid_argument("combine: input must be a single-frequency image");
            if (!accepts(n, f))
                return false;
            if (!image.geometry().same_geometry(volume_))
                throw std::invalid_argument("combine: image geometry mismatch");
            if (!added_.insert({n, f}).second)
                throw std::invalid_argument("combine: duplicate (tx, frequency) image");
            order_.emplace_back(n, f);

            const std::size_t V = volume_.voxel_count();
            const double spectral = weights_.spectral(f);
            if (mode_ == CombineMode::incoherent)
            {
                for (std::size_t v = 0; v < V; ++v)
                    raw_[v] += spectral * image.magnitude(v);
                return true;
            }

            const std::vector<double> &dist = distances(n);
            const double k = grid_.wavenumber(f);
            const bool use_mag = weights_.use_magnitude();
            std::array<const cplx *, 3> src{};
            std::array<cplx *, 3> dst{};
            for (int c = 0; c < 3; ++c)
            {
                const auto comp = FieldComponent(c);
                if (!image.has(comp))
                    continue;
                auto &acc = values_[c];
                if (acc.empty())
                    acc.assign(V, cplx{});
                src[c] = image.component(comp).data();
                dst[c] = acc.data();
            }
            for (std::size_t v = 0; v < V; ++v)
            {
                const double d = dist[v];
                const double w = use_mag ? spectral * d : spectral;
                const double pr = w * std::cos(k * d), pi_ = w * std::sin(k * d);
                for (int c = 0; c < 3; ++c)
                {
                    if (!src[c])
                        continue;
                    const double jr = src[c][v].real(), ji = src[c][v].imag();
                    dst[c][v] += cplx(pr * jr - pi_ * ji, pr * ji + pi_ * jr);
                }
            }
            return true;
        }

        bool complete() const { return added_.size() == freq_subset_.size() * tx_subset_.size(); }

        CombinedImage finish() const
        {
            if (!complete())
                throw std::invalid_argument("combine: incomplete (tx, frequency) set");
            CombinedImage out(volume_);
            out.mode = mode_;
            out.provenance = order_;
            const std::size_t V = volume_.voxel_count();
            out.intensity.assign(V, 0.0);
            if (mode_ == CombineMode::incoherent)
                out.intensity = raw_;
            else
            {
                out.values = values_;
                for (std::size_t v = 0; v < V; ++v)
                {
                    double s = 0.0;
                    for (const auto &comp : values_)
                        if (!comp.empty())
                            s += std::norm(comp[v]);
                    out.intensity[v] = std::sqrt(s);
                }
            }
            out.peak = V ? *std::max_element(out.intensity.begin(), out.intensity.end()) : 0.0;
            out.empty = !(out.peak > 0.0);
            if (!out.empty)
                for (double &x : out.intensity)
                    x /= out.peak;
            return out;
        }

        CombineMode mode() const { return mode_; }

    private:
        const std::vector<double> &distances(std::size_t n)
        {
            auto it = dist_cache_.find(n);
            if (it != dist_cache_.end())
                return it->second;
            std::vector<double> d(volume_.voxel_count());
            for (std::size_t v = 0; v < d.size(); ++v)
            {
                d[v] = (volume_.voxel(v) - txs_[n].position).norm();
                if (!(d[v] > 0.0))
                    throw std::invalid_argument("combine: voxel coincides with a transmitter");
            }
            return dist_cache_.emplace(n, std::move(d)).first->second;
        }

        ImagingVolume volume_;
        FrequencyGrid grid_;
        std::vector<TxSource> txs_;
        std::vector<std::size_t> freq_subset_;
        std::vector<std::size_t> tx_subset_;
        CombineMode mode_;
        CombineWeights weights_;
        std::array<std::vector<cplx>, 3> values_;
        std::vector<double> raw_;
        std::set<std::pair<std::size_t, std::size_t>> added_;
        std::vector<std::pair<std::size_t, std::size_t>> order_;
        std::map<std::size_t, std::vector<double>> dist_cache_;
    };

    namespace detail
    {
        inline CombinedImage combine_all(std::vector<const ImageVolume *> images, const FrequencyGrid &grid,
                                         const std::vector<TxSource> &txs, CombineMode mode, CombineOptions opt,
                                         std::vector<std::size_t> freqs, std::vector<std::size_t> tx_ids)
        {
            if (images.empty())
                throw std::invalid_argument("combine: empty image set");
            std::sort(images.begin(), images.end(), [](const ImageVolume *a, const ImageVolume *b)
                      { return std::make_pair(a->provenance.tx, a->provenance.freq) <
                               std::make_pair(b->provenance.tx, b->provenance.freq); });

            CombineAccumulator acc(images.front()->geometry(), grid, txs, std::move(freqs), std::move(tx_ids), mode, opt);
            for (const ImageVolume *img : images)
                acc.add(*img);
            return acc.finish();
        }

        inline std::vector<const ImageVolume *> pointers(std::span<const ImageVolume> images)
        {
            std::vector<const ImageVolume *> out;
            for (const auto &img : images)
                out.push_back(&img);
            return out;
        }

        inline void index_sets(std::span<const ImageVolume> images, std::vector<std::size_t> &freqs,
                               std::vector<std::size_t> &tx_ids)
        {
            if (images.empty())
                throw std::invalid_argument("combine: empty image set");
            std::set<std::size_t> fs, ns;
            for (const auto &img : images)
            {
                if (!img.geometry().same_geometry(images.front().geometry()))
                    throw std::invalid_argument("combine: image geometry mismatch");
                fs.insert(img.provenance.freq);
                ns.insert(img.provenance.tx);
            }
            freqs.assign(fs.begin(), fs.end());
            tx_ids.assign(ns.begin(), ns.end());
            if (freqs.size() * tx_ids.size() != images.size())
                throw std::invalid_argument("combine: (tx, frequency) set is not complete");
        }
    }

    // J_p(r') = sum_n sum_f psi M k_f dk_f J_p(k_f, S_n, r') over the (tx, frequency) set present
    // in `images`, which must be a complete product set.
    inline CombinedImage coherent_combine(std::span<const ImageVolume> images, const FrequencyGrid &grid,
                                          const std::vector<TxSource> &txs, CombineOptions opt = {})
    {
        std::vector<std::size_t> fs, ns;
        detail::index_sets(images, fs, ns);
        return detail::combine_all(detail::pointers(images), grid, txs, CombineMode::coherent, opt, std::move(fs), std::move(ns));
    }

    // intensity(r') = sum_n sum_f k_f dk_f |J(k_f, S_n, r')|
    inline CombinedImage incoherent_combine(std::span<const ImageVolume> images, const FrequencyGrid &grid,
                                            const std::vector<TxSource> &txs)
    {
        std::vector<std::size_t> fs, ns;
        detail::index_sets(images, fs, ns);
        return detail::combine_all(detail::pointers(images), grid, txs, CombineMode::incoherent, {}, std::move(fs), std::move(ns));
    }

    inline CombinedImage subset_combine(std::span<const ImageVolume> images, std::vector<std::size_t> freq_subset,
                                        std::vector<std::size_t> tx_subset, CombineMode mode,
                                        const FrequencyGrid &grid, const std::vector<TxSource> &txs,
                                        CombineOptions opt = {})
    {
        if (images.empty())
            throw std::invalid_argument("combine: empty image set");
        std::sort(freq_subset.begin(), freq_subset.end());
        std::sort(tx_subset.begin(), tx_subset.end());
        subset_delta_k(grid, freq_subset);
        std::vector<const ImageVolume *> picked;
        for (const auto &img : images)
            if (std::binary_search(freq_subset.begin(), freq_subset.end(), img.provenance.freq) &&
                std::binary_search(tx_subset.begin(), tx_subset.end(), img.provenance.tx))
                picked.push_back(&img);
        return detail::combine_all(picked, grid, txs, mode, opt, std::move(freq_subset), std::move(tx_subset));
    }
}

#endif
