// SPDX-License-Identifier: Apache-2.0
//
// beampos - position-aided mmWave beam prediction for V2V links
// Copyright (C) 2026 The beampos authors
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

// Brute-force recomputation of the evaluation metrics.

#ifndef BEAMPOS_TEST_METRIC_ORACLE_HPP
#define BEAMPOS_TEST_METRIC_ORACLE_HPP

#include "beampos/evalmetrics.hpp"
#include "beampos/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace beampos::test
{

/// A random scoring case. Every power is a multiple of gt/64 with gt a power
/// of two, and the ground truth is the strongest beam, so each per-sample ratio
/// is k/64 and every partial sum is exact in binary floating point.
struct MetricCase
{
    std::size_t m = 1;
    std::vector<std::vector<std::size_t>> preds;
    std::vector<std::size_t> truths;
    std::vector<PowerVector> powers;
    std::vector<std::int64_t> ratio_64ths; // per-sample best/gt in units of 1/64
};

inline MetricCase random_metric_case(Rng &rng, std::size_t codebook)
{
    MetricCase c;
    const std::size_t n = 1 + rng.below(300);
    c.m = 1 + rng.below(codebook);
    for (std::size_t i = 0; i < n; ++i)
    {
        const double gt = std::ldexp(1.0, static_cast<int>(rng.below(9)) - 4);
        const std::size_t truth = rng.below(codebook);
        PowerVector p(static_cast<Eigen::Index>(codebook));
        std::vector<std::int64_t> k64(codebook);
        for (std::size_t b = 0; b < codebook; ++b)
        {
            k64[b] = b == truth ? 64 : static_cast<std::int64_t>(1 + rng.below(63));
            p(static_cast<Eigen::Index>(b)) = gt * static_cast<double>(k64[b]) / 64.0;
        }
        // distinct candidates: a shuffled prefix
        std::vector<std::size_t> all(codebook);
        for (std::size_t b = 0; b < codebook; ++b)
            all[b] = b;
        rng.shuffle(std::span<std::size_t>(all));
        // bias toward hits so both outcomes are common
        if (rng.below(2) == 0)
        {
            const auto pos = static_cast<std::size_t>(std::find(all.begin(), all.end(), truth) - all.begin());
            std::swap(all[pos], all[rng.below(c.m)]);
        }
        std::vector<std::size_t> cand(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(c.m));

        std::int64_t best = 0;
        for (const std::size_t b : cand)
            best = std::max(best, k64[b]);
        c.preds.push_back(std::move(cand));
        c.truths.push_back(truth);
        c.powers.push_back(std::move(p));
        c.ratio_64ths.push_back(best);
    }
    return c;
}

inline std::size_t brute_hits(const std::vector<std::vector<std::size_t>> &preds, const std::vector<std::size_t> &truths)
{
    std::size_t hits = 0;
    for (std::size_t i = 0; i < preds.size(); ++i)
    {
        bool found = false;
        for (std::size_t j = 0; j < preds[i].size(); ++j)
            if (preds[i][j] == truths[i])
                found = true;
        hits += found ? 1 : 0;
    }
    return hits;
}

inline double oracle_inclusion(const MetricCase &c)
{
    return static_cast<double>(brute_hits(c.preds, c.truths)) / static_cast<double>(c.preds.size());
}

/// Every list in a case has length m, so the formula collapses to (hits / m) / n.
inline double oracle_literal(const MetricCase &c)
{
    const double hits = static_cast<double>(brute_hits(c.preds, c.truths));
    return hits / static_cast<double>(c.m) / static_cast<double>(c.preds.size());
}

/// Best power among the candidates, found by scanning the power vector.
inline double oracle_power_ratio(const MetricCase &c)
{
    std::int64_t total = 0;
    for (std::size_t i = 0; i < c.preds.size(); ++i)
    {
        double best = -1.0;
        for (Eigen::Index b = 0; b < c.powers[i].size(); ++b)
            for (const std::size_t cand : c.preds[i])
                if (static_cast<Eigen::Index>(cand) == b)
                    best = std::max(best, c.powers[i](b));
        const double ratio = best / c.powers[i](static_cast<Eigen::Index>(c.truths[i]));
        total += static_cast<std::int64_t>(ratio * 64.0);
    }
    return static_cast<double>(total) / 64.0 / static_cast<double>(c.preds.size());
}

} // namespace beampos::test

#endif // BEAMPOS_TEST_METRIC_ORACLE_HPP
