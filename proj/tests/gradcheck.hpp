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

// Central finite-difference check of the network gradients.

#ifndef BEAMPOS_TEST_GRADCHECK_HPP
#define BEAMPOS_TEST_GRADCHECK_HPP

#include "beampos/neuralbeam.hpp"
#include "beampos/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace beampos::test
{

struct GradCheckResult
{
    LayerSpec spec;
    Index parameters = 0;
    double max_rel_error = 0.0;
    bool finite = true;
};

/// |a - n| / max(|a|, |n|, floor). The floor keeps gradients that are zero up
/// to rounding from turning round-off into a large relative error.
inline double relative_error(double analytic, double numeric, double floor = 1e-5)
{
    return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

/// Small random network covering every layer type and both input layouts.
inline LayerSpec random_spec(Rng &rng)
{
    for (;;)
    {
        LayerSpec spec;
        spec.input.source = rng.below(2) == 0 ? PositionSource::Tx : PositionSource::TxRx;
        spec.input.window = rng.below(3) == 0 ? 1 + static_cast<Index>(rng.below(4)) : 1;
        const std::size_t blocks = 1 + rng.below(3);
        for (std::size_t b = 0; b < blocks; ++b)
        {
            ConvBlockSpec blk;
            blk.out_channels = 1 + static_cast<Index>(rng.below(5));
            blk.kernel = 1 + static_cast<Index>(rng.below(3));
            blk.padding = static_cast<Index>(rng.below(static_cast<std::uint64_t>(blk.kernel)));
            blk.pool = 1 + static_cast<Index>(rng.below(2));
            spec.conv.push_back(blk);
        }
        const std::size_t hidden = rng.below(2);
        for (std::size_t h = 0; h < hidden; ++h)
            spec.dense.push_back(2 + static_cast<Index>(rng.below(6)));
        spec.dense.push_back(2 + static_cast<Index>(rng.below(6)));
        try
        {
            validate(spec);
            return spec;
        }
        catch (const Error &)
        {
        }
    }
}

inline double batch_loss(const ModelParams &p, const LayerSpec &spec, const Batch &batch)
{
    return cross_entropy(forward_batch(p, spec, batch.inputs), batch.labels);
}

/// Compares backprop against central differences with step h for every parameter.
inline GradCheckResult check_gradients(const LayerSpec &spec, std::uint64_t seed, double h = 1e-6)
{
    Rng rng(seed);
    ModelParams params = init_params(spec, rng.next());
    // widen the init so hidden units are not all near zero
    for (auto &t : params.tensors)
        t *= 2.0;

    Batch batch;
    const std::size_t n = 1 + rng.below(4);
    batch.inputs.resize(spec.input.channels(), spec.input.length() * static_cast<Index>(n));
    for (Index j = 0; j < batch.inputs.cols(); ++j)
        for (Index i = 0; i < batch.inputs.rows(); ++i)
            batch.inputs(i, j) = rng.uniform(-0.2, 1.2);
    for (std::size_t k = 0; k < n; ++k)
        batch.labels.push_back(rng.below(static_cast<std::uint64_t>(spec.classes())));

    GradCheckResult out;
    out.spec = spec;
    out.parameters = params.parameter_count();
    const ModelParams grad = backward(params, spec, batch);
    out.finite = grad.all_finite();
    for (std::size_t t = 0; t < params.tensors.size(); ++t)
        for (Index i = 0; i < params.tensors[t].size(); ++i)
        {
            double &w = params.tensors[t].data()[i];
            const double orig = w;
            w = orig + h;
            const double up = batch_loss(params, spec, batch);
            w = orig - h;
            const double down = batch_loss(params, spec, batch);
            w = orig;
            const double numeric = (up - down) / (2.0 * h);
            out.max_rel_error = std::max(out.max_rel_error, relative_error(grad.tensors[t].data()[i], numeric));
        }
    return out;
}

} // namespace beampos::test

#endif // BEAMPOS_TEST_GRADCHECK_HPP
