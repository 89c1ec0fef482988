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

#ifndef BEAMPOS_SYNTHCHAN_HPP
#define BEAMPOS_SYNTHCHAN_HPP

#include "beampos/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>

namespace beampos
{

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

/// Per-beam received powers in linear units, one entry per codebook beam.
using PowerVector = Eigen::VectorXd;

/// Receive-side uniform linear array.
struct ArrayConfig
{
    std::size_t n_elements = 16;
    double element_spacing = 0.5; // wavelengths
};

/// Beamforming codebook; column i holds the unit-norm weight vector q_i.
template <typename Scalar>
struct BasicCodebook
{
    ComplexMatrix<Scalar> weights;

    Eigen::Index size() const { return weights.cols(); }
    Eigen::Index n_elements() const { return weights.rows(); }
    auto beam(Eigen::Index i) const { return weights.col(i); }
};

using Codebook = BasicCodebook<double>;

struct SyntheticChannelConfig
{
    std::size_t n_subcarriers = 16;
    double tx_power = 1.0; // per-subcarrier symbol power |s_n|^2
    double noise_power = 0.0;
    double pathloss_exponent = 2.0;
    double reference_distance = 1.0; // meters
    std::uint64_t seed = 0;
};

void validate(const ArrayConfig &cfg);
void validate(const SyntheticChannelConfig &cfg);

/// Plane-wave response of the ULA for arrival angle theta measured from
/// boresight, positive toward increasing element index:
/// a_k = exp(i 2 pi d k sin(theta)).
template <typename Scalar>
ComplexVector<Scalar> array_response(const ArrayConfig &cfg, Scalar theta)
{
    const auto n = static_cast<Eigen::Index>(cfg.n_elements);
    const Scalar phase_step = Scalar(2) * std::numbers::pi_v<Scalar> * static_cast<Scalar>(cfg.element_spacing) * std::sin(theta);
    ComplexVector<Scalar> a(n);
    for (Eigen::Index k = 0; k < n; ++k)
        a(k) = std::polar(Scalar(1), phase_step * static_cast<Scalar>(k));
    return a;
}

/// Spatial frequency steered by beam i of a size-`size` grid: -1 + 2 i / size.
template <typename Scalar = double>
Scalar beam_spatial_frequency(Eigen::Index i, Eigen::Index size)
{
    return Scalar(-1) + Scalar(2) * static_cast<Scalar>(i) / static_cast<Scalar>(size);
}

/// Oversampled DFT codebook uniform in sin-space over [-1, 1).
/// Beam i has weights exp(-i pi k psi_i) / sqrt(N).
template <typename Scalar = double>
BasicCodebook<Scalar> dft_codebook(const ArrayConfig &cfg, std::size_t size)
{
    validate(cfg);
    if (size < cfg.n_elements)
        throw Error(Errc::InvalidArgument, "size", "codebook size must be at least the number of array elements");

    const auto n = static_cast<Eigen::Index>(cfg.n_elements);
    const auto q = static_cast<Eigen::Index>(size);
    const Scalar scale = Scalar(1) / std::sqrt(static_cast<Scalar>(n));

    BasicCodebook<Scalar> cb;
    cb.weights.resize(n, q);
    for (Eigen::Index i = 0; i < q; ++i)
    {
        const Scalar psi = beam_spatial_frequency<Scalar>(i, q);
        for (Eigen::Index k = 0; k < n; ++k)
            cb.weights(k, i) = std::polar(scale, -std::numbers::pi_v<Scalar> * static_cast<Scalar>(k) * psi);
    }
    return cb;
}

/// |h^T q_i|^2 for every beam.
template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> beam_gains(const BasicCodebook<Scalar> &cb, const Eigen::MatrixBase<Derived> &h)
{
    if (h.size() != cb.n_elements())
        throw Error(Errc::ShapeMismatch, "channel", "channel length does not match codebook");
    return (cb.weights.transpose() * h).cwiseAbs2();
}

/// Large-scale gain (reference_distance / d)^exponent.
double pathloss_gain(const SyntheticChannelConfig &ch, double distance);

/// Per-beam received power for a single LOS path, frequency-flat over the
/// subcarriers. The noise term is folded-normal with mean noise_power, drawn
/// from the substream mix_seed(ch.seed, noise_stream).
PowerVector beam_power_vector(const ArrayConfig &arr, const Codebook &cb, const SyntheticChannelConfig &ch,
                              double theta, double distance, std::uint64_t noise_stream = 0);

/// Index of the strongest beam; ties go to the lowest index.
template <typename Derived>
Eigen::Index optimal_beam(const Eigen::MatrixBase<Derived> &p)
{
    if (p.size() == 0)
        throw Error(Errc::EmptyVector, "powers", "power vector is empty");
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < p.size(); ++i)
        if (p(i) > p(best))
            best = i;
    return best;
}

} // namespace beampos

#endif // BEAMPOS_SYNTHCHAN_HPP
