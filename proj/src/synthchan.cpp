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

#include "beampos/synthchan.hpp"
#include "beampos/numeric.hpp"

namespace beampos
{

void validate(const ArrayConfig &cfg)
{
    if (cfg.n_elements < 1)
        throw Error(Errc::InvalidArgument, "n_elements", "array needs at least one element");
    if (!(cfg.element_spacing > 0.0))
        throw Error(Errc::InvalidArgument, "element_spacing", "element spacing must be positive");
}

void validate(const SyntheticChannelConfig &cfg)
{
    if (cfg.n_subcarriers < 1)
        throw Error(Errc::InvalidArgument, "n_subcarriers", "need at least one subcarrier");
    if (!(cfg.noise_power >= 0.0))
        throw Error(Errc::InvalidArgument, "noise_power", "noise power must be non-negative");
    if (!(cfg.tx_power >= 0.0))
        throw Error(Errc::InvalidArgument, "tx_power", "transmit power must be non-negative");
    if (!(cfg.reference_distance > 0.0))
        throw Error(Errc::InvalidArgument, "reference_distance", "reference distance must be positive");
}

double pathloss_gain(const SyntheticChannelConfig &ch, double distance)
{
    if (!(distance >= ch.reference_distance))
        throw Error(Errc::InvalidGeometry, "distance",
                    "distance " + std::to_string(distance) + " m is below the reference distance");
    return std::pow(ch.reference_distance / distance, ch.pathloss_exponent);
}

PowerVector beam_power_vector(const ArrayConfig &arr, const Codebook &cb, const SyntheticChannelConfig &ch,
                              double theta, double distance, std::uint64_t noise_stream)
{
    validate(ch);
    const double g = pathloss_gain(ch, distance);

    // h_n = sqrt(g) a(theta) on every subcarrier, so the subcarrier sum collapses
    // to a factor n_subcarriers.
    const ComplexVector<double> a = array_response(arr, theta);
    PowerVector p = beam_gains(cb, a) * (static_cast<double>(ch.n_subcarriers) * g * ch.tx_power);

    if (ch.noise_power > 0.0)
    {
        // E|N(0, s^2)| = s sqrt(2/pi)
        const double sigma = ch.noise_power * std::sqrt(std::numbers::pi / 2.0);
        Rng rng(mix_seed(ch.seed, noise_stream));
        for (Eigen::Index i = 0; i < p.size(); ++i)
            p(i) += std::abs(sigma * rng.normal());
    }
    return p;
}

} // namespace beampos
