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

#include "beampos/geodata.hpp"
#include "beampos/error.hpp"

#include <algorithm>
#include <cmath>

namespace beampos
{

GeoPosition validate_position(GeoPosition p)
{
    // Negated comparisons also reject NaN.
    if (!(p.lat_deg >= -90.0 && p.lat_deg <= 90.0))
        throw Error(Errc::OutOfRange, "lat", "latitude " + std::to_string(p.lat_deg) + " outside [-90, 90]");
    if (!(p.lon_deg >= -180.0 && p.lon_deg <= 180.0))
        throw Error(Errc::OutOfRange, "lon", "longitude " + std::to_string(p.lon_deg) + " outside [-180, 180]");
    return p;
}

NormalizationParams make_normalization(double lat_min, double lat_max, double lon_min, double lon_max)
{
    if (!(lat_max > lat_min))
        throw Error(Errc::DegenerateRange, "lat", "latitude range must satisfy max > min");
    if (!(lon_max > lon_min))
        throw Error(Errc::DegenerateRange, "lon", "longitude range must satisfy max > min");
    return {lat_min, lat_max, lon_min, lon_max};
}

NormalizationParams fit_normalization(std::span<const GeoPosition> samples)
{
    if (samples.size() < 2)
        throw Error(Errc::DegenerateRange, "lat", "at least two positions are required");

    const auto [lat_lo, lat_hi] = std::minmax_element(samples.begin(), samples.end(),
                                                      [](const auto &a, const auto &b) { return a.lat_deg < b.lat_deg; });
    const auto [lon_lo, lon_hi] = std::minmax_element(samples.begin(), samples.end(),
                                                      [](const auto &a, const auto &b) { return a.lon_deg < b.lon_deg; });
    return make_normalization(lat_lo->lat_deg, lat_hi->lat_deg, lon_lo->lon_deg, lon_hi->lon_deg);
}

NormalizedPosition normalize(const GeoPosition &p, const NormalizationParams &params)
{
    return {(p.lat_deg - params.lat_min) / (params.lat_max - params.lat_min),
            (p.lon_deg - params.lon_min) / (params.lon_max - params.lon_min)};
}

GeoPosition denormalize(const NormalizedPosition &q, const NormalizationParams &params)
{
    return {q.u * (params.lat_max - params.lat_min) + params.lat_min,
            q.v * (params.lon_max - params.lon_min) + params.lon_min};
}

} // namespace beampos
