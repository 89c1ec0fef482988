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

#ifndef BEAMPOS_GEODATA_HPP
#define BEAMPOS_GEODATA_HPP

#include "beampos/error.hpp"

#include <span>

namespace beampos
{

/// GPS fix in decimal degrees.
struct GeoPosition
{
    double lat_deg = 0.0;
    double lon_deg = 0.0;

    bool operator==(const GeoPosition &) const = default;
};

/// Min/max bounds used for min-max scaling. Always holds strict ranges.
struct NormalizationParams
{
    double lat_min = 0.0;
    double lat_max = 1.0;
    double lon_min = 0.0;
    double lon_max = 1.0;

    bool operator==(const NormalizationParams &) const = default;
};

/// Min-max scaled position. Unseen positions may fall outside [0, 1].
struct NormalizedPosition
{
    double u = 0.0;
    double v = 0.0;

    bool operator==(const NormalizedPosition &) const = default;
};

// Throws Error{OutOfRange, "lat"|"lon"} outside [-90, 90] x [-180, 180].
GeoPosition validate_position(GeoPosition p);

// Builds params from explicit bounds; throws DegenerateRange unless max > min on both axes.
NormalizationParams make_normalization(double lat_min, double lat_max, double lon_min, double lon_max);

NormalizationParams fit_normalization(std::span<const GeoPosition> samples);

NormalizedPosition normalize(const GeoPosition &p, const NormalizationParams &params);

GeoPosition denormalize(const NormalizedPosition &q, const NormalizationParams &params);

} // namespace beampos

#endif // BEAMPOS_GEODATA_HPP
