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

#ifndef BEAMPOS_SCENARIO_HPP
#define BEAMPOS_SCENARIO_HPP

#include "beampos/ingest.hpp"

#include <Eigen/Dense>
#include "json.hpp"

#include <vector>

namespace beampos
{

/// Vehicle paths in a local east/north frame (meters) anchored at `origin`.
/// Each path is a polyline traversed at constant speed over `duration`; a
/// single waypoint means the vehicle is parked.
struct TrajectoryConfig
{
    double duration = 1.0;
    double sample_period = 0.1;
    double rx_heading = 0.0; // boresight, radians counterclockwise from east
    GeoPosition origin{33.4255, -111.9400};
    std::vector<Eigen::Vector2d> tx_waypoints{Eigen::Vector2d(50.0, 0.0)};
    std::vector<Eigen::Vector2d> rx_waypoints{Eigen::Vector2d(0.0, 0.0)};
};

/// Everything the generator needs; also the JSON document read by `generate`.
struct ScenarioConfig
{
    TrajectoryConfig trajectory;
    ArrayConfig array;
    SyntheticChannelConfig channel;
    std::size_t codebook_size = 64;
};

void validate(const TrajectoryConfig &cfg);

std::size_t sample_count(const TrajectoryConfig &cfg);

/// Point at fraction s in [0, 1] of the polyline's arc length.
Eigen::Vector2d polyline_point(const std::vector<Eigen::Vector2d> &waypoints, double s);

/// Equirectangular local-to-geodetic conversion around the anchor.
GeoPosition local_to_geo(const GeoPosition &origin, const Eigen::Vector2d &east_north);

/// Arrival angle at the receiver array, wrapped to (-pi, pi].
double arrival_angle(const Eigen::Vector2d &rx, const Eigen::Vector2d &tx, double rx_heading);

/// One sample per period. Sample j draws its noise from substream j of the
/// channel seed, so the output does not depend on `threads`.
Dataset generate_scenario(const TrajectoryConfig &traj, const ArrayConfig &arr, const SyntheticChannelConfig &ch,
                          std::size_t codebook_size = 64, std::size_t threads = 1);

inline Dataset generate_scenario(const ScenarioConfig &cfg, std::size_t threads = 1)
{
    return generate_scenario(cfg.trajectory, cfg.array, cfg.channel, cfg.codebook_size, threads);
}

/// Reads a scenario document. Unknown keys are rejected; errors carry the
/// offending key as Error::field().
ScenarioConfig scenario_from_json(const nlohmann::json &j);
nlohmann::json scenario_to_json(const ScenarioConfig &cfg);

} // namespace beampos

#endif // BEAMPOS_SCENARIO_HPP
