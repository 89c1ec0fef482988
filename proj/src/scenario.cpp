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

#include "beampos/scenario.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

namespace beampos
{

namespace
{

constexpr double kEarthRadius = 6371008.8; // mean radius, meters

std::vector<Eigen::Vector2d> read_waypoints(const nlohmann::json &j, const std::string &path, const char *key,
                                            const std::vector<Eigen::Vector2d> &fallback)
{
    if (!j.contains(key))
        return fallback;
    const std::string where = detail::join_path(path, key);
    const auto &arr = j.at(key);
    if (!arr.is_array() || arr.empty())
        throw Error(Errc::Config, where, "expected a non-empty array of [east, north] pairs");
    std::vector<Eigen::Vector2d> out;
    for (const auto &pt : arr)
    {
        if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number())
            throw Error(Errc::Config, where, "each waypoint must be [east, north] in meters");
        out.emplace_back(pt[0].get<double>(), pt[1].get<double>());
    }
    return out;
}

nlohmann::json waypoints_to_json(const std::vector<Eigen::Vector2d> &w)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &p : w)
        arr.push_back({p.x(), p.y()});
    return arr;
}

} // namespace

void validate(const TrajectoryConfig &cfg)
{
    if (!(cfg.duration > 0.0))
        throw Error(Errc::InvalidArgument, "duration", "duration must be positive");
    if (!(cfg.sample_period > 0.0))
        throw Error(Errc::InvalidArgument, "sample_period", "sample period must be positive");
    if (cfg.tx_waypoints.empty() || cfg.rx_waypoints.empty())
        throw Error(Errc::InvalidArgument, "waypoints", "both paths need at least one waypoint");
    validate_position(cfg.origin);
}

std::size_t sample_count(const TrajectoryConfig &cfg)
{
    return static_cast<std::size_t>(std::floor(cfg.duration / cfg.sample_period + 1e-9));
}

Eigen::Vector2d polyline_point(const std::vector<Eigen::Vector2d> &waypoints, double s)
{
    if (waypoints.size() == 1)
        return waypoints.front();

    double total = 0.0;
    for (std::size_t i = 1; i < waypoints.size(); ++i)
        total += (waypoints[i] - waypoints[i - 1]).norm();
    if (total == 0.0)
        return waypoints.front();

    double remaining = std::clamp(s, 0.0, 1.0) * total;
    for (std::size_t i = 1; i < waypoints.size(); ++i)
    {
        const double seg = (waypoints[i] - waypoints[i - 1]).norm();
        if (remaining <= seg && seg > 0.0)
            return waypoints[i - 1] + (waypoints[i] - waypoints[i - 1]) * (remaining / seg);
        remaining -= seg;
    }
    return waypoints.back();
}

GeoPosition local_to_geo(const GeoPosition &origin, const Eigen::Vector2d &east_north)
{
    constexpr double rad2deg = 180.0 / std::numbers::pi;
    const double lat0 = origin.lat_deg / rad2deg;
    return {origin.lat_deg + east_north.y() / kEarthRadius * rad2deg,
            origin.lon_deg + east_north.x() / (kEarthRadius * std::cos(lat0)) * rad2deg};
}

double arrival_angle(const Eigen::Vector2d &rx, const Eigen::Vector2d &tx, double rx_heading)
{
    const Eigen::Vector2d d = tx - rx;
    const double raw = std::atan2(d.y(), d.x()) - rx_heading;
    return std::remainder(raw, 2.0 * std::numbers::pi);
}

Dataset generate_scenario(const TrajectoryConfig &traj, const ArrayConfig &arr, const SyntheticChannelConfig &ch,
                          std::size_t codebook_size, std::size_t threads)
{
    validate(traj);
    validate(arr);
    validate(ch);
    const Codebook cb = dft_codebook(arr, codebook_size);

    const std::size_t n = sample_count(traj);
    Dataset d;
    d.codebook_size = codebook_size;
    d.sampling_period = traj.sample_period;
    d.samples.resize(n);

    const auto make = [&](std::size_t j) {
        const double t = static_cast<double>(j) * traj.sample_period;
        const double s = t / traj.duration;
        const Eigen::Vector2d tx = polyline_point(traj.tx_waypoints, s);
        const Eigen::Vector2d rx = polyline_point(traj.rx_waypoints, s);
        const double theta = arrival_angle(rx, tx, traj.rx_heading);
        if (!(std::abs(theta) < std::numbers::pi / 2.0))
            throw Error(Errc::GeometryOutOfSector, "theta",
                        "transmitter leaves the receiver's front half-plane at t=" + std::to_string(t) + " s");
        const double dist = (tx - rx).norm();
        PowerVector p = beam_power_vector(arr, cb, ch, theta, dist, j);
        d.samples[j] = make_sample(t, local_to_geo(traj.origin, tx), local_to_geo(traj.origin, rx), std::move(p));
    };

    threads = std::max<std::size_t>(1, std::min(threads, n));
    if (threads == 1)
    {
        for (std::size_t j = 0; j < n; ++j)
            make(j);
        return d;
    }

    std::vector<std::exception_ptr> failures(threads);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w)
    {
        pool.emplace_back([&, w] {
            try
            {
                for (std::size_t j = w; j < n; j += threads)
                    make(j);
            }
            catch (...)
            {
                failures[w] = std::current_exception();
            }
        });
    }
    for (auto &th : pool)
        th.join();
    for (const auto &f : failures)
        if (f)
            std::rethrow_exception(f);
    return d;
}

ScenarioConfig scenario_from_json(const nlohmann::json &j)
{
    using detail::read_field;
    detail::require_object(j, "");
    detail::reject_unknown_keys(j, "", {"trajectory", "array", "channel", "codebook_size", "seed"});

    ScenarioConfig cfg;
    cfg.codebook_size = read_field<std::size_t>(j, "", "codebook_size", cfg.codebook_size);
    cfg.channel.seed = read_field<std::uint64_t>(j, "", "seed", cfg.channel.seed);

    if (j.contains("trajectory"))
    {
        const auto &t = j.at("trajectory");
        const std::string p = "trajectory";
        detail::require_object(t, p);
        detail::reject_unknown_keys(t, p, {"duration", "sample_period", "rx_heading", "origin", "tx_waypoints", "rx_waypoints"});
        auto &tr = cfg.trajectory;
        tr.duration = read_field<double>(t, p, "duration", tr.duration);
        tr.sample_period = read_field<double>(t, p, "sample_period", tr.sample_period);
        tr.rx_heading = read_field<double>(t, p, "rx_heading", tr.rx_heading);
        if (t.contains("origin"))
        {
            const auto &o = t.at("origin");
            detail::require_object(o, "trajectory.origin");
            detail::reject_unknown_keys(o, "trajectory.origin", {"lat", "lon"});
            tr.origin.lat_deg = read_field<double>(o, "trajectory.origin", "lat", tr.origin.lat_deg);
            tr.origin.lon_deg = read_field<double>(o, "trajectory.origin", "lon", tr.origin.lon_deg);
        }
        tr.tx_waypoints = read_waypoints(t, p, "tx_waypoints", tr.tx_waypoints);
        tr.rx_waypoints = read_waypoints(t, p, "rx_waypoints", tr.rx_waypoints);
    }
    if (j.contains("array"))
    {
        const auto &a = j.at("array");
        detail::require_object(a, "array");
        detail::reject_unknown_keys(a, "array", {"n_elements", "element_spacing"});
        cfg.array.n_elements = read_field<std::size_t>(a, "array", "n_elements", cfg.array.n_elements);
        cfg.array.element_spacing = read_field<double>(a, "array", "element_spacing", cfg.array.element_spacing);
    }
    if (j.contains("channel"))
    {
        const auto &c = j.at("channel");
        const std::string p = "channel";
        detail::require_object(c, p);
        detail::reject_unknown_keys(c, p, {"n_subcarriers", "tx_power", "noise_power", "pathloss_exponent", "reference_distance", "seed"});
        auto &ch = cfg.channel;
        ch.n_subcarriers = read_field<std::size_t>(c, p, "n_subcarriers", ch.n_subcarriers);
        ch.tx_power = read_field<double>(c, p, "tx_power", ch.tx_power);
        ch.noise_power = read_field<double>(c, p, "noise_power", ch.noise_power);
        ch.pathloss_exponent = read_field<double>(c, p, "pathloss_exponent", ch.pathloss_exponent);
        ch.reference_distance = read_field<double>(c, p, "reference_distance", ch.reference_distance);
        ch.seed = read_field<std::uint64_t>(c, p, "seed", ch.seed);
    }

    // Range checks, reported against config field names.
    const auto check = [](auto &&fn) {
        try
        {
            fn();
        }
        catch (const Error &e)
        {
            throw Error(Errc::Config, e.field(), e.what());
        }
    };
    check([&] { validate(cfg.trajectory); });
    check([&] { validate(cfg.array); });
    check([&] { validate(cfg.channel); });
    if (cfg.codebook_size < cfg.array.n_elements)
        throw Error(Errc::Config, "codebook_size", "codebook size must be at least array.n_elements");
    return cfg;
}

nlohmann::json scenario_to_json(const ScenarioConfig &cfg)
{
    const auto &tr = cfg.trajectory;
    const auto &ch = cfg.channel;
    return {
        {"codebook_size", cfg.codebook_size},
        {"trajectory",
         {{"duration", tr.duration},
          {"sample_period", tr.sample_period},
          {"rx_heading", tr.rx_heading},
          {"origin", {{"lat", tr.origin.lat_deg}, {"lon", tr.origin.lon_deg}}},
          {"tx_waypoints", waypoints_to_json(tr.tx_waypoints)},
          {"rx_waypoints", waypoints_to_json(tr.rx_waypoints)}}},
        {"array", {{"n_elements", cfg.array.n_elements}, {"element_spacing", cfg.array.element_spacing}}},
        {"channel",
         {{"n_subcarriers", ch.n_subcarriers},
          {"tx_power", ch.tx_power},
          {"noise_power", ch.noise_power},
          {"pathloss_exponent", ch.pathloss_exponent},
          {"reference_distance", ch.reference_distance},
          {"seed", ch.seed}}},
    };
}

} // namespace beampos
