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
#include "beampos/synthchan.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>

using namespace beampos;
using std::numbers::pi;

TEST_SUITE("synthchan")
{

TEST_CASE("array response at broadside is all ones")
{
    const auto a = array_response<double>(ArrayConfig{}, 0.0);
    REQUIRE(a.size() == 16);
    for (Eigen::Index k = 0; k < a.size(); ++k)
        CHECK(std::abs(a(k) - std::complex<double>(1.0, 0.0)) < 1e-15);
}

TEST_CASE("array response phase step")
{
    const auto a = array_response<double>(ArrayConfig{}, pi / 6.0);
    CHECK(std::arg(a(1)) == doctest::Approx(pi / 2.0).epsilon(1e-12));
    for (Eigen::Index k = 0; k < a.size(); ++k)
        CHECK(std::abs(a(k)) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("array response is conjugate-symmetric in theta")
{
    for (const double th : {0.1, 0.4, 1.2, -0.7})
    {
        const auto a = array_response<double>(ArrayConfig{}, th);
        const auto b = array_response<double>(ArrayConfig{}, -th);
        CHECK((a.conjugate() - b).norm() < 1e-12);
    }
}

TEST_CASE("array response also instantiates in single precision")
{
    const auto a = array_response<float>(ArrayConfig{8, 0.5}, 0.3f);
    CHECK(a.size() == 8);
    const auto cb = dft_codebook<float>(ArrayConfig{8, 0.5}, 16);
    CHECK(beam_gains(cb, a).size() == 16);
}

TEST_CASE("DFT codebook shape and norms")
{
    const auto cb = dft_codebook(ArrayConfig{}, 64);
    REQUIRE(cb.size() == 64);
    REQUIRE(cb.n_elements() == 16);
    for (Eigen::Index i = 0; i < cb.size(); ++i)
        CHECK(std::abs(cb.beam(i).norm() - 1.0) < 1e-12);
    for (Eigen::Index k = 0; k < 16; ++k)
        CHECK(std::abs(cb.weights(k, 32) - std::complex<double>(0.25, 0.0)) < 1e-15);
    for (Eigen::Index i = 0; i < cb.size(); ++i)
        for (Eigen::Index j = i + 1; j < cb.size(); ++j)
            CHECK(std::abs(cb.beam(i).dot(cb.beam(j))) < 1.0 - 1e-9);
    CHECK_THROWS_AS(dft_codebook(ArrayConfig{}, 8), Error);
    CHECK_THROWS_AS(dft_codebook(ArrayConfig{0, 0.5}, 8), Error);
}

TEST_CASE("matched broadside power")
{
    const ArrayConfig arr;
    const auto cb = dft_codebook(arr, 64);
    SyntheticChannelConfig ch;
    ch.n_subcarriers = 1;
    const auto p = beam_power_vector(arr, cb, ch, 0.0, ch.reference_distance);
    CHECK(optimal_beam(p) == 32);
    CHECK(std::abs(p(32) - 16.0) < 1e-9);
    CHECK(std::abs(p.maxCoeff() - 16.0) < 1e-9);
}

TEST_CASE("power scales with distance, subcarriers and tx power")
{
    const ArrayConfig arr;
    const auto cb = dft_codebook(arr, 64);
    SyntheticChannelConfig ch;
    ch.n_subcarriers = 1;
    const auto base = beam_power_vector(arr, cb, ch, 0.3, 20.0);
    CHECK((beam_power_vector(arr, cb, ch, 0.3, 40.0) - base / 4.0).cwiseAbs().maxCoeff() < 1e-15);
    ch.n_subcarriers = 4;
    CHECK((beam_power_vector(arr, cb, ch, 0.3, 20.0) - base * 4.0).cwiseAbs().maxCoeff() < 1e-14);
    ch.n_subcarriers = 1;
    ch.tx_power = 3.5;
    const auto scaled = beam_power_vector(arr, cb, ch, 0.3, 20.0);
    CHECK((scaled - base * 3.5).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(optimal_beam(scaled) == optimal_beam(base));
}

TEST_CASE("critically sampled DFT gains sum to the element count")
{
    for (const std::size_t n : {4u, 8u, 16u, 32u})
    {
        const ArrayConfig arr{n, 0.5};
        const auto cb = dft_codebook(arr, n);
        for (double th = -1.5; th <= 1.5; th += 0.05)
            CHECK(std::abs(beam_gains(cb, array_response(arr, th)).sum() - static_cast<double>(n)) < 1e-9);
    }
}

TEST_CASE("argmax beam tracks sin(theta) on a dense sweep")
{
    const ArrayConfig arr;
    const auto cb = dft_codebook(arr, 64);
    const SyntheticChannelConfig ch;
    for (int i = -999; i <= 999; ++i)
    {
        const double th = 0.5 * pi * i / 1000.0;
        const auto p = beam_power_vector(arr, cb, ch, th, 10.0);
        const double psi = beam_spatial_frequency(optimal_beam(p), 64);
        // the grid wraps at +-1, so compare on the circle of spatial frequencies
        double diff = std::abs(psi - std::sin(th));
        diff = std::min(diff, 2.0 - diff);
        CHECK(diff <= 2.0 / 64.0 + 1e-12);
    }
}

TEST_CASE("noisy powers are non-negative, finite and seeded")
{
    const ArrayConfig arr;
    const auto cb = dft_codebook(arr, 64);
    SyntheticChannelConfig ch;
    ch.noise_power = 0.5;
    ch.seed = 42;
    const auto a = beam_power_vector(arr, cb, ch, 0.2, 50.0, 7);
    const auto b = beam_power_vector(arr, cb, ch, 0.2, 50.0, 7);
    const auto c = beam_power_vector(arr, cb, ch, 0.2, 50.0, 8);
    CHECK(a == b);
    CHECK(a != c);
    CHECK(a.allFinite());
    CHECK(a.minCoeff() >= 0.0);
}

TEST_CASE("noise has the configured mean")
{
    const ArrayConfig arr{4, 0.5};
    const auto cb = dft_codebook(arr, 4);
    SyntheticChannelConfig ch;
    ch.tx_power = 0.0;
    ch.noise_power = 2.0;
    double sum = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i)
        sum += beam_power_vector(arr, cb, ch, 0.0, 1.0, static_cast<std::uint64_t>(i)).sum();
    CHECK(sum / (4.0 * n) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("optimal_beam rules")
{
    CHECK(optimal_beam(Eigen::Vector3d(0.1, 0.9, 0.3)) == 1);
    CHECK(optimal_beam(Eigen::Vector2d(0.5, 0.5)) == 0);
    CHECK_THROWS_AS(optimal_beam(Eigen::VectorXd()), Error);
}

TEST_CASE("geometry errors")
{
    SyntheticChannelConfig ch;
    CHECK_THROWS_AS(pathloss_gain(ch, 0.5), Error);
    CHECK(pathloss_gain(ch, 1.0) == 1.0);
    ch.noise_power = -1.0;
    CHECK_THROWS_AS(validate(ch), Error);
}

}

TEST_SUITE("scenario")
{

TEST_CASE("sample count follows duration and period")
{
    TrajectoryConfig t;
    CHECK(sample_count(t) == 10);
    t.duration = 0.7;
    CHECK(sample_count(t) == 7);
    ScenarioConfig cfg;
    CHECK(generate_scenario(cfg).size() == 10);
}

TEST_CASE("stationary broadside transmitter always picks the centre beam")
{
    ScenarioConfig cfg;
    const Dataset d = generate_scenario(cfg);
    for (const auto &s : d.samples)
        CHECK(s.optimal_index == 32);
}

TEST_CASE("arrival angle sign and wrap")
{
    const Eigen::Vector2d rx(0.0, 0.0);
    CHECK(arrival_angle(rx, {10.0, 0.0}, 0.0) == doctest::Approx(0.0));
    CHECK(arrival_angle(rx, {10.0, 10.0}, 0.0) == doctest::Approx(pi / 4.0));
    CHECK(arrival_angle(rx, {10.0, -10.0}, 0.0) == doctest::Approx(-pi / 4.0));
    CHECK(std::abs(arrival_angle(rx, {-10.0, 0.0}, 0.0)) == doctest::Approx(pi));
    CHECK(arrival_angle(rx, {0.0, 10.0}, pi / 2.0) == doctest::Approx(0.0));
}

TEST_CASE("polyline interpolation is constant-speed")
{
    const std::vector<Eigen::Vector2d> wp{{0.0, 0.0}, {10.0, 0.0}, {10.0, 30.0}};
    CHECK((polyline_point(wp, 0.0) - wp[0]).norm() < 1e-12);
    CHECK((polyline_point(wp, 0.25) - Eigen::Vector2d(10.0, 0.0)).norm() < 1e-12);
    CHECK((polyline_point(wp, 0.5) - Eigen::Vector2d(10.0, 10.0)).norm() < 1e-12);
    CHECK((polyline_point(wp, 1.0) - wp[2]).norm() < 1e-12);
}

TEST_CASE("local_to_geo moves north and east")
{
    const GeoPosition o{33.4255, -111.94};
    const auto n = local_to_geo(o, {0.0, 111.2});
    const auto e = local_to_geo(o, {100.0, 0.0});
    CHECK(n.lat_deg > o.lat_deg);
    CHECK(n.lon_deg == o.lon_deg);
    CHECK(e.lon_deg > o.lon_deg);
    CHECK((n.lat_deg - o.lat_deg) == doctest::Approx(0.001).epsilon(1e-3));
}

TEST_CASE("leaving the front half-plane is an error")
{
    ScenarioConfig cfg;
    cfg.trajectory.tx_waypoints = {{50.0, 0.0}, {-50.0, 0.0}};
    cfg.trajectory.duration = 2.0;
    CHECK_THROWS_AS(generate_scenario(cfg), Error);
}

TEST_CASE("same seed gives a bit-identical dataset, threads do not matter")
{
    ScenarioConfig cfg;
    cfg.trajectory.duration = 30.0;
    cfg.trajectory.tx_waypoints = {{30.0, -20.0}, {60.0, 25.0}};
    cfg.channel.noise_power = 1e-3;
    cfg.channel.seed = 1234;
    const Dataset a = generate_scenario(cfg);
    const Dataset b = generate_scenario(cfg);
    const Dataset c = generate_scenario(cfg, 3);
    CHECK(a.samples == b.samples);
    CHECK(a.samples == c.samples);
    cfg.channel.seed = 1235;
    CHECK(generate_scenario(cfg).samples != a.samples);
}

TEST_CASE("scenario JSON round-trip and field-named errors")
{
    ScenarioConfig cfg;
    cfg.trajectory.duration = 12.5;
    cfg.trajectory.tx_waypoints = {{30.0, -20.0}, {60.0, 25.0}};
    cfg.channel.seed = 99;
    cfg.channel.noise_power = 0.25;
    const auto back = scenario_from_json(scenario_to_json(cfg));
    CHECK(scenario_to_json(back) == scenario_to_json(cfg));

    auto j = scenario_to_json(cfg);
    j["channel"]["noise_power"] = "loud";
    try
    {
        scenario_from_json(j);
        FAIL("expected Config");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == Errc::Config);
        CHECK(e.field() == "channel.noise_power");
    }
    j = scenario_to_json(cfg);
    j["trajectory"]["speed"] = 3;
    try
    {
        scenario_from_json(j);
        FAIL("expected Config");
    }
    catch (const Error &e)
    {
        CHECK(e.field() == "trajectory.speed");
    }
}

}
