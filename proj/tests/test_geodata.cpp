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
#include "beampos/numeric.hpp"

#include "doctest.h"

#include <vector>

using namespace beampos;

TEST_SUITE("geodata")
{

TEST_CASE("validate_position accepts the inclusive range")
{
    CHECK(validate_position({33.42, -111.93}) == GeoPosition{33.42, -111.93});
    CHECK(validate_position({-90.0, -180.0}) == GeoPosition{-90.0, -180.0});
    CHECK(validate_position({90.0, 180.0}) == GeoPosition{90.0, 180.0});
}

TEST_CASE("validate_position names the offending axis")
{
    try
    {
        validate_position({91.0, 0.0});
        FAIL("expected OutOfRange");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == Errc::OutOfRange);
        CHECK(e.field() == "lat");
    }
    try
    {
        validate_position({0.0, -180.5});
        FAIL("expected OutOfRange");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == Errc::OutOfRange);
        CHECK(e.field() == "lon");
    }
}

TEST_CASE("fit_normalization takes per-axis extremes")
{
    const std::vector<GeoPosition> pts{{33.0, -112.0}, {33.5, -111.5}};
    const auto n = fit_normalization(pts);
    CHECK(n == NormalizationParams{33.0, 33.5, -112.0, -111.5});

    const std::vector<GeoPosition> diag{{0.0, 0.0}, {0.5, 0.5}, {1.0, 1.0}};
    CHECK(fit_normalization(diag) == NormalizationParams{0.0, 1.0, 0.0, 1.0});
}

TEST_CASE("fit_normalization rejects a zero range")
{
    const std::vector<GeoPosition> pts{{33.0, -112.0}, {33.0, -111.5}};
    try
    {
        fit_normalization(pts);
        FAIL("expected DegenerateRange");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == Errc::DegenerateRange);
        CHECK(e.field() == "lat");
    }
    CHECK_THROWS_AS(fit_normalization(std::vector<GeoPosition>{}), Error);
    CHECK_THROWS_AS(make_normalization(1.0, 1.0, 0.0, 1.0), Error);
    CHECK_THROWS_AS(make_normalization(0.0, 1.0, 2.0, 1.0), Error);
}

TEST_CASE("normalize maps corners, midpoints and extrapolates")
{
    const auto n = make_normalization(33.0, 33.5, -112.0, -111.5);
    const auto lo = normalize({33.0, -112.0}, n);
    CHECK(lo.u == 0.0);
    CHECK(lo.v == 0.0);
    CHECK(normalize({33.25, -112.0}, n).u == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(normalize({33.75, -112.0}, n).u == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(normalize({32.75, -112.0}, n).u == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("normalize is monotone and round-trips")
{
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial)
    {
        const double lat_min = rng.uniform(-80.0, 70.0);
        const double lon_min = rng.uniform(-170.0, 160.0);
        const auto n = make_normalization(lat_min, lat_min + rng.uniform(1e-4, 5.0), lon_min, lon_min + rng.uniform(1e-4, 5.0));
        const GeoPosition a{rng.uniform(n.lat_min, n.lat_max), rng.uniform(n.lon_min, n.lon_max)};
        const GeoPosition b{rng.uniform(n.lat_min, n.lat_max), rng.uniform(n.lon_min, n.lon_max)};
        const auto qa = normalize(a, n);
        const auto qb = normalize(b, n);
        if (a.lat_deg < b.lat_deg)
            CHECK(qa.u < qb.u);
        if (a.lon_deg < b.lon_deg)
            CHECK(qa.v < qb.v);
        const auto back = denormalize(qa, n);
        CHECK(std::abs(back.lat_deg - a.lat_deg) <= 1e-12 * std::max(1.0, std::abs(a.lat_deg)));
        CHECK(std::abs(back.lon_deg - a.lon_deg) <= 1e-12 * std::max(1.0, std::abs(a.lon_deg)));
    }
}

TEST_CASE("fitted normalization maps the fitting set into the unit square")
{
    Rng rng(3);
    std::vector<GeoPosition> pts;
    for (int i = 0; i < 100; ++i)
        pts.push_back({rng.uniform(33.0, 33.1), rng.uniform(-112.0, -111.9)});
    const auto n = fit_normalization(pts);
    double umin = 1, umax = 0, vmin = 1, vmax = 0;
    for (const auto &p : pts)
    {
        const auto q = normalize(p, n);
        umin = std::min(umin, q.u);
        umax = std::max(umax, q.u);
        vmin = std::min(vmin, q.v);
        vmax = std::max(vmax, q.v);
    }
    CHECK(umin == 0.0);
    CHECK(vmin == 0.0);
    CHECK(umax == 1.0);
    CHECK(vmax == 1.0);
}

}
