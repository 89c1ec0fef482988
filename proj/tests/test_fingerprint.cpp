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

#include "beampos/fingerprint.hpp"

#include "doctest.h"
#include "test_support.hpp"

#include <algorithm>
#include <numeric>
#include <set>

using namespace beampos;

namespace
{

const NormalizationParams kUnit = make_normalization(0.0, 1.0, 0.0, 1.0);

Sample at(double lat, double lon, std::vector<double> powers)
{
    return make_sample(0.0, {lat, lon}, std::nullopt, Eigen::Map<PowerVector>(powers.data(), static_cast<Eigen::Index>(powers.size())));
}

Dataset of(std::vector<Sample> s)
{
    Dataset d;
    d.codebook_size = static_cast<std::size_t>(s.front().powers.size());
    d.samples = std::move(s);
    return d;
}

} // namespace

TEST_SUITE("fingerprint")
{

TEST_CASE("single sample makes one bin")
{
    const auto db = build_database(of({at(0.1, 0.2, {0.1, 0.5, 0.4, 0.2})}), BinGrid::uniform(4, 4), kUnit);
    REQUIRE(db.bins.size() == 1);
    const auto &[key, stats] = *db.bins.begin();
    CHECK(key == BinKey{0, 0});
    CHECK(stats.count == 1);
    CHECK(stats.mean_power == PowerVector(Eigen::Vector4d(0.1, 0.5, 0.4, 0.2)));
}

TEST_CASE("two samples in one bin average")
{
    const auto db = build_database(of({at(0.1, 0.1, {1.0, 2.0}), at(0.12, 0.11, {3.0, 0.5})}), BinGrid::uniform(4, 4), kUnit);
    REQUIRE(db.bins.size() == 1);
    CHECK(db.bins.begin()->second.mean_power(0) == doctest::Approx(2.0));
    CHECK(db.bins.begin()->second.mean_power(1) == doctest::Approx(1.25));
}

TEST_CASE("distant samples land in separate bins")
{
    const auto db = build_database(of({at(0.1, 0.1, {1.0, 2.0}), at(0.9, 0.9, {3.0, 0.5})}), BinGrid::uniform(4, 4), kUnit);
    REQUIRE(db.bins.size() == 2);
    CHECK(db.bins.at(BinKey{0, 0}).mean_power(1) == 2.0);
    CHECK(db.bins.at(BinKey{3, 3}).mean_power(0) == 3.0);
}

TEST_CASE("query ranks by mean power")
{
    std::vector<double> p(64, 0.01);
    p[12] = 1.0;
    auto db = build_database(of({at(0.5, 0.5, p)}), BinGrid::uniform(2, 2), kUnit);
    CHECK(query_candidates(db, {0.6, 0.6}, 1) == std::vector<std::size_t>{12});

    db = build_database(of({at(0.5, 0.5, {0.1, 0.5, 0.4, 0.2})}), BinGrid::uniform(2, 2), kUnit);
    CHECK(query_candidates(db, {0.6, 0.6}, 3) == std::vector<std::size_t>{1, 2, 3});
    CHECK(query_candidates(db, {0.6, 0.6}, 10) == std::vector<std::size_t>{1, 2, 3, 0});
    CHECK_THROWS_AS(query_candidates(db, {0.6, 0.6}, 0), Error);
}

TEST_CASE("ties rank the lower beam first")
{
    const auto db = build_database(of({at(0.5, 0.5, {0.3, 0.5, 0.5, 0.3})}), BinGrid::uniform(1, 1), kUnit);
    CHECK(query_candidates(db, {0.5, 0.5}, 4) == std::vector<std::size_t>{1, 2, 0, 3});
}

TEST_CASE("empty bins fall back to the nearest stored bin")
{
    const auto db = build_database(of({at(0.1, 0.1, {1.0, 0.0, 0.0}), at(0.9, 0.9, {0.0, 0.0, 1.0})}), BinGrid::uniform(4, 4), kUnit);
    CHECK(query_candidates(db, {0.35, 0.1}, 1) == std::vector<std::size_t>{0});
    CHECK(query_candidates(db, {0.9, 0.65}, 1) == std::vector<std::size_t>{2});
    // equidistant from both: lowest (row, col) wins
    CHECK(query_candidates(db, {0.4, 0.6}, 1) == std::vector<std::size_t>{0});
    // far outside the unit square still resolves
    CHECK(query_candidates(db, {5.0, 5.0}, 1) == std::vector<std::size_t>{2});
}

TEST_CASE("replaying training data with one sample per bin is exact")
{
    Rng rng(21);
    Dataset d;
    d.codebook_size = 16;
    // points on a coarse lattice, so a fine grid holds one sample per bin
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j)
        {
            PowerVector p(16);
            for (Eigen::Index k = 0; k < 16; ++k)
                p(k) = rng.uniform(0.0, 1.0);
            d.samples.push_back(make_sample(0.0, {0.05 + 0.1 * i, 0.05 + 0.1 * j}, std::nullopt, p));
        }
    const auto db = build_database(d, BinGrid::uniform(10, 10), kUnit);
    REQUIRE(db.bins.size() == 100);
    const auto c = evaluate_baseline(db, d, kUnit, 1);
    for (std::size_t i = 0; i < d.size(); ++i)
        CHECK(c[i] == std::vector<std::size_t>{d.samples[i].optimal_index});

    const auto full = evaluate_baseline(db, d, kUnit, 16);
    for (const auto &list : full)
    {
        std::vector<std::size_t> sorted = list;
        std::sort(sorted.begin(), sorted.end());
        std::vector<std::size_t> all(16);
        std::iota(all.begin(), all.end(), std::size_t{0});
        CHECK(sorted == all);
    }
}

TEST_CASE("empty test set gives empty output")
{
    const auto db = build_database(of({at(0.5, 0.5, {1.0, 2.0})}), BinGrid::uniform(2, 2), kUnit);
    CHECK(evaluate_baseline(db, Dataset{}, kUnit, 1).empty());
    CHECK_THROWS_AS(build_database(Dataset{}, BinGrid::uniform(2, 2), kUnit), Error);
}

TEST_CASE("candidate lists are duplicate-free prefixes")
{
    Rng rng(4);
    const Dataset d = test::random_dataset(rng, 300, 16, false);
    const auto norm = fit_normalization(d.tx_positions());
    const auto db = build_database(d, BinGrid::uniform(8, 8), norm);
    for (int trial = 0; trial < 200; ++trial)
    {
        const NormalizedPosition q{rng.uniform(-0.2, 1.2), rng.uniform(-0.2, 1.2)};
        std::vector<std::size_t> prev;
        for (std::size_t m = 1; m <= 18; ++m)
        {
            const auto c = query_candidates(db, q, m);
            CHECK(c.size() == std::min<std::size_t>(m, 16));
            CHECK(std::set<std::size_t>(c.begin(), c.end()).size() == c.size());
            CHECK(std::equal(prev.begin(), prev.end(), c.begin()));
            prev = c;
        }
    }
}

TEST_CASE("build is order-independent")
{
    Rng rng(6);
    Dataset d = test::random_dataset(rng, 400, 8, false);
    const auto norm = fit_normalization(d.tx_positions());
    const auto a = build_database(d, BinGrid::uniform(4, 4), norm);
    rng.shuffle(std::span<Sample>(d.samples));
    const auto b = build_database(d, BinGrid::uniform(4, 4), norm);
    REQUIRE(a.bins.size() == b.bins.size());
    for (const auto &[key, stats] : a.bins)
    {
        CHECK(stats.count == b.bins.at(key).count);
        CHECK((stats.mean_power - b.bins.at(key).mean_power).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("database JSON round-trip")
{
    Rng rng(10);
    const Dataset d = test::random_dataset(rng, 50, 8, false);
    const auto norm = fit_normalization(d.tx_positions());
    const auto db = build_database(d, BinGrid::uniform(5, 5), norm);
    const auto dir = test::scratch_dir("fingerprint_json");
    save_database(db, dir / "db.json");
    const auto back = load_database(dir / "db.json");
    CHECK(back.codebook_size == db.codebook_size);
    REQUIRE(back.bins.size() == db.bins.size());
    for (const auto &[key, stats] : db.bins)
        CHECK(back.bins.at(key).mean_power == stats.mean_power);
    CHECK(database_to_json(back) == database_to_json(db));
}

}
