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
#include "beampos/numeric.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

namespace beampos
{

namespace
{

constexpr const char *kFormat = "beampos-fingerprint";
constexpr int kVersion = 1;

std::vector<std::size_t> rank_descending(const PowerVector &p, std::size_t m)
{
    std::vector<std::size_t> idx(static_cast<std::size_t>(p.size()));
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return p(static_cast<Eigen::Index>(a)) > p(static_cast<Eigen::Index>(b));
    });
    idx.resize(std::min(m, idx.size()));
    return idx;
}

} // namespace

BinGrid BinGrid::uniform(std::size_t bins_u, std::size_t bins_v)
{
    if (bins_u == 0 || bins_v == 0)
        throw Error(Errc::InvalidArgument, "bins", "bin counts must be positive");
    return {{0.0, 0.0}, 1.0 / static_cast<double>(bins_u), 1.0 / static_cast<double>(bins_v)};
}

void validate(const BinGrid &grid)
{
    if (!(grid.bin_width_u > 0.0) || !(grid.bin_width_v > 0.0))
        throw Error(Errc::InvalidArgument, "bin_width", "bin widths must be positive");
}

BinKey FingerprintDatabase::bin_of(const NormalizedPosition &p) const
{
    return {static_cast<long>(std::floor((p.u - grid.origin.u) / grid.bin_width_u)),
            static_cast<long>(std::floor((p.v - grid.origin.v) / grid.bin_width_v))};
}

NormalizedPosition FingerprintDatabase::bin_center(const BinKey &k) const
{
    return {grid.origin.u + (static_cast<double>(k.row) + 0.5) * grid.bin_width_u,
            grid.origin.v + (static_cast<double>(k.col) + 0.5) * grid.bin_width_v};
}

FingerprintDatabase build_database(const Dataset &train, const BinGrid &grid, const NormalizationParams &norm)
{
    validate(grid);
    if (train.empty())
        throw Error(Errc::EmptyDataset, "train", "cannot build a fingerprint database from an empty set");

    FingerprintDatabase db;
    db.grid = grid;
    db.codebook_size = train.codebook_size;

    struct Accumulator
    {
        std::size_t count = 0;
        std::vector<CompensatedSum<double>> sums;
    };
    std::map<BinKey, Accumulator> acc;

    for (const auto &s : train.samples)
    {
        if (static_cast<std::size_t>(s.powers.size()) != train.codebook_size)
            throw Error(Errc::ShapeMismatch, "powers", "sample power vector does not match codebook size");
        auto &a = acc[db.bin_of(normalize(s.tx_pos, norm))];
        if (a.sums.empty())
            a.sums.resize(train.codebook_size);
        ++a.count;
        for (std::size_t i = 0; i < train.codebook_size; ++i)
            a.sums[i].add(s.powers(static_cast<Eigen::Index>(i)));
    }

    for (const auto &[key, a] : acc)
    {
        BinStats stats;
        stats.count = a.count;
        stats.mean_power.resize(static_cast<Eigen::Index>(train.codebook_size));
        for (std::size_t i = 0; i < train.codebook_size; ++i)
            stats.mean_power(static_cast<Eigen::Index>(i)) = a.sums[i].value() / static_cast<double>(a.count);
        db.bins.emplace(key, std::move(stats));
    }
    return db;
}

std::vector<std::size_t> query_candidates(const FingerprintDatabase &db, const NormalizedPosition &pos, std::size_t m)
{
    if (m < 1)
        throw Error(Errc::InvalidArgument, "m", "m must be at least 1");
    if (db.bins.empty())
        throw Error(Errc::EmptyDataset, "database", "fingerprint database is empty");

    const BinKey key = db.bin_of(pos);
    auto it = db.bins.find(key);
    if (it == db.bins.end())
    {
        // std::map iterates in (row, col) order, so strict < keeps the lowest key on ties.
        const NormalizedPosition c = db.bin_center(key);
        double best = std::numeric_limits<double>::infinity();
        for (auto cand = db.bins.begin(); cand != db.bins.end(); ++cand)
        {
            const NormalizedPosition cc = db.bin_center(cand->first);
            const double du = cc.u - c.u;
            const double dv = cc.v - c.v;
            const double d2 = du * du + dv * dv;
            if (d2 < best)
            {
                best = d2;
                it = cand;
            }
        }
    }
    return rank_descending(it->second.mean_power, m);
}

std::vector<std::vector<std::size_t>> evaluate_baseline(const FingerprintDatabase &db, const Dataset &test,
                                                        const NormalizationParams &norm, std::size_t m)
{
    std::vector<std::vector<std::size_t>> out;
    out.reserve(test.size());
    for (const auto &s : test.samples)
        out.push_back(query_candidates(db, normalize(s.tx_pos, norm), m));
    return out;
}

nlohmann::json database_to_json(const FingerprintDatabase &db)
{
    nlohmann::json bins = nlohmann::json::array();
    for (const auto &[key, stats] : db.bins)
    {
        bins.push_back({{"row", key.row},
                        {"col", key.col},
                        {"count", stats.count},
                        {"mean_power", std::vector<double>(stats.mean_power.data(), stats.mean_power.data() + stats.mean_power.size())}});
    }
    return {{"format", kFormat},
            {"version", kVersion},
            {"codebook_size", db.codebook_size},
            {"grid",
             {{"origin_u", db.grid.origin.u},
              {"origin_v", db.grid.origin.v},
              {"bin_width_u", db.grid.bin_width_u},
              {"bin_width_v", db.grid.bin_width_v}}},
            {"bins", bins}};
}

FingerprintDatabase database_from_json(const nlohmann::json &j)
{
    try
    {
        if (j.at("format").get<std::string>() != kFormat)
            throw Error(Errc::Config, "format", "not a fingerprint database document");
        if (j.at("version").get<int>() != kVersion)
            throw Error(Errc::Config, "version", "unsupported fingerprint database version");
        FingerprintDatabase db;
        db.codebook_size = j.at("codebook_size").get<std::size_t>();
        const auto &g = j.at("grid");
        db.grid.origin = {g.at("origin_u").get<double>(), g.at("origin_v").get<double>()};
        db.grid.bin_width_u = g.at("bin_width_u").get<double>();
        db.grid.bin_width_v = g.at("bin_width_v").get<double>();
        validate(db.grid);
        for (const auto &b : j.at("bins"))
        {
            const auto mean = b.at("mean_power").get<std::vector<double>>();
            if (mean.size() != db.codebook_size)
                throw Error(Errc::ShapeMismatch, "mean_power", "bin mean length does not match codebook size");
            BinStats stats;
            stats.count = b.at("count").get<std::size_t>();
            if (stats.count < 1)
                throw Error(Errc::Config, "count", "stored bins must hold at least one sample");
            stats.mean_power = Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
            db.bins.emplace(BinKey{b.at("row").get<long>(), b.at("col").get<long>()}, std::move(stats));
        }
        return db;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw Error(Errc::Config, "fingerprint", e.what());
    }
}

void save_database(const FingerprintDatabase &db, const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(Errc::Io, path.string(), "cannot open file for writing");
    out << database_to_json(db).dump(1) << '\n';
    if (!out)
        throw Error(Errc::Io, path.string(), "write failed");
}

FingerprintDatabase load_database(const std::filesystem::path &path)
{
    return database_from_json(detail::load_json_file(path));
}

} // namespace beampos
