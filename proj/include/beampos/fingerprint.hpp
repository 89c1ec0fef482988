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

#ifndef BEAMPOS_FINGERPRINT_HPP
#define BEAMPOS_FINGERPRINT_HPP

#include "beampos/geodata.hpp"
#include "beampos/ingest.hpp"

#include "json.hpp"

#include <compare>
#include <filesystem>
#include <map>
#include <vector>

namespace beampos
{

/// Uniform location bins over normalized transmitter coordinates.
/// Row indexes u (latitude), column indexes v (longitude).
struct BinGrid
{
    NormalizedPosition origin{0.0, 0.0};
    double bin_width_u = 1.0 / 32.0;
    double bin_width_v = 1.0 / 32.0;

    static BinGrid uniform(std::size_t bins_u, std::size_t bins_v);
};

struct BinKey
{
    long row = 0;
    long col = 0;

    auto operator<=>(const BinKey &) const = default;
};

struct BinStats
{
    std::size_t count = 0;
    PowerVector mean_power;
};

struct FingerprintDatabase
{
    BinGrid grid;
    std::size_t codebook_size = 0;
    std::map<BinKey, BinStats> bins;

    BinKey bin_of(const NormalizedPosition &p) const;
    NormalizedPosition bin_center(const BinKey &k) const;
};

void validate(const BinGrid &grid);

/// Bins each training sample by its normalized transmitter position and keeps
/// the per-bin mean of linear powers (compensated sums, so the result does not
/// depend on sample order beyond rounding).
FingerprintDatabase build_database(const Dataset &train, const BinGrid &grid, const NormalizationParams &norm);

/// Top-m beams by mean power in the queried bin, descending, lowest index
/// first on ties. An empty bin falls back to the nearest stored bin by center
/// distance (lowest (row, col) on ties).
std::vector<std::size_t> query_candidates(const FingerprintDatabase &db, const NormalizedPosition &pos, std::size_t m);

std::vector<std::vector<std::size_t>> evaluate_baseline(const FingerprintDatabase &db, const Dataset &test,
                                                        const NormalizationParams &norm, std::size_t m);

nlohmann::json database_to_json(const FingerprintDatabase &db);
FingerprintDatabase database_from_json(const nlohmann::json &j);
void save_database(const FingerprintDatabase &db, const std::filesystem::path &path);
FingerprintDatabase load_database(const std::filesystem::path &path);

} // namespace beampos

#endif // BEAMPOS_FINGERPRINT_HPP
