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

#ifndef BEAMPOS_INGEST_HPP
#define BEAMPOS_INGEST_HPP

#include "beampos/geodata.hpp"
#include "beampos/synthchan.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace beampos
{

/// One time instant: transmitter (and optionally receiver) fix plus the
/// full beam sweep.
struct Sample
{
    double t = 0.0;
    GeoPosition tx_pos;
    std::optional<GeoPosition> rx_pos;
    PowerVector powers;
    std::size_t optimal_index = 0;

    bool operator==(const Sample &other) const;
};

struct Dataset
{
    std::vector<Sample> samples;
    std::size_t codebook_size = 64;
    double sampling_period = 0.1;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    std::vector<GeoPosition> tx_positions() const;

    bool operator==(const Dataset &) const = default;
};

enum class SplitMode
{
    Shuffle,
    Sequential
};

struct SplitSpec
{
    double train_frac = 0.6;
    double val_frac = 0.2;
    double test_frac = 0.2;
    std::uint64_t seed = 0;
    SplitMode mode = SplitMode::Shuffle;
};

struct DatasetSplit
{
    Dataset train;
    Dataset val;
    Dataset test;
};

/// Index form of a split. Each part is sorted ascending, so time order within
/// a part follows the source dataset.
struct SplitIndices
{
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
    std::vector<std::size_t> test;
};

void validate(const SplitSpec &spec);

/// Builds a sample from raw fields, recomputing the best beam. Validates both
/// positions and power entries (finite, non-negative).
Sample make_sample(double t, GeoPosition tx, std::optional<GeoPosition> rx, PowerVector powers);

std::string csv_header(std::size_t codebook_size);

/// Reads `t,tx_lat,tx_lon,rx_lat,rx_lon,best_beam,p0..p{K-1}`.
/// The codebook size K is taken from the header.
Dataset parse_dataset(std::istream &in, double sampling_period = 0.1);
Dataset parse_dataset(const std::filesystem::path &path, double sampling_period = 0.1);

void write_dataset(const Dataset &d, std::ostream &out);
void write_dataset(const Dataset &d, const std::filesystem::path &path);

SplitIndices split_indices(std::size_t n, const SplitSpec &spec);
DatasetSplit split(const Dataset &d, const SplitSpec &spec);

/// Subset of `d` at the given indices, in the order given.
Dataset subset(const Dataset &d, const std::vector<std::size_t> &indices);

/// Concatenation; both inputs must share the codebook size.
Dataset concat(const Dataset &a, const Dataset &b);

/// Writes `<stem>.train.csv`, `<stem>.val.csv`, `<stem>.test.csv`.
void write_split(const DatasetSplit &s, const std::filesystem::path &stem);

} // namespace beampos

#endif // BEAMPOS_INGEST_HPP
