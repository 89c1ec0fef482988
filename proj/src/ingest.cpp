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

#include "beampos/ingest.hpp"
#include "beampos/numeric.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string_view>

namespace beampos
{

namespace
{

constexpr std::string_view kFixedColumns[] = {"t", "tx_lat", "tx_lon", "rx_lat", "rx_lon", "best_beam"};
constexpr std::size_t kFixedCount = std::size(kFixedColumns);

std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true)
    {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos)
        {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

double parse_real(std::string_view field, std::size_t line, const char *column)
{
    field = trim(field);
    double value = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size() || !std::isfinite(value))
        throw Error(Errc::RowParseError, column, "line " + std::to_string(line) + ": cannot parse '" + std::string(field) + "'",
                    line);
    return value;
}

std::size_t parse_index(std::string_view field, std::size_t line)
{
    field = trim(field);
    std::size_t value = 0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size())
        throw Error(Errc::RowParseError, "best_beam",
                    "line " + std::to_string(line) + ": cannot parse beam index '" + std::string(field) + "'", line);
    return value;
}

std::size_t parse_header(std::string_view header)
{
    if (header.starts_with("\xEF\xBB\xBF"))
        header.remove_prefix(3);
    const auto cols = split_fields(trim(header));
    if (cols.size() <= kFixedCount)
        throw Error(Errc::SchemaMismatch, "header", "header has no power columns");
    for (std::size_t i = 0; i < kFixedCount; ++i)
        if (trim(cols[i]) != kFixedColumns[i])
            throw Error(Errc::SchemaMismatch, "header",
                        "expected column '" + std::string(kFixedColumns[i]) + "', found '" + std::string(cols[i]) + "'");
    const std::size_t k = cols.size() - kFixedCount;
    for (std::size_t i = 0; i < k; ++i)
        if (trim(cols[kFixedCount + i]) != "p" + std::to_string(i))
            throw Error(Errc::SchemaMismatch, "header", "expected column 'p" + std::to_string(i) + "'");
    return k;
}

} // namespace

bool Sample::operator==(const Sample &other) const
{
    return t == other.t && tx_pos == other.tx_pos && rx_pos == other.rx_pos && optimal_index == other.optimal_index &&
           powers.size() == other.powers.size() && (powers.array() == other.powers.array()).all();
}

std::vector<GeoPosition> Dataset::tx_positions() const
{
    std::vector<GeoPosition> out;
    out.reserve(samples.size());
    for (const auto &s : samples)
        out.push_back(s.tx_pos);
    return out;
}

void validate(const SplitSpec &spec)
{
    if (!(spec.train_frac >= 0.0 && spec.val_frac >= 0.0 && spec.test_frac >= 0.0))
        throw Error(Errc::InvalidArgument, "split", "split fractions must be non-negative");
    if (std::abs(spec.train_frac + spec.val_frac + spec.test_frac - 1.0) > 1e-9)
        throw Error(Errc::InvalidArgument, "split", "split fractions must sum to 1");
}

Sample make_sample(double t, GeoPosition tx, std::optional<GeoPosition> rx, PowerVector powers)
{
    if (powers.size() == 0)
        throw Error(Errc::EmptyVector, "powers", "power vector is empty");
    for (Eigen::Index i = 0; i < powers.size(); ++i)
        if (!std::isfinite(powers(i)) || powers(i) < 0.0)
            throw Error(Errc::InvalidArgument, "powers", "powers must be finite and non-negative");
    Sample s;
    s.t = t;
    s.tx_pos = validate_position(tx);
    if (rx)
        s.rx_pos = validate_position(*rx);
    s.optimal_index = static_cast<std::size_t>(optimal_beam(powers));
    s.powers = std::move(powers);
    return s;
}

std::string csv_header(std::size_t codebook_size)
{
    std::string h;
    for (std::size_t i = 0; i < kFixedCount; ++i)
    {
        h += kFixedColumns[i];
        h += ',';
    }
    for (std::size_t i = 0; i < codebook_size; ++i)
    {
        h += 'p';
        h += std::to_string(i);
        if (i + 1 < codebook_size)
            h += ',';
    }
    return h;
}

Dataset parse_dataset(std::istream &in, double sampling_period)
{
    std::string line;
    if (!std::getline(in, line))
        throw Error(Errc::SchemaMismatch, "header", "missing header row");

    Dataset d;
    d.codebook_size = parse_header(line);
    d.sampling_period = sampling_period;
    const std::size_t n_fields = kFixedCount + d.codebook_size;

    std::size_t line_no = 1;
    while (std::getline(in, line))
    {
        ++line_no;
        if (trim(line).empty())
            continue;
        const auto fields = split_fields(line);
        if (fields.size() != n_fields)
            throw Error(Errc::SchemaMismatch, "row",
                        "line " + std::to_string(line_no) + ": expected " + std::to_string(n_fields) + " fields, found " +
                            std::to_string(fields.size()),
                        line_no);

        const double t = parse_real(fields[0], line_no, "t");
        const GeoPosition tx{parse_real(fields[1], line_no, "tx_lat"), parse_real(fields[2], line_no, "tx_lon")};

        std::optional<GeoPosition> rx;
        const bool rx_lat_empty = trim(fields[3]).empty();
        const bool rx_lon_empty = trim(fields[4]).empty();
        if (rx_lat_empty != rx_lon_empty)
            throw Error(Errc::RowParseError, "rx", "line " + std::to_string(line_no) + ": rx_lat/rx_lon must both be set or both empty",
                        line_no);
        if (!rx_lat_empty)
            rx = GeoPosition{parse_real(fields[3], line_no, "rx_lat"), parse_real(fields[4], line_no, "rx_lon")};

        PowerVector powers(static_cast<Eigen::Index>(d.codebook_size));
        for (std::size_t i = 0; i < d.codebook_size; ++i)
            powers(static_cast<Eigen::Index>(i)) = parse_real(fields[kFixedCount + i], line_no, "p");

        Sample s;
        try
        {
            s = make_sample(t, tx, rx, std::move(powers));
        }
        catch (const Error &e)
        {
            throw Error(Errc::RowParseError, e.field(), "line " + std::to_string(line_no) + ": " + e.what(), line_no);
        }

        if (!trim(fields[5]).empty())
        {
            const std::size_t stored = parse_index(fields[5], line_no);
            if (stored != s.optimal_index)
                throw Error(Errc::IndexMismatch, "best_beam",
                            "line " + std::to_string(line_no) + ": stored index " + std::to_string(stored) +
                                " but argmax of powers is " + std::to_string(s.optimal_index),
                            line_no);
        }
        d.samples.push_back(std::move(s));
    }
    return d;
}

Dataset parse_dataset(const std::filesystem::path &path, double sampling_period)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::MissingInput, path.string(), "cannot open dataset file");
    return parse_dataset(in, sampling_period);
}

void write_dataset(const Dataset &d, std::ostream &out)
{
    out << csv_header(d.codebook_size) << '\n';
    for (const auto &s : d.samples)
    {
        if (static_cast<std::size_t>(s.powers.size()) != d.codebook_size)
            throw Error(Errc::ShapeMismatch, "powers", "sample power vector does not match codebook size");
        out << format_double(s.t) << ',' << format_double(s.tx_pos.lat_deg) << ',' << format_double(s.tx_pos.lon_deg) << ',';
        if (s.rx_pos)
            out << format_double(s.rx_pos->lat_deg) << ',' << format_double(s.rx_pos->lon_deg);
        else
            out << ',';
        out << ',' << s.optimal_index;
        for (Eigen::Index i = 0; i < s.powers.size(); ++i)
            out << ',' << format_double(s.powers(i));
        out << '\n';
    }
}

void write_dataset(const Dataset &d, const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(Errc::Io, path.string(), "cannot open file for writing");
    write_dataset(d, out);
    out.flush();
    if (!out)
        throw Error(Errc::Io, path.string(), "write failed");
}

SplitIndices split_indices(std::size_t n, const SplitSpec &spec)
{
    validate(spec);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (spec.mode == SplitMode::Shuffle)
    {
        Rng rng(spec.seed);
        rng.shuffle(std::span<std::size_t>(order));
    }

    // The epsilon keeps products like 10 * 0.7 = 6.9999... from losing a sample.
    const auto part = [n](double frac) { return static_cast<std::size_t>(std::floor(static_cast<double>(n) * frac + 1e-9)); };
    const std::size_t n_val = part(spec.val_frac);
    const std::size_t n_test = part(spec.test_frac);
    const std::size_t n_train = n - n_val - n_test;

    SplitIndices out;
    out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.val.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                   order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
    out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), order.end());
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.val.begin(), out.val.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

Dataset subset(const Dataset &d, const std::vector<std::size_t> &indices)
{
    Dataset out;
    out.codebook_size = d.codebook_size;
    out.sampling_period = d.sampling_period;
    out.samples.reserve(indices.size());
    for (const std::size_t i : indices)
        out.samples.push_back(d.samples.at(i));
    return out;
}

Dataset concat(const Dataset &a, const Dataset &b)
{
    if (a.codebook_size != b.codebook_size)
        throw Error(Errc::CodebookMismatch, "codebook_size", "datasets have different codebook sizes");
    Dataset out = a;
    out.samples.insert(out.samples.end(), b.samples.begin(), b.samples.end());
    return out;
}

DatasetSplit split(const Dataset &d, const SplitSpec &spec)
{
    const SplitIndices idx = split_indices(d.size(), spec);
    return {subset(d, idx.train), subset(d, idx.val), subset(d, idx.test)};
}

void write_split(const DatasetSplit &s, const std::filesystem::path &stem)
{
    const std::string base = stem.string();
    write_dataset(s.train, std::filesystem::path(base + ".train.csv"));
    write_dataset(s.val, std::filesystem::path(base + ".val.csv"));
    write_dataset(s.test, std::filesystem::path(base + ".test.csv"));
}

} // namespace beampos
