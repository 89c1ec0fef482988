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

#ifndef BEAMPOS_ERROR_HPP
#define BEAMPOS_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace beampos
{

enum class Errc
{
    OutOfRange,
    DegenerateRange,
    SchemaMismatch,
    RowParseError,
    IndexMismatch,
    Io,
    InvalidGeometry,
    GeometryOutOfSector,
    EmptyVector,
    EmptyDataset,
    ShapeMismatch,
    LengthMismatch,
    ZeroGroundTruthPower,
    CodebookMismatch,
    InvalidArgument,
    Config,
    MissingInput,
    Numeric
};

constexpr std::string_view to_string(Errc code)
{
    switch (code)
    {
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::DegenerateRange: return "DegenerateRange";
    case Errc::SchemaMismatch: return "SchemaMismatch";
    case Errc::RowParseError: return "RowParseError";
    case Errc::IndexMismatch: return "IndexMismatch";
    case Errc::Io: return "Io";
    case Errc::InvalidGeometry: return "InvalidGeometry";
    case Errc::GeometryOutOfSector: return "GeometryOutOfSector";
    case Errc::EmptyVector: return "EmptyVector";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::ZeroGroundTruthPower: return "ZeroGroundTruthPower";
    case Errc::CodebookMismatch: return "CodebookMismatch";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Config: return "Config";
    case Errc::MissingInput: return "MissingInput";
    case Errc::Numeric: return "Numeric";
    }
    return "Unknown";
}

/// Exception carrying a machine-readable code plus the offending field
/// (e.g. "lat", a config key) or CSV line number where applicable.
class Error : public std::runtime_error
{
  public:
    Error(Errc code, std::string field, const std::string &message, std::size_t line = 0)
        : std::runtime_error(std::string(to_string(code)) + (field.empty() ? "" : "(" + field + ")") + ": " + message),
          code_(code), field_(std::move(field)), line_(line)
    {
    }

    Errc code() const noexcept { return code_; }
    const std::string &field() const noexcept { return field_; }
    std::size_t line() const noexcept { return line_; }

  private:
    Errc code_;
    std::string field_;
    std::size_t line_;
};

} // namespace beampos

#endif // BEAMPOS_ERROR_HPP
