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

// Internal helpers for reading config documents with field-named errors.

#ifndef BEAMPOS_SRC_JSON_UTIL_HPP
#define BEAMPOS_SRC_JSON_UTIL_HPP

#include "beampos/error.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <algorithm>
#include <initializer_list>
#include <regex>
#include <sstream>
#include <string>

namespace beampos::detail
{

using nlohmann::json;

inline std::string join_path(const std::string &prefix, const std::string &key)
{
    return prefix.empty() ? key : prefix + "." + key;
}

inline void require_object(const json &j, const std::string &path)
{
    if (!j.is_object())
        throw Error(Errc::Config, path.empty() ? "<root>" : path, "expected a JSON object");
}

inline void reject_unknown_keys(const json &j, const std::string &path, std::initializer_list<const char *> allowed)
{
    for (const auto &[key, value] : j.items())
    {
        bool ok = false;
        for (const char *a : allowed)
            ok = ok || key == a;
        if (!ok)
            throw Error(Errc::Config, join_path(path, key), "unknown field");
    }
}

template <typename T>
T read_field(const json &j, const std::string &path, const char *key, const T &fallback)
{
    if (!j.contains(key))
        return fallback;
    const std::string where = join_path(path, key);
    try
    {
        const json &v = j.at(key);
        if constexpr (std::is_floating_point_v<T>)
        {
            if (!v.is_number())
                throw Error(Errc::Config, where, "expected a number");
        }
        else if constexpr (std::is_integral_v<T>)
        {
            if (!v.is_number_integer() || (std::is_unsigned_v<T> && !v.is_number_unsigned() && v.get<long long>() < 0))
                throw Error(Errc::Config, where, "expected a non-negative integer");
        }
        else if constexpr (std::is_same_v<T, std::string>)
        {
            if (!v.is_string())
                throw Error(Errc::Config, where, "expected a string");
        }
        return v.get<T>();
    }
    catch (const json::exception &e)
    {
        throw Error(Errc::Config, where, e.what());
    }
}

inline json parse_json_text(const std::string &text, const std::string &source)
{
    try
    {
        return json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        // Name the last key opened before the failure point.
        const std::string head = text.substr(0, std::min<std::size_t>(e.byte, text.size()));
        static const std::regex key_re(R"re("([^"\\]*)"\s*:)re");
        std::string key;
        for (auto it = std::sregex_iterator(head.begin(), head.end(), key_re); it != std::sregex_iterator(); ++it)
            key = (*it)[1].str();
        const std::string where = key.empty() ? source : source + ": near field \"" + key + "\"";
        throw Error(Errc::Config, where, std::string("malformed JSON: ") + e.what());
    }
}

inline json load_json_file(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::MissingInput, path.string(), "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path.string());
}

} // namespace beampos::detail

#endif // BEAMPOS_SRC_JSON_UTIL_HPP
