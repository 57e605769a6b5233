// Copyright 2026 The echoqem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "echoqem/errors.hpp"

namespace echoqem::json_util {

using Json = nlohmann::ordered_json;

/// j[key] converted to T. Missing keys and type mismatches become ParseError
/// naming the dotted key path.
template <typename T>
T require(const Json &j, std::string_view key, std::string_view context) {
    if (!j.is_object()) {
        throw ParseError(fmt::format("'{}' must be an object", context));
    }
    const auto it = j.find(std::string(key));
    if (it == j.end()) {
        throw ParseError(fmt::format("missing key '{}.{}'", context, key));
    }
    try {
        return it->template get<T>();
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(fmt::format("bad value for '{}.{}': {}", context, key, e.what()));
    }
}

/// Like require, but returns `fallback` when the key is absent.
template <typename T>
T optional(const Json &j, std::string_view key, std::string_view context, T fallback) {
    if (j.is_object() && j.find(std::string(key)) == j.end()) {
        return fallback;
    }
    return require<T>(j, key, context);
}

inline const Json &section(const Json &j, std::string_view key, std::string_view context) {
    if (!j.is_object()) {
        throw ParseError(fmt::format("'{}' must be an object", context));
    }
    const auto it = j.find(std::string(key));
    if (it == j.end()) {
        throw ParseError(fmt::format("missing section '{}.{}'", context, key));
    }
    return *it;
}

/// Parses text; syntax errors are reported with 1-based line and column.
inline Json parse_with_location(const std::string &text, std::string_view source) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        std::size_t line = 1, col = 1;
        for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(fmt::format("{}:{}:{}: {}", source, line, col, e.what()));
    }
}

} // namespace echoqem::json_util
