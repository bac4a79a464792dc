#pragma once

// JSON field readers with path-qualified diagnostics. Internal.

#include <string>
#include <string_view>

#include <fmt/format.h>
#include <json.hpp>

#include "touchmap/engine.hpp"
#include "touchmap/errors.hpp"
#include "touchmap/geometry.hpp"

namespace touchmap::detail {

using Json = nlohmann::json;

/// Parses text, mapping syntax errors to ParseError with line and column.
Json parse_json(std::string_view text, std::string_view source);

[[noreturn]] inline void field_error(std::string_view source, const std::string& path, std::string_view what) {
  throw ParseError(fmt::format("{}: field '{}': {}", source, path, what));
}

const Json& require(const Json& obj, const char* key, std::string_view source, const std::string& path);
double read_number(const Json& v, std::string_view source, const std::string& path);
std::int64_t read_integer(const Json& v, std::string_view source, const std::string& path);
bool read_bool(const Json& v, std::string_view source, const std::string& path);
Vec2 read_vec2(const Json& v, std::string_view source, const std::string& path);

/// Applies the keys of a "config" object onto cfg; unknown keys are errors.
void apply_config(SimConfig& cfg, const Json& obj, std::string_view source, const std::string& path);
Json config_to_json(const SimConfig& cfg);

}  // namespace touchmap::detail
