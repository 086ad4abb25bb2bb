#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "scp/error.hpp"

namespace scp::detail {

using nlohmann::json;

inline std::size_t line_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

inline json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), line_of(text, e.byte));
  }
}

inline std::string field(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

inline std::string element(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

inline const json& require(const json& obj, std::string_view key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(field(path, key), "missing required field");
  return *it;
}

inline const json& require_array(const json& obj, std::string_view key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_array()) throw SchemaError(field(path, key), "expected an array");
  return v;
}

inline std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw SchemaError(path, "expected a string");
  return v.get<std::string>();
}

inline double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected a number");
  return v.get<double>();
}

inline long long as_integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw SchemaError(path, "expected an integer");
  return v.get<long long>();
}

inline std::string get_string(const json& obj, std::string_view key, const std::string& path) {
  return as_string(require(obj, key, path), field(path, key));
}

inline double get_number(const json& obj, std::string_view key, const std::string& path) {
  return as_number(require(obj, key, path), field(path, key));
}

/// Absent or null yields `fallback`.
inline double get_number_or(const json& obj, std::string_view key, const std::string& path,
                            double fallback) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  return as_number(*it, field(path, key));
}

inline std::vector<std::string> get_string_list(const json& obj, std::string_view key,
                                                const std::string& path) {
  const json& arr = require_array(obj, key, path);
  std::vector<std::string> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(as_string(arr[i], element(field(path, key), i)));
  return out;
}

/// Writes a bound, omitting it when unbounded.
inline void put_bound(json& obj, const char* key, double v) {
  if (std::isfinite(v)) obj[key] = v;
}

}  // namespace scp::detail
