// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Typed field readers that report the dotted path of whatever is wrong.

#include <cstdint>
#include <string>
#include <vector>

#include "core/errors.hpp"
#include "core/feasible_set.hpp"
#include "json.hpp"

namespace riskbandit::json_fields {

inline std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline const nlohmann::json& require(const nlohmann::json& doc, const std::string& key,
                                     const std::string& path) {
  if (!doc.is_object()) throw ConfigError(path, "expected an object");
  auto it = doc.find(key);
  if (it == doc.end()) throw ConfigError(join(path, key), "missing required field");
  return *it;
}

inline double as_number(const nlohmann::json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

inline double number(const nlohmann::json& doc, const std::string& key, const std::string& path) {
  return as_number(require(doc, key, path), join(path, key));
}

inline double number_or(const nlohmann::json& doc, const std::string& key, const std::string& path,
                        double fallback) {
  if (!doc.contains(key) || doc.at(key).is_null()) return fallback;
  return number(doc, key, path);
}

inline std::uint64_t as_unsigned(const nlohmann::json& v, const std::string& path) {
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(path, "expected a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

inline std::string string(const nlohmann::json& doc, const std::string& key,
                          const std::string& path) {
  const auto& v = require(doc, key, path);
  if (!v.is_string()) throw ConfigError(join(path, key), "expected a string");
  return v.get<std::string>();
}

inline std::vector<double> as_number_list(const nlohmann::json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline Vector as_vector(const nlohmann::json& v, const std::string& path) {
  const auto values = as_number_list(v, path);
  if (values.empty()) throw ConfigError(path, "expected a nonempty array");
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

inline nlohmann::json vector_to_json(const Vector& v) {
  return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace riskbandit::json_fields
