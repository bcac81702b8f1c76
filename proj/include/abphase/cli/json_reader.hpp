#pragma once

// Strict accessors over nlohmann::json: every lookup records the key it
// consumed, and finish() rejects whatever was left over.

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "abphase/core/errors.hpp"
#include "abphase/core/vec3.hpp"

namespace abphase::cli {

using json = nlohmann::json;

class StrictObject {
 public:
  StrictObject(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw SchemaError(where_, "expected an object");
  }

  const std::string& where() const { return where_; }
  std::string at(const std::string& key) const { return where_ + "." + key; }
  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    if (!j_.contains(key)) throw SchemaError(at(key), "required field is missing");
    used_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key) { return as_number(raw(key), at(key)); }
  std::optional<double> number_opt(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return number(key);
  }
  double number_or(const std::string& key, double fallback) {
    return number_opt(key).value_or(fallback);
  }

  int integer(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_integer()) throw SchemaError(at(key), "expected an integer");
    return v.get<int>();
  }
  int integer_or(const std::string& key, int fallback) { return has(key) ? integer(key) : fallback; }

  bool boolean_or(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) throw SchemaError(at(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) throw SchemaError(at(key), "expected a string");
    return v.get<std::string>();
  }
  std::optional<std::string> string_opt(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return string(key);
  }

  Vec3 vec3(const std::string& key) { return as_vec3(raw(key), at(key)); }
  Vec3 vec3_or(const std::string& key, Vec3 fallback) { return has(key) ? vec3(key) : fallback; }

  StrictObject object(const std::string& key) { return StrictObject(raw(key), at(key)); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) throw SchemaError(at(it.key()), "unknown field");
    }
  }

  static double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) throw SchemaError(where, "expected a number");
    return v.get<double>();
  }

  static Vec3 as_vec3(const json& v, const std::string& where) {
    if (!v.is_array() || (v.size() != 3 && v.size() != 2)) {
      throw SchemaError(where, "expected [x, y, z] (or [x, y] in the z = 0 plane)");
    }
    std::array<double, 3> c{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < v.size(); ++i) {
      c[i] = as_number(v[i], where + "[" + std::to_string(i) + "]");
    }
    return {c[0], c[1], c[2]};
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> used_;
};

inline json to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

}  // namespace abphase::cli
