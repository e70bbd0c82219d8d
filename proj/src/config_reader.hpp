#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dispersia/error.hpp"
#include "dispersia/norms.hpp"
#include "json.hpp"
#include "json_locator.hpp"

namespace dispersia::detail {

using nlohmann::json;

// Typed access to one JSON object. Every read is echoed (with defaults
// filled in); finish() rejects keys that were never read.
class ConfigReader {
 public:
  ConfigReader(const json& object, std::string pointer, const JsonLocator& locator)
      : obj_(object), ptr_(std::move(pointer)), loc_(locator) {
    if (!obj_.is_object()) fail_here("expected an object");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError(where(key) + msg, loc_.line(ptr_ + "/" + key));
  }
  [[noreturn]] void fail_here(const std::string& msg) const {
    throw ConfigError((ptr_.empty() ? std::string() : ptr_ + ": ") + msg, loc_.line(ptr_));
  }
  int line() const { return loc_.line(ptr_); }
  const std::string& pointer() const { return ptr_; }
  const JsonLocator& locator() const { return loc_; }

  bool has(const std::string& key) const { return obj_.contains(key) && !obj_.at(key).is_null(); }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    const json* v = get(key, fallback.has_value());
    if (!v) return record(key, *fallback);
    if (!v->is_number()) fail(key, "must be a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) fail(key, "must be finite");
    return record(key, x);
  }

  double positive(const std::string& key, std::optional<double> fallback = std::nullopt) {
    const double x = number(key, fallback);
    if (!(x > 0)) fail(key, "must be positive");
    return x;
  }

  std::int64_t integer(const std::string& key, std::optional<std::int64_t> fallback = std::nullopt,
                       std::int64_t lo = std::numeric_limits<std::int64_t>::min(),
                       std::int64_t hi = std::numeric_limits<std::int64_t>::max()) {
    const json* v = get(key, fallback.has_value());
    std::int64_t x;
    if (!v) {
      x = *fallback;
    } else {
      if (!v->is_number_integer()) fail(key, "must be an integer");
      x = v->get<std::int64_t>();
    }
    if (x < lo || x > hi)
      fail(key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " + std::to_string(x));
    echo_[key] = x;
    return x;
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    const json* v = get(key, true);
    std::uint64_t x = fallback;
    if (v) {
      if (!v->is_number_unsigned()) fail(key, "must be a nonnegative integer");
      x = v->get<std::uint64_t>();
    }
    echo_[key] = x;
    return x;
  }

  bool boolean(const std::string& key, bool fallback) {
    const json* v = get(key, true);
    bool x = fallback;
    if (v) {
      if (!v->is_boolean()) fail(key, "must be true or false");
      x = v->get<bool>();
    }
    echo_[key] = x;
    return x;
  }

  std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt,
                     const std::vector<std::string>& allowed = {}) {
    const json* v = get(key, fallback.has_value());
    std::string x;
    if (!v) {
      x = *fallback;
    } else {
      if (!v->is_string()) fail(key, "must be a string");
      x = v->get<std::string>();
    }
    if (!allowed.empty()) {
      bool ok = false;
      std::string list;
      for (const auto& a : allowed) {
        ok = ok || a == x;
        list += (list.empty() ? "" : ", ") + a;
      }
      if (!ok) fail(key, "unknown value \"" + x + "\" (expected one of: " + list + ")");
    }
    echo_[key] = x;
    return x;
  }

  // Number or the string "inf".
  Exponent exponent(const std::string& key, std::optional<double> fallback = std::nullopt) {
    const json* v = get(key, fallback.has_value());
    if (!v) {
      echo_[key] = *fallback;
      return Exponent(*fallback);
    }
    if (v->is_string() && v->get<std::string>() == "inf") {
      echo_[key] = "inf";
      return Exponent::infinity();
    }
    if (!v->is_number()) fail(key, "must be a number or \"inf\"");
    const double x = v->get<double>();
    if (!(x >= 1) || !std::isfinite(x)) fail(key, "exponent must be >= 1 (or \"inf\")");
    echo_[key] = x;
    return Exponent(x);
  }

  std::vector<double> numbers(const std::string& key, std::optional<std::vector<double>> fallback = std::nullopt) {
    const json* v = get(key, fallback.has_value());
    std::vector<double> out;
    if (!v) {
      out = *fallback;
    } else {
      if (!v->is_array()) fail(key, "must be an array of numbers");
      for (std::size_t i = 0; i < v->size(); ++i) {
        const auto& e = (*v)[i];
        if (!e.is_number() || !std::isfinite(e.get<double>()))
          throw ConfigError(where(key) + "element " + std::to_string(i) + " must be a finite number",
                            loc_.line(ptr_ + "/" + key + "/" + std::to_string(i)));
        out.push_back(e.get<double>());
      }
    }
    echo_[key] = out;
    return out;
  }

  // Cutoff list: >= min_count entries, positive, strictly increasing.
  std::vector<double> cutoffs(const std::string& key, std::size_t min_count = 3, bool integers = false) {
    auto c = numbers(key);
    if (c.size() < min_count) fail(key, "needs at least " + std::to_string(min_count) + " entries");
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!(c[i] > 0)) fail(key, "entries must be positive");
      if (integers && c[i] != std::floor(c[i])) fail(key, "entries must be integers");
      if (i > 0 && !(c[i] > c[i - 1])) fail(key, "entries must be strictly increasing");
    }
    return c;
  }

  const json* child(const std::string& key) {
    if (!has(key)) return nullptr;
    used_.insert(key);
    return &obj_.at(key);
  }

  void echo(const std::string& key, json value) { echo_[key] = std::move(value); }
  const json& echoed() const { return echo_; }

  void finish() const {
    for (const auto& [key, value] : obj_.items())
      if (!used_.count(key)) fail(key, "unknown key \"" + key + "\"");
  }

 private:
  std::string where(const std::string& key) const { return ptr_ + "/" + key + ": "; }

  const json* get(const std::string& key, bool optional) {
    used_.insert(key);
    if (!obj_.contains(key) || obj_.at(key).is_null()) {
      if (!optional) fail_here("missing required key \"" + key + "\"");
      return nullptr;
    }
    return &obj_.at(key);
  }

  double record(const std::string& key, double x) {
    echo_[key] = x;
    return x;
  }

  const json& obj_;
  std::string ptr_;
  const JsonLocator& loc_;
  std::set<std::string> used_;
  json echo_ = json::object();
};

}  // namespace dispersia::detail
