#pragma once

// Minimal `key = value` config files: one pair per line, '#' comments,
// blank lines ignored. Shared by the curriculum, model-config, and run-config
// parsers so the CLI and library read the exact same syntax.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rtdforge/error.hpp"
#include "rtdforge/io.hpp"

namespace rtdforge {

class KvConfig {
 public:
  KvConfig() = default;

  static KvConfig parse(const std::string& text, const std::string& origin = "<string>") {
    KvConfig cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string stripped = strip(line.substr(0, line.find('#')));
      if (stripped.empty()) continue;
      const size_t eq = stripped.find('=');
      if (eq == std::string::npos) {
        throw config_error(origin + ":" + std::to_string(lineno) +
                           ": expected `key = value`, got: " + stripped);
      }
      const std::string key = strip(stripped.substr(0, eq));
      const std::string value = strip(stripped.substr(eq + 1));
      if (key.empty()) {
        throw config_error(origin + ":" + std::to_string(lineno) + ": empty key");
      }
      cfg.values_[key] = value;
    }
    return cfg;
  }

  static KvConfig load(const std::string& path) {
    const std::vector<uint8_t> bytes = read_file(path);
    return parse(std::string(bytes.begin(), bytes.end()), path);
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get_string(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
      throw config_error(origin_ + ": missing required key `" + key + "`");
    }
    return it->second;
  }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double get_double(const std::string& key) const { return to_double(key, get_string(key)); }

  double get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : to_double(key, it->second);
  }

  uint64_t get_u64(const std::string& key) const { return to_u64(key, get_string(key)); }

  uint64_t get_u64(const std::string& key, uint64_t fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : to_u64(key, it->second);
  }

  bool get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw config_error(origin_ + ": key `" + key + "`: expected boolean, got: " + v);
  }

  std::optional<double> get_optional_double(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return to_double(key, it->second);
  }

  std::optional<uint64_t> get_optional_u64(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return to_u64(key, it->second);
  }

  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  // Stable `key = value` rendering in sorted key order, used by config hashing.
  std::string canonical() const {
    std::string out;
    for (const auto& [k, v] : values_) {
      out += k;
      out += " = ";
      out += v;
      out += '\n';
    }
    return out;
  }

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  static std::string strip(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
  }

  double to_double(const std::string& key, const std::string& v) const {
    try {
      size_t used = 0;
      const double d = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw config_error(origin_ + ": key `" + key + "`: expected number, got: " + v);
    }
  }

  uint64_t to_u64(const std::string& key, const std::string& v) const {
    try {
      size_t used = 0;
      if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
      const unsigned long long u = std::stoull(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return static_cast<uint64_t>(u);
    } catch (const std::exception&) {
      throw config_error(origin_ + ": key `" + key +
                         "`: expected non-negative integer, got: " + v);
    }
  }

  std::map<std::string, std::string> values_;
  std::string origin_ = "<string>";
};

}  // namespace rtdforge
