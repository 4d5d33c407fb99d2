// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace t2c {

// Flat `key = value` configuration with dotted section prefixes (model.,
// grid., tilt., sample., constant., zvonkin., concentration., mimic.,
// report.).
// Lines starting with '#' are comments. Every key must be one of the known
// keys; unknown keys are a ConfigError. An unprefixed key resolves to the
// unique known key with that suffix, so `T=0.5` sets grid.T.
class Config {
 public:
  Config();  // all known keys at their defaults

  static Config parse(std::istream& in);
  static Config parse_file(const std::string& path);
  static Config parse_string(std::string_view text);

  // Applies `key=value`. Throws ConfigError.
  void set(std::string_view key, std::string_view value);
  void apply_override(std::string_view assignment);

  bool has(std::string_view key) const;
  const std::string& get(std::string_view key) const;
  double get_double(std::string_view key) const;
  std::int64_t get_int(std::string_view key) const;
  std::size_t get_size(std::string_view key) const;  // >= 0
  std::uint64_t get_u64(std::string_view key) const;
  bool get_bool(std::string_view key) const;
  // Comma-separated doubles; empty string gives an empty list.
  std::vector<double> get_list(std::string_view key) const;

  // Sorted `key = value` lines; parse(serialize()) reproduces the config.
  std::string serialize() const;

  const std::map<std::string, std::string, std::less<>>& entries() const noexcept {
    return entries_;
  }

  friend bool operator==(const Config&, const Config&) = default;

 private:
  std::string resolve(std::string_view key) const;
  std::map<std::string, std::string, std::less<>> entries_;
};

}  // namespace t2c
