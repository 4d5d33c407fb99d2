// SPDX-License-Identifier: MIT
#include "t2certify/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>

#include "t2certify/error.hpp"

namespace t2c {
namespace {

const std::vector<std::pair<std::string, std::string>>& known_keys() {
  static const std::vector<std::pair<std::string, std::string>> keys = {
      {"experiment.id", "default"},
      {"experiment.seed", "20240601"},
      {"model.name", "driftless"},
      {"model.dim", "1"},
      {"model.x0", "0"},
      {"model.sigma", "1"},
      {"model.sigma_amplitude", "0"},
      {"model.drift_scale", "1"},
      {"model.regime_inside", "1"},
      {"model.regime_outside", "-1"},
      {"model.regime_threshold", "0"},
      {"model.particles", "5"},
      {"model.deltas", ""},
      {"model.atlas_delta", "1"},
      {"model.atlas_permutation", ""},
      {"model.quantile_alpha", "0.5"},
      {"model.quantile_kappa", "1"},
      {"model.p", "0"},
      {"model.q", "0"},
      {"grid.T", "1"},
      {"grid.n", "1000"},
      {"tilt.kind", "constant"},
      {"tilt.c", "1"},
      {"sample.N", "10000"},
      {"sample.B", "512"},
      {"sample.R", "8"},
      {"constant.C_bdg", "2"},
      {"constant.eps_min", "0.001"},
      {"constant.sigma_sup", "0"},
      {"zvonkin.enabled", "false"},
      {"zvonkin.case", "bounded"},
      {"zvonkin.L", "6"},
      {"zvonkin.h", "0.01"},
      {"zvonkin.steps", "0"},
      {"zvonkin.Cb", "1"},
      {"zvonkin.max_rounds", "10"},
      {"zvonkin.boundary_layer", "1"},
      {"zvonkin.terminal_fraction", "0.05"},
      {"zvonkin.pairs", "10000"},
      {"zvonkin.martingale_N", "100000"},
      {"zvonkin.blocks", "10"},
      {"zvonkin.alpha", "0.01"},
      {"concentration.functional", "terminal:0"},
      {"concentration.r", "0.5,1,1.5,2"},
      {"concentration.N", "100000"},
      {"mimic.samples", "100000"},
      {"mimic.paths", "10000"},
      {"mimic.steps", "100"},
      {"mimic.bandwidth", "0.1"},
      {"report.dir", "out"},
      {"report.paths", "10"},
  };
  return keys;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(std::string(key) + ": not a number: '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

Config::Config() {
  for (const auto& [k, v] : known_keys()) entries_.emplace(k, v);
}

std::string Config::resolve(std::string_view key) const {
  key = trim(key);
  if (entries_.count(key)) return std::string(key);
  if (key.find('.') == std::string_view::npos) {
    std::string found;
    for (const auto& [k, v] : entries_) {
      const auto dot = k.rfind('.');
      if (dot != std::string::npos && std::string_view(k).substr(dot + 1) == key) {
        if (!found.empty()) {
          throw ConfigError("ambiguous key '" + std::string(key) + "' (" + found + ", " + k + ")");
        }
        found = k;
      }
    }
    if (!found.empty()) return found;
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void Config::set(std::string_view key, std::string_view value) {
  entries_[resolve(key)] = std::string(trim(value));
}

void Config::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  }
  set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

Config Config::parse(std::istream& in) {
  Config cfg;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    }
    try {
      cfg.set(s.substr(0, eq), s.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse(in);
}

Config Config::parse_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse(in);
}

bool Config::has(std::string_view key) const {
  try {
    resolve(key);
    return true;
  } catch (const ConfigError&) {
    return false;
  }
}

const std::string& Config::get(std::string_view key) const {
  return entries_.find(resolve(key))->second;
}

double Config::get_double(std::string_view key) const { return parse_double(key, get(key)); }

std::int64_t Config::get_int(std::string_view key) const {
  const std::string_view text = trim(get(key));
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(std::string(key) + ": not an integer: '" + std::string(text) + "'");
  }
  return v;
}

std::size_t Config::get_size(std::string_view key) const {
  const std::int64_t v = get_int(key);
  if (v < 0) throw ConfigError(std::string(key) + ": must be >= 0");
  return static_cast<std::size_t>(v);
}

std::uint64_t Config::get_u64(std::string_view key) const {
  const std::string_view text = trim(get(key));
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(std::string(key) + ": not an unsigned integer: '" + std::string(text) + "'");
  }
  return v;
}

bool Config::get_bool(std::string_view key) const {
  std::string v(trim(get(key)));
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(std::string(key) + ": not a boolean: '" + v + "'");
}

std::vector<double> Config::get_list(std::string_view key) const {
  std::vector<double> out;
  std::string_view rest = trim(get(key));
  if (rest.empty()) return out;
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(parse_double(key, rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

std::string Config::serialize() const {
  std::string out;
  for (const auto& [k, v] : entries_) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

}  // namespace t2c
