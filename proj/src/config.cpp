#include "qlwave/config.hpp"

#include <algorithm>
#include <charconv>
#include <fmt/format.h>
#include <fstream>
#include <istream>
#include <sstream>

#include "qlwave/errors.hpp"

namespace qlwave {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw ConfigError(fmt::format("{}: cannot parse '{}' as a number", key, text));
  return value;
}

}  // namespace

const std::vector<std::string>& Config::known_keys() {
  static const std::vector<std::string> keys = {
      "problem.name",      "problem.kappa",       "initial.data",
      "time.tau",          "time.T",              "time.n_steps",
      "grid.K",            "grid.dealias_nodes",  "filter.kind",
      "filter.c",          "guard.max_norm",      "guard.tau_max",
      "reference.refine_factor", "reference.cross_check", "reference.tolerance",
      "sweep.K",           "sweep.K_ref",         "sweep.tau",
      "sweep.tau_dyadic",  "sweep.tau_base",      "sweep.filters",
      "check.A0",          "check.delta",         "energy.t",
      "energy.n_samples",  "energy.seed",         "out.every",
      "out.dir"};
  return keys;
}

void Config::set(const std::string& key, const std::string& value) {
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end())
    throw ConfigError(fmt::format("unknown config key '{}'", key));
  values_[key] = value;
}

void Config::set_assignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError(fmt::format("expected key=value, got '{}'", assignment));
  const std::string key = trim(std::string_view(assignment).substr(0, eq));
  if (key.empty()) throw ConfigError(fmt::format("missing key in '{}'", assignment));
  set(key, trim(std::string_view(assignment).substr(eq + 1)));
}

Config Config::parse(std::istream& in, const std::string& source) {
  Config c;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    try {
      c.set_assignment(body);
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("{}:{}: {}", source, number, e.what()));
    }
  }
  return c;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
  return parse(in, path.string());
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_number<double>(key, it->second);
}

int Config::get_int(const std::string& key, int fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_number<int>(key, it->second);
}

long Config::get_long(const std::string& key, long fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_number<long>(key, it->second);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(fmt::format("{}: expected a boolean, got '{}'", key, v));
}

std::vector<std::string> Config::get_list(const std::string& key) const {
  std::vector<std::string> items;
  const auto it = values_.find(key);
  if (it == values_.end()) return items;
  std::stringstream ss(it->second);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError(fmt::format("{}: empty list entry", key));
    items.push_back(item);
  }
  return items;
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (const auto& s : get_list(key)) out.push_back(parse_number<double>(key, s));
  return out;
}

std::vector<int> Config::get_ints(const std::string& key) const {
  std::vector<int> out;
  for (const auto& s : get_list(key)) out.push_back(parse_number<int>(key, s));
  return out;
}

}  // namespace qlwave
