#pragma once

// Flat key = value configuration files. '#' starts a comment. Keys are
// checked against a fixed list so typos fail loudly.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace qlwave {

class Config {
 public:
  static Config parse(std::istream& in, const std::string& source = "<config>");
  static Config load(const std::filesystem::path& path);

  /// Throws ConfigError for unknown keys.
  void set(const std::string& key, const std::string& value);
  /// "key=value".
  void set_assignment(const std::string& assignment);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  long get_long(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated lists; empty when the key is absent.
  std::vector<std::string> get_list(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<int> get_ints(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const noexcept { return values_; }

  static const std::vector<std::string>& known_keys();

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace qlwave
