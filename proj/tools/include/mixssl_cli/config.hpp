#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mixssl::cli {

/// Flat key-value settings. Later layers override earlier ones:
/// built-in defaults, then a config file or manifest, then command-line flags.
class Settings {
 public:
  using Map = std::map<std::string, std::string>;

  Settings() = default;
  explicit Settings(Map values) : values_(std::move(values)) {}

  /// Parses `key = value` lines; blank lines and `#` comments are ignored.
  static Settings from_file(const std::filesystem::path& path);
  static Settings parse(const std::string& text, const std::string& origin);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  void merge(const Settings& over);
  bool has(const std::string& key) const { return values_.contains(key); }
  const Map& values() const { return values_; }

  std::string get_string(const std::string& key) const;
  std::optional<std::string> find(const std::string& key) const;
  long long get_int(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  double get_double(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  /// "start:stop:step" (inclusive) or a comma-separated list.
  std::vector<double> get_grid(const std::string& key) const;
  std::vector<std::string> get_list(const std::string& key) const;

 private:
  Map values_;
};

std::vector<double> parse_grid(const std::string& text);
std::vector<std::string> split_list(const std::string& text);

}  // namespace mixssl::cli
