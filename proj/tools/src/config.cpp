#include "mixssl_cli/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "mixssl/errors.hpp"
#include "mixssl_cli/io.hpp"

namespace mixssl::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& text, const std::string& context) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v))
    throw ParameterError(context + ": expected a number, got '" + text + "'");
  return v;
}

}  // namespace

Settings Settings::from_file(const std::filesystem::path& path) {
  return parse(read_text(path), path.filename().string());
}

Settings Settings::parse(const std::string& text, const std::string& origin) {
  Settings out;
  std::istringstream in(text);
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParameterError(origin + ": line " + std::to_string(row) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw ParameterError(origin + ": line " + std::to_string(row) + ": empty key");
    out.values_[key] = trim(line.substr(eq + 1));
  }
  return out;
}

void Settings::merge(const Settings& over) {
  for (const auto& [k, v] : over.values_) values_[k] = v;
}

std::optional<std::string> Settings::find(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string Settings::get_string(const std::string& key) const {
  const auto v = find(key);
  if (!v) throw ParameterError("missing setting '" + key + "'");
  return *v;
}

long long Settings::get_int(const std::string& key) const {
  const std::string text = get_string(key);
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE)
    throw ParameterError(key + ": expected an integer, got '" + text + "'");
  return v;
}

std::uint64_t Settings::get_u64(const std::string& key) const {
  const std::string text = get_string(key);
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (text.empty() || text.front() == '-' || end != text.c_str() + text.size() || errno == ERANGE)
    throw ParameterError(key + ": expected a non-negative integer, got '" + text + "'");
  return v;
}

double Settings::get_double(const std::string& key) const {
  return to_double(get_string(key), key);
}

bool Settings::get_bool(const std::string& key) const {
  const std::string text = get_string(key);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ParameterError(key + ": expected true or false, got '" + text + "'");
}

std::vector<double> Settings::get_grid(const std::string& key) const {
  try {
    return parse_grid(get_string(key));
  } catch (const ParameterError& e) {
    throw ParameterError(key + ": " + e.what());
  }
}

std::vector<std::string> Settings::get_list(const std::string& key) const {
  return split_list(get_string(key));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::istringstream in(text);
    std::string part;
    while (std::getline(in, part, ':')) parts.push_back(trim(part));
    if (parts.size() != 3) throw ParameterError("grid must be start:stop:step");
    const double start = to_double(parts[0], "grid start");
    const double stop = to_double(parts[1], "grid stop");
    const double step = to_double(parts[2], "grid step");
    if (!(step > 0.0) || stop < start) throw ParameterError("grid needs step > 0 and stop >= start");
    std::vector<double> grid;
    // Index-based so the endpoint is hit exactly despite rounding in step.
    const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (long long i = 0; i < count; ++i) grid.push_back(start + static_cast<double>(i) * step);
    return grid;
  }
  std::vector<double> grid;
  for (const auto& item : split_list(text)) grid.push_back(to_double(item, "grid value"));
  if (grid.empty()) throw ParameterError("grid is empty");
  return grid;
}

}  // namespace mixssl::cli
