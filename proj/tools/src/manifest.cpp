#include "mixssl_cli/manifest.hpp"

#include <set>

#include "mixssl/errors.hpp"
#include "mixssl_cli/io.hpp"

#ifndef MIXSSL_VERSION
#define MIXSSL_VERSION "0.0.0"
#endif

namespace mixssl::cli {

const char* version() { return MIXSSL_VERSION; }

bool is_execution_key(const std::string& key) {
  static const std::set<std::string> keys = {"out", "threads", "fit-threads", "config", "manifest"};
  return keys.contains(key);
}

double PhaseTimer::seconds(const std::string& phase) const {
  const auto it = seconds_.find(phase);
  return it == seconds_.end() ? 0.0 : it->second;
}

nlohmann::json make_manifest(const std::string& command, const Settings& settings,
                             const PhaseTimer* timer) {
  nlohmann::json config = nlohmann::json::object();
  for (const auto& [key, value] : settings.values())
    if (!is_execution_key(key)) config[key] = value;

  nlohmann::json m;
  m["command"] = command;
  m["version"] = version();
  m["config"] = std::move(config);
  if (const auto seed = settings.find("seed")) m["seed"] = *seed;
  const bool reproducible = settings.has("reproducible") && settings.get_bool("reproducible");
  if (timer && !reproducible) m["wall_clock_seconds"] = timer->all();
  return m;
}

void write_manifest(const std::filesystem::path& dir, const nlohmann::json& manifest) {
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

Settings settings_from_manifest(const std::filesystem::path& path) {
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": invalid manifest: " + e.what());
  }
  if (!m.contains("config") || !m["config"].is_object())
    throw InputError(path.string() + ": manifest has no config object");
  Settings s;
  for (const auto& [key, value] : m["config"].items()) {
    if (!value.is_string()) throw InputError(path.string() + ": config value for '" + key + "' is not a string");
    s.set(key, value.get<std::string>());
  }
  return s;
}

}  // namespace mixssl::cli
