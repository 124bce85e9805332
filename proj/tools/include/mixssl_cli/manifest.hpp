#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "mixssl_cli/config.hpp"

namespace mixssl::cli {

const char* version();

/// Keys that locate outputs or size the worker pool; they never change
/// results, so they stay out of the manifest.
bool is_execution_key(const std::string& key);

/// Wall-clock seconds per named phase.
class PhaseTimer {
 public:
  template <typename F>
  decltype(auto) time(const std::string& phase, F&& body) {
    const auto start = std::chrono::steady_clock::now();
    struct Record {
      PhaseTimer* self;
      std::string phase;
      std::chrono::steady_clock::time_point start;
      ~Record() {
        self->seconds_[phase] +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      }
    } record{this, phase, start};
    return body();
  }

  void record(const std::string& phase, double seconds) { seconds_[phase] += seconds; }
  double seconds(const std::string& phase) const;
  const std::map<std::string, double>& all() const { return seconds_; }

 private:
  std::map<std::string, double> seconds_;
};

/// Command, version, seed, and the result-determining settings. Timings are
/// added only outside reproducible mode.
nlohmann::json make_manifest(const std::string& command, const Settings& settings,
                             const PhaseTimer* timer);

void write_manifest(const std::filesystem::path& dir, const nlohmann::json& manifest);

/// The settings snapshot stored in a manifest, for replay.
Settings settings_from_manifest(const std::filesystem::path& path);

}  // namespace mixssl::cli
