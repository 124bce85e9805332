#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "mixssl/core_types.hpp"
#include "mixssl/mcecm.hpp"
#include "mixssl_cli/config.hpp"
#include "mixssl_cli/manifest.hpp"

namespace mixssl::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kDataError = 2, kNumericalFailure = 3 };

/// Built-in defaults for a command; config files and flags layer on top.
Settings default_settings(const std::string& command);

/// Hyperparameters, convergence, and sampler settings for an (n, p, q) fit.
FitConfig fit_config_from(const Settings& settings, Eigen::Index n, Eigen::Index p,
                          Eigen::Index q);

/// Checks raw inputs in user column order, naming the offending file
/// position (1-based).
void check_fit_inputs(const Matrix& X, const Matrix& Y, const std::vector<OutcomeKind>& kinds);

struct FitRun {
  Standardization standardization;
  Dataset data;
  PathResult path;
  double seconds = 0.0;

  /// Point estimate B on the raw covariate scale, user outcome order.
  Matrix B_user_raw() const;
  Matrix Omega_user() const;
};

/// Standardizes X, builds the canonical dataset, and runs the ladder.
FitRun run_fit(const Matrix& X, const Matrix& Y, const std::vector<OutcomeKind>& kinds,
               const Settings& settings, int threads);

/// B_hat.csv, Omega_hat.csv, kinds.csv, standardization.csv,
/// path_diagnostics.csv, and manifest.json.
void write_fit_outputs(const std::filesystem::path& dir, const FitRun& fit,
                       const Settings& settings, const PhaseTimer* timer);

void cmd_simulate(const Settings& settings, std::ostream& log);
void cmd_fit(const Settings& settings, std::ostream& log);
void cmd_evaluate(const Settings& settings, std::ostream& log);
void cmd_benchmark(const Settings& settings, std::ostream& out, std::ostream& log);

/// Parses argv, dispatches, and maps failures to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mixssl::cli
