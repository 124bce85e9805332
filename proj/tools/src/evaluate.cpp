#include <algorithm>
#include <ostream>

#include "mixssl/errors.hpp"
#include "mixssl_cli/commands.hpp"
#include "mixssl_cli/evaluation.hpp"
#include "mixssl_cli/io.hpp"

namespace mixssl::cli {

namespace fs = std::filesystem;

namespace {

std::optional<Matrix> read_optional(const fs::path& path) {
  if (!fs::exists(path)) return std::nullopt;
  return read_matrix_csv(path);
}

std::optional<double> fit_seconds(const fs::path& estimates) {
  const fs::path manifest = estimates / "manifest.json";
  if (!fs::exists(manifest)) return std::nullopt;
  const auto m = nlohmann::json::parse(read_text(manifest), nullptr, false);
  if (m.is_discarded() || !m.contains("wall_clock_seconds")) return std::nullopt;
  const auto& t = m["wall_clock_seconds"];
  if (!t.contains("fit") || !t["fit"].is_number()) return std::nullopt;
  return t["fit"].get<double>();
}

MetricValues evaluate_directories(const fs::path& estimates, const std::optional<fs::path>& truth,
                                  const std::optional<fs::path>& test, std::uint64_t seed,
                                  int prediction_draws) {
  EvaluationInputs in;
  in.B_hat = read_matrix_csv(estimates / "B_hat.csv");
  in.Omega_hat = read_matrix_csv(estimates / "Omega_hat.csv");
  fs::path kinds_path = estimates / "kinds.csv";
  if (truth && fs::exists(*truth / "kinds.csv")) kinds_path = *truth / "kinds.csv";
  in.kinds = read_kinds(kinds_path);
  if (truth) {
    in.B_true = read_matrix_csv(*truth / "truth_B.csv");
    in.Omega_true = read_optional(*truth / "truth_Omega.csv");
  }
  if (test) {
    in.X_test = read_matrix_csv(*test / "X.csv");
    in.Y_test = read_optional(*test / "Y.csv");
    Matrix X_fit = *in.X_test;
    // B_hat is on the raw scale, so only the centering has to be replayed.
    if (const auto s = read_optional(estimates / "standardization.csv")) {
      if (s->rows() != 2 || s->cols() != X_fit.cols())
        throw InputShapeError("standardization.csv does not match the test covariates");
      X_fit.rowwise() -= s->row(0);
    }
    in.X_test_fit_scale = std::move(X_fit);
  }
  in.fit_seconds = fit_seconds(estimates);
  in.seed = seed;
  in.prediction_draws = prediction_draws;
  return evaluate(in);
}

}  // namespace

void cmd_evaluate(const Settings& settings, std::ostream& log) {
  const fs::path out = settings.get_string("out");
  const std::uint64_t seed = settings.get_u64("seed");
  const int draws = static_cast<int>(settings.get_int("prediction-draws"));

  std::vector<std::string> labels;
  std::vector<MetricValues> rows;
  PhaseTimer timer;
  timer.time("evaluate", [&] {
    if (const auto root = settings.find("replicate-root")) {
      std::vector<fs::path> dirs;
      for (const auto& entry : fs::directory_iterator(*root))
        if (entry.is_directory()) dirs.push_back(entry.path());
      std::sort(dirs.begin(), dirs.end());
      if (dirs.empty()) throw InputError("no replicate directories under " + *root);
      for (const auto& dir : dirs) {
        const auto truth = fs::exists(dir / "truth") ? std::optional(dir / "truth") : std::nullopt;
        const auto test = fs::exists(dir / "test") ? std::optional(dir / "test") : std::nullopt;
        labels.push_back(dir.filename().string());
        rows.push_back(evaluate_directories(dir / "fit", truth, test, seed, draws));
      }
      labels.emplace_back("mean");
      rows.push_back(mean_row(rows));
    } else {
      const auto estimates = settings.get_string("estimates");
      std::optional<fs::path> truth, test;
      if (const auto t = settings.find("truth")) truth = *t;
      if (const auto t = settings.find("test")) test = *t;
      labels.emplace_back("estimate");
      rows.push_back(evaluate_directories(estimates, truth, test, seed, draws));
    }
  });

  // Omega columns are dropped entirely when no row has an Omega truth.
  std::vector<std::size_t> columns;
  for (std::size_t c = 0; c < kMetricColumns.size(); ++c) {
    const bool omega = c >= 4 && c < 8;
    const bool any = std::any_of(rows.begin(), rows.end(), [c](const auto& r) { return r[c].has_value(); });
    if (!omega || any) columns.push_back(c);
  }
  std::string csv = "label";
  for (auto c : columns) csv += std::string(",") + kMetricColumns[c];
  csv += "\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    csv += labels[r];
    for (auto c : columns) csv += "," + format_metric(rows[r][c]);
    csv += "\n";
  }
  ensure_directory(out);
  write_text(out / "metrics.csv", csv);
  write_manifest(out, make_manifest("evaluate", settings, &timer));
  log << "evaluate: wrote " << rows.size() << " metric rows to " << (out / "metrics.csv").string()
      << "\n";
}

}  // namespace mixssl::cli
