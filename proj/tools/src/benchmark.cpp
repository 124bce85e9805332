#include <cstdio>
#include <numeric>
#include <ostream>

#include "mixssl/errors.hpp"
#include "mixssl/parallel.hpp"
#include "mixssl/rng.hpp"
#include "mixssl/simgen.hpp"
#include "mixssl_cli/commands.hpp"
#include "mixssl_cli/evaluation.hpp"
#include "mixssl_cli/io.hpp"

namespace mixssl::cli {

namespace fs = std::filesystem;

namespace {

struct Cell {
  sim::OmegaStructure structure;
  sim::SignalKind regime;
  int replicate = 0;
};

struct ReplicateResult {
  std::optional<MetricValues> metrics;
  std::string error_kind;
  std::string error;
};

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

std::uint64_t enum_index(sim::OmegaStructure s) { return static_cast<std::uint64_t>(s); }
std::uint64_t enum_index(sim::SignalKind k) { return static_cast<std::uint64_t>(k); }

Matrix take_rows(const Matrix& M, const std::vector<int>& rows, int begin, int end) {
  Matrix out(end - begin, M.cols());
  for (int r = begin; r < end; ++r) out.row(r - begin) = M.row(rows[static_cast<std::size_t>(r)]);
  return out;
}

std::string replicate_name(const Cell& cell) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03d", cell.replicate);
  return sim::to_string(cell.structure) + "-" + sim::to_string(cell.regime) + "-" + buf;
}

MetricValues run_replicate(const Cell& cell, const Settings& settings, int fit_threads,
                           const fs::path& out) {
  const int n = static_cast<int>(settings.get_int("n"));
  const int p = static_cast<int>(settings.get_int("p"));
  const int q = static_cast<int>(settings.get_int("q"));
  const int q_binary = settings.has("q-binary") ? static_cast<int>(settings.get_int("q-binary")) : q / 2;
  const int n_test = n / 2;
  const std::uint64_t seed = derive_seed(
      settings.get_u64("seed"),
      {enum_index(cell.structure), enum_index(cell.regime), static_cast<std::uint64_t>(cell.replicate)});

  const auto kinds = sim::mixed_kinds(q - q_binary, q_binary);
  const Matrix Omega = sim::gen_omega(cell.structure, q, derive_seed(seed, {1}),
                                      settings.get_double("rewire"));
  const Matrix B = sim::gen_coefficients({cell.regime, settings.get_double("density")}, p, q,
                                         derive_seed(seed, {2}));
  const Matrix X = sim::gen_covariates(n + n_test, p, derive_seed(seed, {3}));
  const Matrix Y = sim::simulate_outcomes(X, B, Omega, kinds, derive_seed(seed, {4}));

  // Seeded shuffle, then the first n rows train and the remaining n/2 test.
  std::vector<int> order(static_cast<std::size_t>(n + n_test));
  std::iota(order.begin(), order.end(), 0);
  Engine rng = make_engine(derive_seed(seed, {5}));
  for (std::size_t i = order.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(order[i - 1], order[pick(rng)]);
  }
  const Matrix X_train = take_rows(X, order, 0, n);
  const Matrix Y_train = take_rows(Y, order, 0, n);
  const Matrix X_test = take_rows(X, order, n, n + n_test);
  const Matrix Y_test = take_rows(Y, order, n, n + n_test);

  Settings fit_settings = settings;
  fit_settings.set("seed", std::to_string(derive_seed(seed, {6})));
  const FitRun fit = run_fit(X_train, Y_train, kinds, fit_settings, fit_threads);

  EvaluationInputs in;
  in.B_hat = fit.B_user_raw();
  in.Omega_hat = fit.Omega_user();
  in.kinds = kinds;
  in.B_true = B;
  in.Omega_true = Omega;
  in.X_test = X_test;
  Matrix X_test_centered = X_test;
  X_test_centered.rowwise() -= fit.standardization.centers.transpose();
  in.X_test_fit_scale = std::move(X_test_centered);
  in.Y_test = Y_test;
  if (!settings.get_bool("reproducible")) in.fit_seconds = fit.seconds;
  in.seed = derive_seed(seed, {7});
  in.prediction_draws = static_cast<int>(settings.get_int("prediction-draws"));
  const MetricValues metrics = evaluate(in);

  if (settings.get_bool("save-replicates")) {
    const fs::path dir = out / "replicates" / replicate_name(cell);
    ensure_directory(dir / "truth");
    write_matrix_csv(dir / "truth" / "truth_B.csv", B);
    write_matrix_csv(dir / "truth" / "truth_Omega.csv", Omega);
    write_kinds(dir / "truth" / "kinds.csv", kinds);
    for (const auto& [name, Xs, Ys] : {std::tuple{"train", &X_train, &Y_train},
                                        std::tuple{"test", &X_test, &Y_test}}) {
      ensure_directory(dir / name);
      write_matrix_csv(dir / name / "X.csv", *Xs);
      write_matrix_csv(dir / name / "Y.csv", *Ys);
      write_kinds(dir / name / "kinds.csv", kinds);
    }
    PhaseTimer timer;
    timer.record("fit", fit.seconds);
    write_fit_outputs(dir / "fit", fit, fit_settings, &timer);
  }
  return metrics;
}

std::string metric_cells(const MetricValues& m) {
  std::string out;
  for (const auto& v : m) out += "," + format_metric(v);
  return out;
}

}  // namespace

void cmd_benchmark(const Settings& settings, std::ostream& out, std::ostream& log) {
  const fs::path dir = settings.get_string("out");
  const int threads = settings.has("threads") ? static_cast<int>(settings.get_int("threads")) : 1;
  const int fit_threads =
      settings.has("fit-threads") ? static_cast<int>(settings.get_int("fit-threads")) : 1;
  const int replicates = static_cast<int>(settings.get_int("replicates"));
  if (replicates < 1) throw ParameterError("replicates must be >= 1");
  const int n = static_cast<int>(settings.get_int("n"));
  const int q = static_cast<int>(settings.get_int("q"));
  if (n < 4 || settings.get_int("p") < 1 || q < 2)
    throw ParameterError("benchmark needs n >= 4, p >= 1, q >= 2");

  std::vector<sim::OmegaStructure> structures;
  const std::string structure_text = settings.get_string("structures");
  if (structure_text == "all") {
    structures = sim::all_structures();
  } else {
    for (const auto& name : split_list(structure_text)) structures.push_back(sim::parse_structure(name));
  }
  std::vector<sim::SignalKind> regimes;
  for (const auto& name : settings.get_list("regimes")) regimes.push_back(sim::parse_signal(name));
  if (structures.empty() || regimes.empty()) throw ParameterError("no structures or regimes selected");
  // Validate the fit settings once up front so usage errors are not
  // quarantined per replicate.
  fit_config_from(settings, n, settings.get_int("p"), q);

  std::vector<Cell> cells;
  for (auto s : structures)
    for (auto r : regimes)
      for (int rep = 0; rep < replicates; ++rep) cells.push_back({s, r, rep});

  const int q_binary = settings.has("q-binary") ? static_cast<int>(settings.get_int("q-binary")) : q / 2;
  for (auto s : structures) {
    // Generation failures surface per replicate in errors.csv.
    try {
      const Matrix omega = sim::gen_omega(s, q, 0, settings.get_double("rewire"));
      if (sim::binary_variance_mismatch(omega, sim::mixed_kinds(q - q_binary, q_binary)))
        log << "warning: structure " << sim::to_string(s)
            << " gives binary latent variances other than one\n";
    } catch (const std::exception&) {
    }
  }

  ensure_directory(dir);
  PhaseTimer timer;
  std::vector<ReplicateResult> results(cells.size());
  timer.time("total", [&] {
    parallel_for(cells.size(), threads, [&](std::size_t i) {
      try {
        results[i].metrics = run_replicate(cells[i], settings, fit_threads, dir);
      } catch (const NumericalError& e) {
        results[i] = {std::nullopt, "numerical", e.what()};
      } catch (const std::exception& e) {
        results[i] = {std::nullopt, "error", e.what()};
      }
    });
  });

  std::string header;
  for (const char* c : kMetricColumns) header += std::string(",") + c;
  std::string rows = "structure,regime,replicate" + header + "\n";
  std::string errors = "structure,regime,replicate,kind,message\n";
  std::string summary = "structure,regime,replicates_ok" + header + "\n";
  out << "structure    regime    ok   ACC_B  SEN_B  SPEC_B ACC_Om  RFE      RMSE     AUC\n";
  std::size_t failures = 0;
  for (auto s : structures) {
    for (auto r : regimes) {
      std::vector<MetricValues> ok;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].structure != s || cells[i].regime != r) continue;
        const std::string key = sim::to_string(s) + "," + sim::to_string(r) + "," +
                                std::to_string(cells[i].replicate);
        if (results[i].metrics) {
          rows += key + metric_cells(*results[i].metrics) + "\n";
          ok.push_back(*results[i].metrics);
        } else {
          ++failures;
          errors += key + "," + results[i].error_kind + "," + csv_field(results[i].error) + "\n";
        }
      }
      const MetricValues mean = mean_row(ok);
      summary += sim::to_string(s) + "," + sim::to_string(r) + "," + std::to_string(ok.size()) +
                 metric_cells(mean) + "\n";
      char line[160];
      auto f = [](const std::optional<double>& v) { return v ? *v : std::nan(""); };
      std::snprintf(line, sizeof line, "%-12s %-9s %-4zu %-6.3f %-6.3f %-6.3f %-6.3f %-8.4g %-8.4g %-6.3f\n",
                    sim::to_string(s).c_str(), sim::to_string(r).c_str(), ok.size(), f(mean[3]),
                    f(mean[0]), f(mean[1]), f(mean[7]), f(mean[8]), f(mean[9]), f(mean[11]));
      out << line;
    }
  }
  write_text(dir / "replicates.csv", rows);
  write_text(dir / "summary.csv", summary);
  write_text(dir / "errors.csv", errors);
  write_manifest(dir, make_manifest("benchmark", settings, &timer));
  log << "benchmark: " << cells.size() - failures << " of " << cells.size()
      << " replicates succeeded; results in " << dir.string() << "\n";
}

}  // namespace mixssl::cli
