#include <ostream>
#include <sstream>

#include "mixssl/errors.hpp"
#include "mixssl_cli/commands.hpp"
#include "mixssl_cli/io.hpp"

namespace mixssl::cli {

namespace fs = std::filesystem;

Settings default_settings(const std::string& command) {
  Settings s;
  s.set("seed", "0");
  if (command == "simulate") {
    s.set("n", "200");
    s.set("p", "500");
    s.set("q", "4");
    s.set("structure", "ar1");
    s.set("regime", "uniform");
    s.set("density", "0.3");
    s.set("rewire", "0.1");
    return s;
  }
  if (command == "fit" || command == "benchmark") {
    s.set("H", "2000");
    s.set("max-outer", "100");
    s.set("rel-tol", "0.001");
    s.set("min-outer", "5");
    s.set("streak", "3");
    s.set("burn-in", "50");
    s.set("thin", "1");
    s.set("max-sweeps", "1000");
    s.set("tol", "0.0001");
    s.set("reproducible", "false");
  }
  if (command == "evaluate" || command == "benchmark") s.set("prediction-draws", "1");
  if (command == "benchmark") {
    s.set("n", "200");
    s.set("p", "100");
    s.set("q", "4");
    s.set("H", "100");
    s.set("structures", "ar1");
    s.set("regimes", "uniform,disjoint");
    s.set("density", "0.3");
    s.set("rewire", "0.1");
    s.set("replicates", "10");
    s.set("save-replicates", "false");
  }
  return s;
}

FitConfig fit_config_from(const Settings& settings, Eigen::Index n, Eigen::Index p,
                          Eigen::Index q) {
  FitConfig cfg;
  cfg.hyper = Hyperparameters::defaults(n, p, q);
  auto& h = cfg.hyper;
  if (settings.has("lambda1")) h.lambda1 = settings.get_double("lambda1");
  if (settings.has("xi1")) h.xi1 = settings.get_double("xi1");
  if (settings.has("a-theta")) h.a_theta = settings.get_double("a-theta");
  if (settings.has("b-theta")) h.b_theta = settings.get_double("b-theta");
  if (settings.has("a-eta")) h.a_eta = settings.get_double("a-eta");
  if (settings.has("b-eta")) h.b_eta = settings.get_double("b-eta");
  if (settings.has("lambda0-grid")) h.lambda0_grid = settings.get_grid("lambda0-grid");
  if (settings.has("xi0-grid")) h.xi0_grid = settings.get_grid("xi0-grid");
  if (settings.has("H")) h.draws = static_cast<int>(settings.get_int("H"));
  if (settings.has("max-sweeps")) h.max_sweeps = static_cast<int>(settings.get_int("max-sweeps"));
  if (settings.has("tol")) h.tol = settings.get_double("tol");
  h.lambda0 = h.lambda0_grid.front();
  h.xi0 = h.xi0_grid.front();
  h.validate();

  auto& c = cfg.convergence;
  if (settings.has("max-outer")) c.max_outer = static_cast<int>(settings.get_int("max-outer"));
  if (settings.has("rel-tol")) c.rel_tol = settings.get_double("rel-tol");
  if (settings.has("min-outer")) c.min_outer = static_cast<int>(settings.get_int("min-outer"));
  if (settings.has("streak")) c.streak = static_cast<int>(settings.get_int("streak"));
  if (c.max_outer < 1 || c.streak < 1 || c.min_outer < 0 || !(c.rel_tol > 0.0))
    throw ParameterError("convergence settings must be positive");
  if (settings.has("burn-in")) cfg.sampler.burn_in = static_cast<int>(settings.get_int("burn-in"));
  if (settings.has("thin")) cfg.sampler.thin = static_cast<int>(settings.get_int("thin"));
  if (cfg.sampler.burn_in < 0 || cfg.sampler.thin < 1)
    throw ParameterError("burn-in must be >= 0 and thin >= 1");
  cfg.seed = settings.get_u64("seed");
  return cfg;
}

void check_fit_inputs(const Matrix& X, const Matrix& Y, const std::vector<OutcomeKind>& kinds) {
  if (X.rows() != Y.rows())
    throw InputShapeError("X.csv has " + std::to_string(X.rows()) + " rows but Y.csv has " +
                          std::to_string(Y.rows()));
  if (Y.cols() != static_cast<Eigen::Index>(kinds.size()))
    throw InputShapeError("Y.csv has " + std::to_string(Y.cols()) + " columns but kinds.csv lists " +
                          std::to_string(kinds.size()) + " outcomes");
  for (Eigen::Index k = 0; k < Y.cols(); ++k) {
    if (kinds[static_cast<std::size_t>(k)] != OutcomeKind::Binary) continue;
    for (Eigen::Index i = 0; i < Y.rows(); ++i) {
      const double v = Y(i, k);
      if (v != 0.0 && v != 1.0) {
        std::ostringstream msg;
        msg << "Y.csv: row " << i + 1 << ", column " << k + 1
            << ": binary outcome must be 0 or 1, got " << format_double(v);
        throw InputError(msg.str());
      }
    }
  }
}

Matrix FitRun::B_user_raw() const {
  Matrix B = columns_to_user_order(path.point_estimate().B, data.column_order);
  for (Eigen::Index j = 0; j < B.rows(); ++j) B.row(j) /= standardization.scales(j);
  return B;
}

Matrix FitRun::Omega_user() const {
  return outcome_matrix_to_user_order(path.point_estimate().Omega, data.column_order);
}

FitRun run_fit(const Matrix& X, const Matrix& Y, const std::vector<OutcomeKind>& kinds,
               const Settings& settings, int threads) {
  check_fit_inputs(X, Y, kinds);
  FitRun run;
  run.standardization = standardize(X);
  run.data = Dataset::from_user_order(run.standardization.X, Y, kinds);
  FitConfig cfg = fit_config_from(settings, run.data.n(), run.data.p(), run.data.q());
  cfg.threads = threads;
  const auto start = std::chrono::steady_clock::now();
  run.path = fit_path(run.data, cfg);
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

void write_fit_outputs(const fs::path& dir, const FitRun& fit, const Settings& settings,
                       const PhaseTimer* timer) {
  ensure_directory(dir);
  write_matrix_csv(dir / "B_hat.csv", fit.B_user_raw());
  write_matrix_csv(dir / "Omega_hat.csv", fit.Omega_user());
  write_kinds(dir / "kinds.csv", kinds_to_user_order(fit.data.kinds, fit.data.column_order));
  Matrix standardization(2, fit.standardization.centers.size());
  standardization.row(0) = fit.standardization.centers.transpose();
  standardization.row(1) = fit.standardization.scales.transpose();
  write_matrix_csv(dir / "standardization.csv", standardization);

  std::string diag = "grid_index,lambda0,xi0,iterations,converged,objective,support_B,support_Omega,draws\n";
  nlohmann::json grid = nlohmann::json::array();
  for (std::size_t g = 0; g < fit.path.grid.size(); ++g) {
    const auto& point = fit.path.grid[g];
    const auto& d = fit.path.diagnostics[g];
    diag += std::to_string(g) + "," + format_double(point.lambda0) + "," + format_double(point.xi0) +
            "," + std::to_string(d.iterations) + "," + (d.converged ? "1" : "0") + "," +
            format_double(d.objective) + "," + std::to_string(d.support_B) + "," +
            std::to_string(d.support_Omega) + "," + std::to_string(d.draws) + "\n";
    grid.push_back({{"lambda0", point.lambda0},
                    {"xi0", point.xi0},
                    {"iterations", d.iterations},
                    {"converged", d.converged},
                    {"objective", d.objective},
                    {"support_B", d.support_B},
                    {"support_Omega", d.support_Omega},
                    {"draws", d.draws}});
  }
  write_text(dir / "path_diagnostics.csv", diag);

  nlohmann::json manifest = make_manifest("fit", settings, timer);
  manifest["grid_diagnostics"] = std::move(grid);
  manifest["theta"] = fit.path.point_estimate().theta;
  manifest["eta"] = fit.path.point_estimate().eta;
  write_manifest(dir, manifest);
}

void cmd_fit(const Settings& settings, std::ostream& log) {
  const fs::path out = settings.get_string("out");
  const int threads = settings.has("threads") ? static_cast<int>(settings.get_int("threads")) : 1;
  fs::path x_path, y_path, kinds_path;
  if (const auto data = settings.find("data")) {
    x_path = fs::path(*data) / "X.csv";
    y_path = fs::path(*data) / "Y.csv";
    kinds_path = fs::path(*data) / "kinds.csv";
  }
  if (const auto x = settings.find("x")) x_path = *x;
  if (const auto y = settings.find("y")) y_path = *y;
  if (const auto k = settings.find("kinds")) kinds_path = *k;
  if (x_path.empty() || y_path.empty() || kinds_path.empty())
    throw ParameterError("fit needs --data DIR or all of --x, --y, --kinds");

  PhaseTimer timer;
  Matrix X, Y;
  std::vector<OutcomeKind> kinds;
  timer.time("load", [&] {
    X = read_matrix_csv(x_path);
    Y = read_matrix_csv(y_path);
    kinds = read_kinds(kinds_path);
  });
  FitRun fit = timer.time("fit", [&] { return run_fit(X, Y, kinds, settings, threads); });
  ensure_directory(out);
  timer.time("write", [&] { write_fit_outputs(out, fit, settings, &timer); });
  log << "fit: " << fit.path.grid.size() << " grid points, point estimate has "
      << fit.path.diagnostics.back().support_B << " nonzero coefficients and "
      << fit.path.diagnostics.back().support_Omega << " edges\n";
}

}  // namespace mixssl::cli
