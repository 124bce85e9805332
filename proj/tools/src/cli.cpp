#include <ostream>

#include <CLI11.hpp>

#include "mixssl/errors.hpp"
#include "mixssl_cli/commands.hpp"

namespace mixssl::cli {

namespace {

struct KeySpec {
  const char* key;
  const char* help;
};

constexpr KeySpec kSimulateKeys[] = {
    {"n", "number of observations"},
    {"p", "number of covariates"},
    {"q", "number of outcomes"},
    {"q-binary", "number of binary outcomes (default q/2)"},
    {"structure", "precision structure: ar1, ar2, block, star, small-world, tree"},
    {"regime", "signal regime: uniform or disjoint"},
    {"density", "fraction of nonzero coefficients"},
    {"rewire", "small-world rewiring probability"},
};

constexpr KeySpec kFitKeys[] = {
    {"H", "Monte Carlo draws per E-step"},
    {"lambda1", "slab rate for B"},
    {"xi1", "slab rate for Omega"},
    {"lambda0-grid", "spike ladder for B, start:stop:step or a,b,c"},
    {"xi0-grid", "spike ladder for Omega, start:stop:step or a,b,c"},
    {"a-theta", "Beta prior on theta, first shape"},
    {"b-theta", "Beta prior on theta, second shape"},
    {"a-eta", "Beta prior on eta, first shape"},
    {"b-eta", "Beta prior on eta, second shape"},
    {"max-outer", "outer iteration cap per grid point"},
    {"rel-tol", "relative change tolerance"},
    {"min-outer", "minimum outer iterations on a cold start"},
    {"streak", "consecutive iterations below rel-tol"},
    {"max-sweeps", "coordinate sweeps per CM step"},
    {"tol", "coordinate sweep tolerance"},
    {"burn-in", "sampler burn-in steps"},
    {"thin", "sampler thinning"},
};

constexpr KeySpec kFitInputKeys[] = {
    {"data", "directory holding X.csv, Y.csv, kinds.csv"},
    {"x", "covariate CSV"},
    {"y", "outcome CSV"},
    {"kinds", "outcome kinds file"},
    {"fit-threads", "threads inside each fit"},
};

constexpr KeySpec kEvaluateKeys[] = {
    {"estimates", "fit output directory"},
    {"truth", "directory with truth_B.csv and optionally truth_Omega.csv"},
    {"test", "directory with test X.csv and Y.csv"},
    {"replicate-root", "directory of replicate subdirectories (fit/, truth/, test/)"},
    {"prediction-draws", "forward draws per test row for RMSE"},
};

constexpr KeySpec kBenchmarkKeys[] = {
    {"structures", "comma list of structures or 'all'"},
    {"regimes", "comma list of signal regimes"},
    {"replicates", "replicates per structure and regime"},
    {"save-replicates", "keep per-replicate data and fits (true/false)"},
};

class CommandLine {
 public:
  CLI::App* add(CLI::App& app, const std::string& name, const std::string& description) {
    CLI::App* sub = app.add_subcommand(name, description);
    auto& values = values_[sub];
    add_key(sub, values, {"config", "flat key = value settings file"});
    add_key(sub, values, {"manifest", "replay the settings stored in a manifest.json"});
    add_key(sub, values, {"out", "output directory"});
    add_key(sub, values, {"seed", "root random seed"});
    add_key(sub, values, {"threads", "worker threads"});
    sub->add_flag_callback("--reproducible", [&values] { values["reproducible"] = "true"; },
                           "omit wall-clock timings so outputs are byte-identical");
    return sub;
  }

  template <std::size_t N>
  void add_keys(CLI::App* sub, const KeySpec (&keys)[N]) {
    for (const auto& spec : keys) add_key(sub, values_[sub], spec);
  }

  /// Defaults, then manifest, then config file, then explicit flags.
  Settings settings_for(CLI::App* sub, const std::string& command) const {
    Settings s = default_settings(command);
    const auto& flags = values_.at(sub);
    if (const auto it = flags.find("manifest"); it != flags.end())
      s.merge(settings_from_manifest(it->second));
    if (const auto it = flags.find("config"); it != flags.end())
      s.merge(Settings::from_file(it->second));
    for (const auto& [k, v] : flags)
      if (k != "config" && k != "manifest") s.set(k, v);
    return s;
  }

 private:
  static void add_key(CLI::App* sub, std::map<std::string, std::string>& values, KeySpec spec) {
    const std::string key = spec.key;
    sub->add_option_function<std::string>(
        "--" + key, [&values, key](const std::string& v) { values[key] = v; }, spec.help);
  }

  std::map<CLI::App*, std::map<std::string, std::string>> values_;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse mixed-outcome regression with spike-and-slab LASSO priors"};
  app.require_subcommand(1);
  CommandLine cl;
  CLI::App* simulate = cl.add(app, "simulate", "generate a synthetic dataset");
  cl.add_keys(simulate, kSimulateKeys);
  CLI::App* fit = cl.add(app, "fit", "fit the model along the spike-penalty ladder");
  cl.add_keys(fit, kFitKeys);
  cl.add_keys(fit, kFitInputKeys);
  CLI::App* evaluate = cl.add(app, "evaluate", "score estimates against truth and test data");
  cl.add_keys(evaluate, kEvaluateKeys);
  CLI::App* benchmark = cl.add(app, "benchmark", "simulate, fit, and evaluate over replicates");
  cl.add_keys(benchmark, kSimulateKeys);
  cl.add_keys(benchmark, kFitKeys);
  cl.add_keys(benchmark, kBenchmarkKeys);
  benchmark->get_option("--structure")->description("unused; see --structures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (simulate->parsed()) cmd_simulate(cl.settings_for(simulate, "simulate"), err);
    else if (fit->parsed()) cmd_fit(cl.settings_for(fit, "fit"), err);
    else if (evaluate->parsed()) cmd_evaluate(cl.settings_for(evaluate, "evaluate"), err);
    else if (benchmark->parsed()) cmd_benchmark(cl.settings_for(benchmark, "benchmark"), out, err);
    return kSuccess;
  } catch (const ParameterError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const InputError& e) {
    err << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
}

}  // namespace mixssl::cli
