#include <ostream>

#include "mixssl/errors.hpp"
#include "mixssl/rng.hpp"
#include "mixssl/simgen.hpp"
#include "mixssl_cli/commands.hpp"
#include "mixssl_cli/io.hpp"

namespace mixssl::cli {

namespace fs = std::filesystem;

void cmd_simulate(const Settings& settings, std::ostream& log) {
  const auto n = settings.get_int("n");
  const auto p = settings.get_int("p");
  const auto q = settings.get_int("q");
  const auto q_binary = settings.has("q-binary") ? settings.get_int("q-binary") : q / 2;
  if (n < 2 || p < 1 || q < 2) throw ParameterError("simulate needs n >= 2, p >= 1, q >= 2");
  if (q_binary < 0 || q_binary > q) throw ParameterError("q-binary must lie in [0, q]");
  const auto structure = sim::parse_structure(settings.get_string("structure"));
  const sim::SignalRegime regime{sim::parse_signal(settings.get_string("regime")),
                                 settings.get_double("density")};
  const std::uint64_t seed = settings.get_u64("seed");
  const fs::path out = settings.get_string("out");

  PhaseTimer timer;
  const auto kinds = sim::mixed_kinds(static_cast<int>(q - q_binary), static_cast<int>(q_binary));
  Matrix Omega, B, X, Y;
  timer.time("simulate", [&] {
    Omega = sim::gen_omega(structure, static_cast<int>(q), derive_seed(seed, {1}),
                           settings.get_double("rewire"));
    B = sim::gen_coefficients(regime, static_cast<int>(p), static_cast<int>(q), derive_seed(seed, {2}));
    X = sim::gen_covariates(static_cast<int>(n), static_cast<int>(p), derive_seed(seed, {3}));
    Y = sim::simulate_outcomes(X, B, Omega, kinds, derive_seed(seed, {4}));
  });
  if (sim::binary_variance_mismatch(Omega, kinds))
    log << "warning: structure " << sim::to_string(structure)
        << " gives binary latent variances other than one; truth_B is on that scale\n";

  ensure_directory(out);
  timer.time("write", [&] {
    write_matrix_csv(out / "X.csv", X);
    write_matrix_csv(out / "Y.csv", Y);
    write_matrix_csv(out / "truth_B.csv", B);
    write_matrix_csv(out / "truth_Omega.csv", Omega);
    write_kinds(out / "kinds.csv", kinds);
  });
  Settings snapshot = settings;
  snapshot.set("q-binary", std::to_string(q_binary));
  write_manifest(out, make_manifest("simulate", snapshot, &timer));
  log << "simulate: wrote " << n << "x" << p << " covariates and " << n << "x" << q
      << " outcomes (" << q_binary << " binary) to " << out.string() << "\n";
}

}  // namespace mixssl::cli
