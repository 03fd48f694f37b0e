#pragma once

// Convergence experiments behind the cw2lab command line. Each command
// produces a table plus a list of named checks; rendering to CSV or JSON is
// deterministic for a given config.

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace cw2 {

enum class Command { Lln, Clt, Sublinear, Critical, Moments, SolveM, CombCheck, Sample };
enum class Format { Csv, Json };

Command parse_command(std::string_view name);
std::string_view command_name(Command c);

// l-infinity radius around the LLN atoms, in (S1/N1, S2/N2) coordinates.
inline constexpr double kLlnRadius = 0.05;
// Slack below which an error increase counts as rounding noise in the
// convergence-trend checks.
inline constexpr double kTrendSlack = 1e-12;
// Relative agreement required between the closed-form series and the
// Gaussian recursion / pair-partition sum.
inline constexpr double kDualFormulaTol = 1e-10;
// Standard-error multiple accepted by the `sample` command's checks.
inline constexpr double kSampleZLimit = 4.0;

struct ExperimentConfig {
  Command command = Command::Clt;
  std::vector<int> n_schedule{500, 1000, 2000, 4000};
  double alpha1 = 0.5;
  double alpha2 = 0.5;
  double beta = 0.5;
  int k_max = 6;
  int l_max = 6;
  std::uint64_t seed = 42;
  Format format = Format::Csv;
  std::string output;  // empty: stdout

  // solve-m grid.
  std::vector<double> betas{0.5, 1.0, 1.5, 2.0};
  // sample command: exact-sampler draws and chain sweeps per schedule point.
  std::size_t draws = 100000;
  long long sweeps = 21000;
  long long burn_in = 1000;
  long long thin = 10;

  // Throws std::invalid_argument on schedule / fraction / cap violations.
  void validate() const;
};

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);
// Missing keys keep their current values in `base`.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});

using Cell = std::variant<std::monostate, long long, double, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ExperimentResult {
  Table table;
  std::vector<Check> checks;

  bool ok() const;
};

// floor(alpha * n), guarded against representation error in alpha.
int group_size(double alpha, int n);

ExperimentResult cmd_lln(const ExperimentConfig& cfg);
// Throws std::domain_error for beta >= 1.
ExperimentResult cmd_clt(const ExperimentConfig& cfg);
// Group 1 has floor(sqrt(N)) spins; alpha1 is ignored.
ExperimentResult cmd_sublinear(const ExperimentConfig& cfg);
// Throws std::domain_error unless beta == 1.
ExperimentResult cmd_critical(const ExperimentConfig& cfg);
ExperimentResult cmd_moments(const ExperimentConfig& cfg);
ExperimentResult cmd_solve_m(const ExperimentConfig& cfg);
ExperimentResult cmd_comb_check(const ExperimentConfig& cfg);
ExperimentResult cmd_sample(const ExperimentConfig& cfg);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Reals are written with 17 significant digits, lines end in '\n'.
std::string render_csv(const ExperimentResult& result);
std::string render_json(const ExperimentConfig& cfg, const ExperimentResult& result);
std::string render(const ExperimentConfig& cfg, const ExperimentResult& result);

// {"status": "failed", "command": ..., "failed_checks": [...]}
nlohmann::ordered_json failure_record(const ExperimentConfig& cfg, const ExperimentResult& result);

}  // namespace cw2
