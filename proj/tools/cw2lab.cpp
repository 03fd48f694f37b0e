// cw2lab: convergence experiments for the two-group Curie-Weiss model.
//
//   cw2lab <command> [--n-schedule 500,1000,2000,4000] [--alpha1 0.5]
//          [--alpha2 0.5] [--beta 0.5] [--kmax 6] [--lmax 6] [--seed 42]
//          [--format csv|json] [--output PATH] [--config PATH]
//
// Exit codes: 0 all checks passed, 1 bad config or refused command,
// 2 a check failed (failure record on stderr).

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "cw2/experiments.hpp"

namespace {

template <class T>
void override_if(const CLI::App& app, const std::string& flag, const T& value, T& target) {
  if (app.count(flag) > 0) target = value;
}

int fail_config(const std::string& what) {
  nlohmann::ordered_json rec{{"status", "error"}, {"error", what}};
  std::cerr << rec.dump() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-group Curie-Weiss convergence experiments"};
  app.set_help_flag("-h,--help", "Print this help message and exit");

  std::string command;
  std::vector<int> schedule;
  double alpha1 = 0, alpha2 = 0, beta = 0;
  int kmax = 0, lmax = 0;
  std::uint64_t seed = 0;
  std::string format, output, config_path;
  std::vector<double> betas;
  std::size_t draws = 0;
  long long sweeps = 0, burn_in = 0, thin = 0;

  app.add_option("command", command,
                 "lln | clt | sublinear | critical | moments | solve-m | comb-check | sample")
      ->required();
  app.add_option("--n-schedule", schedule, "Total sizes N, strictly increasing")->delimiter(',');
  app.add_option("--alpha1", alpha1, "Group 1 fraction");
  app.add_option("--alpha2", alpha2, "Group 2 fraction");
  app.add_option("--beta", beta, "Inverse temperature");
  app.add_option("--kmax", kmax, "Largest group 1 exponent (<= 12)");
  app.add_option("--lmax", lmax, "Largest group 2 exponent (<= 12)");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output", output, "Output file (default stdout)");
  app.add_option("--config", config_path, "JSON config file; flags override its values");
  app.add_option("--betas", betas, "solve-m: inverse temperatures")->delimiter(',');
  app.add_option("--draws", draws, "sample: exact-sampler draws per N");
  app.add_option("--sweeps", sweeps, "sample: chain sweeps per N, burn-in included");
  app.add_option("--burn-in", burn_in, "sample: chain burn-in sweeps");
  app.add_option("--thin", thin, "sample: sweeps between recorded chain states");

  CLI11_PARSE(app, argc, argv);

  cw2::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) return fail_config("cannot open config file " + config_path);
      cfg = cw2::config_from_json(nlohmann::json::parse(in), cfg);
    }
    cfg.command = cw2::parse_command(command);
    override_if(app, "--n-schedule", schedule, cfg.n_schedule);
    override_if(app, "--alpha1", alpha1, cfg.alpha1);
    override_if(app, "--alpha2", alpha2, cfg.alpha2);
    override_if(app, "--beta", beta, cfg.beta);
    override_if(app, "--kmax", kmax, cfg.k_max);
    override_if(app, "--lmax", lmax, cfg.l_max);
    override_if(app, "--seed", seed, cfg.seed);
    override_if(app, "--output", output, cfg.output);
    override_if(app, "--betas", betas, cfg.betas);
    override_if(app, "--draws", draws, cfg.draws);
    override_if(app, "--sweeps", sweeps, cfg.sweeps);
    override_if(app, "--burn-in", burn_in, cfg.burn_in);
    override_if(app, "--thin", thin, cfg.thin);
    if (app.count("--format") > 0)
      cfg.format = format == "json" ? cw2::Format::Json : cw2::Format::Csv;
    cfg.validate();
  } catch (const std::exception& e) {
    return fail_config(e.what());
  }

  cw2::ExperimentResult result;
  try {
    result = cw2::run_experiment(cfg);
  } catch (const std::exception& e) {
    return fail_config(e.what());
  }

  const std::string text = cw2::render(cfg, result);
  if (cfg.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) return fail_config("cannot write " + cfg.output);
    out << text;
  }

  if (!result.ok()) {
    std::cerr << cw2::failure_record(cfg, result).dump() << "\n";
    return 2;
  }
  return 0;
}
