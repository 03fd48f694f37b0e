#include "cw2/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <sstream>
#include <stdexcept>

#include "cw2/combinatorics.hpp"
#include "cw2/limits.hpp"
#include "cw2/model.hpp"
#include "cw2/sampling.hpp"

namespace cw2 {

namespace {

struct CommandName {
  Command command;
  std::string_view name;
};

constexpr CommandName kCommands[] = {
    {Command::Lln, "lln"},           {Command::Clt, "clt"},
    {Command::Sublinear, "sublinear"}, {Command::Critical, "critical"},
    {Command::Moments, "moments"},   {Command::SolveM, "solve-m"},
    {Command::CombCheck, "comb-check"}, {Command::Sample, "sample"},
};

constexpr int kMaxExponentCap = 12;

std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Runs fn(N) for every schedule point concurrently; results keep schedule order.
template <class Fn>
auto map_schedule(const std::vector<int>& schedule, Fn fn) {
  using R = decltype(fn(0));
  std::vector<std::future<R>> futures;
  futures.reserve(schedule.size());
  for (int n : schedule) futures.push_back(std::async(std::launch::async, fn, n));
  std::vector<R> out;
  out.reserve(schedule.size());
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

// Trend check over the last three entries of `errs`.
Check trend_check(std::string name, const std::vector<double>& errs, bool strict) {
  Check c{std::move(name), true, ""};
  const std::size_t n = errs.size();
  if (n < 3) {
    c.detail = "fewer than three schedule points; trend not assessed";
    return c;
  }
  std::ostringstream detail;
  for (std::size_t i = n - 3; i + 1 < n; ++i) {
    const bool step_ok = strict ? errs[i + 1] < errs[i] : errs[i + 1] <= errs[i] + kTrendSlack;
    c.passed = c.passed && step_ok;
  }
  detail << (strict ? "strictly decreasing" : "non-increasing") << " over "
         << fmt_real(errs[n - 3]) << ", " << fmt_real(errs[n - 2]) << ", "
         << fmt_real(errs[n - 1]);
  c.detail = detail.str();
  return c;
}

std::string pair_label(int k, int l) {
  return "K=" + std::to_string(k) + " L=" + std::to_string(l);
}

ModelParams linear_params(const ExperimentConfig& cfg, int n) {
  ModelParams p{n, group_size(cfg.alpha1, n), group_size(cfg.alpha2, n), cfg.beta};
  p.validate();
  return p;
}

double rel_diff(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return a == b ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

Command parse_command(std::string_view name) {
  for (const auto& c : kCommands)
    if (c.name == name) return c.command;
  throw std::invalid_argument("unknown command '" + std::string(name) + "'");
}

std::string_view command_name(Command c) {
  for (const auto& entry : kCommands)
    if (entry.command == c) return entry.name;
  throw std::invalid_argument("unknown command");
}

void ExperimentConfig::validate() const {
  if (n_schedule.empty()) throw std::invalid_argument("n_schedule is empty");
  for (std::size_t i = 0; i < n_schedule.size(); ++i) {
    if (n_schedule[i] < 2) throw std::invalid_argument("schedule sizes must be >= 2");
    if (i > 0 && n_schedule[i] <= n_schedule[i - 1])
      throw std::invalid_argument("n_schedule must be strictly increasing");
  }
  if (!(alpha1 >= 0.0) || !(alpha2 >= 0.0) || alpha1 + alpha2 > 1.0 + 1e-12)
    throw std::invalid_argument("need alpha1, alpha2 >= 0 and alpha1 + alpha2 <= 1");
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("beta must be finite and nonnegative");
  if (k_max < 0 || l_max < 0 || k_max > kMaxExponentCap || l_max > kMaxExponentCap)
    throw std::invalid_argument("exponent caps must lie in [0, 12]");
  if (draws == 0) throw std::invalid_argument("draws must be >= 1");
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg) {
  return {
      {"command", command_name(cfg.command)},
      {"n_schedule", cfg.n_schedule},
      {"alpha1", cfg.alpha1},
      {"alpha2", cfg.alpha2},
      {"beta", cfg.beta},
      {"kmax", cfg.k_max},
      {"lmax", cfg.l_max},
      {"seed", cfg.seed},
      {"format", cfg.format == Format::Csv ? "csv" : "json"},
      {"betas", cfg.betas},
      {"draws", cfg.draws},
      {"sweeps", cfg.sweeps},
      {"burn_in", cfg.burn_in},
      {"thin", cfg.thin},
  };
}

ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  if (j.contains("command")) base.command = parse_command(j.at("command").get<std::string>());
  if (j.contains("n_schedule")) base.n_schedule = j.at("n_schedule").get<std::vector<int>>();
  if (j.contains("alpha1")) base.alpha1 = j.at("alpha1").get<double>();
  if (j.contains("alpha2")) base.alpha2 = j.at("alpha2").get<double>();
  if (j.contains("beta")) base.beta = j.at("beta").get<double>();
  if (j.contains("kmax")) base.k_max = j.at("kmax").get<int>();
  if (j.contains("lmax")) base.l_max = j.at("lmax").get<int>();
  if (j.contains("seed")) base.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("format")) {
    const auto f = j.at("format").get<std::string>();
    if (f == "csv") base.format = Format::Csv;
    else if (f == "json") base.format = Format::Json;
    else throw std::invalid_argument("format must be csv or json");
  }
  if (j.contains("output")) base.output = j.at("output").get<std::string>();
  if (j.contains("betas")) base.betas = j.at("betas").get<std::vector<double>>();
  if (j.contains("draws")) base.draws = j.at("draws").get<std::size_t>();
  if (j.contains("sweeps")) base.sweeps = j.at("sweeps").get<long long>();
  if (j.contains("burn_in")) base.burn_in = j.at("burn_in").get<long long>();
  if (j.contains("thin")) base.thin = j.at("thin").get<long long>();
  return base;
}

bool ExperimentResult::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

int group_size(double alpha, int n) {
  return static_cast<int>(std::floor(alpha * n + 1e-9));
}

ExperimentResult cmd_clt(const ExperimentConfig& cfg) {
  cfg.validate();
  if (!(cfg.beta < 1.0))
    throw std::domain_error("clt refuses beta >= 1: there is no central limit theorem there");
  const auto gauss = gaussian_cov(cfg.alpha1, cfg.alpha2, cfg.beta);
  const int width = cfg.l_max + 1;

  const auto grids = map_schedule(cfg.n_schedule, [&](int n) {
    const auto dist = exact_pair_distribution(linear_params(cfg, n));
    return mixed_moment_grid(dist, Scaling::SqrtSpin, cfg.k_max, cfg.l_max);
  });

  ExperimentResult res;
  res.table.columns = {"N", "K", "L", "exact_moment", "closed_form", "isserlis", "abs_err"};
  std::vector<std::vector<double>> errs(static_cast<std::size_t>((cfg.k_max + 1) * width));
  for (std::size_t s = 0; s < cfg.n_schedule.size(); ++s) {
    for (int k = 0; k <= cfg.k_max; ++k) {
      for (int l = 0; l <= cfg.l_max; ++l) {
        const double exact = grids[s][k * width + l];
        const double closed = closed_form_moment(k, l, cfg.alpha1, cfg.alpha2, cfg.beta);
        const double gauss_m = isserlis_moment(k, l, gauss.c11, gauss.c12, gauss.c22);
        const double err = std::abs(exact - closed);
        errs[k * width + l].push_back(err);
        res.table.rows.push_back({static_cast<long long>(cfg.n_schedule[s]),
                                  static_cast<long long>(k), static_cast<long long>(l), exact,
                                  closed, gauss_m, err});
      }
    }
  }
  for (int k = 0; k <= cfg.k_max; ++k) {
    for (int l = 0; l <= cfg.l_max; ++l) {
      res.checks.push_back(trend_check("clt error trend " + pair_label(k, l), errs[k * width + l],
                                       false));
      const double closed = closed_form_moment(k, l, cfg.alpha1, cfg.alpha2, cfg.beta);
      const double gauss_m = isserlis_moment(k, l, gauss.c11, gauss.c12, gauss.c22);
      const double rd = rel_diff(closed, gauss_m);
      res.checks.push_back({"closed form = isserlis " + pair_label(k, l),
                            rd <= kDualFormulaTol, "relative difference " + fmt_real(rd)});
    }
  }
  return res;
}

ExperimentResult cmd_lln(const ExperimentConfig& cfg) {
  cfg.validate();
  const double m = solve_m(cfg.beta);

  struct Masses {
    int n1, n2;
    double aligned, anti;
  };
  const auto masses = map_schedule(cfg.n_schedule, [&](int n) {
    const auto params = linear_params(cfg, n);
    const auto dist = exact_pair_distribution(params);
    const auto near = [](double x, double y, double ax, double ay) {
      return std::abs(x - ax) <= kLlnRadius && std::abs(y - ay) <= kLlnRadius;
    };
    double aligned = 0.0, anti = 0.0;
    for (std::size_t i = 0; i < dist.rows(); ++i) {
      const double x = static_cast<double>(dist.s1_at(i)) / params.n1;
      for (std::size_t j = 0; j < dist.cols(); ++j) {
        const double y = static_cast<double>(dist.s2_at(j)) / params.n2;
        if (near(x, y, m, m) || near(x, y, -m, -m)) aligned += std::exp(dist.log_prob_at(i, j));
        else if (near(x, y, m, -m) || near(x, y, -m, m)) anti += std::exp(dist.log_prob_at(i, j));
      }
    }
    return Masses{params.n1, params.n2, aligned, anti};
  });

  ExperimentResult res;
  res.table.columns = {"N", "N1", "N2", "m", "aligned_mass", "anti_aligned_mass"};
  std::vector<double> aligned_deficit, anti;
  for (std::size_t s = 0; s < masses.size(); ++s) {
    const auto& mm = masses[s];
    res.table.rows.push_back({static_cast<long long>(cfg.n_schedule[s]),
                              static_cast<long long>(mm.n1), static_cast<long long>(mm.n2), m,
                              mm.aligned, mm.anti});
    aligned_deficit.push_back(1.0 - mm.aligned);
    anti.push_back(mm.anti);
  }
  res.checks.push_back(trend_check("lln aligned-atom mass deficit trend", aligned_deficit, false));
  res.checks.push_back(trend_check("lln anti-aligned mass trend", anti, false));
  return res;
}

ExperimentResult cmd_sublinear(const ExperimentConfig& cfg) {
  cfg.validate();
  const double bb = beta_bar(cfg.beta);
  const double target_var2 = 1.0 + cfg.alpha2 * bb;

  struct Row {
    int n1, n2;
    double var1, cov, var2;
  };
  const auto rows = map_schedule(cfg.n_schedule, [&](int n) {
    ModelParams p{n, static_cast<int>(std::floor(std::sqrt(static_cast<double>(n)))),
                  group_size(cfg.alpha2, n), cfg.beta};
    const auto dist = exact_pair_distribution(p);
    const auto g = mixed_moment_grid(dist, Scaling::SqrtSpin, 2, 2);
    return Row{p.n1, p.n2, g[2 * 3 + 0], g[1 * 3 + 1], g[0 * 3 + 2]};
  });

  ExperimentResult res;
  res.table.columns = {"N",       "N1",          "N2",          "var1",        "cov",
                       "var2",    "target_var1", "target_cov",  "target_var2", "dev_var1",
                       "dev_cov", "dev_var2"};
  std::vector<double> d1, dc, d2;
  for (std::size_t s = 0; s < rows.size(); ++s) {
    const auto& r = rows[s];
    d1.push_back(std::abs(r.var1 - 1.0));
    dc.push_back(std::abs(r.cov));
    d2.push_back(std::abs(r.var2 - target_var2));
    res.table.rows.push_back({static_cast<long long>(cfg.n_schedule[s]),
                              static_cast<long long>(r.n1), static_cast<long long>(r.n2), r.var1,
                              r.cov, r.var2, 1.0, 0.0, target_var2, d1.back(), dc.back(),
                              d2.back()});
  }
  res.checks.push_back(trend_check("sublinear var1 deviation trend", d1, false));
  res.checks.push_back(trend_check("sublinear cov deviation trend", dc, false));
  res.checks.push_back(trend_check("sublinear var2 deviation trend", d2, false));
  return res;
}

ExperimentResult cmd_critical(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.beta != 1.0) throw std::domain_error("critical requires beta = 1");
  const int width = cfg.l_max + 1;

  const auto grids = map_schedule(cfg.n_schedule, [&](int n) {
    const auto dist = exact_pair_distribution(linear_params(cfg, n));
    return mixed_moment_grid(dist, Scaling::Critical, cfg.k_max, cfg.l_max);
  });

  ExperimentResult res;
  res.table.columns = {"N", "K", "L", "exact_moment", "critical_moment", "abs_err"};
  std::vector<std::vector<double>> errs(static_cast<std::size_t>((cfg.k_max + 1) * width));
  for (std::size_t s = 0; s < cfg.n_schedule.size(); ++s) {
    for (int k = 0; k <= cfg.k_max; ++k) {
      for (int l = 0; l <= cfg.l_max; ++l) {
        const double exact = grids[s][k * width + l];
        const double limit = critical_moment(k, l, cfg.alpha1, cfg.alpha2);
        const double err = std::abs(exact - limit);
        errs[k * width + l].push_back(err);
        res.table.rows.push_back({static_cast<long long>(cfg.n_schedule[s]),
                                  static_cast<long long>(k), static_cast<long long>(l), exact,
                                  limit, err});
      }
    }
  }
  for (int k = 0; k <= cfg.k_max; ++k)
    for (int l = 0; l <= cfg.l_max; ++l)
      if ((k + l) % 2 == 0 && k + l > 0)
        res.checks.push_back(trend_check("critical error trend " + pair_label(k, l),
                                         errs[k * width + l], true));
  return res;
}

ExperimentResult cmd_moments(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto gauss = gaussian_cov(cfg.alpha1, cfg.alpha2, cfg.beta);
  ExperimentResult res;
  res.table.columns = {"K", "L", "closed_form", "isserlis", "isserlis_brute", "rel_diff"};
  for (int k = 0; k <= cfg.k_max; ++k) {
    for (int l = 0; l <= cfg.l_max; ++l) {
      const double closed = closed_form_moment(k, l, cfg.alpha1, cfg.alpha2, cfg.beta);
      const double rec = isserlis_moment(k, l, gauss.c11, gauss.c12, gauss.c22);
      double rd = rel_diff(closed, rec);
      Cell brute_cell;
      if (k + l <= 12) {
        const double brute = isserlis_brute(k, l, gauss.c11, gauss.c12, gauss.c22);
        brute_cell = brute;
        rd = std::max(rd, rel_diff(closed, brute));
      }
      res.table.rows.push_back(
          {static_cast<long long>(k), static_cast<long long>(l), closed, rec, brute_cell, rd});
      res.checks.push_back({"dual formula " + pair_label(k, l), rd <= kDualFormulaTol,
                            "relative difference " + fmt_real(rd)});
    }
  }
  return res;
}

ExperimentResult cmd_solve_m(const ExperimentConfig& cfg) {
  ExperimentResult res;
  res.table.columns = {"beta", "m", "residual"};
  for (double b : cfg.betas) {
    const double m = solve_m(b);
    const double residual = std::abs(std::tanh(b * m) - m);
    res.table.rows.push_back({b, m, residual});
    const bool phase_ok = (b <= 1.0) == (m == 0.0);
    res.checks.push_back({"solve-m beta=" + fmt_real(b), residual < 1e-12 && phase_ok,
                          "m=" + fmt_real(m) + " residual=" + fmt_real(residual)});
  }
  return res;
}

ExperimentResult cmd_comb_check(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult res;
  res.table.columns = {"L",     "N",        "profiles", "partitions",
                       "sum_w", "n_pow_l",  "status"};
  for (int n : cfg.n_schedule) {
    for (int l = 1; l <= std::max(1, cfg.l_max); ++l) {
      const auto profiles = enumerate_profiles(l);
      BigInt sum = 0;
      bool classes_ok = true;
      for (const auto& r : profiles) {
        if (r.distinct() <= n) sum += w_count(r, n);
        const auto c = classify_profile(r, r.count(1));
        classes_ok = classes_ok && c.in_pi_k && (c.in_pi_zero != c.in_pi_plus);
      }
      BigInt power = 1;
      for (int i = 0; i < l; ++i) power *= n;
      const BigInt partitions = partition_count(l);
      const bool ok = sum == power && BigInt(profiles.size()) == partitions && classes_ok;
      const std::string s_sum = sum.str(), s_pow = power.str();
      res.table.rows.push_back({static_cast<long long>(l), static_cast<long long>(n),
                                static_cast<long long>(profiles.size()),
                                partitions.convert_to<long long>(), s_sum, s_pow, std::string(ok ? "OK" : "FAIL")});
      res.checks.push_back({"comb-check L=" + std::to_string(l) + " N=" + std::to_string(n), ok,
                            s_sum + " = " + s_pow + (ok ? " OK" : " FAIL")});
    }
  }
  return res;
}

ExperimentResult cmd_sample(const ExperimentConfig& cfg) {
  cfg.validate();
  ChainConfig chain{cfg.sweeps, cfg.burn_in, cfg.thin, cfg.seed, true};
  chain.validate();

  struct Point {
    std::vector<double> exact;
    SampleBatch direct, markov;
  };
  const int cap = 4;
  const auto points = map_schedule(cfg.n_schedule, [&](int n) {
    const auto params = linear_params(cfg, n);
    const auto dist = exact_pair_distribution(params);
    return Point{mixed_moment_grid(dist, Scaling::SqrtSpin, cap, cap),
                 sample_exact(dist, cfg.draws, cfg.seed, 1), glauber_chain(params, chain)};
  });

  ExperimentResult res;
  res.table.columns = {"N", "sampler", "K", "L", "estimate", "std_error", "exact", "z"};
  for (std::size_t s = 0; s < points.size(); ++s) {
    const auto& pt = points[s];
    for (const auto* batch : {&pt.direct, &pt.markov}) {
      const std::string name = batch == &pt.direct ? "exact" : "glauber";
      for (int k = 0; k <= std::min(cap, cfg.k_max); ++k) {
        for (int l = 0; l <= std::min(cap, cfg.l_max); ++l) {
          if (k + l == 0 || k + l > cap) continue;
          const auto est = empirical_moments(*batch, {k, l, Scaling::SqrtSpin});
          const double exact = pt.exact[k * (cap + 1) + l];
          const double dev = est.estimate - exact;
          const double z = est.std_error > 0.0 ? dev / est.std_error : (dev == 0.0 ? 0.0 : HUGE_VAL);
          res.table.rows.push_back({static_cast<long long>(cfg.n_schedule[s]), name,
                                    static_cast<long long>(k), static_cast<long long>(l),
                                    est.estimate, est.std_error, exact, z});
          res.checks.push_back({"sample " + name + " N=" + std::to_string(cfg.n_schedule[s]) +
                                    " " + pair_label(k, l),
                                std::abs(z) <= kSampleZLimit, "z=" + fmt_real(z)});
        }
      }
    }
  }
  return res;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.command) {
    case Command::Lln: return cmd_lln(cfg);
    case Command::Clt: return cmd_clt(cfg);
    case Command::Sublinear: return cmd_sublinear(cfg);
    case Command::Critical: return cmd_critical(cfg);
    case Command::Moments: return cmd_moments(cfg);
    case Command::SolveM: return cmd_solve_m(cfg);
    case Command::CombCheck: return cmd_comb_check(cfg);
    case Command::Sample: return cmd_sample(cfg);
  }
  throw std::invalid_argument("unknown command");
}

namespace {

std::string csv_field(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "";
        else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, double>) return fmt_real(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else {
          if (v.find_first_of(",\"\n") == std::string::npos) return v;
          std::string quoted = "\"";
          for (char c : v) {
            if (c == '"') quoted += '"';
            quoted += c;
          }
          return quoted + "\"";
        }
      },
      cell);
}

nlohmann::ordered_json json_value(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
        else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return fmt_real(v);
          return v;
        } else return v;
      },
      cell);
}

}  // namespace

std::string render_csv(const ExperimentResult& result) {
  std::string out;
  const auto& cols = result.table.columns;
  for (std::size_t c = 0; c < cols.size(); ++c) out += (c ? "," : "") + cols[c];
  out += '\n';
  for (const auto& row : result.table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += csv_field(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string render_json(const ExperimentConfig& cfg, const ExperimentResult& result) {
  nlohmann::ordered_json doc;
  doc["config"] = config_to_json(cfg);
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : result.table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) obj[result.table.columns[c]] = json_value(row[c]);
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : result.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  doc["checks"] = std::move(checks);
  return doc.dump(2) + "\n";
}

std::string render(const ExperimentConfig& cfg, const ExperimentResult& result) {
  return cfg.format == Format::Csv ? render_csv(result) : render_json(cfg, result);
}

nlohmann::ordered_json failure_record(const ExperimentConfig& cfg, const ExperimentResult& result) {
  auto failed = nlohmann::ordered_json::array();
  for (const auto& c : result.checks)
    if (!c.passed) failed.push_back({{"name", c.name}, {"detail", c.detail}});
  return {{"status", "failed"}, {"command", command_name(cfg.command)}, {"failed_checks", failed}};
}

}  // namespace cw2
