#include "coopsense/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "coopsense/fusion.hpp"
#include "coopsense/montecarlo.hpp"
#include "coopsense/optimizer.hpp"
#include "coopsense/records.hpp"
#include "coopsense/specfun.hpp"
#include "coopsense/sweep.hpp"

namespace coopsense {

namespace {

using nlohmann::json;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Options {
  int users = 16;
  int samples = 12;
  double snr_db = 0.0;
  double alpha = 0.01;
  std::string rule = "optimal";
  std::uint64_t trials = 0;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string config;
  std::string out;

  std::string vary = "snr_db";
  double start = -10.0;
  double stop = 10.0;
  double step = 1.0;
  std::string values;
  std::string rules = "optimal,or,and,majority";
};

// Options registered on one subcommand, keyed by their long flag name so a
// JSON config can fill whatever the command line left unset.
struct Registry {
  std::map<std::string, CLI::Option*> options;
  std::map<std::string, std::function<void(const json&)>> setters;

  template <class T>
  void add(CLI::App* app, const std::string& name, T& target, const std::string& help) {
    options[name] = app->add_option("--" + name, target, help)->capture_default_str();
    setters[name] = [&target](const json& v) { target = v.get<T>(); };
  }

  bool given(const std::string& name) const {
    auto it = options.find(name);
    return it != options.end() && it->second->count() > 0;
  }
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  for (const auto& item : split_list(text)) {
    try {
      std::size_t used = 0;
      values.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw UsageError("invalid integer '" + item + "' in --values");
    }
  }
  return values;
}

// Lists may appear in JSON either as arrays or as comma-separated strings.
std::string list_text(const json& v) {
  if (!v.is_array()) return v.get<std::string>();
  std::string text;
  for (const auto& item : v) {
    if (!text.empty()) text += ',';
    text += item.is_string() ? item.get<std::string>() : item.dump();
  }
  return text;
}

void apply_config_file(const Options& opts, Registry& registry) {
  if (opts.config.empty()) return;
  std::ifstream in(opts.config);
  if (!in) throw UsageError("cannot read config file '" + opts.config + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("config file '" + opts.config + "': " + e.what());
  }
  if (!doc.is_object()) throw UsageError("config file '" + opts.config + "' must hold a JSON object");
  for (const auto& [key, value] : doc.items()) {
    auto it = registry.setters.find(key);
    if (it == registry.setters.end()) throw UsageError("config file: unknown or inapplicable key '" + key + "'");
    if (registry.given(key)) continue;
    try {
      if (key == "values" || key == "rules") {
        it->second(json(list_text(value)));
      } else {
        it->second(value);
      }
    } catch (const json::exception& e) {
      throw UsageError("config file key '" + key + "': " + e.what());
    }
  }
}

SensingConfig scenario(const Options& opts) {
  try {
    return SensingConfig::from_db(opts.users, opts.samples, opts.snr_db, opts.alpha);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

void require_trials(const Options& opts) {
  if (opts.trials < 1) throw UsageError("--trials must be at least 1");
  if (opts.workers < 1) throw UsageError("--workers must be at least 1");
}

RunRecord analytic_record(const Options& opts) {
  scenario(opts);
  if (opts.rule != "optimal") {
    try {
      FusionRule::parse(opts.rule, opts.users);
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  }
  return evaluate_rule(opts.users, opts.samples, opts.snr_db, opts.alpha, opts.rule);
}

void print_header(std::ostream& out, const RunRecord& r) {
  out << "N=" << r.N << " M=" << r.M << " snr_db=" << format_real(r.snr_db) << " alpha=" << format_real(r.alpha)
      << " rule=" << r.rule << " n=" << r.n << " lambda=" << format_real(r.lambda) << '\n';
}

int cmd_optimize(const Options& opts, std::ostream& out) {
  const auto cfg = scenario(opts);
  const auto result = binary_search_opt(cfg);
  const auto check = evaluate_pair(cfg, {result.n_opt, result.lambda_opt});
  out << "n_opt: " << result.n_opt << '\n'
      << "lambda_opt: " << format_real(result.lambda_opt) << '\n'
      << "q_d: " << format_real(result.q_d) << '\n'
      << "q_f_check: " << format_real(check.q_f) << '\n'
      << "evaluations: " << result.evaluations() << '\n';
  if (result.used_fallback) out << "note: exhaustive fallback used\n";
  if (!opts.out.empty()) {
    auto record = evaluate_rule(opts.users, opts.samples, opts.snr_db, opts.alpha, "optimal");
    write_csv_file(opts.out, {record});
  }
  return kExitOk;
}

int cmd_evaluate(const Options& opts, std::ostream& out) {
  auto record = analytic_record(opts);
  print_header(out, record);
  out << "q_f: " << format_real(record.q_f) << '\n' << "q_d: " << format_real(record.q_d) << '\n';
  if (opts.trials > 0) {
    require_trials(opts);
    const auto empirical =
        simulate(record.config(), {record.n, record.lambda}, {opts.trials, opts.seed, opts.workers});
    record.attach(empirical, opts.seed);
    out << "q_f_hat: " << format_real(empirical.q_f_hat) << " (stderr " << format_real(empirical.stderr_f) << ")\n"
        << "q_d_hat: " << format_real(empirical.q_d_hat) << " (stderr " << format_real(empirical.stderr_d) << ")\n";
  }
  if (!opts.out.empty()) write_csv_file(opts.out, {record});
  return kExitOk;
}

void print_validation(std::ostream& out, const ValidationReport& v) {
  auto line = [&](const char* name, double analytic, double empirical, double se, double tol, bool pass) {
    out << name << ": analytic=" << format_real(analytic) << " empirical=" << format_real(empirical)
        << " stderr=" << format_real(se) << " tolerance=" << format_real(tol) << ' ' << (pass ? "PASS" : "FAIL")
        << '\n';
  };
  line("q_f", v.analytic.q_f, v.empirical.q_f_hat, v.empirical.stderr_f, v.tolerance_f, v.pass_f);
  line("q_d", v.analytic.q_d, v.empirical.q_d_hat, v.empirical.stderr_d, v.tolerance_d, v.pass_d);
}

int cmd_simulate(const Options& opts, std::ostream& out) {
  require_trials(opts);
  auto record = analytic_record(opts);
  const auto report =
      validate_against_analytic(record.config(), {record.n, record.lambda}, {opts.trials, opts.seed, opts.workers});
  record.attach(report.empirical, opts.seed);
  print_header(out, record);
  out << "trials=" << opts.trials << " seed=" << opts.seed << '\n';
  print_validation(out, report);
  out << "verdict: " << (report.passed() ? "PASS" : "FAIL") << '\n';
  if (!opts.out.empty()) write_csv_file(opts.out, {record});
  return kExitOk;
}

int cmd_validate(const Options& opts, std::ostream& out) {
  require_trials(opts);
  SweepSpec grid;
  grid.start = opts.start;
  grid.stop = opts.stop;
  grid.step = opts.step;
  if (!(grid.step > 0.0) || !(grid.stop >= grid.start)) throw UsageError("invalid SNR grid");

  std::vector<RunRecord> records;
  bool all_pass = true;
  for (double snr : grid.snr_grid()) {
    Options point = opts;
    point.snr_db = snr;
    auto record = analytic_record(point);
    const auto report = validate_against_analytic(record.config(), {record.n, record.lambda},
                                                  {opts.trials, opts.seed, opts.workers});
    record.attach(report.empirical, opts.seed);
    out << "snr_db=" << format_real(snr) << " n=" << record.n << " qf=" << format_real(report.analytic.q_f)
        << " qf_hat=" << format_real(report.empirical.q_f_hat) << " qd=" << format_real(report.analytic.q_d)
        << " qd_hat=" << format_real(report.empirical.q_d_hat) << ' ' << (report.passed() ? "PASS" : "FAIL")
        << '\n';
    all_pass = all_pass && report.passed();
    records.push_back(std::move(record));
  }
  out << "verdict: " << (all_pass ? "PASS" : "FAIL") << '\n';
  if (!opts.out.empty()) write_csv_file(opts.out, records);
  return all_pass ? kExitOk : kExitFailure;
}

int cmd_sweep(const Options& opts, std::ostream& out) {
  SweepSpec plan;
  try {
    plan.variable = parse_sweep_variable(opts.vary);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  plan.start = opts.start;
  plan.stop = opts.stop;
  plan.step = opts.step;
  plan.values = parse_int_list(opts.values);
  plan.rules = split_list(opts.rules);
  plan.num_users = opts.users;
  plan.num_samples = opts.samples;
  plan.snr_db = opts.snr_db;
  plan.alpha = opts.alpha;
  plan.trials = opts.trials;
  plan.seed = opts.seed;
  plan.workers = opts.workers;
  plan.output_path = opts.out;
  try {
    plan.validate();
    for (const auto& rule : plan.rules) {
      if (rule != "optimal") FusionRule::parse(rule, plan.num_users);
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  const auto records = run_sweep(plan);
  if (opts.out.empty()) {
    write_csv(out, records);
  } else {
    out << "wrote " << records.size() << " rows to " << opts.out << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Neyman-Pearson threshold optimization for hard-decision cooperative spectrum sensing"};
  app.require_subcommand(1);
  Options opts;
  std::map<std::string, Registry> registries;
  std::map<std::string, std::function<int(const Options&, std::ostream&)>> handlers{
      {"optimize", cmd_optimize}, {"evaluate", cmd_evaluate}, {"simulate", cmd_simulate},
      {"sweep", cmd_sweep},       {"validate", cmd_validate}};
  const std::map<std::string, std::string> descriptions{
      {"optimize", "find the optimal global and local thresholds"},
      {"evaluate", "analytic Q_f/Q_d for one rule (optionally simulated)"},
      {"simulate", "Monte Carlo estimate compared against the analytic chain"},
      {"sweep", "CSV sweep over snr_db, n, M or N"},
      {"validate", "Monte Carlo validation over an SNR grid"}};

  for (const auto& [name, description] : descriptions) {
    auto* sub = app.add_subcommand(name, description);
    auto& reg = registries[name];
    reg.add(sub, "users", opts.users, "number of cooperating users N");
    reg.add(sub, "samples", opts.samples, "samples per user M");
    reg.add(sub, "snr-db", opts.snr_db, "average SNR in dB");
    reg.add(sub, "alpha", opts.alpha, "global false-alarm target");
    reg.add(sub, "out", opts.out, "output CSV path");
    if (name != "optimize") {
      reg.add(sub, "trials", opts.trials, "Monte Carlo trials per hypothesis");
      reg.add(sub, "seed", opts.seed, "Monte Carlo seed");
      reg.add(sub, "workers", opts.workers, "worker threads");
    }
    if (name == "evaluate" || name == "simulate" || name == "validate") {
      reg.add(sub, "rule", opts.rule, "optimal | or | and | majority | k:<n>");
    }
    if (name == "sweep" || name == "validate") {
      reg.add(sub, "start", opts.start, "first SNR grid point (dB)");
      reg.add(sub, "stop", opts.stop, "last SNR grid point (dB)");
      reg.add(sub, "step", opts.step, "SNR grid step (dB)");
    }
    if (name == "sweep") {
      reg.add(sub, "vary", opts.vary, "swept variable: snr_db | n | M | N");
      reg.add(sub, "values", opts.values, "comma-separated integer grid for n, M or N");
      reg.add(sub, "rules", opts.rules, "comma-separated rules");
    }
    sub->add_option("--config", opts.config, "JSON file with default flag values");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  const auto* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  auto& reg = registries[name];
  try {
    // Command-specific defaults, then the config file, then explicit flags.
    const bool simulation_command = name == "simulate" || name == "validate";
    if (simulation_command && !reg.given("trials")) opts.trials = 100000;
    if (name == "validate") {
      if (!reg.given("start")) opts.start = -6.0;
      if (!reg.given("stop")) opts.stop = 4.0;
    }
    apply_config_file(opts, reg);
    return handlers.at(name)(opts, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConvergenceError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace coopsense
