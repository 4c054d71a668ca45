#pragma once

// Subcommands compute, sweep, verify and list-measures.

#include <chrono>
#include <ctime>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "engine.hpp"
#include "table.hpp"
#include "verify.hpp"

namespace hdqi::cli {

/// Raw flag values shared by compute and sweep.
struct StateFlags {
  std::string system = "hydrogenic";
  double Z = 1.0, lambda = 1.0;
  int D = 3;
  int n = 0;
  int l = 0;
  std::string mu;
  int m = 0;
  std::string space = "both";
  std::vector<std::string> measures;
  double q = 2.0, alpha = 2.0, beta = 2.0;
  std::string format = "csv";
  bool cross_check = false;
  bool no_timestamp = false;

  CLI::Option *Z_opt = nullptr, *lambda_opt = nullptr, *n_opt = nullptr, *mu_opt = nullptr, *m_opt = nullptr;
};

inline void add_state_flags(CLI::App* app, StateFlags& f) {
  app->add_option("--system", f.system, "hydrogenic or oscillator")->check(CLI::IsMember({"hydrogenic", "oscillator"}));
  f.Z_opt = app->add_option("--Z", f.Z, "nuclear charge (hydrogenic)");
  f.lambda_opt = app->add_option("--lambda", f.lambda, "oscillator strength");
  app->add_option("--D", f.D, "dimension, D >= 2");
  f.n_opt = app->add_option("--n", f.n, "principal (hydrogenic, >= 1) or radial (oscillator, >= 0) quantum number");
  app->add_option("--l", f.l, "grand orbital quantum number");
  f.mu_opt = app->add_option("--mu", f.mu, "comma list mu_2,...,mu_{D-1}");
  f.m_opt = app->add_option("--m", f.m, "set every mu_j to |m|");
  app->add_option("--space", f.space, "position, momentum or both")->check(CLI::IsMember({"position", "momentum", "both"}));
  app->add_option("--measure", f.measures, "measure id (repeatable or comma list)")->delimiter(',');
  app->add_option("--q", f.q, "Renyi / Tsallis order");
  app->add_option("--alpha", f.alpha, "moment order or first LMC-Renyi order");
  app->add_option("--beta", f.beta, "second LMC-Renyi order");
  app->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app->add_flag("--cross-check", f.cross_check, "add closed-form and quadrature columns");
  app->add_flag("--no-timestamp", f.no_timestamp, "omit the timestamp metadata line");
}

inline std::vector<int> parse_mu(const std::string& list) {
  std::vector<int> mu;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      mu.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DomainError("--mu entry '" + item + "' is not an integer");
    }
  }
  return mu;
}

inline Request to_request(const StateFlags& f) {
  Request r;
  r.system = f.system == "oscillator" ? System::oscillator : System::hydrogenic;
  if (f.Z_opt->count()) r.Z = f.Z;
  if (f.lambda_opt->count()) r.lambda = f.lambda;
  r.D = f.D;
  if (f.n_opt->count()) r.n = f.n;
  r.l = f.l;
  if (f.mu_opt->count()) r.mu = parse_mu(f.mu);
  if (f.m_opt->count()) r.m = f.m;
  r.measures = f.measures;
  r.space = parse_space(f.space);
  r.params.q = f.q;
  r.params.alpha = f.alpha;
  r.params.beta = f.beta;
  r.cross_check = f.cross_check;
  return r;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string command_line(int argc, const char* const* argv) {
  std::string s;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) s += ' ';
    s += argv[i];
  }
  return s;
}

inline std::map<std::string, std::string> make_meta(const StateFlags& f, const Request& r, const std::string& command) {
  std::map<std::string, std::string> meta;
  meta["schema_version"] = std::to_string(kSchemaVersion);
  meta["command"] = command;
  if (!f.no_timestamp) meta["timestamp"] = utc_timestamp();
  if (r.predict) meta["residual_convention"] = residual_conventions(r);
  return meta;
}

/// Applies a flat "key = value" file to `app`.  Keys mirror long flag names;
/// a flag given on the command line wins over the file.
inline void apply_config_file(CLI::App* app, const std::string& path) {
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_file(path);
  } catch (const CLI::Error& e) {
    throw DomainError("cannot read config file '" + path + "': " + e.what());
  }
  // Repeated keys (measure = a, measure = b) accumulate.
  std::map<std::string, std::vector<std::string>> values;
  std::vector<std::string> order;
  for (const CLI::ConfigItem& it : items) {
    if (it.name == "++" || it.name == "--") continue;  // section markers
    std::string key = it.name;
    for (auto p = it.parents.rbegin(); p != it.parents.rend(); ++p) key = *p + "." + key;
    if (!values.count(key)) order.push_back(key);
    auto& v = values[key];
    v.insert(v.end(), it.inputs.begin(), it.inputs.end());
  }
  for (const std::string& key : order) {
    if (key == "config") throw DomainError("config files cannot include other config files");
    CLI::Option* opt = app->get_option_no_throw("--" + key);
    if (!opt) throw DomainError("unknown config key '" + key + "' in " + path);
    if (opt->count() > 0) continue;
    std::vector<std::string>& v = values[key];
    // The INI reader splits "3,5" into two items; scalar options take the list whole.
    if (opt->get_items_expected_max() <= 1 && v.size() > 1) {
      std::string joined;
      for (const std::string& s : v) joined += (joined.empty() ? "" : ",") + s;
      v = {joined};
    }
    opt->add_result(v);
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw DomainError("config key '" + key + "': " + e.what());
    }
  }
}

inline int report(std::ostream& err, const Failure& f) {
  err << f.line() << '\n';
  return f.code;
}

inline int list_measures(std::ostream& out) {
  for (const MeasureInfo& m : measure_catalogue()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-16s %-9s %-11s ", std::string(m.id).c_str(),
                  m.per_space ? "per-space" : "combined", m.params.empty() ? "-" : std::string(m.params).c_str());
    out << buf << m.description << '\n';
  }
  return kOk;
}

inline int run_compute(const StateFlags& f, const std::string& command, std::ostream& out, std::ostream& err) {
  Request r = to_request(f);
  check_measures(r);
  const QuantumState s = r.state_at(r.D);
  const PointResult result = evaluate_rows(r, s, false);
  if (result.failure && result.failure->code != kNonConvergence) return report(err, *result.failure);
  Table t{make_meta(f, r, command), result.rows};
  if (f.format == "json") write_json(out, t);
  else write_csv(out, t);
  return result.failure ? report(err, *result.failure) : kOk;
}

struct SweepFlags {
  std::string vary = "D";
  std::string values;
  std::string range;
  bool predict = false;
  bool keep_going = false;
  int threads = 0;
  std::string config;
  CLI::Option *values_opt = nullptr, *range_opt = nullptr;
};

inline int run_sweep_command(const StateFlags& f, const SweepFlags& sf, const std::string& command, std::ostream& out,
                             std::ostream& err) {
  SweepSpec spec;
  spec.request = to_request(f);
  spec.request.predict = sf.predict;
  spec.variable = parse_variable(sf.vary);
  if (sf.values_opt->count() == sf.range_opt->count())
    throw DomainError("give exactly one of --values and --range");
  spec.values = normalize_sweep_values(sf.values_opt->count() ? parse_value_list(sf.values) : parse_range(sf.range),
                                       spec.variable);
  if (spec.variable == SweepVariable::D && !spec.request.mu.empty())
    throw DomainError("--mu has a fixed length; use --m when sweeping D");
  if (spec.variable == SweepVariable::q && !spec.request.measures.empty()) {
    for (const std::string& name : spec.request.measures) {
      MeasureParams p;
      if (!uses_param(resolve_measure(name, p), "q"))
        throw DomainError("measure '" + name + "' does not depend on q");
    }
  }
  if (spec.variable == SweepVariable::alpha) {
    for (const std::string& name : spec.request.measures) {
      MeasureParams p;
      if (!uses_param(resolve_measure(name, p), "alpha") || name != resolve_measure(name, p).id)
        throw DomainError("measure '" + name + "' does not take a swept alpha");
    }
  }
  check_measures(spec.request);
  spec.keep_going = sf.keep_going;
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  spec.threads = sf.threads > 0 ? sf.threads : static_cast<int>(hw);

  const auto meta = make_meta(f, spec.request, command);
  std::optional<Failure> failure;
  if (f.format == "json") {
    Table t{meta, {}};
    failure = run_sweep(spec, [&](std::vector<OutputRow>&& rows) {
      for (auto& r : rows) t.rows.push_back(std::move(r));
    });
    write_json(out, t);
  } else {
    write_csv_header(out, meta);
    out.flush();
    failure = run_sweep(spec, [&](std::vector<OutputRow>&& rows) {
      for (const OutputRow& r : rows) write_csv_row(out, r);
      out.flush();
    });
  }
  return failure ? report(err, *failure) : kOk;
}

inline int run_verify(const std::string& suite, const std::string& matrix, std::ostream& out) {
  const auto results = run_suite(suite, parse_matrix(matrix));
  print_report(out, results);
  for (const PropertyResult& r : results)
    if (!r.pass) return kVerificationFailed;
  return kOk;
}

/// Entry point; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Spreading, entropy and complexity measures of D-dimensional hydrogenic and oscillator states"};
  app.require_subcommand(1);

  StateFlags compute_flags;
  CLI::App* compute = app.add_subcommand("compute", "evaluate measures for one state");
  add_state_flags(compute, compute_flags);

  StateFlags sweep_flags;
  SweepFlags sf;
  CLI::App* sweep = app.add_subcommand("sweep", "evaluate measures over a range of D, q or alpha");
  add_state_flags(sweep, sweep_flags);
  sweep->add_option("--vary", sf.vary, "swept variable: D, q or alpha")->check(CLI::IsMember({"D", "q", "alpha"}));
  sf.values_opt = sweep->add_option("--values", sf.values, "comma list of values");
  sf.range_opt = sweep->add_option("--range", sf.range, "start:stop:count[:log]");
  sweep->add_flag("--predict", sf.predict, "add the leading-order prediction and its residual");
  sweep->add_flag("--keep-going", sf.keep_going, "record failed rows and continue");
  sweep->add_option("--threads", sf.threads, "worker threads (default: hardware concurrency)");
  sweep->add_option("--config", sf.config, "flat key = value file mirroring the flags");

  std::string suite = "all", matrix = "full";
  CLI::App* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("--suite", suite, "bounds, uncertainty, crosscheck, asymptotics, properties or all");
  verify->add_option("--matrix", matrix, "state grid: small or full");

  app.add_subcommand("list-measures", "list measure ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return report(err, make_failure(kInvalidInput, e.what()));
  }

  const std::string command = command_line(argc, argv);
  try {
    if (compute->parsed()) return run_compute(compute_flags, command, out, err);
    if (sweep->parsed()) {
      if (!sf.config.empty()) apply_config_file(sweep, sf.config);
      return run_sweep_command(sweep_flags, sf, command, out, err);
    }
    if (verify->parsed()) return run_verify(suite, matrix, out);
    return list_measures(out);
  } catch (...) {
    return report(err, classify(std::current_exception()));
  }
}

}  // namespace hdqi::cli
