#pragma once

// Turns command-line requests into output rows.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hdqi/asymptotics.hpp"
#include "hdqi/errors.hpp"
#include "hdqi/measures.hpp"
#include "hdqi/state.hpp"
#include "table.hpp"

namespace hdqi::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kInvalidInput = 2, kDivergence = 3, kNonConvergence = 4 };

struct Failure {
  int code = kOk;
  std::string kind;
  std::string message;

  /// Single machine-parsable line: "error: <kind>: <message>".
  std::string line() const { return "error: " + kind + ": " + single_line(message); }
};

inline Failure make_failure(int code, std::string message) {
  static const char* kinds[] = {"ok", "verification_failed", "invalid_input", "divergence", "nonconvergence"};
  return {code, kinds[code], std::move(message)};
}

/// Maps a library exception to its exit code.
inline Failure classify(const std::exception_ptr& ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const DivergenceError& e) {
    return make_failure(kDivergence, e.what());
  } catch (const ConvergenceError& e) {
    return make_failure(kNonConvergence, e.what());
  } catch (const std::exception& e) {
    return make_failure(kInvalidInput, e.what());
  }
}

enum class SpaceChoice { position, momentum, both };

inline SpaceChoice parse_space(const std::string& s) {
  if (s == "position") return SpaceChoice::position;
  if (s == "momentum") return SpaceChoice::momentum;
  if (s == "both") return SpaceChoice::both;
  throw DomainError("space must be position, momentum or both");
}

/// State and measure selection shared by compute and sweep.
struct Request {
  System system = System::hydrogenic;
  std::optional<double> Z, lambda;
  int D = 3;
  std::optional<int> n;
  int l = 0;
  std::vector<int> mu;
  std::optional<int> m;  // shorthand: every mu_j = |m|
  std::vector<std::string> measures;
  SpaceChoice space = SpaceChoice::both;
  MeasureParams params;
  bool cross_check = false;
  bool predict = false;

  double strength() const {
    if (system == System::hydrogenic) {
      if (lambda) throw DomainError("--lambda applies to the oscillator only");
      return Z.value_or(1.0);
    }
    if (Z) throw DomainError("--Z applies to the hydrogenic system only");
    return lambda.value_or(1.0);
  }

  QuantumState state_at(int dim) const {
    if (!mu.empty() && m) throw DomainError("give either --mu or --m, not both");
    QuantumState s{system, strength(), dim, n.value_or(system == System::hydrogenic ? 1 : 0), l, mu};
    if (m) {
      if (*m < 0) throw DomainError("--m takes |m| >= 0");
      if (dim > 2) s.mu.assign(static_cast<std::size_t>(dim - 2), *m);
    }
    return validate(s);
  }

  StateTemplate state_template(const QuantumState& s) const {
    return {s.system, s.strength, s.n, s.l, s.abs_m()};
  }
};

inline bool uses_param(const MeasureInfo& info, std::string_view p) {
  std::string_view rest = info.params;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    if (rest.substr(0, comma) == p) return true;
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return false;
}

/// Checks that every measure name resolves (and, with --predict, has a model).
inline void check_measures(const Request& r) {
  if (r.measures.empty()) throw DomainError("at least one --measure is required");
  for (const std::string& name : r.measures) {
    MeasureParams p = r.params;
    const MeasureInfo& info = resolve_measure(name, p);
    if (r.predict) {
      const std::optional<Space> sp = info.per_space ? std::optional<Space>(Space::position) : std::nullopt;
      asymptotic_prediction(name, StateTemplate{r.system, 1.0, 1, 0, 0}, sp, p);
    }
  }
}

/// Marks a row as failed; value columns stay empty.
inline void mark_failed(OutputRow& row, const Failure& f) {
  row.method.clear();
  row.value.reset();
  row.abs_error.reset();
  row.predicted.reset();
  row.residual.reset();
  row.closed.reset();
  row.quadrature.reset();
  row.relative_difference.reset();
  row.converged = f.code != kNonConvergence;
  row.status = f.kind + ": " + single_line(f.message);
}

struct PointResult {
  std::vector<OutputRow> rows;
  std::optional<Failure> failure;  // first failure in row order
};

/// All rows for one state: one per (measure, space); measures that combine
/// both spaces give a single row with space "both".  A value that did not
/// converge counts as a non-convergence failure but keeps its row.  With
/// keep_going, failed rows are recorded and evaluation continues; otherwise
/// evaluation stops at the first failure.
inline PointResult evaluate_rows(const Request& r, const QuantumState& s, bool keep_going = false) {
  PointResult out;
  for (const std::string& name : r.measures) {
    MeasureParams p = r.params;
    const MeasureInfo& info = resolve_measure(name, p);
    std::vector<std::optional<Space>> spaces;
    if (!info.per_space) {
      spaces.push_back(std::nullopt);
    } else {
      if (r.space != SpaceChoice::momentum) spaces.push_back(Space::position);
      if (r.space != SpaceChoice::position) spaces.push_back(Space::momentum);
    }
    for (const auto& sp : spaces) {
      OutputRow row;
      row.system = std::string(to_string(s.system));
      row.strength = s.strength;
      row.D = s.D;
      row.n = s.n;
      row.l = s.l;
      row.mu = s.mu;
      row.measure = name;
      row.space = sp ? std::string(to_string(*sp)) : "both";
      if (uses_param(info, "q")) row.q = p.q;
      if (uses_param(info, "alpha")) row.alpha = p.alpha;
      if (uses_param(info, "beta")) row.beta = p.beta;

      std::optional<Failure> failure;
      try {
        const Evaluation e = evaluate_measure(name, s, sp.value_or(Space::position), p, r.cross_check);
        row.method = std::string(to_string(e.method));
        row.value = e.value;
        row.abs_error = e.abs_error;
        row.converged = e.converged;
        if (e.closed) row.closed = e.closed;
        if (e.quadrature) row.quadrature = e.quadrature;
        if (e.closed && e.quadrature)
          row.relative_difference = std::abs(*e.quadrature - *e.closed) / std::abs(*e.closed);
        if (r.predict) {
          const AsymptoticPrediction pred = asymptotic_prediction(name, r.state_template(s), sp, p);
          row.predicted = pred.evaluate(s.D);
          row.residual = residual_of(pred, e.value, *row.predicted, s.D);
        }
        if (!e.converged) {
          failure = make_failure(kNonConvergence, name + " (" + row.space + ") did not reach the requested tolerance");
          row.status = "nonconvergence";
        }
      } catch (...) {
        failure = classify(std::current_exception());
        mark_failed(row, *failure);
      }
      out.rows.push_back(std::move(row));
      if (failure) {
        if (!out.failure) out.failure = failure;
        if (!keep_going) return out;
      }
    }
  }
  return out;
}

/// "measure:convention" pairs describing the residual column.
inline std::string residual_conventions(const Request& r) {
  std::string out;
  for (const std::string& name : r.measures) {
    MeasureParams p = r.params;
    const MeasureInfo& info = resolve_measure(name, p);
    const std::optional<Space> sp = info.per_space ? std::optional<Space>(Space::position) : std::nullopt;
    const AsymptoticPrediction pred = asymptotic_prediction(name, StateTemplate{r.system, 1.0, 1, 0, 0}, sp, p);
    if (!out.empty()) out += ';';
    out += name + ":" + std::string(to_string(pred.residual));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepVariable { D, q, alpha };

inline SweepVariable parse_variable(const std::string& s) {
  if (s == "D") return SweepVariable::D;
  if (s == "q") return SweepVariable::q;
  if (s == "alpha") return SweepVariable::alpha;
  throw DomainError("--vary must be D, q or alpha");
}

/// "start:stop:count[:log]" -> count points from start to stop inclusive,
/// evenly or geometrically spaced.
inline std::vector<double> parse_range(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3 && parts.size() != 4) throw DomainError("range must be start:stop:count[:log]");
  double a = 0, b = 0;
  int count = 0;
  try {
    a = std::stod(parts[0]);
    b = std::stod(parts[1]);
    count = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw DomainError("range '" + spec + "' is not numeric");
  }
  bool log = false;
  if (parts.size() == 4) {
    if (parts[3] == "log") log = true;
    else if (parts[3] != "linear") throw DomainError("range scale must be linear or log");
  }
  if (count < 1) throw DomainError("range count must be positive");
  if (log && !(a > 0 && b > 0)) throw DomainError("log range needs positive endpoints");
  std::vector<double> v;
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    v.push_back(log ? std::exp(std::log(a) + t * (std::log(b) - std::log(a))) : a + t * (b - a));
  }
  return v;
}

inline std::vector<double> parse_value_list(const std::string& list) {
  std::vector<double> v;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DomainError("value '" + item + "' is not numeric");
    }
  }
  return v;
}

/// Rounds D values and checks that the list is non-empty and strictly increasing.
inline std::vector<double> normalize_sweep_values(std::vector<double> v, SweepVariable var) {
  if (v.empty()) throw DomainError("sweep needs at least one value");
  if (var == SweepVariable::D)
    for (double& x : v) x = std::round(x);
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) throw DomainError("sweep values must be strictly increasing");
  return v;
}

/// Runs fn(i) for i in [0, count) on up to `threads` workers and hands the
/// results to `sink` in index order.  After a failure with keep_going false,
/// later points are skipped.
template <class Fn, class Sink>
void run_ordered(std::size_t count, int threads, bool keep_going, Fn&& fn, Sink&& sink) {
  std::vector<std::promise<PointResult>> promises(count);
  std::vector<std::future<PointResult>> futures;
  futures.reserve(count);
  for (auto& p : promises) futures.push_back(p.get_future());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      PointResult r;
      if (!stop.load()) {
        try {
          r = fn(i);
        } catch (...) {
          r.failure = classify(std::current_exception());
        }
        if (r.failure && !keep_going) stop.store(true);
      }
      promises[i].set_value(std::move(r));
    }
  };
  const int n_workers = std::max(1, std::min<int>(threads, static_cast<int>(count)));
  std::vector<std::thread> pool;
  for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  bool halted = false;
  for (std::size_t i = 0; i < count; ++i) {
    PointResult r = futures[i].get();
    if (halted) continue;
    const bool failed = r.failure.has_value();
    sink(i, std::move(r));
    if (failed && !keep_going) halted = true;
  }
  for (auto& th : pool) th.join();
}

struct SweepSpec {
  Request request;
  SweepVariable variable = SweepVariable::D;
  std::vector<double> values;
  bool keep_going = false;
  int threads = 1;
};

/// Rows for sweep point i.  An invalid state at this point becomes one
/// failed row per measure.
inline PointResult sweep_point(const SweepSpec& spec, std::size_t i) {
  Request r = spec.request;
  int D = r.D;
  const double v = spec.values[i];
  switch (spec.variable) {
    case SweepVariable::D: D = static_cast<int>(v); break;
    case SweepVariable::q: r.params.q = v; break;
    case SweepVariable::alpha: r.params.alpha = v; break;
  }
  try {
    return evaluate_rows(r, r.state_at(D), spec.keep_going);
  } catch (...) {
    PointResult out;
    out.failure = classify(std::current_exception());
    for (const std::string& name : r.measures) {
      OutputRow row;
      row.system = std::string(to_string(r.system));
      row.strength = r.strength();
      row.D = D;
      row.n = r.n.value_or(0);
      row.l = r.l;
      row.mu = r.mu;
      row.measure = name;
      row.space = "both";
      mark_failed(row, *out.failure);
      out.rows.push_back(std::move(row));
      if (!spec.keep_going) break;
    }
    return out;
  }
}

/// Runs the sweep, passing each point's rows to `emit` in sweep order.
/// Returns the first failure, if any.
inline std::optional<Failure> run_sweep(const SweepSpec& spec,
                                        const std::function<void(std::vector<OutputRow>&&)>& emit) {
  std::optional<Failure> first;
  run_ordered(
      spec.values.size(), spec.threads, spec.keep_going, [&](std::size_t i) { return sweep_point(spec, i); },
      [&](std::size_t, PointResult&& r) {
        if (r.failure && !first) first = r.failure;
        emit(std::move(r.rows));
      });
  return first;
}

}  // namespace hdqi::cli
