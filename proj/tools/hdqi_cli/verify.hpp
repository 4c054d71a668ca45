#pragma once

// Verification suites run by `verify`.  Each property reports its worst
// margin; a property passes when that margin is at least its threshold.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "engine.hpp"
#include "hdqi/asymptotics.hpp"
#include "hdqi/complexity.hpp"
#include "hdqi/density.hpp"
#include "hdqi/infomeasures.hpp"
#include "hdqi/integrate.hpp"
#include "hdqi/moments.hpp"
#include "hdqi/quadrature.hpp"
#include "hdqi/specfun.hpp"
#include "table.hpp"

namespace hdqi::cli {

struct PropertyResult {
  std::string suite;
  std::string name;
  bool pass = true;
  double worst_margin = std::numeric_limits<double>::infinity();
  double threshold = 0.0;
  std::string worst_case;
  int checked = 0;
  double seconds = 0.0;
};

enum class Matrix { small, full };

inline Matrix parse_matrix(const std::string& s) {
  if (s == "small") return Matrix::small;
  if (s == "full") return Matrix::full;
  throw DomainError("--matrix must be small or full");
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"bounds", "uncertainty", "crosscheck", "asymptotics", "properties"};
  return names;
}

inline std::string describe(const QuantumState& s) {
  std::ostringstream os;
  os << (s.system == System::hydrogenic ? "H" : "O") << "(";
  if (s.strength != 1.0) os << (s.system == System::hydrogenic ? "Z=" : "lambda=") << s.strength << ",";
  os << "D=" << s.D << ",n=" << s.n << ",l=" << s.l << ",m=" << s.abs_m() << ")";
  return os.str();
}

/// Test states: every (n, l, |m|) with n <= 4, l <= 3, |m| <= l and the
/// magnetic chain mu_2 = ... = mu_{D-1} = |m|, for both systems.
inline std::vector<QuantumState> state_matrix(Matrix m) {
  const std::vector<int> dims =
      m == Matrix::full ? std::vector<int>{2, 3, 4, 5, 7, 10, 20, 50, 100} : std::vector<int>{2, 3, 5, 10, 50};
  const int n_max = m == Matrix::full ? 4 : 3;
  const int l_max = m == Matrix::full ? 3 : 2;
  std::vector<QuantumState> out;
  for (int D : dims) {
    for (System sys : {System::hydrogenic, System::oscillator}) {
      const int n_lo = sys == System::hydrogenic ? 1 : 0;
      for (int n = n_lo; n <= n_max; ++n) {
        for (int l = 0; l <= l_max; ++l) {
          if (sys == System::hydrogenic && l > n - 1) continue;
          // In D = 2 the state is fixed by l alone.
          const int m_hi = D == 2 ? 0 : l;
          for (int am = 0; am <= m_hi; ++am) out.push_back(StateTemplate{sys, 1.0, n, l, am}.at(D));
        }
      }
    }
  }
  return out;
}

/// Accumulates margins for one property.
class Property {
 public:
  Property(std::string suite, std::string name, double threshold) {
    r_.suite = std::move(suite);
    r_.name = std::move(name);
    r_.threshold = threshold;
  }

  void add(double margin, const std::string& where) {
    ++r_.checked;
    if (std::isnan(margin)) margin = -std::numeric_limits<double>::infinity();
    if (margin < r_.worst_margin || r_.checked == 1) {
      r_.worst_margin = margin;
      r_.worst_case = where;
    }
  }

  /// Records an agreement check: margin = -|error|.
  void agree(double error, const std::string& where) { add(-std::abs(error), where); }

  /// Runs fn, turning an exception into a failed case.
  void guard(const std::string& where, const std::function<void()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    try {
      fn();
    } catch (const std::exception& e) {
      add(-std::numeric_limits<double>::infinity(), where + ": " + single_line(e.what()));
    }
    r_.seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }

  PropertyResult finish() {
    r_.pass = r_.checked > 0 && r_.worst_margin >= r_.threshold;
    return r_;
  }

 private:
  PropertyResult r_;
};

inline double relative_error(double value, double reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), std::numeric_limits<double>::min());
}

/// Absolute error for entropies of order one, relative beyond.
inline double entropy_error(double value, double reference) {
  return std::abs(value - reference) / std::max(1.0, std::abs(reference));
}

constexpr Space kSpaces[] = {Space::position, Space::momentum};

// ---------------------------------------------------------------------------
// bounds

inline std::vector<PropertyResult> suite_bounds(Matrix m) {
  const auto states = state_matrix(m);
  Property cr("bounds", "cramer_rao_ge_D2", -1e-9);
  Property fs("bounds", "fisher_shannon_ge_D", -1e-9);
  Property lm("bounds", "lmc_renyi_ge_1", -1e-9);
  Property mono("bounds", "lmc_renyi_increasing_in_beta", 0.0);
  for (const QuantumState& s : states) {
    for (Space sp : kSpaces) {
      const std::string where = describe(s) + " " + std::string(to_string(sp));
      cr.guard(where, [&] {
        const ComplexityValue c = cramer_rao(s, sp);
        cr.add(c.margin / c.lower_bound, where);
      });
      fs.guard(where, [&] {
        const ComplexityValue c = fisher_shannon(s, sp);
        fs.add(c.margin / c.lower_bound, where);
      });
      lm.guard(where, [&] {
        lm.add(lmc(s, sp).margin, where + " (1,2)");
        lm.add(lmc_renyi(s, sp, 0.5, 3.0).margin, where + " (0.5,3)");
      });
      if (s.D > 20) continue;
      mono.guard(where, [&] {
        double prev = 1.0;
        for (double b : {1.0, 2.0, 3.0, 5.0}) {
          const double c = lmc_renyi(s, sp, 0.5, b).value;
          mono.add(c - prev, where + " beta=" + format_short(b));
          prev = c;
        }
      });
    }
  }
  return {cr.finish(), fs.finish(), lm.finish(), mono.finish()};
}

// ---------------------------------------------------------------------------
// uncertainty

struct ConjugatePair {
  double p, q;
};

inline const std::vector<ConjugatePair>& conjugate_pairs() {
  static const std::vector<ConjugatePair> pairs = {{2.0, 2.0 / 3.0}, {3.0, 0.6}, {1.2, 6.0 / 7.0}};
  return pairs;
}

inline std::vector<PropertyResult> suite_uncertainty(Matrix m) {
  const auto states = state_matrix(m);
  Property sh("uncertainty", "shannon_sum_ge_D(1+ln pi)", -1e-9);
  Property re("uncertainty", "renyi_sum_ge_bound", -1e-9);
  // F[rho] F[gamma] >= 4 D^2 is proven for real wavefunctions; with complex
  // harmonics (|m| > 0) the product can fall below it, so only m = 0 states
  // enter here.
  Property fi("uncertainty", "fisher_product_ge_4D2_real_states", -1e-9);
  Property he("uncertainty", "heisenberg_ge_D2/4", -1e-9);
  Property sat("uncertainty", "oscillator_ground_saturates", -1e-9);
  for (const QuantumState& s : states) {
    const std::string where = describe(s);
    sh.guard(where, [&] {
      const double sum = shannon(s, Space::position).total + shannon(s, Space::momentum).total;
      sh.add(sum - shannon_sum_bound(s.D), where);
    });
    re.guard(where, [&] {
      for (const auto& [p, q] : conjugate_pairs()) {
        const double a = renyi(s, Space::position, p).total + renyi(s, Space::momentum, q).total;
        re.add(a - renyi_sum_bound(s.D, p, q), where + " R_" + format_short(p) + "[rho]");
        const double b = renyi(s, Space::position, q).total + renyi(s, Space::momentum, p).total;
        re.add(b - renyi_sum_bound(s.D, p, q), where + " R_" + format_short(q) + "[rho]");
      }
    });
    if (s.abs_m() == 0) fi.guard(where, [&] {
      const double f = fisher_closed(s, Space::position) * fisher_closed(s, Space::momentum);
      fi.add(f / (4.0 * s.D * s.D) - 1.0, where);
    });
    he.guard(where, [&] { he.add(heisenberg_product(s, 2.0).value / (0.25 * s.D * s.D) - 1.0, where); });
  }
  for (int D : {2, 3, 5, 10, 50, 100, 500}) {
    for (double lam : {0.5, 1.0, 3.0}) {
      const QuantumState s = QuantumState::oscillator(lam, D, 0, 0);
      const std::string where = describe(s);
      sat.guard(where, [&] {
        const double sum = shannon(s, Space::position).total + shannon(s, Space::momentum).total;
        sat.agree((sum - shannon_sum_bound(D)) / shannon_sum_bound(D), where + " shannon");
        const double f = fisher_closed(s, Space::position) * fisher_closed(s, Space::momentum);
        sat.agree(f / (4.0 * D * D) - 1.0, where + " fisher");
      });
    }
  }
  return {sh.finish(), re.finish(), fi.finish(), he.finish(), sat.finish()};
}

// ---------------------------------------------------------------------------
// crosscheck

inline std::vector<PropertyResult> suite_crosscheck(Matrix m) {
  const auto states = state_matrix(m);
  Property mom("crosscheck", "moment_closed_vs_quadrature", -1e-8);
  Property heis("crosscheck", "heisenberg_closed_values", -1e-12);
  Property fmo("crosscheck", "fisher_closed_vs_moment_identity", -1e-7);
  Property fgr("crosscheck", "fisher_closed_vs_gradient", -1e-7);
  for (const QuantumState& s : states) {
    const std::string where = describe(s);
    for (Space sp : kSpaces) {
      const std::string w = where + " " + std::string(to_string(sp));
      for (double a : {-2.0, 2.0}) {
        if (!moment_range(s, sp).contains(a)) continue;
        const auto closed = try_closed_moment(s, sp, a);
        if (!closed) continue;
        mom.guard(w, [&] {
          mom.agree(relative_error(quadrature_moment(s, sp, a).value, *closed), w + " alpha=" + format_short(a));
        });
      }
      fmo.guard(w, [&] { fmo.agree(relative_error(fisher_via_moments(s, sp).value, fisher_closed(s, sp)), w); });
      fgr.guard(w, [&] { fgr.agree(relative_error(fisher_gradient(s, sp).value, fisher_closed(s, sp)), w); });
    }
    if (s.system == System::oscillator) {
      heis.guard(where, [&] {
        const double e = 2.0 * s.n + s.l + 0.5 * s.D;
        heis.agree(relative_error(heisenberg_product(s, 2.0).value, e * e), where);
      });
    }
  }
  const QuantumState h = QuantumState::hydrogenic(1.0, 3, 1, 0);
  heis.guard(describe(h), [&] { heis.agree(relative_error(heisenberg_product(h, 2.0).value, 3.0), describe(h)); });
  return {mom.finish(), heis.finish(), fmo.finish(), fgr.finish()};
}

// ---------------------------------------------------------------------------
// asymptotics

struct ScanCase {
  std::string measure;
  std::optional<Space> space;
  MeasureParams params;
};

/// Quantities whose ratio to the leading-order prediction tends to 1 as 1/D.
inline std::vector<ScanCase> saturation_cases() {
  std::vector<ScanCase> cases;
  for (double a : {1.0, 2.0, 3.0}) {
    MeasureParams p;
    p.alpha = a;
    cases.push_back({"heisenberg", std::nullopt, p});
  }
  cases.push_back({"fisher_product", std::nullopt, {}});
  for (Space sp : kSpaces) {
    cases.push_back({"cramer_rao", sp, {}});
    cases.push_back({"fisher_shannon", sp, {}});
  }
  cases.push_back({"shannon_sum", std::nullopt, {}});
  for (const auto& pair : conjugate_pairs()) {
    MeasureParams p;
    p.q = pair.p;
    cases.push_back({"renyi_sum", std::nullopt, p});
  }
  return cases;
}

inline std::vector<StateTemplate> saturation_templates() {
  return {{System::hydrogenic, 1.0, 1, 0, 0},
          {System::hydrogenic, 1.0, 3, 1, 1},
          {System::oscillator, 1.0, 0, 0, 0},
          {System::oscillator, 1.0, 1, 1, 0}};
}

inline std::string describe(const StateTemplate& t) {
  std::ostringstream os;
  os << (t.system == System::hydrogenic ? "H" : "O") << "(n=" << t.n << ",l=" << t.l << ",m=" << t.m << ")";
  return os.str();
}

inline std::string describe(const ScanCase& c) {
  std::string s = c.measure;
  if (c.measure == "heisenberg") s += " alpha=" + format_short(c.params.alpha);
  if (c.measure == "renyi_sum") s += " p=" + format_short(c.params.q);
  if (c.space) s += " " + std::string(to_string(*c.space));
  return s;
}

/// Slope of (exact - predicted) against ln D for hydrogenic R_2[rho].
inline double entropy_residual_slope(const StateTemplate& t, const std::vector<int>& dims) {
  MeasureParams p;
  p.q = 2.0;
  const AsymptoticPrediction pred = asymptotic_prediction("renyi", t, Space::position, p);
  std::vector<double> x, y;
  for (int D : dims) {
    x.push_back(std::log(D));
    y.push_back(renyi(t.at(D), Space::position, 2.0).total - pred.evaluate(D));
  }
  return least_squares_slope(x, y);
}

constexpr double kRateLow = -1.6;
constexpr double kRateHigh = -0.6;
/// Bound on the slope of the R_2 residual against ln D: half the ln D
/// coefficient q/(q-1) = 2 that a wrong third-term sign would leave behind.
constexpr double kEntropyResidualSlope = 1.0;

inline std::vector<PropertyResult> suite_asymptotics(Matrix m) {
  Property rates("asymptotics", "saturation_rate_in_[-1.6,-0.6]", 0.0);
  Property disc("asymptotics", "lmc_renyi_discrimination", 0.0);
  Property square("asymptotics", "hydrogenic_limit_is_oscillator_squared", -1e-14);
  Property growth("asymptotics", "renyi2_residual_slope_vs_lnD_le_1", 0.0);
  Property indep("asymptotics", "hyperquantum_independence_at_D1000", 0.0);

  for (const StateTemplate& t : saturation_templates()) {
    for (const ScanCase& c : saturation_cases()) {
      const std::string where = describe(t) + " " + describe(c);
      rates.guard(where, [&] {
        const ScanResult r = convergence_scan(c.measure, t, c.space, default_scan_dimensions(), c.params);
        if (r.exact_saturation) {
          rates.add(0.0, where + " (exact)");
        } else {
          // Distance inside the window; negative outside.
          rates.add(std::min(r.fitted_rate - kRateLow, kRateHigh - r.fitted_rate), where);
        }
      });
    }
  }

  // LMC-Renyi (1,2) at D = 1000: within 5% of the own limit and closer to it
  // than to the other system's.
  {
    const int D = 1000;
    const double hyd_pos = hdqi::detail::lmc_renyi_limit(System::hydrogenic, Space::position, 1.0, 2.0);
    const double osc_pos = hdqi::detail::lmc_renyi_limit(System::oscillator, Space::position, 1.0, 2.0);
    const double hyd_mom = hdqi::detail::lmc_renyi_limit(System::hydrogenic, Space::momentum, 1.0, 2.0);
    struct Item {
      StateTemplate t;
      Space sp;
      double own, other;
    };
    const std::vector<Item> items = {{{System::hydrogenic, 1.0, 1, 0, 0}, Space::position, hyd_pos, osc_pos},
                                     {{System::hydrogenic, 1.0, 2, 1, 0}, Space::position, hyd_pos, osc_pos},
                                     {{System::oscillator, 1.0, 0, 0, 0}, Space::position, osc_pos, hyd_pos},
                                     {{System::oscillator, 1.0, 1, 1, 1}, Space::position, osc_pos, hyd_pos},
                                     {{System::hydrogenic, 1.0, 1, 0, 0}, Space::momentum, hyd_mom, osc_pos}};
    for (const Item& it : items) {
      const std::string where = describe(it.t) + " " + std::string(to_string(it.sp));
      disc.guard(where, [&] {
        const double c = lmc(it.t.at(D), it.sp).value;
        disc.add(0.05 - relative_error(c, it.own), where + " within 5%");
        disc.add(std::abs(c - it.other) - std::abs(c - it.own), where + " closer to own limit");
      });
    }
  }

  for (const auto& [a, b] : std::vector<std::pair<double, double>>{{1.0, 2.0}, {0.5, 2.0}, {2.0, 3.0}, {0.5, 5.0}}) {
    const double h = hdqi::detail::lmc_renyi_limit(System::hydrogenic, Space::position, a, b);
    const double o = hdqi::detail::lmc_renyi_limit(System::oscillator, Space::position, a, b);
    const std::string where = "alpha=" + format_short(a) + " beta=" + format_short(b);
    square.guard(where, [&] { square.agree(relative_error(h, o * o), where); });
  }

  {
    const std::vector<int> dims = {100, 200, 500, 1000};
    const int l_max = m == Matrix::full ? 3 : 2;
    for (int l = 0; l <= l_max; ++l) {
      for (int k : {0, 1}) {
        const StateTemplate t{System::hydrogenic, 1.0, l + 1 + k, l, 0};
        const std::string where = describe(t);
        growth.guard(where, [&] { growth.add(kEntropyResidualSlope - std::abs(entropy_residual_slope(t, dims)), where); });
      }
    }
  }

  // Complexity ratios at D = 1000 across a small (n, l, m) grid agree within
  // the spread of their residual envelope at D = 500.
  {
    const std::vector<std::string> measures = {"cramer_rao", "fisher_shannon", "lmc"};
    for (System sys : {System::hydrogenic, System::oscillator}) {
      const std::vector<StateTemplate> grid =
          sys == System::hydrogenic
              ? std::vector<StateTemplate>{{sys, 1.0, 1, 0, 0}, {sys, 1.0, 2, 1, 1}, {sys, 1.0, 3, 1, 0}}
              : std::vector<StateTemplate>{{sys, 1.0, 0, 0, 0}, {sys, 1.0, 1, 1, 1}, {sys, 1.0, 2, 0, 0}};
      for (const std::string& meas : measures) {
        for (Space sp : kSpaces) {
          const std::string where =
              std::string(sys == System::hydrogenic ? "H " : "O ") + meas + " " + std::string(to_string(sp));
          indep.guard(where, [&] {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo, envelope = 0.0;
            for (const StateTemplate& t : grid) {
              const AsymptoticPrediction pred = asymptotic_prediction(meas, t, sp);
              const double r1000 = evaluate_measure(meas, t.at(1000), sp, {}).value / pred.evaluate(1000);
              const double r500 = evaluate_measure(meas, t.at(500), sp, {}).value / pred.evaluate(500);
              lo = std::min(lo, r1000);
              hi = std::max(hi, r1000);
              envelope = std::max(envelope, std::abs(r500 - 1.0));
            }
            indep.add(2.0 * envelope + 1e-12 - (hi - lo), where);
          });
        }
      }
    }
  }
  return {rates.finish(), disc.finish(), square.finish(), growth.finish(), indep.finish()};
}

// ---------------------------------------------------------------------------
// properties

/// E[x^k] under the normalized weight of `family`, in log form.
inline LogValue log_weight_moment(const Family& family, int k) {
  if (const auto* lag = std::get_if<LaguerreFamily>(&family))
    return {log_gamma(lag->alpha + 1.0 + k) - log_gamma(lag->alpha + 1.0), 1};
  const auto& jac = std::get<JacobiFamily>(family);
  // Gegenbauer case only: (1 - x^2)^{g - 1/2}.
  if (k % 2) return LogValue::zero();
  const double g = jac.a + 0.5;
  return {log_gamma(0.5 * k + 0.5) + log_gamma(g + 1.0) - log_gamma(0.5) - log_gamma(g + 1.0 + 0.5 * k), 1};
}

inline std::string describe(const Family& f) {
  std::ostringstream os;
  if (const auto* lag = std::get_if<LaguerreFamily>(&f)) os << "Laguerre(" << lag->alpha << ")";
  else os << "Gegenbauer(" << std::get<JacobiFamily>(f).a + 0.5 << ")";
  return os.str();
}

inline std::vector<Family> property_families() {
  std::vector<Family> out;
  for (double a : {0.0, 0.5, 3.0, 10.0, 100.0, 2000.0}) out.push_back(LaguerreFamily{a});
  for (double g : {0.5, 1.0, 2.5, 10.0, 100.0, 2000.0}) out.push_back(gegenbauer_family(g));
  return out;
}

/// Rendered sweep used by the determinism check.
inline std::string render_sweep_csv(SweepSpec spec, int threads) {
  spec.threads = threads;
  Table t;
  t.meta["schema_version"] = std::to_string(kSchemaVersion);
  if (auto f = run_sweep(spec, [&](std::vector<OutputRow>&& rows) {
        for (auto& r : rows) t.rows.push_back(std::move(r));
      }))
    throw Error(f->line());
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

inline std::vector<PropertyResult> suite_properties(Matrix m) {
  const auto states = state_matrix(m);
  Property zs("properties", "renyi_Z_scaling", -1e-9);
  Property dual("properties", "oscillator_lambda_duality", -1e-9);
  Property dens("properties", "density_scaling_pointwise", -1e-11);
  Property inv("properties", "complexity_scale_invariance", -1e-9);
  Property mono("properties", "renyi_nonincreasing_in_q", -1e-9);
  Property norm("properties", "normalization", -1e-9);
  Property conv("properties", "moment_log_convexity", -1e-9);
  Property gram("properties", "polynomial_orthonormality", -1e-9);
  Property parity("properties", "gegenbauer_parity", -1e-12);
  Property exact("properties", "rule_monomial_exactness", -1e-10);
  Property det("properties", "csv_determinism_and_json_roundtrip", 0.0);

  const std::vector<double> qs = {0.5, 0.75, 1.0, 1.5, 2.0, 3.0};
  for (const QuantumState& s : states) {
    const std::string where = describe(s);
    const bool hyd = s.system == System::hydrogenic;
    if (s.D <= 20) {
      for (double k : {0.5, 3.0}) {
        QuantumState t = s;
        t.strength = k;
        const std::string w = describe(t);
        for (double q : {0.5, 1.0, 2.0}) {
          for (Space sp : kSpaces) {
            const std::string wq = w + " " + std::string(to_string(sp)) + " q=" + format_short(q);
            if (hyd) {
              zs.guard(wq, [&] {
                const double sign = sp == Space::position ? -1.0 : 1.0;
                const double ref = renyi(s, sp, q).total + sign * s.D * std::log(k);
                zs.agree(entropy_error(renyi(t, sp, q).total, ref), wq);
              });
            } else {
              dual.guard(wq, [&] {
                QuantumState inv_t = s;
                inv_t.strength = 1.0 / k;
                dual.agree(entropy_error(renyi(t, conjugate(sp), q).total, renyi(inv_t, sp, q).total), wq);
              });
            }
          }
        }
        for (Space sp : kSpaces) {
          const std::string ws = w + " " + std::string(to_string(sp));
          inv.guard(ws, [&] {
            inv.agree(relative_error(cramer_rao(t, sp).value, cramer_rao(s, sp).value), ws + " cramer_rao");
            inv.agree(relative_error(fisher_shannon(t, sp).value, fisher_shannon(s, sp).value), ws + " fisher_shannon");
            inv.agree(relative_error(lmc(t, sp).value, lmc(s, sp).value), ws + " lmc");
          });
        }
        dens.guard(w, [&] {
          for (double r : {0.1, 0.7, 2.0, 5.0}) {
            if (hyd) {
              const double a = radial_density_at(t, Space::position, r);
              const double b = std::pow(k, s.D) * radial_density_at(s, Space::position, k * r);
              if (b > 1e-250) dens.agree(relative_error(a, b), w + " r=" + format_short(r));
            } else {
              const double a = radial_density_at(t, Space::momentum, r);
              const double b = std::pow(k, -s.D) * radial_density_at(t, Space::position, r / k);
              if (b > 1e-250) dens.agree(relative_error(a, b), w + " p=" + format_short(r));
            }
          }
        });
      }
    }
    for (Space sp : kSpaces) {
      const std::string w = where + " " + std::string(to_string(sp));
      mono.guard(w, [&] {
        double prev = renyi(s, sp, qs.front()).total;
        for (std::size_t i = 1; i < qs.size(); ++i) {
          const double cur = renyi(s, sp, qs[i]).total;
          mono.add((prev - cur) / std::max(1.0, std::abs(prev)), w + " q=" + format_short(qs[i]));
          prev = cur;
        }
      });
      norm.guard(w, [&] { norm.agree(quadrature_moment(s, sp, 0.0).value - 1.0, w + " radial"); });
      conv.guard(w, [&] {
        const MomentRange range = moment_range(s, sp);
        std::vector<double> grid;
        for (double a : {-1.0, 0.0, 1.0, 2.0, 3.0})
          if (range.contains(a)) grid.push_back(a);
        for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
          const double lo = std::log(radial_moment(s, sp, grid[i - 1]).value);
          const double mid = std::log(radial_moment(s, sp, grid[i]).value);
          const double hi = std::log(radial_moment(s, sp, grid[i + 1]).value);
          conv.add((lo + hi - 2.0 * mid) / std::max(1.0, std::abs(mid)), w + " alpha=" + format_short(grid[i]));
        }
      });
    }
    if (s.D >= 3 && s.l > 0) {
      norm.guard(where, [&] {
        for (const GegenbauerFactor& g : angular_factor(s).factors) {
          if (g.trivial()) continue;
          const IntegralResult r = integrate_polynomial(g.as_factor(), PowerForm{});
          norm.agree(r.value.value() - 1.0, where + " angular j=" + format_short(g.index));
        }
      });
    }
  }

  for (const Family& f : property_families()) {
    const std::string w = describe(f);
    gram.guard(w, [&] {
      const auto rule = cached_rule(f, 12);
      for (int j = 0; j <= 8; ++j) {
        for (int k = j; k <= 8; ++k) {
          LogSum sum;
          for (std::size_t i = 0; i < rule->order(); ++i) {
            const LogValue pj = orthonormal_poly(f, j, rule->nodes[i]);
            const LogValue pk = orthonormal_poly(f, k, rule->nodes[i]);
            sum.add(LogValue{rule->log_weight(i), 1} * pj * pk);
          }
          gram.agree(sum.result().value() - (j == k ? 1.0 : 0.0), w + " (" + format_short(j) + "," + format_short(k) + ")");
        }
      }
    });
    exact.guard(w, [&] {
      const int N = 10;
      const auto rule = cached_rule(f, N);
      for (int k = 0; k <= 2 * N - 1; ++k) {
        const LogValue ref = log_weight_moment(f, k);
        LogSum sum;
        for (std::size_t i = 0; i < rule->order(); ++i) {
          const double x = rule->nodes[i];
          if (x == 0.0) continue;
          sum.add(std::log(rule->weights[i]) + k * std::log(std::abs(x)), (k % 2 && x < 0) ? -1.0 : 1.0);
        }
        const LogValue got = sum.result();
        if (ref.sign == 0) {
          // Odd Gegenbauer moments vanish; compare against the even scale.
          const double scale = std::exp(log_weight_moment(f, k - 1).log_magnitude);
          exact.agree(got.value() / scale, w + " k=" + format_short(k));
        } else {
          exact.agree(std::expm1(got.log_magnitude - ref.log_magnitude), w + " k=" + format_short(k));
        }
      }
    });
    if (std::holds_alternative<JacobiFamily>(f)) {
      parity.guard(w, [&] {
        for (int k = 0; k <= 9; ++k) {
          for (double x : {0.1, 0.37, 0.8, 0.99}) {
            const LogValue a = orthonormal_poly(f, k, x);
            const LogValue b = orthonormal_poly(f, k, -x);
            const double sign_ok = (b.sign == ((k % 2) ? -a.sign : a.sign)) ? 0.0 : 1.0;
            parity.agree(sign_ok + std::abs(std::expm1(b.log_magnitude - a.log_magnitude)),
                         w + " k=" + format_short(k));
          }
        }
      });
    }
  }

  det.guard("sweep", [&] {
    SweepSpec spec;
    spec.request.system = System::hydrogenic;
    spec.request.n = 2;
    spec.request.l = 1;
    spec.request.m = 1;
    spec.request.measures = {"shannon", "renyi", "lmc", "heisenberg2"};
    spec.request.predict = true;
    spec.variable = SweepVariable::D;
    spec.values = {3, 5, 10, 20, 50, 100, 200, 500};
    const std::string one = render_sweep_csv(spec, 1);
    const std::string many = render_sweep_csv(spec, 4);
    const std::string again = render_sweep_csv(spec, 4);
    det.add(one == many ? 0.0 : -1.0, "1 vs 4 threads");
    det.add(many == again ? 0.0 : -1.0, "repeated run");

    Table t;
    t.meta["schema_version"] = std::to_string(kSchemaVersion);
    run_sweep(spec, [&](std::vector<OutputRow>&& rows) {
      for (auto& r : rows) t.rows.push_back(std::move(r));
    });
    const Table back = table_from_json(nlohmann::json::parse(table_to_json(t).dump()));
    det.add(back == t ? 0.0 : -1.0, "json round trip");
  });

  return {zs.finish(),   dual.finish(), dens.finish(),  inv.finish(),   mono.finish(), norm.finish(),
          conv.finish(), gram.finish(), parity.finish(), exact.finish(), det.finish()};
}

// ---------------------------------------------------------------------------

inline std::vector<PropertyResult> run_suite(const std::string& suite, Matrix m) {
  if (suite == "bounds") return suite_bounds(m);
  if (suite == "uncertainty") return suite_uncertainty(m);
  if (suite == "crosscheck") return suite_crosscheck(m);
  if (suite == "asymptotics") return suite_asymptotics(m);
  if (suite == "properties") return suite_properties(m);
  if (suite == "all") {
    std::vector<PropertyResult> all;
    for (const std::string& s : suite_names()) {
      auto part = run_suite(s, m);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  throw DomainError("unknown suite '" + suite + "' (bounds, uncertainty, crosscheck, asymptotics, properties, all)");
}

inline void print_report(std::ostream& os, const std::vector<PropertyResult>& results) {
  int failed = 0;
  for (const PropertyResult& r : results) {
    if (!r.pass) ++failed;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-4s %-12s %-40s worst_margin=%-12.4g threshold=%-9.3g checked=%-6d %.2fs",
                  r.pass ? "PASS" : "FAIL", r.suite.c_str(), r.name.c_str(), r.worst_margin, r.threshold, r.checked,
                  r.seconds);
    os << buf << "  worst_case=" << r.worst_case << '\n';
  }
  os << (failed ? "FAILED " : "OK ") << results.size() - failed << "/" << results.size() << " properties passed\n";
}

}  // namespace hdqi::cli
