// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "hdqi_cli/verify.hpp"

using namespace hdqi;
using namespace hdqi::cli;

namespace {

// Tolerances and time budgets.
constexpr double kClosedExact = 1e-12;      // closed-form values against their exact expressions
constexpr double kMomentQuadrature = 1e-8;  // closed vs quadrature moments, relative
constexpr double kFisherOracle = 1e-7;      // Fisher routes, relative
constexpr double kUncertaintyMargin = -1e-9;
constexpr double kSaturation = 1e-9;
constexpr double kRateLow = -1.6, kRateHigh = -0.6;
constexpr double kLmcWindow = 0.05;
constexpr double kResidualLnDSlope = 1.0;  // c in |R_2 - prediction| <~ c ln D
constexpr double kBudget1 = 10, kBudget2 = 30, kBudget4 = 300, kBudget7 = 120;  // seconds

struct Worst {
  double value = -std::numeric_limits<double>::infinity();  // largest error or smallest margin seen
  std::string where;
  int checked = 0;
  int violations = 0;

  /// Records an error that must stay at or below `limit`.
  void error(double e, double limit, const std::string& w) {
    ++checked;
    if (!(e <= limit)) ++violations;
    if (!(e <= value)) {
      value = e;
      where = w;
    }
  }
};

/// Records a margin that must stay at or above `limit`.
struct Margin {
  double value = std::numeric_limits<double>::infinity();
  std::string where;
  int checked = 0;
  int violations = 0;

  void add(double m, double limit, const std::string& w) {
    ++checked;
    if (!(m >= limit)) ++violations;
    if (!(m >= value)) {
      value = m;
      where = w;
    }
  }
};

/// True when a closed form exists and the moment is finite.
bool try_closed_moment_safe(const QuantumState& s, Space sp, double a) {
  try {
    return try_closed_moment(s, sp, a).has_value();
  } catch (const DivergenceError&) {
    return false;
  }
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min()); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s %d %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  return pass;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string error_summary(const Worst& w, double limit) {
  return "worst=" + fmt("%.3g", w.value) + " limit=" + fmt("%.3g", limit) + " violations=" +
         std::to_string(w.violations) + "/" + std::to_string(w.checked) + " at " + w.where;
}

std::string margin_summary(const Margin& m, double limit) {
  return "worst=" + fmt("%.6g", m.value) + " limit=" + fmt("%.3g", limit) + " violations=" +
         std::to_string(m.violations) + "/" + std::to_string(m.checked) + " at " + m.where;
}

std::string time_summary(double secs, double budget) {
  return "time=" + fmt("%.1f", secs) + "s budget=" + fmt("%.0f", budget) + "s";
}

/// Runs fn, turning any exception into a recorded failure.
template <class Fn>
bool guarded(const std::string& where, Worst& w, Fn fn) {
  try {
    fn();
    return true;
  } catch (const std::exception& e) {
    w.error(std::numeric_limits<double>::infinity(), 0.0, where + " threw: " + e.what());
    return false;
  }
}

// ---------------------------------------------------------------------------

bool criterion1(const std::vector<QuantumState>& matrix) {
  const auto t0 = std::chrono::steady_clock::now();
  Worst exact, quad;
  for (const QuantumState& s : matrix) {
    const std::string where = describe(s);
    guarded(where, exact, [&] {
      if (s.system == System::oscillator) {
        const double k = 2.0 * s.n + s.l + 0.5 * s.D;
        exact.error(rel(heisenberg_product(s, 2.0).value, k * k), kClosedExact, where);
      } else if (s.D == 3 && s.n == 1 && s.strength == 1.0) {
        exact.error(rel(heisenberg_product(s, 2.0).value, 3.0), kClosedExact, where);
      }
    });
    for (Space sp : {Space::position, Space::momentum}) {
      for (double a : {2.0, -2.0}) {
        if (!try_closed_moment_safe(s, sp, a)) continue;
        const std::string w = where + " " + std::string(to_string(sp)) + " alpha=" + format_short(a);
        guarded(w, quad, [&] { quad.error(cross_check_moment(s, sp, a).relative_difference, kMomentQuadrature, w); });
      }
    }
  }
  const double secs = seconds_since(t0);
  const bool pass = exact.violations == 0 && quad.violations == 0 && exact.checked > 0 && secs < kBudget1;
  return report(1, "closed_form_reproduction", pass,
                "heisenberg " + error_summary(exact, kClosedExact) + "; quadrature " +
                    error_summary(quad, kMomentQuadrature) + "; " + time_summary(secs, kBudget1));
}

bool criterion2(const std::vector<QuantumState>& matrix) {
  const auto t0 = std::chrono::steady_clock::now();
  Worst moments, gradient;
  for (const QuantumState& s : matrix) {
    for (Space sp : {Space::position, Space::momentum}) {
      const std::string where = describe(s) + " " + std::string(to_string(sp));
      guarded(where, moments, [&] {
        const double closed = fisher_closed(s, sp);
        moments.error(rel(fisher_via_moments(s, sp).value, closed), kFisherOracle, where);
        gradient.error(rel(fisher_gradient(s, sp).value, closed), kFisherOracle, where);
      });
    }
  }
  const double secs = seconds_since(t0);
  const bool pass = moments.violations == 0 && gradient.violations == 0 && secs < kBudget2;
  return report(2, "fisher_triple_oracle", pass,
                "moment identity " + error_summary(moments, kFisherOracle) + "; gradient " +
                    error_summary(gradient, kFisherOracle) + "; " + time_summary(secs, kBudget2));
}

bool criterion3(const std::vector<QuantumState>& matrix) {
  Margin shannon_m, renyi_m, fisher_m, heis_m;
  Worst sat;
  const std::vector<std::pair<double, double>> pairs = {{2.0, 2.0 / 3.0}, {3.0, 0.6}, {1.2, 6.0 / 7.0}};
  for (const QuantumState& s : matrix) {
    const std::string where = describe(s);
    try {
      for (const auto& [p, q] : pairs) {
        const UncertaintyReport u = uncertainty_report(s, p, q);
        renyi_m.add(u.renyi_margin(), kUncertaintyMargin, where + " p=" + format_short(p));
        if (p == pairs.front().first) {
          shannon_m.add(u.shannon_margin(), kUncertaintyMargin, where);
          // Products are compared as value / bound - 1.
          fisher_m.add(u.fisher_ratio() - 1.0, kUncertaintyMargin, where);
          heis_m.add(u.heisenberg_ratio() - 1.0, kUncertaintyMargin, where);
        }
      }
    } catch (const std::exception& e) {
      renyi_m.add(-std::numeric_limits<double>::infinity(), 0.0, where + " threw: " + e.what());
    }
  }
  for (int D : {2, 3, 4, 5, 7, 10, 20, 50, 100}) {
    for (double lam : {0.5, 1.0, 3.0}) {
      const QuantumState g = QuantumState::oscillator(lam, D, 0, 0);
      const std::string where = describe(g);
      guarded(where, sat, [&] {
        const UncertaintyReport u = uncertainty_report(g, 2.0, 2.0 / 3.0);
        sat.error(std::abs(u.shannon_margin()), kSaturation, where + " shannon");
        sat.error(std::abs(u.fisher_ratio() - 1.0), kSaturation, where + " fisher");
      });
    }
  }
  const bool pass = shannon_m.violations == 0 && renyi_m.violations == 0 && fisher_m.violations == 0 &&
                    heis_m.violations == 0 && sat.violations == 0;
  return report(3, "uncertainty_relations", pass,
                "shannon " + margin_summary(shannon_m, kUncertaintyMargin) + "; renyi " +
                    margin_summary(renyi_m, kUncertaintyMargin) + "; fisher " +
                    margin_summary(fisher_m, kUncertaintyMargin) + "; heisenberg " +
                    margin_summary(heis_m, kUncertaintyMargin) + "; oscillator saturation " +
                    error_summary(sat, kSaturation));
}

bool criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  int checked = 0, outside = 0, exact = 0;
  double lo = INFINITY, hi = -INFINITY;
  std::string first_bad;
  for (const StateTemplate& t : saturation_templates()) {
    for (const ScanCase& c : saturation_cases()) {
      const std::string where = describe(t) + " " + describe(c);
      ++checked;
      try {
        const ScanResult r = convergence_scan(c.measure, t, c.space, default_scan_dimensions(), c.params);
        if (r.exact_saturation) {
          ++exact;
          continue;
        }
        lo = std::min(lo, r.fitted_rate);
        hi = std::max(hi, r.fitted_rate);
        if (!(r.fitted_rate >= kRateLow && r.fitted_rate <= kRateHigh)) {
          ++outside;
          if (first_bad.empty()) first_bad = where + " rate=" + fmt("%.3f", r.fitted_rate);
        }
      } catch (const std::exception& e) {
        ++outside;
        if (first_bad.empty()) first_bad = where + " threw: " + e.what();
      }
    }
  }
  const double secs = seconds_since(t0);
  const bool pass = outside == 0 && secs < kBudget4;
  return report(4, "asymptotic_saturation", pass,
                "rates in [" + fmt("%.3f", lo) + ", " + fmt("%.3f", hi) + "] window=[" + fmt("%.1f", kRateLow) +
                    ", " + fmt("%.1f", kRateHigh) + "] exact=" + std::to_string(exact) +
                    " outside=" + std::to_string(outside) + "/" + std::to_string(checked) +
                    (first_bad.empty() ? "" : " first=" + first_bad) + "; " + time_summary(secs, kBudget4));
}

bool criterion5() {
  const int D = 1000;
  const double e = std::numbers::e;
  struct Item {
    StateTemplate t;
    Space sp;
    double limit;
    double tol;
  };
  const double hyd_pos = e / 2.0, osc = std::sqrt(e / 2.0), hyd_mom = std::pow(3.0, 1.5) / 4.0;
  const std::vector<Item> items = {
      {{System::hydrogenic, 1.0, 1, 0, 0}, Space::position, hyd_pos, kLmcWindow},
      {{System::hydrogenic, 1.0, 2, 1, 0}, Space::position, hyd_pos, kLmcWindow},
      {{System::hydrogenic, 1.0, 3, 0, 0}, Space::position, hyd_pos, kLmcWindow},
      {{System::hydrogenic, 1.0, 3, 2, 1}, Space::position, hyd_pos, kLmcWindow},
      {{System::oscillator, 1.0, 0, 0, 0}, Space::position, osc, kSaturation},
      {{System::oscillator, 1.0, 1, 1, 0}, Space::position, osc, kLmcWindow},
      {{System::oscillator, 1.0, 2, 0, 0}, Space::position, osc, kLmcWindow},
      {{System::hydrogenic, 1.0, 1, 0, 0}, Space::momentum, hyd_mom, kLmcWindow},
      {{System::hydrogenic, 1.0, 2, 1, 0}, Space::momentum, hyd_mom, kLmcWindow},
      {{System::hydrogenic, 1.0, 3, 1, 1}, Space::momentum, hyd_mom, kLmcWindow},
  };
  bool pass = true;
  std::string detail;
  for (const Item& it : items) {
    const std::string where = describe(it.t) + " " + std::string(to_string(it.sp));
    double v = NAN;
    try {
      v = lmc_renyi(it.t.at(D), it.sp, 1.0, 2.0).value;
    } catch (const std::exception&) {
    }
    const double r = rel(v, it.limit);
    const bool ok = r <= it.tol;
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += where + "=" + fmt("%.6f", v) + " (" + fmt("%.2e", r) + (ok ? " <= " : " > ") + fmt("%.0e", it.tol) + ")";
  }
  return report(5, "lmc_renyi_discrimination_D1000", pass, detail);
}

bool criterion6() {
  const std::vector<int> dims = {100, 200, 500, 1000};
  double worst_slope = 0.0, worst_ratio = 0.0;
  std::string where_slope, where_ratio;
  bool pass = true;
  MeasureParams p;
  p.q = 2.0;
  for (int l = 0; l <= 3; ++l) {
    for (int k : {0, 1}) {
      const StateTemplate t{System::hydrogenic, 1.0, l + 1 + k, l, 0};
      try {
        const double slope = entropy_residual_slope(t, dims);
        if (std::abs(slope) > std::abs(worst_slope)) {
          worst_slope = slope;
          where_slope = describe(t);
        }
        pass = pass && std::abs(slope) <= kResidualLnDSlope;
        const AsymptoticPrediction pred = asymptotic_prediction("renyi", t, Space::position, p);
        for (int D : dims) {
          const double diff = renyi(t.at(D), Space::position, 2.0).total - pred.evaluate(D);
          const double ratio = std::abs(diff) / std::log(D);
          if (ratio > worst_ratio) {
            worst_ratio = ratio;
            where_ratio = describe(t) + " D=" + std::to_string(D);
          }
        }
      } catch (const std::exception& e) {
        pass = false;
        where_slope = describe(t) + " threw: " + e.what();
      }
    }
  }
  return report(6, "renyi2_residual_bounded_by_c_lnD", pass,
                "worst |slope of residual vs ln D|=" + fmt("%.4f", std::abs(worst_slope)) + " at " + where_slope +
                    " (c=" + fmt("%.1f", kResidualLnDSlope) + "); max |residual|/ln D=" + fmt("%.3f", worst_ratio) +
                    " at " + where_ratio);
}

bool criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<PropertyResult> results = run_suite("all", Matrix::full);
  const double secs = seconds_since(t0);
  int passed = 0;
  std::string failed;
  for (const PropertyResult& r : results) {
    if (r.pass) ++passed;
    else failed += (failed.empty() ? "" : ", ") + r.suite + "/" + r.name;
  }
  const bool pass = passed == static_cast<int>(results.size()) && secs < kBudget7;
  return report(7, "verify_suite_all", pass,
                std::to_string(passed) + "/" + std::to_string(results.size()) + " properties passed" +
                    (failed.empty() ? "" : " failed: " + failed) + "; " + time_summary(secs, kBudget7));
}

}  // namespace

int main() {
  const std::vector<QuantumState> matrix = state_matrix(Matrix::full);
  std::printf("state matrix: %zu states (D <= 100, n <= 4, l <= 3, all |m| <= l)\n", matrix.size());
  const std::vector<std::function<bool()>> criteria = {
      [&] { return criterion1(matrix); }, [&] { return criterion2(matrix); }, [&] { return criterion3(matrix); },
      criterion4, criterion5, criterion6, criterion7};
  int failed = 0;
  for (const auto& c : criteria) failed += c() ? 0 : 1;
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
