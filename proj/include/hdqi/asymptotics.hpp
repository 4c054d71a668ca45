#pragma once

// Leading-order pseudoclassical (D -> infinity, state labels fixed)
// predictions for every measure, and a scanner that compares exact values
// against them over a list of dimensions.

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hdqi/errors.hpp"
#include "hdqi/measures.hpp"
#include "hdqi/state.hpp"

namespace hdqi {

enum class Residual { relative, additive_per_dimension };

inline std::string_view to_string(Residual r) { return r == Residual::relative ? "relative" : "additive_per_D"; }

/// prediction(D) = c_dlogd D ln D + c_d D + c_logd ln D + c_1       (entropy form)
///               = prefactor D^power                                 (power form)
///               = constant                                          (constant form)
struct AsymptoticPrediction {
  enum class Form { entropy, power, constant };

  std::string measure;
  System system = System::hydrogenic;
  std::optional<Space> space;
  Form form = Form::power;
  double c_dlogd = 0.0, c_d = 0.0, c_logd = 0.0, c_1 = 0.0;
  double prefactor = 1.0, power = 0.0;
  double constant = 0.0;
  Residual residual = Residual::relative;
  std::string claimed_order;  // remainder stated for this measure

  double evaluate(double D) const {
    switch (form) {
      case Form::entropy: return c_dlogd * D * std::log(D) + c_d * D + c_logd * std::log(D) + c_1;
      case Form::power: return prefactor * std::pow(D, power);
      case Form::constant: return constant;
    }
    return std::numeric_limits<double>::quiet_NaN();
  }
};

/// Fixed physical parameters of a family of states indexed by D.  The
/// magnetic chain is mu_2 = ... = mu_{D-1} = |m|.
struct StateTemplate {
  System system = System::hydrogenic;
  double strength = 1.0;
  int n = 1;
  int l = 0;
  int m = 0;

  QuantumState at(int D) const {
    QuantumState s{system, strength, D, n, l, {}};
    if (D > 2) s.mu.assign(static_cast<std::size_t>(D - 2), m);
    return validate(s);
  }
};

namespace detail {

/// ln q^{1/(q-1)}, equal to 1 at q = 1.
inline double log_q_root(double q) {
  if (std::abs(q - 1.0) < kShannonRoute) return 1.0;
  return std::log(q) / (q - 1.0);
}

/// ln q~^{1/(q-1)} with q~ = ((2q-1)^{2q-1} / q^{2q})^{1/2}, equal to 0 at q = 1.
inline double log_qtilde_root(double q) {
  if (std::abs(q - 1.0) < kShannonRoute) return 0.0;
  return ((2.0 * q - 1.0) * std::log(2.0 * q - 1.0) - 2.0 * q * std::log(q)) / (2.0 * (q - 1.0));
}

/// Entropy-form prediction of R_q (q = 1: Shannon, no ln D term).
inline AsymptoticPrediction entropy_prediction(const StateTemplate& t, Space space, double q) {
  AsymptoticPrediction p;
  p.form = AsymptoticPrediction::Form::entropy;
  p.residual = Residual::additive_per_dimension;
  const bool shannon = std::abs(q - 1.0) < kShannonRoute;
  const double ln2 = std::numbers::ln2;
  const double lnpi = std::log(std::numbers::pi);
  if (t.system == System::hydrogenic) {
    const double Z = t.strength;
    const double sign = space == Space::position ? 1.0 : -1.0;
    p.c_dlogd = 1.5 * sign;
    if (space == Space::position)
      p.c_d = -1.5 * ln2 + log_q_root(q) + 0.5 * (lnpi - 1.0) - std::log(Z);
    else
      p.c_d = 1.5 * ln2 + std::log(Z) + 0.5 * (1.0 + lnpi) - log_qtilde_root(q);
    if (!shannon) p.c_logd = q * (t.n - t.l - 1) / (1.0 - q);
    p.claimed_order = shannon ? "additive O(ln D)" : "additive O(1)";
  } else {
    const double lam = space == Space::position ? t.strength : 1.0 / t.strength;
    p.c_d = 0.5 * (log_q_root(q) + lnpi - std::log(lam));
    if (!shannon) p.c_logd = q * t.n / (1.0 - q);
    p.claimed_order = "additive O(1)";
  }
  return p;
}

inline double lmc_renyi_limit(System system, Space space, double a, double b) {
  if (system == System::oscillator) return std::exp(0.5 * (log_q_root(a) - log_q_root(b)));
  if (space == Space::position) return std::exp(log_q_root(a) - log_q_root(b));
  return std::exp(log_qtilde_root(b) - log_qtilde_root(a));
}

}  // namespace detail

/// Leading-order model of `measure` for the template's system.
inline AsymptoticPrediction asymptotic_prediction(std::string_view measure, const StateTemplate& t,
                                                  std::optional<Space> space, MeasureParams params = {}) {
  const MeasureInfo& info = resolve_measure(measure, params);
  const std::string_view id = info.id;
  if (info.per_space && !space) throw DomainError("measure '" + std::string(id) + "' needs a space");
  const Space sp = space.value_or(Space::position);
  const bool hyd = t.system == System::hydrogenic;
  const double Z = t.strength;  // or lambda

  AsymptoticPrediction p;
  p.measure = std::string(id);
  p.system = t.system;
  if (info.per_space) p.space = sp;
  p.form = AsymptoticPrediction::Form::power;
  p.residual = Residual::relative;
  p.claimed_order = "relative O(1/D)";

  if (id == "heisenberg") {
    p.prefactor = std::pow(0.5, params.alpha);
    p.power = params.alpha;
  } else if (id == "fisher") {
    if (hyd) {
      p.prefactor = sp == Space::position ? 16.0 * Z * Z : 1.0 / (4.0 * Z * Z);
      p.power = sp == Space::position ? -2.0 : 4.0;
    } else {
      p.prefactor = sp == Space::position ? 2.0 * Z : 2.0 / Z;
      p.power = 1.0;
    }
  } else if (id == "fisher_product") {
    p.prefactor = 4.0;
    p.power = 2.0;
  } else if (id == "variance") {
    if (hyd) {
      p.prefactor = sp == Space::position ? 1.0 / (16.0 * Z * Z) : 4.0 * Z * Z;
      p.power = sp == Space::position ? 4.0 : -2.0;
    } else {
      p.prefactor = sp == Space::position ? 0.5 / Z : 0.5 * Z;
      p.power = 1.0;
    }
  } else if (id == "cramer_rao") {
    p.prefactor = 1.0;
    p.power = 2.0;
  } else if (id == "fisher_shannon") {
    p.prefactor = 1.0;
    p.power = 1.0;
  } else if (id == "shannon" || id == "renyi") {
    AsymptoticPrediction e = detail::entropy_prediction(t, sp, id == "shannon" ? 1.0 : params.q);
    e.measure = p.measure;
    e.system = p.system;
    e.space = p.space;
    return e;
  } else if (id == "shannon_sum") {
    p.form = AsymptoticPrediction::Form::entropy;
    p.c_d = 1.0 + std::log(std::numbers::pi);
    p.claimed_order = "relative O(ln D / D)";
  } else if (id == "renyi_sum") {
    p.form = AsymptoticPrediction::Form::entropy;
    p.c_d = renyi_sum_bound(1, params.q, conjugate_order(params.q));
  } else if (id == "lmc" || id == "lmc_renyi") {
    const double a = id == "lmc" ? 1.0 : params.alpha;
    const double b = id == "lmc" ? 2.0 : params.beta;
    p.form = AsymptoticPrediction::Form::constant;
    p.constant = detail::lmc_renyi_limit(t.system, sp, a, b);
    p.claimed_order = "relative O(ln D / D)";
  } else {
    throw DomainError("no asymptotic prediction for measure '" + std::string(id) + "'");
  }
  return p;
}

/// Numeric value of the leading-order prediction at dimension D.
inline double predict(std::string_view measure, const StateTemplate& t, std::optional<Space> space,
                      MeasureParams params, double D) {
  return asymptotic_prediction(measure, t, space, params).evaluate(D);
}

struct ScanRow {
  int D = 0;
  double exact = 0.0;
  double predicted = 0.0;
  double residual = 0.0;
};

struct ScanResult {
  AsymptoticPrediction prediction;
  std::vector<ScanRow> rows;
  /// Least-squares slope of ln|residual| against ln D, smallest D excluded.
  /// NaN when the residuals vanish to rounding (exact saturation).
  double fitted_rate = std::numeric_limits<double>::quiet_NaN();
  bool exact_saturation = false;
};

inline double residual_of(const AsymptoticPrediction& p, double exact, double predicted, int D) {
  if (p.residual == Residual::relative) return exact / predicted - 1.0;
  return (exact - predicted) / D;
}

/// Least-squares slope of y against x.
inline double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

constexpr double kSaturationFloor = 1e-10;

inline const std::vector<int>& default_scan_dimensions() {
  static const std::vector<int> dims = {20, 50, 100, 200, 500, 1000};
  return dims;
}

/// Evaluates `measure` exactly at every D and compares with the prediction.
inline ScanResult convergence_scan(std::string_view measure, const StateTemplate& t, std::optional<Space> space,
                                   const std::vector<int>& dims, MeasureParams params = {}) {
  if (dims.size() < 4) throw DomainError("convergence scan needs at least 4 dimensions");
  for (std::size_t i = 1; i < dims.size(); ++i)
    if (dims[i] <= dims[i - 1]) throw DomainError("convergence scan dimensions must be strictly increasing");

  ScanResult out;
  out.prediction = asymptotic_prediction(measure, t, space, params);
  const Space sp = space.value_or(Space::position);
  for (int D : dims) {
    const Evaluation e = evaluate_measure(measure, t.at(D), sp, params);
    if (!e.converged)
      throw ConvergenceError("convergence scan: " + std::string(measure) + " did not converge at D = " +
                             std::to_string(D));
    ScanRow row;
    row.D = D;
    row.exact = e.value;
    row.predicted = out.prediction.evaluate(D);
    row.residual = residual_of(out.prediction, row.exact, row.predicted, D);
    out.rows.push_back(row);
  }

  double worst = 0.0;
  for (const ScanRow& r : out.rows) worst = std::max(worst, std::abs(r.residual));
  if (worst <= kSaturationFloor) {
    out.exact_saturation = true;
    return out;
  }
  std::vector<double> x, y;
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    if (out.rows[i].residual == 0.0) continue;
    x.push_back(std::log(out.rows[i].D));
    y.push_back(std::log(std::abs(out.rows[i].residual)));
  }
  if (x.size() >= 2) out.fitted_rate = least_squares_slope(x, y);
  return out;
}

}  // namespace hdqi
