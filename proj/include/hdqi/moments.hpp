#pragma once

// Radial expectation values <r^alpha>, <p^alpha>, variances and
// Heisenberg-like products.

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "hdqi/density.hpp"
#include "hdqi/errors.hpp"
#include "hdqi/integrate.hpp"
#include "hdqi/state.hpp"

namespace hdqi {

enum class Method { closed_form, quadrature };

inline std::string_view to_string(Method m) { return m == Method::closed_form ? "closed_form" : "quadrature"; }

struct MeasureValue {
  double value = 0.0;
  Method method = Method::closed_form;
  double abs_error_estimate = 0.0;
  bool converged = true;
  int nodes_used = 0;
};

/// Converts an integral result (error measured on the log) to a MeasureValue.
inline MeasureValue from_integral(const IntegralResult& r) {
  MeasureValue m;
  m.value = r.value.value();
  m.method = Method::quadrature;
  m.abs_error_estimate = std::abs(m.value) * std::expm1(r.abs_error);
  m.converged = r.converged;
  m.nodes_used = r.nodes;
  return m;
}

/// Open interval of alpha for which <r^alpha> (or <p^alpha>) is finite.
struct MomentRange {
  double lower;
  double upper;  // +inf when unbounded
  bool contains(double a) const { return a > lower && a < upper; }
};

inline MomentRange moment_range(const QuantumState& s, Space space) {
  const double lower = -static_cast<double>(s.D) - 2.0 * s.l;
  if (s.system == System::hydrogenic && space == Space::momentum) return {lower, s.D + 2.0 * s.l + 2.0};
  return {lower, INFINITY};
}

inline void require_moment_range(const QuantumState& s, Space space, double alpha) {
  const MomentRange r = moment_range(s, space);
  if (!r.contains(alpha))
    throw DivergenceError("moment of order " + format_short(alpha) + " diverges; valid range (" +
                          format_short(r.lower) + ", " + (std::isinf(r.upper) ? "inf" : format_short(r.upper)) +
                          ")");
}

/// Closed forms exist for alpha = +-2, except <r^-2>, <p^-2> of the oscillator.
inline std::optional<double> try_closed_moment(const QuantumState& raw, Space space, double alpha) {
  const QuantumState s = validate(raw);
  if (alpha != 2.0 && alpha != -2.0) return std::nullopt;
  require_moment_range(s, space, alpha);
  if (s.system == System::oscillator) {
    if (alpha != 2.0) return std::nullopt;
    const double k = 2.0 * s.n + s.l + 0.5 * s.D;
    return space == Space::position ? k / s.strength : k * s.strength;
  }
  const double eta = s.eta_hydrogenic();
  const double L = s.L();
  const double Z = s.strength;
  if (space == Space::position) {
    if (alpha == 2.0) return eta * eta / (2.0 * Z * Z) * (5.0 * eta * eta + 1.0 - 3.0 * L * (L + 1.0));
    return 2.0 * Z * Z / (eta * eta * eta * (2.0 * L + 1.0));
  }
  if (alpha == 2.0) return Z * Z / (eta * eta);
  return eta * eta / (Z * Z) * (8.0 * eta - 3.0 * (2.0 * L + 1.0)) / (2.0 * L + 1.0);
}

inline double closed_moment(const QuantumState& s, Space space, double alpha) {
  if (auto v = try_closed_moment(s, space, alpha)) return *v;
  throw NotAvailable("no closed form for the " + std::string(to_string(s.system)) + " " +
                     std::string(to_string(space)) + " moment of order " + format_short(alpha));
}

inline MeasureValue quadrature_moment(const QuantumState& raw, Space space, double alpha,
                                      const IntegrationOptions& opt = {}) {
  const QuantumState s = validate(raw);
  require_moment_range(s, space, alpha);
  const RadialDensity rd = radial_density(s, space);
  return from_integral(integrate_polynomial(rd.factor, rd.radius * alpha, opt));
}

/// Closed form when one exists, quadrature otherwise.
inline MeasureValue radial_moment(const QuantumState& s, Space space, double alpha) {
  if (auto v = try_closed_moment(s, space, alpha)) return {*v, Method::closed_form, 0.0, true, 0};
  return quadrature_moment(s, space, alpha);
}

struct MomentCrossCheck {
  MeasureValue closed;
  MeasureValue quadrature;
  double relative_difference = 0.0;
};

inline MomentCrossCheck cross_check_moment(const QuantumState& s, Space space, double alpha) {
  MomentCrossCheck c;
  c.closed = {closed_moment(s, space, alpha), Method::closed_form, 0.0, true, 0};
  c.quadrature = quadrature_moment(s, space, alpha);
  c.relative_difference = std::abs(c.quadrature.value - c.closed.value) / std::abs(c.closed.value);
  return c;
}

/// <r^alpha> <p^alpha>.
inline MeasureValue heisenberg_product(const QuantumState& s, double alpha) {
  const MeasureValue r = radial_moment(s, Space::position, alpha);
  const MeasureValue p = radial_moment(s, Space::momentum, alpha);
  MeasureValue out;
  out.value = r.value * p.value;
  out.method = r.method == Method::closed_form && p.method == Method::closed_form ? Method::closed_form
                                                                                  : Method::quadrature;
  out.abs_error_estimate = std::abs(r.value) * p.abs_error_estimate + std::abs(p.value) * r.abs_error_estimate;
  out.converged = r.converged && p.converged;
  out.nodes_used = std::max(r.nodes_used, p.nodes_used);
  return out;
}

/// Variance of the position (momentum) vector; its mean vanishes for central
/// potentials, so this is <r^2> (<p^2>).
inline double variance(const QuantumState& s, Space space) { return closed_moment(s, space, 2.0); }

}  // namespace hdqi
