#pragma once

// Probability densities of D-dimensional hydrogenic and oscillator states,
// factored as radial part x hyperspherical-harmonic part.
//
// Every factor is expressed in a "natural" variable u in which its measure is
// a classical weight times the square of an orthonormal polynomial:
//
//   hydrogenic position   u = r / Lambda             Laguerre, alpha = 2l+D-2
//   hydrogenic momentum   u = (1-eta^2 p~^2)/(1+...)  Gegenbauer, nu = l+(D-1)/2
//   oscillator position   u = lambda r^2             Laguerre, alpha = l+D/2-1
//   oscillator momentum   u = p^2 / lambda           Laguerre, alpha = l+D/2-1
//   angular factor j      u = cos(theta_j)           Gegenbauer, alpha_j + mu_{j+1}
//
// All non-polynomial dependence is a PowerForm, a log-linear combination of
// ln(u - lo), ln(hi - u) and u, so every integral over a factor reduces to a
// Gauss-Laguerre or Gauss-Jacobi rule with shifted parameters.

#include <cmath>
#include <numbers>
#include <vector>

#include "hdqi/errors.hpp"
#include "hdqi/specfun.hpp"
#include "hdqi/state.hpp"

namespace hdqi {

enum class Domain { half_line, unit_interval };

/// log of exp(constant) * (u - lo)^lo_exp * (hi - u)^hi_exp * exp(-decay u),
/// with lo = 0 on the half line and (lo, hi) = (-1, 1) on the unit interval.
struct PowerForm {
  double constant = 0.0;
  double lo_exp = 0.0;
  double hi_exp = 0.0;
  double decay = 0.0;

  double eval(double u, Domain d) const {
    double v = constant - decay * u;
    if (lo_exp != 0.0) v += lo_exp * (d == Domain::half_line ? std::log(u) : std::log1p(u));
    if (hi_exp != 0.0) v += hi_exp * std::log1p(-u);
    return v;
  }

  double derivative(double u, Domain d) const {
    double v = -decay;
    if (lo_exp != 0.0) v += lo_exp / (d == Domain::half_line ? u : 1.0 + u);
    if (hi_exp != 0.0) v -= hi_exp / (1.0 - u);
    return v;
  }

  PowerForm operator+(const PowerForm& o) const {
    return {constant + o.constant, lo_exp + o.lo_exp, hi_exp + o.hi_exp, decay + o.decay};
  }
  PowerForm operator*(double f) const { return {constant * f, lo_exp * f, hi_exp * f, decay * f}; }
};

/// One separable one-dimensional factor of a density: the probability measure
/// is exp(weight(u)) P(u)^2 du and the density value is exp(density(u)) P(u)^2,
/// with P the orthonormal polynomial of `degree` in `family`.
struct Factor1D {
  Domain domain = Domain::half_line;
  Family family;
  int degree = 0;
  PowerForm weight;
  PowerForm density;

  double lower() const { return domain == Domain::half_line ? 0.0 : -1.0; }
  double upper() const { return domain == Domain::half_line ? INFINITY : 1.0; }
};

struct RadialDensity {
  System system = System::hydrogenic;
  Space space = Space::position;
  int D = 3;
  double scale = 1.0;  // characteristic length (position) or momentum
  Factor1D factor;
  PowerForm radius;    // log r(u)
  PowerForm jacobian;  // log |dr/du|

  /// Constant prefactor of the radial density.
  LogValue normalization() const { return {factor.density.constant, 1}; }
  double weight_parameter() const {
    if (const auto* lag = std::get_if<LaguerreFamily>(&factor.family)) return lag->alpha;
    return std::get<JacobiFamily>(factor.family).a + 0.5;
  }

  /// Natural variable corresponding to radius (or momentum) r >= 0.
  double variable_of(double r) const {
    if (system == System::hydrogenic && space == Space::position) return r / scale;
    if (system == System::hydrogenic) {
      const double t = (r / scale) * (r / scale);
      return (1.0 - t) / (1.0 + t);
    }
    return (r / scale) * (r / scale);
  }
};

inline RadialDensity radial_density(const QuantumState& raw, Space space) {
  const QuantumState s = validate(raw);
  const double D = s.D;
  RadialDensity rd;
  rd.system = s.system;
  rd.space = space;
  rd.D = s.D;

  if (s.system == System::hydrogenic) {
    const double eta = s.eta_hydrogenic();
    const double Z = s.strength;
    rd.factor.degree = s.n - s.l - 1;
    if (space == Space::position) {
      const double Lambda = s.Lambda();
      const double a = 2.0 * s.l + D - 2.0;
      rd.scale = Lambda;
      rd.factor.domain = Domain::half_line;
      rd.factor.family = LaguerreFamily{a};
      rd.factor.weight = {-std::log(2.0 * eta), a + 1.0, 0.0, 1.0};
      rd.factor.density = {-D * std::log(Lambda) - std::log(2.0 * eta), 2.0 * s.l, 0.0, 1.0};
      rd.radius = {std::log(Lambda), 1.0, 0.0, 0.0};
      rd.jacobian = {std::log(Lambda), 0.0, 0.0, 0.0};
    } else {
      const double nu = s.l + 0.5 * (D - 1.0);
      const double p0 = Z / eta;
      rd.scale = p0;
      rd.factor.domain = Domain::unit_interval;
      rd.factor.family = gegenbauer_family(nu);
      rd.factor.weight = {0.0, nu + 0.5, nu - 0.5, 0.0};
      rd.factor.density = {D * std::log(eta / Z), s.l + D + 1.0, static_cast<double>(s.l), 0.0};
      rd.radius = {std::log(p0), -0.5, 0.5, 0.0};
      rd.jacobian = {std::log(p0), -1.5, -0.5, 0.0};
    }
    return rd;
  }

  // The oscillator momentum density is the position density with lambda -> 1/lambda.
  const double lam = space == Space::position ? s.strength : 1.0 / s.strength;
  const double b = s.l + 0.5 * D - 1.0;
  rd.scale = 1.0 / std::sqrt(lam);
  rd.factor.degree = s.n;
  rd.factor.domain = Domain::half_line;
  rd.factor.family = LaguerreFamily{b};
  rd.factor.weight = {0.0, b, 0.0, 1.0};
  rd.factor.density = {std::numbers::ln2 + 0.5 * D * std::log(lam), static_cast<double>(s.l), 0.0, 1.0};
  rd.radius = {-0.5 * std::log(lam), 0.5, 0.0, 0.0};
  rd.jacobian = {-std::numbers::ln2 - 0.5 * std::log(lam), -0.5, 0.0, 0.0};
  return rd;
}

/// log of the radial density at r (angular part divided out).
inline LogValue log_radial_density_at(const RadialDensity& rd, double r) {
  if (!(r >= 0.0)) throw DomainError("radial_density_at: radius must be non-negative");
  const double u = rd.variable_of(r);
  const LogValue p = orthonormal_poly(rd.factor.family, rd.factor.degree, u);
  if (p.sign == 0) return {};
  const double lv = rd.factor.density.eval(u, rd.factor.domain) + 2.0 * p.log_magnitude;
  if (std::isnan(lv)) return {};
  return {lv, 1};
}

inline double radial_density_at(const RadialDensity& rd, double r) {
  const LogValue v = log_radial_density_at(rd, r);
  if (v.sign != 0 && v.log_magnitude > 709.0)
    throw DomainError("radial_density_at: density overflows a double (log = " + format_short(v.log_magnitude) + ")");
  return v.value();
}

inline double radial_density_at(const QuantumState& s, Space space, double r) {
  return radial_density_at(radial_density(s, space), r);
}

// ---------------------------------------------------------------------------
// Hyperspherical harmonics

/// Factor j of |Y|^2: [C~_{degree}^{(parameter)}(cos theta_j)]^2 sin^{2 sine_power} theta_j.
struct GegenbauerFactor {
  int index = 1;            // j
  int degree = 0;           // mu_j - mu_{j+1}
  double parameter = 0.5;   // alpha_j + mu_{j+1}
  int sine_power = 0;       // mu_{j+1}
  double alpha = 0.5;       // (D - j - 1) / 2

  /// Measure (1-x^2)^{parameter-1/2} C~^2 dx; density relative to the
  /// surface element (1-x^2)^{alpha-1/2} dx is C~^2 (1-x^2)^{sine_power}.
  Factor1D as_factor() const {
    Factor1D f;
    f.domain = Domain::unit_interval;
    f.family = gegenbauer_family(parameter);
    f.degree = degree;
    f.weight = {0.0, parameter - 0.5, parameter - 0.5, 0.0};
    f.density = {0.0, static_cast<double>(sine_power), static_cast<double>(sine_power), 0.0};
    return f;
  }

  /// True when the factor is the uniform density on its sphere slice.
  bool trivial() const { return degree == 0 && sine_power == 0; }
};

struct AngularFactor {
  int D = 3;
  std::vector<GegenbauerFactor> factors;  // D - 2 entries
  /// log of the azimuthal density 1 / (2 pi).
  static double log_azimuthal() { return -std::log(2.0 * std::numbers::pi); }
};

inline AngularFactor angular_factor(const QuantumState& raw) {
  const QuantumState s = validate(raw);
  AngularFactor af;
  af.D = s.D;
  for (int j = 1; j <= s.D - 2; ++j) {
    GegenbauerFactor g;
    g.index = j;
    g.alpha = 0.5 * (s.D - j - 1);
    g.sine_power = s.mu_at(j + 1);
    g.degree = s.mu_at(j) - g.sine_power;
    g.parameter = g.alpha + g.sine_power;
    af.factors.push_back(g);
  }
  return af;
}

/// log of the surface area 2 pi^{D/2} / Gamma(D/2) of the unit sphere in R^D.
inline double log_solid_angle(int D) {
  return std::log(2.0) + 0.5 * D * std::log(std::numbers::pi) - log_gamma(0.5 * D);
}

}  // namespace hdqi
