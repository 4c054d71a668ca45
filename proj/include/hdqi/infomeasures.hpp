#pragma once

// Shannon, Renyi, Tsallis entropies, disequilibrium and Fisher information of
// hydrogenic and oscillator states, plus the entropic, Fisher and Heisenberg
// uncertainty relations.
//
// Entropies split into a radial part and an angular part.  The squared
// hyperspherical harmonic is a product of D-2 one-dimensional Gegenbauer
// factors and the azimuthal 1/(2 pi), so W_q = int rho^q factorizes and
//   R_q = R_q[radial] + sum_j R_q[factor j] + ln(2 pi).

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "hdqi/density.hpp"
#include "hdqi/errors.hpp"
#include "hdqi/integrate.hpp"
#include "hdqi/moments.hpp"
#include "hdqi/specfun.hpp"
#include "hdqi/state.hpp"

namespace hdqi {

struct EntropyDecomposition {
  double q = 1.0;  // 1 for Shannon
  Space space = Space::position;
  double radial = 0.0;
  double angular = 0.0;
  double total = 0.0;
  Method radial_method = Method::quadrature;
  Method angular_method = Method::closed_form;
  double abs_error_estimate = 0.0;
  bool converged = true;
  int nodes_used = 0;
};

namespace detail {

/// log of int_{-1}^{1} (1-x^2)^{h-1/2} dx
inline double log_sphere_mass(double h) {
  return 0.5 * std::log(std::numbers::pi) + log_gamma(h + 0.5) - log_gamma(h + 1.0);
}

struct FactorEntropy {
  double value = 0.0;  // S_j, or ln W_q of the factor
  bool closed = true;
  double abs_error = 0.0;
  bool converged = true;
  int nodes = 0;
};

/// -int m ln(density) for one angular factor.
inline FactorEntropy angular_shannon(const GegenbauerFactor& g) {
  if (g.degree == 0) {
    const double mu = g.sine_power;
    double v = log_sphere_mass(g.parameter);
    if (mu != 0.0) v -= mu * (digamma(g.parameter + 0.5) - digamma(g.parameter + 1.0));
    return {v, true, 0.0, true, 0};
  }
  const IntegralResult r = shannon_integral(g.as_factor());
  return {r.value.value(), false, r.abs_error * std::max(1.0, std::abs(r.value.value())), r.converged, r.nodes};
}

/// ln W_q for one angular factor.
inline FactorEntropy angular_log_moment(const GegenbauerFactor& g, double q) {
  if (g.degree == 0)
    return {log_sphere_mass(g.alpha + q * g.sine_power) - q * log_sphere_mass(g.parameter), true, 0.0, true, 0};
  const IntegralResult r = entropic_moment(g.as_factor(), q);
  return {r.value.log_magnitude, false, r.abs_error, r.converged, r.nodes};
}

inline void require_renyi_order(double q) {
  if (!(q > 0.0) || !std::isfinite(q)) throw DomainError("Renyi order q must be positive and finite");
}

/// Exponents of the q-powered radial integrand at both ends of the natural
/// variable must exceed -1.
inline void guard_renyi(const RadialDensity& rd, double q) {
  const PowerForm env = rd.factor.weight + rd.factor.density * (q - 1.0);
  const bool unit = rd.factor.domain == Domain::unit_interval;
  if (env.lo_exp <= -1.0 || (unit && env.hi_exp <= -1.0) || (!unit && env.decay <= 0.0)) {
    std::string msg = "Renyi integral diverges for q = " + format_short(q) + " in " +
                      std::string(to_string(rd.system)) + " " + std::string(to_string(rd.space)) + " space";
    if (rd.system == System::hydrogenic && rd.space == Space::momentum) {
      const double l = static_cast<double>(rd.factor.density.hi_exp);
      msg += " (need q > " + format_short(rd.D / (2.0 * (l + rd.D + 1.0))) + ")";
    }
    throw DivergenceError(msg);
  }
}

}  // namespace detail

constexpr double kShannonRoute = 1e-6;

/// Shannon entropy S = -int rho ln rho.
inline EntropyDecomposition shannon(const QuantumState& raw, Space space) {
  const QuantumState s = validate(raw);
  EntropyDecomposition e;
  e.q = 1.0;
  e.space = space;
  const RadialDensity rd = radial_density(s, space);
  const IntegralResult r = shannon_integral(rd.factor);
  e.radial = r.value.value();
  e.radial_method = Method::quadrature;
  e.abs_error_estimate = r.abs_error * std::max(1.0, std::abs(e.radial));
  e.converged = r.converged;
  e.nodes_used = r.nodes;

  e.angular = -AngularFactor::log_azimuthal();
  bool all_closed = true;
  if (s.D >= 3) {
    for (const GegenbauerFactor& g : angular_factor(s).factors) {
      const detail::FactorEntropy f = detail::angular_shannon(g);
      e.angular += f.value;
      all_closed = all_closed && f.closed;
      e.abs_error_estimate += f.abs_error;
      e.converged = e.converged && f.converged;
      e.nodes_used = std::max(e.nodes_used, f.nodes);
    }
  }
  e.angular_method = all_closed ? Method::closed_form : Method::quadrature;
  e.total = e.radial + e.angular;
  return e;
}

/// Renyi entropy R_q = ln(int rho^q) / (1 - q); |q - 1| < 1e-6 gives Shannon.
inline EntropyDecomposition renyi(const QuantumState& raw, Space space, double q) {
  detail::require_renyi_order(q);
  if (std::abs(q - 1.0) < kShannonRoute) return shannon(raw, space);
  const QuantumState s = validate(raw);
  const RadialDensity rd = radial_density(s, space);
  detail::guard_renyi(rd, q);

  EntropyDecomposition e;
  e.q = q;
  e.space = space;
  const double inv = 1.0 / (1.0 - q);
  const IntegralResult r = entropic_moment(rd.factor, q);
  e.radial = inv * r.value.log_magnitude;
  e.radial_method = Method::quadrature;
  e.abs_error_estimate = std::abs(inv) * r.abs_error;
  e.converged = r.converged;
  e.nodes_used = r.nodes;

  double log_w = (1.0 - q) * std::log(2.0 * std::numbers::pi);
  bool all_closed = true;
  if (s.D >= 3) {
    for (const GegenbauerFactor& g : angular_factor(s).factors) {
      const detail::FactorEntropy f = detail::angular_log_moment(g, q);
      log_w += f.value;
      all_closed = all_closed && f.closed;
      e.abs_error_estimate += std::abs(inv) * f.abs_error;
      e.converged = e.converged && f.converged;
      e.nodes_used = std::max(e.nodes_used, f.nodes);
    }
  }
  e.angular = inv * log_w;
  e.angular_method = all_closed ? Method::closed_form : Method::quadrature;
  e.total = e.radial + e.angular;
  return e;
}

/// Tsallis entropy T_q = (exp((1-q) R_q) - 1) / (1 - q).
inline double tsallis(const QuantumState& s, Space space, double q) {
  const EntropyDecomposition r = renyi(s, space, q);
  if (std::abs(q - 1.0) < kShannonRoute) return r.total;
  return std::expm1((1.0 - q) * r.total) / (1.0 - q);
}

/// Disequilibrium int rho^2 = exp(-R_2).
inline double disequilibrium(const QuantumState& s, Space space) { return std::exp(-renyi(s, space, 2.0).total); }

// ---------------------------------------------------------------------------
// Fisher information

/// Closed-form Fisher information.
inline double fisher_closed(const QuantumState& raw, Space space) {
  const QuantumState s = validate(raw);
  const double m = s.abs_m();
  if (s.system == System::hydrogenic) {
    const double eta = s.eta_hydrogenic();
    const double Z = s.strength;
    if (space == Space::position) return 4.0 * Z * Z / (eta * eta * eta) * (eta - m);
    const double L = s.L();
    return 2.0 * eta * eta / (Z * Z) * (5.0 * eta * eta - 3.0 * L * (L + 1.0) - m * (8.0 * eta - 6.0 * L - 3.0) + 1.0);
  }
  const double k = 4.0 * (s.eta_oscillator() - m + 1.5);
  return space == Space::position ? k * s.strength : k / s.strength;
}

/// F[rho] = 4<p^2> - 2|m|(2l+D-2)<r^-2> and F[gamma] = 4<r^2> - 2|m|(2l+D-2)<p^-2>,
/// with every moment taken by quadrature.
inline MeasureValue fisher_via_moments(const QuantumState& raw, Space space) {
  const QuantumState s = validate(raw);
  const MeasureValue second = quadrature_moment(s, conjugate(space), 2.0);
  MeasureValue out = second;
  out.value = 4.0 * second.value;
  out.abs_error_estimate = 4.0 * second.abs_error_estimate;
  const int m = s.abs_m();
  if (m != 0) {
    const MeasureValue inv = quadrature_moment(s, space, -2.0);
    const double c = 2.0 * m * (2.0 * s.l + s.D - 2.0);
    out.value -= c * inv.value;
    out.abs_error_estimate += c * inv.abs_error_estimate;
    out.converged = out.converged && inv.converged;
    out.nodes_used = std::max(out.nodes_used, inv.nodes_used);
  }
  return out;
}

/// Fisher information from the gradient of the density itself:
///   F = int R (d ln R/dr)^2 r^{D-1} dr + <r^-2> sum_j E_j[(d ln Y_j/d theta_j)^2] prod_{i<j} E_i[sin^-2 theta_i].
/// No moment identity or closed form enters.
inline MeasureValue fisher_gradient(const QuantumState& raw, Space space) {
  const QuantumState s = validate(raw);
  const RadialDensity rd = radial_density(s, space);
  MeasureValue out = from_integral(gradient_functional(rd.factor, rd.jacobian));

  // In D = 2 the angular density 1/(2 pi) is uniform for every l.
  if (s.D < 3 || s.l == 0) return out;
  const AngularFactor af = angular_factor(s);
  std::size_t last = 0;
  for (std::size_t j = 0; j < af.factors.size(); ++j)
    if (!af.factors[j].trivial()) last = j + 1;

  double angular = 0.0;
  double metric = 1.0;  // prod_{i<j} E_i[1/sin^2]
  const PowerForm jac{0.0, -0.5, -0.5, 0.0};
  const PowerForm inv_sin2{0.0, -1.0, -1.0, 0.0};
  for (std::size_t j = 0; j < last; ++j) {
    const GegenbauerFactor& g = af.factors[j];
    if (!g.trivial()) {
      const Factor1D f = g.as_factor();
      const MeasureValue grad = from_integral(gradient_functional(f, jac));
      angular += metric * grad.value;
      out.converged = out.converged && grad.converged;
      if (j + 1 < last) {
        const MeasureValue e = from_integral(integrate_polynomial(f, inv_sin2));
        metric *= e.value;
        out.converged = out.converged && e.converged;
      }
    } else if (j + 1 < last) {
      metric *= g.parameter / (g.parameter - 0.5);
    }
  }
  if (angular != 0.0) {
    const MeasureValue inv = quadrature_moment(s, space, -2.0);
    out.value += angular * inv.value;
    out.abs_error_estimate += angular * inv.abs_error_estimate;
    out.converged = out.converged && inv.converged;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Uncertainty relations

struct UncertaintyReport {
  int D = 3;
  double p = 1.0, q = 1.0;
  double shannon_sum = 0.0, shannon_bound = 0.0;
  double renyi_sum = 0.0, renyi_bound = 0.0;
  double fisher_product = 0.0, fisher_bound = 0.0;
  double heisenberg_product = 0.0, heisenberg_bound = 0.0;

  // Sums: value - bound.  Products: value / bound (>= 1 when the relation holds).
  double shannon_margin() const { return shannon_sum - shannon_bound; }
  double renyi_margin() const { return renyi_sum - renyi_bound; }
  double fisher_ratio() const { return fisher_product / fisher_bound; }
  double heisenberg_ratio() const { return heisenberg_product / heisenberg_bound; }

  bool holds(double tol = 1e-9) const {
    return shannon_margin() >= -tol && renyi_margin() >= -tol && fisher_ratio() - 1.0 >= -tol &&
           heisenberg_ratio() - 1.0 >= -tol;
  }
};

/// ln(p^{1/(2(p-1))}), continuous at p = 1 where it equals 1/2.
inline double log_conjugate_factor(double p) {
  if (std::abs(p - 1.0) < kShannonRoute) return 0.5;
  return std::log(p) / (2.0 * (p - 1.0));
}

/// D ln(p^{1/(2(p-1))} q^{1/(2(q-1))} pi), the conjugate Renyi-sum bound.
inline double renyi_sum_bound(int D, double p, double q) {
  return D * (log_conjugate_factor(p) + log_conjugate_factor(q) + std::log(std::numbers::pi));
}

inline double shannon_sum_bound(int D) { return D * (1.0 + std::log(std::numbers::pi)); }

inline void require_conjugate(double p, double q) {
  if (!(p > 0.5) || !(q > 0.5)) throw DomainError("conjugate Renyi orders must exceed 1/2");
  if (std::abs(1.0 / p + 1.0 / q - 2.0) > 1e-12)
    throw DomainError("Renyi orders are not conjugate: 1/p + 1/q = " + format_short(1.0 / p + 1.0 / q));
}

/// Entropic (Shannon, conjugate Renyi), Fisher and Heisenberg relations for a
/// state; p is applied to the position density, q to the momentum density.
inline UncertaintyReport uncertainty_report(const QuantumState& raw, double p, double q) {
  require_conjugate(p, q);
  const QuantumState s = validate(raw);
  UncertaintyReport u;
  u.D = s.D;
  u.p = p;
  u.q = q;
  u.shannon_sum = shannon(s, Space::position).total + shannon(s, Space::momentum).total;
  u.shannon_bound = shannon_sum_bound(s.D);
  u.renyi_sum = renyi(s, Space::position, p).total + renyi(s, Space::momentum, q).total;
  u.renyi_bound = renyi_sum_bound(s.D, p, q);
  u.fisher_product = fisher_closed(s, Space::position) * fisher_closed(s, Space::momentum);
  u.fisher_bound = 4.0 * s.D * s.D;
  u.heisenberg_product = heisenberg_product(s, 2.0).value;
  u.heisenberg_bound = 0.25 * s.D * s.D;
  return u;
}

}  // namespace hdqi
