#pragma once

// Special functions used throughout the library: log-gamma, digamma, and
// orthonormal Laguerre / Gegenbauer (Jacobi) polynomials evaluated by their
// three-term recurrences in a scaled, overflow-free form.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <variant>

#include "hdqi/errors.hpp"

namespace hdqi {

/// A real number stored as sign * exp(log_magnitude).  sign is 0 exactly when
/// the value is zero, in which case log_magnitude is -inf.
struct LogValue {
  double log_magnitude = -std::numeric_limits<double>::infinity();
  int sign = 0;

  static LogValue from(double x) {
    if (x == 0.0) return {};
    return {std::log(std::abs(x)), x > 0 ? 1 : -1};
  }
  static LogValue zero() { return {}; }

  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_magnitude); }

  LogValue operator*(const LogValue& o) const {
    if (sign == 0 || o.sign == 0) return {};
    return {log_magnitude + o.log_magnitude, sign * o.sign};
  }
  LogValue squared() const {
    if (sign == 0) return {};
    return {2.0 * log_magnitude, 1};
  }
};

inline double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive, got " + format_short(x));
  return std::lgamma(x);
}

inline double digamma(double x) {
  if (!(x > 0.0)) throw DomainError("digamma: argument must be positive, got " + format_short(x));
  double acc = 0.0;
  while (x < 16.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  // Asymptotic series with Bernoulli coefficients B_2k / 2k.
  const double series =
      inv2 * (1.0 / 12 -
              inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 * (1.0 / 240 - inv2 * (1.0 / 132 - inv2 * (691.0 / 32760))))));
  return acc + std::log(x) - 0.5 / x - series;
}

/// log B(a, b)
inline double log_beta(double a, double b) { return log_gamma(a) + log_gamma(b) - log_gamma(a + b); }

// ---------------------------------------------------------------------------
// Orthogonal polynomial families

/// Weight x^alpha e^{-x} on [0, inf).
struct LaguerreFamily {
  double alpha = 0.0;
};

/// Weight (1-x)^a (1+x)^b on [-1, 1].
struct JacobiFamily {
  double a = 0.0;
  double b = 0.0;
};

using Family = std::variant<LaguerreFamily, JacobiFamily>;

/// Gegenbauer parameter g corresponds to the symmetric Jacobi weight
/// (1-x^2)^{g-1/2}.
inline JacobiFamily gegenbauer_family(double g) { return {g - 0.5, g - 0.5}; }

inline void check_family(const Family& f) {
  if (const auto* lag = std::get_if<LaguerreFamily>(&f)) {
    if (!(lag->alpha > -1.0)) throw DomainError("Laguerre parameter must exceed -1");
  } else {
    const auto& jac = std::get<JacobiFamily>(f);
    if (!(jac.a > -1.0 && jac.b > -1.0)) throw DomainError("Jacobi parameters must exceed -1");
  }
}

/// Monic recurrence p_{k+1} = (x - diag(k)) p_k - offdiag2(k) p_{k-1}.
struct Recurrence {
  Family family;

  double diag(int k) const {
    if (const auto* lag = std::get_if<LaguerreFamily>(&family)) return 2.0 * k + lag->alpha + 1.0;
    const auto& j = std::get<JacobiFamily>(family);
    if (j.a == j.b) return 0.0;
    const double s = j.a + j.b;
    if (k == 0) return (j.b - j.a) / (s + 2.0);
    return (j.b * j.b - j.a * j.a) / ((2.0 * k + s) * (2.0 * k + s + 2.0));
  }

  /// b_k for k >= 1.
  double offdiag2(int k) const {
    if (const auto* lag = std::get_if<LaguerreFamily>(&family)) return k * (k + lag->alpha);
    const auto& j = std::get<JacobiFamily>(family);
    const double s = j.a + j.b;
    if (k == 1) return 4.0 * (1.0 + j.a) * (1.0 + j.b) / ((2.0 + s) * (2.0 + s) * (3.0 + s));
    const double t = 2.0 * k + s;
    return 4.0 * k * (k + j.a) * (k + j.b) * (k + s) / (t * t * (t + 1.0) * (t - 1.0));
  }

  /// log of the total mass of the weight function.
  double log_mass() const {
    if (const auto* lag = std::get_if<LaguerreFamily>(&family)) return log_gamma(lag->alpha + 1.0);
    const auto& j = std::get<JacobiFamily>(family);
    return (j.a + j.b + 1.0) * std::numbers::ln2 + log_beta(j.a + 1.0, j.b + 1.0);
  }

  /// log of the leading coefficient of the orthonormal polynomial of degree k.
  double log_leading(int k) const {
    double acc = log_mass();
    for (int i = 1; i <= k; ++i) acc += std::log(offdiag2(i));
    return -0.5 * acc;
  }
};

namespace detail {

constexpr double kRescaleHigh = 1e150;
constexpr double kRescaleLow = 1e-150;

/// Scaled state of the orthonormal recurrence; actual values are
/// cur * exp(log_scale).  Values are normalized against the probability
/// measure (p_0 = 1) until the caller adds -log_mass/2.
struct ScaledRecurrence {
  double prev = 0.0, cur = 1.0;
  double dprev = 0.0, dcur = 0.0;
  double log_scale = 0.0;

  void rescale() {
    const double m = std::max({std::abs(cur), std::abs(prev), std::abs(dcur), std::abs(dprev)});
    if (m > kRescaleHigh || (m < kRescaleLow && m > 0.0)) {
      const double f = 1.0 / m;
      prev *= f;
      cur *= f;
      dprev *= f;
      dcur *= f;
      log_scale += std::log(m);
    }
  }

  void step(const Recurrence& rec, int k, double x, bool with_derivative) {
    const double bk1 = std::sqrt(rec.offdiag2(k + 1));
    const double bk = k > 0 ? std::sqrt(rec.offdiag2(k)) : 0.0;
    const double shift = x - rec.diag(k);
    const double next = (shift * cur - bk * prev) / bk1;
    if (with_derivative) {
      const double dnext = (cur + shift * dcur - bk * dprev) / bk1;
      dprev = dcur;
      dcur = dnext;
    }
    prev = cur;
    cur = next;
    rescale();
  }
};

}  // namespace detail

/// Orthonormal polynomial of degree k for the given family at x.
inline LogValue orthonormal_poly(const Family& family, int k, double x) {
  check_family(family);
  if (k < 0) throw DomainError("polynomial degree must be non-negative");
  const Recurrence rec{family};
  detail::ScaledRecurrence s;
  for (int i = 0; i < k; ++i) s.step(rec, i, x, false);
  if (s.cur == 0.0) return {};
  return {std::log(std::abs(s.cur)) + s.log_scale - 0.5 * rec.log_mass(), s.cur > 0 ? 1 : -1};
}

/// Value and first derivative sharing one scale: p = value * exp(log_scale),
/// p' = derivative * exp(log_scale).
struct PolyWithDerivative {
  double value = 0.0;
  double derivative = 0.0;
  double log_scale = 0.0;
};

inline PolyWithDerivative orthonormal_poly_with_derivative(const Family& family, int k, double x) {
  check_family(family);
  const Recurrence rec{family};
  detail::ScaledRecurrence s;
  for (int i = 0; i < k; ++i) s.step(rec, i, x, true);
  return {s.cur, s.dcur, s.log_scale - 0.5 * rec.log_mass()};
}

/// L~_k^{(alpha)}(x), orthonormal on [0, inf) with weight x^alpha e^{-x}.
inline LogValue orthonormal_laguerre(int k, double alpha, double x) {
  if (!(alpha > -1.0)) throw DomainError("orthonormal_laguerre: alpha must exceed -1");
  return orthonormal_poly(LaguerreFamily{alpha}, k, x);
}

/// C~_k^{(alpha)}(x), orthonormal on [-1, 1] with weight (1-x^2)^{alpha-1/2}.
inline LogValue orthonormal_gegenbauer(int k, double alpha, double x) {
  if (!(alpha > -0.5)) throw DomainError("orthonormal_gegenbauer: alpha must exceed -1/2");
  if (alpha == 0.0) throw DomainError("orthonormal_gegenbauer: alpha = 0 is not supported");
  if (x < -1.0 || x > 1.0) throw DomainError("orthonormal_gegenbauer: x outside [-1, 1]");
  return orthonormal_poly(gegenbauer_family(alpha), k, x);
}

}  // namespace hdqi
