#pragma once

// Quadrature over one density factor (see density.hpp).
//
// Polynomial integrands (power moments, the gradient functional) use a single
// Gauss rule whose parameters absorb every power of the natural variable, so
// the rule is exact once it has more nodes than half the polynomial degree.
//
// Entropic integrands contain |P|^{2q} or P^2 ln P^2, which are not smooth at
// the zeros of P.  The support is split at those zeros and every piece is
// integrated with a Gauss-Jacobi rule whose endpoint exponents absorb the
// |u - z|^{2q} behaviour (and the boundary powers of the weight), leaving a
// smooth remainder.  Regions where the integrand is below exp(-800) times its
// maximum are dropped.  The number of nodes per piece doubles from 32 until
// two successive estimates agree to 1e-10.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hdqi/density.hpp"
#include "hdqi/errors.hpp"
#include "hdqi/quadrature.hpp"
#include "hdqi/specfun.hpp"

namespace hdqi {

struct IntegrationOptions {
  int start_nodes = 32;
  int max_nodes = 4096;
  double tolerance = 1e-10;
};

struct IntegralResult {
  LogValue value;
  double abs_error = 0.0;  // |last change| of the compared quantity
  bool converged = false;
  int nodes = 0;           // nodes used in the final estimate
};

namespace detail {

constexpr double kNegligibleLog = 800.0;

inline void require_integrable(const PowerForm& e, Domain d, const char* what) {
  if (!(e.lo_exp > -1.0))
    throw DivergenceError(std::string(what) + ": integrand not integrable at the lower end (exponent " +
                          format_short(e.lo_exp) + " <= -1)");
  if (d == Domain::unit_interval && !(e.hi_exp > -1.0))
    throw DivergenceError(std::string(what) + ": integrand not integrable at the upper end (exponent " +
                          format_short(e.hi_exp) + " <= -1)");
  if (d == Domain::half_line && !(e.decay > 0.0))
    throw DivergenceError(std::string(what) + ": integrand does not decay at infinity");
}

/// Drives node doubling; `estimate(n)` returns the LogValue for n nodes,
/// `distance(a, b)` measures the change between estimates.
template <class Estimate, class Distance>
IntegralResult doubling(const IntegrationOptions& opt, Estimate&& estimate, Distance&& distance) {
  IntegralResult res;
  LogValue prev = estimate(opt.start_nodes);
  res.value = prev;
  res.nodes = opt.start_nodes;
  for (int n = 2 * opt.start_nodes; n <= opt.max_nodes; n *= 2) {
    const LogValue cur = estimate(n);
    const double change = distance(prev, cur);
    res.value = cur;
    res.nodes = n;
    res.abs_error = change;
    if (change <= opt.tolerance) {
      res.converged = true;
      return res;
    }
    prev = cur;
  }
  return res;
}

inline double log_distance(const LogValue& a, const LogValue& b) {
  if (a.sign != b.sign) return INFINITY;
  if (a.sign == 0) return 0.0;
  return std::abs(a.log_magnitude - b.log_magnitude);
}

inline double scaled_distance(const LogValue& a, const LogValue& b) {
  const double va = a.value(), vb = b.value();
  return std::abs(va - vb) / std::max(1.0, std::abs(vb));
}

/// Orthonormal polynomial in product form lead * prod (u - z_i).
struct ProductPoly {
  double log_lead = 0.0;
  std::vector<double> zeros;

  explicit ProductPoly(const Factor1D& f) {
    const Recurrence rec{f.family};
    log_lead = rec.log_leading(f.degree);
    if (f.degree > 0) zeros = cached_rule(f.family, f.degree)->nodes;
  }

  double log_abs(double u) const {
    double v = log_lead;
    for (double z : zeros) v += std::log(std::abs(u - z));
    return v;
  }
};

}  // namespace detail

/// Integral of exp(weight(u) + extra(u)) P(u)^2 over the factor's domain.
inline IntegralResult integrate_polynomial(const Factor1D& f, const PowerForm& extra,
                                           const IntegrationOptions& opt = {}) {
  const PowerForm e = f.weight + extra;
  detail::require_integrable(e, f.domain, "moment integral");
  const Family rule_family = f.domain == Domain::half_line ? Family{LaguerreFamily{e.lo_exp}}
                                                           : Family{JacobiFamily{e.hi_exp, e.lo_exp}};
  const double kappa = e.decay;
  auto estimate = [&](int n) {
    const auto rule = cached_rule(rule_family, n);
    LogSum sum;
    for (std::size_t i = 0; i < rule->order(); ++i) {
      const double u = f.domain == Domain::half_line ? rule->nodes[i] / kappa : rule->nodes[i];
      const LogValue p = orthonormal_poly(f.family, f.degree, u);
      if (p.sign == 0) continue;
      sum.add(rule->log_weight(i) + 2.0 * p.log_magnitude);
    }
    LogValue v = sum.result();
    v.log_magnitude += e.constant;
    if (f.domain == Domain::half_line) v.log_magnitude -= (e.lo_exp + 1.0) * std::log(kappa);
    return v;
  };
  return detail::doubling(opt, estimate, detail::log_distance);
}

/// Integral of exp(envelope(u)) |P(u)|^{2q} g(u, ln P(u)^2) over the factor's
/// domain.  `g` must be smooth apart from logarithmic singularities at the
/// zeros of P and at the domain boundaries.  When `signed_result` is false
/// convergence is measured on the logarithm of the integral.
template <class G>
IntegralResult integrate_profile(const Factor1D& f, const PowerForm& envelope, double q, G&& g,
                                 bool signed_result, const IntegrationOptions& opt = {}) {
  detail::require_integrable(envelope, f.domain, "entropic integral");
  const detail::ProductPoly poly(f);
  const bool half = f.domain == Domain::half_line;
  const double kappa = envelope.decay;
  const auto& zeros = poly.zeros;

  auto log_full = [&](double u) { return envelope.eval(u, f.domain) + 2.0 * q * poly.log_abs(u); };

  // Pieces [lo, hi] with endpoint tags: 0 = truncation, 1 = domain boundary, 2 = zero.
  struct Piece {
    double lo, hi;
    int lo_tag, hi_tag;
  };
  std::vector<Piece> pieces;

  if (zeros.empty() && half) {
    // Matched Gauss-Laguerre rule on the whole half line.
    auto estimate = [&](int n) {
      const auto rule = cached_rule(LaguerreFamily{envelope.lo_exp}, n);
      LogSum sum;
      const double log_p2 = 2.0 * poly.log_lead;
      for (std::size_t i = 0; i < rule->order(); ++i) {
        const double u = rule->nodes[i] / kappa;
        const double rem = envelope.constant + q * log_p2;
        sum.add(rule->log_weight(i) + rem, g(u, log_p2));
      }
      LogValue v = sum.result();
      v.log_magnitude -= (envelope.lo_exp + 1.0) * std::log(kappa);
      return v;
    };
    return signed_result ? detail::doubling(opt, estimate, detail::scaled_distance)
                         : detail::doubling(opt, estimate, detail::log_distance);
  }

  if (zeros.empty()) {
    pieces.push_back({-1.0, 1.0, 1, 1});
  } else {
    // Locate the region where the integrand is non-negligible.
    constexpr int kGrid = 4096;
    double ref = -INFINITY;
    std::vector<double> probes;
    for (std::size_t i = 0; i + 1 < zeros.size(); ++i) probes.push_back(0.5 * (zeros[i] + zeros[i + 1]));
    double upper = 1.0;
    if (half) {
      const double ustar = envelope.lo_exp > 0.0 ? envelope.lo_exp / kappa : 0.0;
      const double start = std::max(ustar, zeros.back()) + 1.0 / kappa;
      probes.push_back(start);
      probes.push_back(0.5 * zeros.front());
      if (ustar > 0.0) probes.push_back(ustar);
      for (double p : probes) ref = std::max(ref, log_full(p));
      double u = start;
      double step = std::max(1.0, std::sqrt(std::max(envelope.lo_exp, 1.0))) / kappa;
      while (log_full(u) > ref - detail::kNegligibleLog) {
        ref = std::max(ref, log_full(u));
        u += step;
        step *= 1.5;
      }
      upper = u;
    } else {
      for (double p : probes) ref = std::max(ref, log_full(p));
    }
    const double lo = half ? 0.0 : -1.0;
    const double h = (upper - lo) / kGrid;
    std::vector<double> vals(kGrid + 1, -INFINITY);
    double fmax = ref;
    for (int i = 1; i < kGrid; ++i) {
      vals[i] = log_full(lo + i * h);
      if (!std::isnan(vals[i])) fmax = std::max(fmax, vals[i]);
    }
    int first = -1, last = -1;
    for (int i = 1; i < kGrid; ++i) {
      if (vals[i] > fmax - detail::kNegligibleLog) {
        if (first < 0) first = i;
        last = i;
      }
    }
    if (first < 0) throw ConvergenceError("entropic integral: could not locate the integrand support");
    const bool keep_lo = first == 1;
    const bool keep_hi = !half && last == kGrid - 1;
    const double a = keep_lo ? lo : lo + (first - 1) * h;
    const double b = keep_hi ? 1.0 : lo + (last + 1) * h;
    std::vector<std::pair<double, int>> points{{a, keep_lo ? 1 : 0}};
    for (double z : zeros)
      if (z > a && z < b) points.push_back({z, 2});
    points.push_back({b, keep_hi ? 1 : 0});
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
      pieces.push_back({points[i].first, points[i + 1].first, points[i].second, points[i + 1].second});
  }

  auto exponent_for = [&](int tag, bool at_lo) {
    if (tag == 1) return at_lo ? envelope.lo_exp : envelope.hi_exp;
    if (tag == 2) return 2.0 * q;
    return 0.0;
  };

  auto estimate = [&](int n) {
    LogSum sum;
    for (const Piece& pc : pieces) {
      const double eb = exponent_for(pc.lo_tag, true);
      const double ea = exponent_for(pc.hi_tag, false);
      const auto rule = cached_rule(JacobiFamily{ea, eb}, n);
      const double hw = 0.5 * (pc.hi - pc.lo);
      const double log_scale = (ea + eb + 1.0) * std::log(hw);
      for (std::size_t i = 0; i < rule->order(); ++i) {
        const double x = rule->nodes[i];
        const double dl = hw * (1.0 + x);
        const double dr = hw * (1.0 - x);
        const double u = x <= 0.0 ? pc.lo + dl : pc.hi - dr;

        double rem = envelope.constant - envelope.decay * u;
        if (envelope.lo_exp != 0.0 && pc.lo_tag != 1)
          rem += envelope.lo_exp * (half ? std::log(u) : std::log1p(u));
        if (envelope.hi_exp != 0.0 && pc.hi_tag != 1) rem += envelope.hi_exp * std::log1p(-u);

        double log_p = poly.log_lead;
        double log_p_rem = poly.log_lead;
        for (double z : zeros) {
          double d;
          if (pc.lo_tag == 2 && z == pc.lo) {
            d = std::log(dl);
          } else if (pc.hi_tag == 2 && z == pc.hi) {
            d = std::log(dr);
          } else {
            d = std::log(std::abs(u - z));
            log_p_rem += d;
          }
          log_p += d;
        }
        rem += 2.0 * q * log_p_rem;
        sum.add(log_scale + rule->log_weight(i) + rem, g(u, 2.0 * log_p));
      }
    }
    return sum.result();
  };
  return signed_result ? detail::doubling(opt, estimate, detail::scaled_distance)
                       : detail::doubling(opt, estimate, detail::log_distance);
}

/// log of the entropic moment W_q = int m(u) R(u)^{q-1} du of a factor.
inline IntegralResult entropic_moment(const Factor1D& f, double q, const IntegrationOptions& opt = {}) {
  const PowerForm env = f.weight + f.density * (q - 1.0);
  return integrate_profile(f, env, q, [](double, double) { return 1.0; }, false, opt);
}

/// -int m(u) ln R(u) du, the Shannon contribution of a factor.
inline IntegralResult shannon_integral(const Factor1D& f, const IntegrationOptions& opt = {}) {
  auto g = [&f](double u, double log_p2) { return -(f.density.eval(u, f.domain) + log_p2); };
  return integrate_profile(f, f.weight, 1.0, g, true, opt);
}

/// int m(u) [d ln R / dr]^2 du: the radial gradient functional of a density
/// factor, evaluated from polynomial derivatives (no closed forms involved).
inline IntegralResult gradient_functional(const Factor1D& f, const PowerForm& jacobian,
                                          const IntegrationOptions& opt = {}) {
  // d ln R / du carries poles (u - lo)^{-1}, (hi - u)^{-1} wherever the density
  // has non-zero boundary powers; those are cleared by multiplying the bracket
  // with the boundary factor and lowering the rule exponent by two.
  const bool clear_lo = f.density.lo_exp != 0.0;
  const bool clear_hi = f.domain == Domain::unit_interval && f.density.hi_exp != 0.0;
  PowerForm e = f.weight + jacobian * -2.0;
  if (clear_lo) e.lo_exp -= 2.0;
  if (clear_hi) e.hi_exp -= 2.0;
  detail::require_integrable(e, f.domain, "gradient integral");
  const bool half = f.domain == Domain::half_line;
  const Family rule_family = half ? Family{LaguerreFamily{e.lo_exp}} : Family{JacobiFamily{e.hi_exp, e.lo_exp}};
  const double kappa = e.decay;
  auto estimate = [&](int n) {
    const auto rule = cached_rule(rule_family, n);
    LogSum sum;
    for (std::size_t i = 0; i < rule->order(); ++i) {
      const double u = half ? rule->nodes[i] / kappa : rule->nodes[i];
      const PolyWithDerivative p = orthonormal_poly_with_derivative(f.family, f.degree, u);
      // bracket = clear * (P dlnR/du) with the poles multiplied out
      const double lo_d = half ? u : 1.0 + u;
      const double hi_d = 1.0 - u;
      double smooth = -f.density.decay;
      double c = 1.0;
      if (clear_lo) c *= lo_d;
      if (clear_hi) c *= hi_d;
      double bracket = c * (p.value * smooth + 2.0 * p.derivative);
      if (f.density.lo_exp != 0.0) bracket += p.value * f.density.lo_exp * (clear_hi ? hi_d : 1.0);
      if (f.density.hi_exp != 0.0 && !half) bracket -= p.value * f.density.hi_exp * (clear_lo ? lo_d : 1.0);
      if (bracket == 0.0) continue;
      sum.add(rule->log_weight(i) + 2.0 * (std::log(std::abs(bracket)) + p.log_scale));
    }
    LogValue v = sum.result();
    v.log_magnitude += e.constant;
    if (half) v.log_magnitude -= (e.lo_exp + 1.0) * std::log(kappa);
    return v;
  };
  return detail::doubling(opt, estimate, detail::log_distance);
}

}  // namespace hdqi
