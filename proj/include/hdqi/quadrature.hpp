#pragma once

// Gaussian quadrature rules for Laguerre- and Jacobi-type weights.
//
// Nodes are the eigenvalues of the symmetric tridiagonal Jacobi matrix built
// from the monic recurrence coefficients, refined by one Newton step on the
// orthonormal recurrence.  Weights come from the Christoffel-Darboux identity
// at the refined node, which keeps tiny tail weights relatively accurate.
// Weights are stored normalized to unit sum; the log of the weight-function
// mass is stored separately because it overflows doubles for large
// parameters (Gamma(alpha+1) at alpha ~ 10^3).

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "hdqi/errors.hpp"
#include "hdqi/specfun.hpp"

namespace hdqi {

struct QuadratureRule {
  Family family;
  std::vector<double> nodes;
  std::vector<double> weights;  // normalized: sum == 1
  double log_mass = 0.0;        // log of the integral of the weight function

  std::size_t order() const { return nodes.size(); }
  double log_weight(std::size_t i) const { return log_mass + std::log(weights[i]); }
  /// Absolute weight; may overflow for large parameters, prefer log_weight.
  double weight(std::size_t i) const { return std::exp(log_weight(i)); }
};

namespace detail {

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with Wilkinson
/// shifts.  diag has n entries, off has n entries with off[i] coupling i and
/// i+1 (off[n-1] is ignored).
inline void tridiagonal_eigenvalues(std::vector<double>& diag, std::vector<double> off, int max_iter = 60) {
  const int n = static_cast<int>(diag.size());
  if (n == 0) return;
  off[n - 1] = 0.0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
        if (std::abs(off[m]) <= 1e-17 * dd) break;
      }
      if (m != l) {
        if (iter++ == max_iter)
          throw ConvergenceError("tridiagonal eigensolver: iteration cap reached at index " + std::to_string(l));
        double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
        double r = std::hypot(g, 1.0);
        g = diag[m] - diag[l] + off[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          const double f = s * off[i];
          const double b = c * off[i];
          r = std::hypot(f, g);
          off[i + 1] = r;
          if (r == 0.0) {
            diag[i + 1] -= p;
            off[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = diag[i + 1] - p;
          r = (diag[i] - g) * s + 2.0 * c * b;
          p = s * r;
          diag[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        diag[l] -= p;
        off[l] = g;
        off[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(diag.begin(), diag.end());
}

}  // namespace detail

/// N-point Gauss rule for the family's weight function.
inline QuadratureRule gauss_rule(const Family& family, int n) {
  check_family(family);
  if (n < 1) throw DomainError("gauss_rule: order must be at least 1");
  const Recurrence rec{family};

  std::vector<double> diag(n), off(n, 0.0);
  for (int k = 0; k < n; ++k) diag[k] = rec.diag(k);
  for (int k = 0; k + 1 < n; ++k) off[k] = std::sqrt(rec.offdiag2(k + 1));
  detail::tridiagonal_eigenvalues(diag, off);

  QuadratureRule rule;
  rule.family = family;
  rule.log_mass = rec.log_mass();
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double log_bn = 0.5 * std::log(rec.offdiag2(n));
  const bool jacobi = std::holds_alternative<JacobiFamily>(family);

  for (int i = 0; i < n; ++i) {
    double x = diag[i];
    detail::ScaledRecurrence s;
    for (int k = 0; k < n; ++k) s.step(rec, k, x, true);
    if (s.dcur != 0.0) {
      const double dx = s.cur / s.dcur;
      double polished = x - dx;
      if (jacobi) polished = std::clamp(polished, std::nextafter(-1.0, 0.0), std::nextafter(1.0, 0.0));
      else if (polished <= 0.0) polished = x;
      x = polished;
      s = {};
      for (int k = 0; k < n; ++k) s.step(rec, k, x, true);
    }
    rule.nodes[i] = x;
    // Christoffel-Darboux: sum_{k<n} p_k(x)^2 = sqrt(b_n) (p_n' p_{n-1} - p_{n-1}' p_n)
    const double cd = s.dcur * s.prev - s.dprev * s.cur;
    rule.weights[i] = std::exp(-(std::log(std::abs(cd)) + 2.0 * s.log_scale + log_bn));
  }

  double total = 0.0;
  for (double w : rule.weights) total += w;
  for (double& w : rule.weights) w /= total;
  return rule;
}

/// Process-wide memo of generated rules, keyed by family parameters and order.
/// Rules are immutable once inserted and shared by pointer.
class RuleCache {
 public:
  static RuleCache& instance() {
    static RuleCache cache;
    return cache;
  }

  std::shared_ptr<const QuadratureRule> get(const Family& family, int n) {
    const Key key = make_key(family, n);
    {
      std::lock_guard lock(mutex_);
      if (auto it = rules_.find(key); it != rules_.end()) return it->second;
    }
    auto rule = std::make_shared<const QuadratureRule>(gauss_rule(family, n));
    std::lock_guard lock(mutex_);
    auto [it, inserted] = rules_.emplace(key, std::move(rule));
    return it->second;
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return rules_.size();
  }

 private:
  using Key = std::tuple<int, double, double, int>;

  static Key make_key(const Family& family, int n) {
    if (const auto* lag = std::get_if<LaguerreFamily>(&family)) return {0, lag->alpha, 0.0, n};
    const auto& j = std::get<JacobiFamily>(family);
    return {1, j.a, j.b, n};
  }

  mutable std::mutex mutex_;
  std::map<Key, std::shared_ptr<const QuadratureRule>> rules_;
};

inline std::shared_ptr<const QuadratureRule> cached_rule(const Family& family, int n) {
  return RuleCache::instance().get(family, n);
}

/// log of sum_i w_i exp(log_f_i) * sign_i over a rule, returned as LogValue.
/// Terms with log_f below the running maximum by more than 745 vanish.
class LogSum {
 public:
  void add(double log_term, double factor = 1.0) {
    if (factor == 0.0 || (std::isinf(log_term) && log_term < 0)) return;
    if (log_term > max_) {
      sum_ *= std::exp(max_ - log_term);
      max_ = log_term;
    }
    sum_ += factor * std::exp(log_term - max_);
  }
  void add(const LogValue& v) {
    if (v.sign != 0) add(v.log_magnitude, v.sign);
  }

  LogValue result() const {
    if (sum_ == 0.0 || std::isinf(max_)) return {};
    return {max_ + std::log(std::abs(sum_)), sum_ > 0 ? 1 : -1};
  }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

}  // namespace hdqi
