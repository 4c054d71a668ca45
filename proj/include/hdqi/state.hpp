#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hdqi/errors.hpp"

namespace hdqi {

enum class System { hydrogenic, oscillator };
enum class Space { position, momentum };

inline std::string_view to_string(System s) { return s == System::hydrogenic ? "hydrogenic" : "oscillator"; }
inline std::string_view to_string(Space s) { return s == Space::position ? "position" : "momentum"; }

inline Space conjugate(Space s) { return s == Space::position ? Space::momentum : Space::position; }

/// Stationary bound state (n, l, mu_2 ... mu_{D-1}) of a D-dimensional
/// hydrogenic (nuclear charge Z) or isotropic oscillator (strength lambda)
/// system.  `strength` holds Z or lambda.  `mu` lists mu_2 >= ... >= mu_{D-1};
/// an empty list stands for all zeros.  In D = 2 the list is empty and
/// |m| = l.
struct QuantumState {
  System system = System::hydrogenic;
  double strength = 1.0;
  int D = 3;
  int n = 1;
  int l = 0;
  std::vector<int> mu;

  static QuantumState hydrogenic(double Z, int D, int n, int l, std::vector<int> mu = {}) {
    return {System::hydrogenic, Z, D, n, l, std::move(mu)};
  }
  static QuantumState oscillator(double lambda, int D, int n, int l, std::vector<int> mu = {}) {
    return {System::oscillator, lambda, D, n, l, std::move(mu)};
  }

  /// mu_j for j = 1 .. D-1 with mu_1 = l; missing entries read as zero.
  int mu_at(int j) const {
    if (j == 1) return l;
    if (D == 2) return l;
    const auto idx = static_cast<std::size_t>(j - 2);
    return idx < mu.size() ? mu[idx] : 0;
  }
  int abs_m() const { return mu_at(D - 1); }

  /// Hydrogenic grand quantum number n + (D-3)/2.
  double eta_hydrogenic() const { return n + 0.5 * (D - 3); }
  /// Oscillator analogue 2n + l + (D-3)/2, so that E = lambda (eta + 3/2).
  double eta_oscillator() const { return 2.0 * n + l + 0.5 * (D - 3); }
  double eta() const { return system == System::hydrogenic ? eta_hydrogenic() : eta_oscillator(); }
  double L() const { return l + 0.5 * (D - 3); }
  /// Hydrogenic length scale eta / (2Z).
  double Lambda() const { return eta_hydrogenic() / (2.0 * strength); }
  /// Energy in atomic units.
  double energy() const {
    if (system == System::hydrogenic) return -strength * strength / (eta_hydrogenic() * eta_hydrogenic());
    return strength * (2.0 * n + l + 0.5 * D);
  }
};

/// Verifies every state invariant and returns a copy with the mu list
/// expanded to its full D-2 entries.
inline QuantumState validate(const QuantumState& s) {
  auto fail = [](const std::string& what) { throw InvalidState(what); };
  if (s.D < 2) fail("D >= 2 violated (D = " + std::to_string(s.D) + ")");
  if (!(s.strength > 0.0))
    fail(std::string(s.system == System::hydrogenic ? "Z" : "lambda") + " > 0 violated");
  if (s.l < 0) fail("l >= 0 violated");
  if (s.system == System::hydrogenic) {
    if (s.n < 1) fail("n >= 1 violated");
    if (s.l > s.n - 1) fail("l <= n-1 violated");
  } else if (s.n < 0) {
    fail("n >= 0 violated");
  }

  QuantumState out = s;
  const auto count = static_cast<std::size_t>(s.D - 2);
  if (s.mu.empty()) {
    out.mu.assign(count, 0);
  } else if (s.mu.size() != count) {
    fail("mu must list D-2 = " + std::to_string(count) + " entries, got " + std::to_string(s.mu.size()));
  }
  int previous = s.l;
  for (int v : out.mu) {
    if (v < 0) fail("hyperquantum ordering violated (negative mu)");
    if (v > previous) fail("hyperquantum ordering violated (need l >= mu_2 >= ... >= |m| >= 0)");
    previous = v;
  }
  return out;
}

}  // namespace hdqi
