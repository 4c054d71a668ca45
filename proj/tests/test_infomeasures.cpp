#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "hdqi/infomeasures.hpp"

using namespace hdqi;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;
constexpr Space pos = Space::position;
constexpr Space mom = Space::momentum;

/// Gaussian (oscillator ground state) entropies: rho = (lambda/pi)^{D/2} exp(-lambda r^2).
double gaussian_renyi(int D, double lambda, double q) {
  const double base = 0.5 * D * std::log(pi / lambda);
  if (q == 1.0) return base + 0.5 * D;
  return base + 0.5 * D * std::log(q) / (q - 1.0);
}

}  // namespace

TEST_CASE("hydrogen ground-state entropies", "[infomeasures]") {
  const auto s = QuantumState::hydrogenic(1, 3, 1, 0);
  CHECK_THAT(shannon(s, pos).total, WithinRel(3.0 + std::log(pi), 1e-11));
  CHECK_THAT(renyi(s, pos, 2.0).total, WithinRel(std::log(8.0 * pi), 1e-12));
  CHECK_THAT(shannon(s, pos).angular, WithinRel(std::log(4.0 * pi), 1e-14));
  CHECK(shannon(s, pos).angular_method == Method::closed_form);
  // Z scaling: S_Z = S_1 - D ln Z.
  CHECK_THAT(shannon(QuantumState::hydrogenic(2, 3, 1, 0), pos).total,
             WithinRel(3.0 + std::log(pi) - 3.0 * std::log(2.0), 1e-11));
}

TEST_CASE("Gaussian entropies in any dimension", "[infomeasures]") {
  for (int D : {2, 3, 10, 250}) {
    for (double lam : {0.3, 1.0, 5.0}) {
      const auto s = QuantumState::oscillator(lam, D, 0, 0);
      INFO("D " << D << " lambda " << lam);
      for (double q : {0.4, 1.0, 2.0, 7.0}) {
        CHECK_THAT(renyi(s, pos, q).total, WithinAbs(gaussian_renyi(D, lam, q), 1e-10 * std::max(1.0, 1.0 * D)));
        CHECK_THAT(renyi(s, mom, q).total, WithinAbs(gaussian_renyi(D, 1.0 / lam, q), 1e-10 * std::max(1.0, 1.0 * D)));
      }
    }
  }
}

TEST_CASE("entropies match high-precision quadrature oracles", "[infomeasures][oracle]") {
  // tests/oracles/generate.py, Z = lambda = 1.
  CHECK_THAT(shannon(QuantumState::hydrogenic(1, 3, 2, 1, {0}), pos).total, WithinRel(7.2648971184521924, 1e-12));
  CHECK_THAT(renyi(QuantumState::hydrogenic(1, 3, 2, 1, {0}), pos, 2.0).total, WithinRel(6.5721242946725792, 1e-12));
  CHECK_THAT(shannon(QuantumState::hydrogenic(1, 3, 2, 1, {1}), pos).total, WithinRel(7.5717499378922471, 1e-12));
  CHECK_THAT(shannon(QuantumState::hydrogenic(1, 3, 1, 0), mom).total, WithinRel(2.4218623411651936, 1e-12));
  CHECK_THAT(shannon(QuantumState::hydrogenic(1, 3, 2, 0), mom).total, WithinRel(-0.75757920051464237, 1e-11));
  CHECK_THAT(renyi(QuantumState::hydrogenic(1, 3, 2, 0), mom, 3.0).total, WithinRel(-2.3353838678460738, 1e-11));

  const auto h = QuantumState::hydrogenic(1, 5, 3, 0);
  CHECK_THAT(shannon(h, pos).total, WithinRel(18.753607346113292, 1e-12));
  CHECK_THAT(renyi(h, pos, 2.0).total, WithinRel(14.238241932156974, 1e-12));
  CHECK_THAT(renyi(h, pos, 0.5).total, WithinRel(19.935438119986303, 1e-12));
  CHECK_THAT(shannon(h, mom).total, WithinRel(-5.9028171228917597, 1e-11));

  const auto o = QuantumState::oscillator(1, 4, 2, 0);
  CHECK_THAT(shannon(o, pos).total, WithinRel(5.9557032396468422, 1e-12));
  CHECK_THAT(renyi(o, pos, 3.0).total, WithinRel(2.9154044274719042, 1e-12));
  CHECK_THAT(renyi(o, pos, 0.5).total, WithinRel(6.7982724262506164, 1e-12));
}

TEST_CASE("Tsallis entropy and disequilibrium", "[infomeasures]") {
  CHECK_THAT(tsallis(QuantumState::hydrogenic(1, 3, 1, 0), pos, 2.0), WithinRel(0.96021126422702617, 1e-12));
  CHECK_THAT(tsallis(QuantumState::oscillator(1, 3, 0, 0), pos, 2.0), WithinRel(0.93650636406575903, 1e-12));
  CHECK_THAT(disequilibrium(QuantumState::hydrogenic(1, 3, 1, 0), pos), WithinRel(1.0 / (8.0 * pi), 1e-12));
  const auto s = QuantumState::hydrogenic(1, 4, 2, 1);
  CHECK_THAT(tsallis(s, mom, 1.0), WithinRel(shannon(s, mom).total, 1e-14));
}

TEST_CASE("closed-form Fisher information", "[infomeasures]") {
  CHECK_THAT(fisher_closed(QuantumState::hydrogenic(1, 3, 1, 0), pos), WithinRel(4.0, 1e-15));
  CHECK_THAT(fisher_closed(QuantumState::hydrogenic(1, 3, 1, 0), mom), WithinRel(12.0, 1e-15));
  CHECK_THAT(fisher_closed(QuantumState::oscillator(1, 3, 0, 0), pos), WithinRel(6.0, 1e-15));
  CHECK_THAT(fisher_closed(QuantumState::oscillator(1, 3, 0, 0), mom), WithinRel(6.0, 1e-15));
  CHECK_THAT(fisher_closed(QuantumState::oscillator(1, 3, 0, 1, {1}), pos), WithinRel(6.0, 1e-15));
  CHECK_THAT(fisher_closed(QuantumState::oscillator(1, 3, 0, 1, {0}), pos), WithinRel(10.0, 1e-15));
  CHECK_THAT(fisher_closed(QuantumState::hydrogenic(1, 3, 2, 1, {1}), pos), WithinRel(0.5, 1e-15));
  CHECK_THAT(fisher_closed(QuantumState::hydrogenic(1, 3, 2, 1, {1}), mom), WithinRel(64.0, 1e-15));
  // Large-D oscillator ground state: 2 lambda D.
  CHECK_THAT(fisher_closed(QuantumState::oscillator(3, 1000, 0, 0), pos), WithinRel(6000.0, 1e-15));
}

TEST_CASE("Fisher closed form, moment identity and density gradient agree", "[infomeasures][property]") {
  for (int D : {2, 3, 4, 6, 15, 60}) {
    for (int n = 1; n <= 4; ++n) {
      for (int l = 0; l < n && l <= 3; ++l) {
        for (int m = 0; m <= l; ++m) {
          if (D == 2 && m != l) continue;
          std::vector<int> mu(D - 2, m);
          for (const QuantumState& s :
               {QuantumState::hydrogenic(1.5, D, n, l, mu), QuantumState::oscillator(0.8, D, n - 1, l, mu)}) {
            for (Space sp : {pos, mom}) {
              INFO(to_string(s.system) << " D " << D << " n " << s.n << " l " << l << " m " << m << " "
                                       << to_string(sp));
              const double closed = fisher_closed(s, sp);
              CHECK_THAT(fisher_via_moments(s, sp).value, WithinRel(closed, 1e-9));
              CHECK_THAT(fisher_gradient(s, sp).value, WithinRel(closed, 1e-9));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("Renyi orders outside the convergence range are rejected", "[infomeasures]") {
  // Hydrogenic momentum density decays as p^{-2(l + D + 1)}.
  CHECK_THROWS_AS(renyi(QuantumState::hydrogenic(1, 3, 1, 0), mom, 0.3), DivergenceError);
  CHECK_NOTHROW(renyi(QuantumState::hydrogenic(1, 3, 1, 0), mom, 0.4));
  CHECK_THROWS_AS(renyi(QuantumState::hydrogenic(1, 3, 1, 0), pos, 0.0), DomainError);
  CHECK_THROWS_AS(renyi(QuantumState::hydrogenic(1, 3, 1, 0), pos, -2.0), DomainError);
  CHECK_NOTHROW(renyi(QuantumState::oscillator(1, 3, 0, 0), pos, 0.05));
}

TEST_CASE("Renyi entropy is non-increasing in q", "[infomeasures][property]") {
  for (const QuantumState& s : {QuantumState::hydrogenic(1, 3, 3, 1), QuantumState::hydrogenic(1, 12, 2, 0),
                                QuantumState::oscillator(2, 5, 2, 2, {1, 1, 0})}) {
    for (Space sp : {pos, mom}) {
      double prev = INFINITY;
      for (double q : {0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 6.0}) {
        const double r = renyi(s, sp, q).total;
        CHECK(r <= prev + 1e-10);
        prev = r;
      }
    }
  }
}

TEST_CASE("oscillator lambda duality and hydrogenic Z scaling of entropies", "[infomeasures][property]") {
  for (int D : {3, 8}) {
    const auto a = QuantumState::oscillator(2.5, D, 1, 2);
    const auto b = QuantumState::oscillator(0.4, D, 1, 2);
    CHECK_THAT(renyi(a, pos, 2.0).total, WithinAbs(renyi(b, mom, 2.0).total, 1e-11));
    CHECK_THAT(shannon(a, mom).total, WithinAbs(shannon(b, pos).total, 1e-11));
    CHECK_THAT(fisher_closed(a, pos), WithinRel(fisher_closed(b, mom), 1e-15));

    const auto h1 = QuantumState::hydrogenic(1, D, 3, 1);
    const auto h3 = QuantumState::hydrogenic(3, D, 3, 1);
    CHECK_THAT(renyi(h3, pos, 0.7).total, WithinAbs(renyi(h1, pos, 0.7).total - D * std::log(3.0), 1e-10));
    CHECK_THAT(renyi(h3, mom, 2.0).total, WithinAbs(renyi(h1, mom, 2.0).total + D * std::log(3.0), 1e-10));
    CHECK_THAT(fisher_closed(h3, pos), WithinRel(9.0 * fisher_closed(h1, pos), 1e-14));
  }
}

TEST_CASE("uncertainty relations", "[infomeasures]") {
  const UncertaintyReport g = uncertainty_report(QuantumState::oscillator(1.7, 4, 0, 0), 2.0, 2.0 / 3.0);
  // The Gaussian saturates every relation.
  CHECK_THAT(g.shannon_margin(), WithinAbs(0.0, 1e-10));
  CHECK_THAT(g.renyi_margin(), WithinAbs(0.0, 1e-10));
  CHECK_THAT(g.fisher_ratio(), WithinRel(1.0, 1e-14));
  CHECK_THAT(g.heisenberg_ratio(), WithinRel(1.0, 1e-14));

  const UncertaintyReport h = uncertainty_report(QuantumState::hydrogenic(1, 3, 3, 2), 3.0, 0.6);
  CHECK(h.shannon_margin() > 0.0);
  CHECK(h.renyi_margin() > 0.0);
  CHECK(h.heisenberg_ratio() > 1.0);
  CHECK_THAT(renyi_sum_bound(3, 1.0, 1.0), WithinRel(shannon_sum_bound(3), 1e-15));

  CHECK_THROWS_AS(uncertainty_report(QuantumState::oscillator(1, 3, 0, 0), 2.0, 2.0), DomainError);
  CHECK_THROWS_AS(uncertainty_report(QuantumState::oscillator(1, 3, 0, 0), 0.4, -2.0), DomainError);
}

TEST_CASE("Fisher product falls below 4 D^2 for complex states", "[infomeasures]") {
  // The 4 D^2 lower bound holds for real wavefunctions (m = 0).  The 2p, |m| = 1
  // state gives F[rho] F[gamma] = 0.5 * 64 = 32 < 36.
  const UncertaintyReport real = uncertainty_report(QuantumState::hydrogenic(1, 3, 2, 1, {0}), 2.0, 2.0 / 3.0);
  CHECK(real.fisher_ratio() >= 1.0);
  const UncertaintyReport cplx = uncertainty_report(QuantumState::hydrogenic(1, 3, 2, 1, {1}), 2.0, 2.0 / 3.0);
  CHECK_THAT(cplx.fisher_product, WithinRel(32.0, 1e-14));
  CHECK(cplx.fisher_ratio() < 1.0);
}
