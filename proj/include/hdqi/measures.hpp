#pragma once

// Catalogue of named measures and a uniform evaluator over them.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hdqi/complexity.hpp"
#include "hdqi/errors.hpp"
#include "hdqi/infomeasures.hpp"
#include "hdqi/moments.hpp"
#include "hdqi/state.hpp"

namespace hdqi {

struct MeasureParams {
  double alpha = 2.0;  // moment order, or the first LMC-Renyi order
  double q = 2.0;      // Renyi / Tsallis order; position order of renyi_sum
  double beta = 2.0;   // second LMC-Renyi order
};

struct MeasureInfo {
  std::string_view id;
  bool per_space;           // false: combines both spaces
  std::string_view params;  // which of alpha, q, beta are read
  std::string_view description;
};

inline const std::vector<MeasureInfo>& measure_catalogue() {
  static const std::vector<MeasureInfo> list = {
      {"moment", true, "alpha", "radial expectation value <r^alpha> or <p^alpha>"},
      {"variance", true, "", "variance <r^2> or <p^2>"},
      {"heisenberg", false, "alpha", "Heisenberg-like product <r^alpha><p^alpha> (also heisenbergN)"},
      {"shannon", true, "", "Shannon entropy"},
      {"renyi", true, "q", "Renyi entropy R_q"},
      {"tsallis", true, "q", "Tsallis entropy T_q"},
      {"disequilibrium", true, "", "disequilibrium exp(-R_2)"},
      {"fisher", true, "", "Fisher information, closed form"},
      {"fisher_moments", true, "", "Fisher information from quadrature moments"},
      {"fisher_gradient", true, "", "Fisher information from the density gradient"},
      {"fisher_product", false, "", "Fisher uncertainty product F[rho] F[gamma]"},
      {"shannon_sum", false, "", "Shannon uncertainty sum S[rho] + S[gamma]"},
      {"renyi_sum", false, "q", "conjugate Renyi sum R_q[rho] + R_q'[gamma], 1/q + 1/q' = 2"},
      {"cramer_rao", true, "", "Cramer-Rao complexity F V"},
      {"fisher_shannon", true, "", "Fisher-Shannon complexity"},
      {"lmc", true, "", "LMC complexity, exp((S - R_2)/D)"},
      {"lmc_renyi", true, "alpha,beta", "LMC-Renyi complexity exp((R_alpha - R_beta)/D)"},
  };
  return list;
}

/// Resolves aliases such as "heisenberg2" (order embedded in the name).
inline const MeasureInfo& resolve_measure(std::string_view id, MeasureParams& params) {
  constexpr std::string_view heis = "heisenberg";
  if (id.size() > heis.size() && id.substr(0, heis.size()) == heis) {
    const std::string_view tail = id.substr(heis.size());
    double a = 0.0;
    const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), a);
    if (ec != std::errc() || ptr != tail.data() + tail.size())
      throw DomainError("unknown measure '" + std::string(id) + "'");
    params.alpha = a;
    id = heis;
  }
  for (const MeasureInfo& m : measure_catalogue())
    if (m.id == id) return m;
  throw DomainError("unknown measure '" + std::string(id) + "'");
}

/// Conjugate Renyi order q' with 1/q + 1/q' = 2.
inline double conjugate_order(double q) {
  if (!(q > 0.5)) throw DomainError("conjugate Renyi order needs q > 1/2");
  if (std::abs(q - 1.0) < kShannonRoute) return 1.0;
  return q / (2.0 * q - 1.0);
}

struct Evaluation {
  double value = 0.0;
  Method method = Method::closed_form;
  double abs_error = 0.0;
  bool converged = true;
  int nodes_used = 0;
  std::optional<double> closed;      // cross-check columns
  std::optional<double> quadrature;
};

namespace detail {

inline Evaluation from_measure(const MeasureValue& m) {
  return {m.value, m.method, m.abs_error_estimate, m.converged, m.nodes_used, {}, {}};
}

inline Evaluation from_entropy(const EntropyDecomposition& e) {
  return {e.total, Method::quadrature, e.abs_error_estimate, e.converged, e.nodes_used, {}, {}};
}

inline Evaluation from_complexity(const ComplexityValue& c, Method method) {
  return {c.value, method, c.abs_error_estimate, c.converged, 0, {}, {}};
}

}  // namespace detail

/// Evaluates measure `id` for a state.  `space` is ignored by measures that
/// combine both spaces.  With `cross_check`, measures that have both a closed
/// form and a quadrature route report both.
inline Evaluation evaluate_measure(std::string_view id, const QuantumState& raw, Space space, MeasureParams params,
                                   bool cross_check = false) {
  const MeasureInfo& info = resolve_measure(id, params);
  const QuantumState s = validate(raw);
  const std::string_view m = info.id;

  if (m == "moment") {
    Evaluation e = detail::from_measure(radial_moment(s, space, params.alpha));
    if (cross_check) {
      if (auto c = try_closed_moment(s, space, params.alpha)) e.closed = *c;
      e.quadrature = quadrature_moment(s, space, params.alpha).value;
    }
    return e;
  }
  if (m == "variance") {
    Evaluation e{variance(s, space), Method::closed_form, 0.0, true, 0, {}, {}};
    if (cross_check) {
      e.closed = e.value;
      e.quadrature = quadrature_moment(s, space, 2.0).value;
    }
    return e;
  }
  if (m == "heisenberg") {
    Evaluation e = detail::from_measure(heisenberg_product(s, params.alpha));
    if (cross_check) {
      const auto cr = try_closed_moment(s, Space::position, params.alpha);
      const auto cp = try_closed_moment(s, Space::momentum, params.alpha);
      if (cr && cp) e.closed = *cr * *cp;
      e.quadrature = quadrature_moment(s, Space::position, params.alpha).value *
                     quadrature_moment(s, Space::momentum, params.alpha).value;
    }
    return e;
  }
  if (m == "shannon") return detail::from_entropy(shannon(s, space));
  if (m == "renyi") return detail::from_entropy(renyi(s, space, params.q));
  if (m == "tsallis") {
    const EntropyDecomposition r = renyi(s, space, params.q);
    Evaluation e = detail::from_entropy(r);
    e.value = tsallis(s, space, params.q);
    return e;
  }
  if (m == "disequilibrium") {
    const EntropyDecomposition r = renyi(s, space, 2.0);
    Evaluation e = detail::from_entropy(r);
    e.value = std::exp(-r.total);
    e.abs_error = e.value * r.abs_error_estimate;
    return e;
  }
  if (m == "fisher") {
    Evaluation e{fisher_closed(s, space), Method::closed_form, 0.0, true, 0, {}, {}};
    if (cross_check) {
      e.closed = e.value;
      e.quadrature = fisher_via_moments(s, space).value;
    }
    return e;
  }
  if (m == "fisher_moments") return detail::from_measure(fisher_via_moments(s, space));
  if (m == "fisher_gradient") return detail::from_measure(fisher_gradient(s, space));
  if (m == "fisher_product") {
    Evaluation e{fisher_closed(s, Space::position) * fisher_closed(s, Space::momentum), Method::closed_form, 0.0,
                 true, 0, {}, {}};
    if (cross_check) {
      e.closed = e.value;
      e.quadrature = fisher_via_moments(s, Space::position).value * fisher_via_moments(s, Space::momentum).value;
    }
    return e;
  }
  if (m == "shannon_sum") {
    const EntropyDecomposition a = shannon(s, Space::position);
    const EntropyDecomposition b = shannon(s, Space::momentum);
    Evaluation e = detail::from_entropy(a);
    e.value = a.total + b.total;
    e.abs_error = a.abs_error_estimate + b.abs_error_estimate;
    e.converged = a.converged && b.converged;
    e.nodes_used = std::max(a.nodes_used, b.nodes_used);
    return e;
  }
  if (m == "renyi_sum") {
    const double p = params.q;
    const double q = conjugate_order(p);
    const EntropyDecomposition a = renyi(s, Space::position, p);
    const EntropyDecomposition b = renyi(s, Space::momentum, q);
    Evaluation e = detail::from_entropy(a);
    e.value = a.total + b.total;
    e.abs_error = a.abs_error_estimate + b.abs_error_estimate;
    e.converged = a.converged && b.converged;
    e.nodes_used = std::max(a.nodes_used, b.nodes_used);
    return e;
  }
  if (m == "cramer_rao") return detail::from_complexity(cramer_rao(s, space), Method::closed_form);
  if (m == "fisher_shannon") return detail::from_complexity(fisher_shannon(s, space), Method::quadrature);
  if (m == "lmc") return detail::from_complexity(lmc(s, space), Method::quadrature);
  if (m == "lmc_renyi") return detail::from_complexity(lmc_renyi(s, space, params.alpha, params.beta), Method::quadrature);
  throw DomainError("unknown measure '" + std::string(id) + "'");
}

}  // namespace hdqi
