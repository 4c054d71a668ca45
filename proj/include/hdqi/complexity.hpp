#pragma once

// Cramer-Rao, Fisher-Shannon, LMC and LMC-Renyi complexities.

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "hdqi/errors.hpp"
#include "hdqi/infomeasures.hpp"
#include "hdqi/moments.hpp"
#include "hdqi/state.hpp"

namespace hdqi {

enum class ComplexityKind { cramer_rao, fisher_shannon, lmc, lmc_renyi };

inline std::string_view to_string(ComplexityKind k) {
  switch (k) {
    case ComplexityKind::cramer_rao: return "cramer_rao";
    case ComplexityKind::fisher_shannon: return "fisher_shannon";
    case ComplexityKind::lmc: return "lmc";
    case ComplexityKind::lmc_renyi: return "lmc_renyi";
  }
  return "?";
}

struct ComplexityValue {
  ComplexityKind kind = ComplexityKind::cramer_rao;
  Space space = Space::position;
  double alpha = 0.0;  // LMC-Renyi orders, unused otherwise
  double beta = 0.0;
  double value = 0.0;
  double lower_bound = 0.0;
  double margin = 0.0;  // value - lower_bound
  double abs_error_estimate = 0.0;
  bool converged = true;
};

/// C_CR = F x V, bounded below by D^2.
inline ComplexityValue cramer_rao(const QuantumState& raw, Space space) {
  const QuantumState s = validate(raw);
  ComplexityValue c;
  c.kind = ComplexityKind::cramer_rao;
  c.space = space;
  c.value = fisher_closed(s, space) * variance(s, space);
  c.lower_bound = static_cast<double>(s.D) * s.D;
  c.margin = c.value - c.lower_bound;
  return c;
}

/// C_FS = F exp(2S/D) / (2 pi e), bounded below by D.
inline ComplexityValue fisher_shannon(const QuantumState& raw, Space space) {
  const QuantumState s = validate(raw);
  const EntropyDecomposition S = shannon(s, space);
  ComplexityValue c;
  c.kind = ComplexityKind::fisher_shannon;
  c.space = space;
  const double power = std::exp(2.0 * S.total / s.D - 1.0) / (2.0 * std::numbers::pi);
  c.value = fisher_closed(s, space) * power;
  c.lower_bound = s.D;
  c.margin = c.value - c.lower_bound;
  c.abs_error_estimate = c.value * 2.0 * S.abs_error_estimate / s.D;
  c.converged = S.converged;
  return c;
}

/// exp((R_alpha - R_beta) / D) for 0 < alpha < beta; alpha = 1 uses Shannon.
inline ComplexityValue lmc_renyi(const QuantumState& raw, Space space, double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > alpha) || !std::isfinite(beta))
    throw DomainError("LMC-Renyi orders must satisfy 0 < alpha < beta < inf");
  const QuantumState s = validate(raw);
  const EntropyDecomposition ra = renyi(s, space, alpha);
  const EntropyDecomposition rb = renyi(s, space, beta);
  ComplexityValue c;
  c.kind = ComplexityKind::lmc_renyi;
  c.space = space;
  c.alpha = alpha;
  c.beta = beta;
  c.value = std::exp((ra.total - rb.total) / s.D);
  c.lower_bound = 1.0;
  c.margin = c.value - c.lower_bound;
  c.abs_error_estimate = c.value * (ra.abs_error_estimate + rb.abs_error_estimate) / s.D;
  c.converged = ra.converged && rb.converged;
  return c;
}

/// Plain LMC complexity in its per-dimension form, exp((S - R_2) / D).
inline ComplexityValue lmc(const QuantumState& s, Space space) {
  ComplexityValue c = lmc_renyi(s, space, 1.0, 2.0);
  c.kind = ComplexityKind::lmc;
  return c;
}

}  // namespace hdqi
