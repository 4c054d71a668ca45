#pragma once

// Output rows and their CSV / JSON serializations.

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace hdqi::cli {

constexpr int kSchemaVersion = 1;

struct OutputRow {
  std::string system;
  double strength = 1.0;
  int D = 3;
  int n = 0;
  int l = 0;
  std::vector<int> mu;
  std::string measure;
  std::string space;  // position, momentum or both
  std::optional<double> q, alpha, beta;
  std::string method;
  std::optional<double> value;
  std::optional<double> abs_error;
  bool converged = true;
  std::optional<double> predicted, residual;
  std::optional<double> closed, quadrature, relative_difference;
  std::string status = "ok";

  bool operator==(const OutputRow&) const = default;
};

struct Table {
  std::map<std::string, std::string> meta;
  std::vector<OutputRow> rows;

  bool operator==(const Table&) const = default;
};

inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "system", "strength", "D",         "n",         "l",         "mu",        "measure",
      "space",  "q",        "alpha",     "beta",      "method",    "value",     "abs_error",
      "converged", "predicted", "residual", "closed", "quadrature", "relative_difference", "status"};
  return cols;
}

/// 17 significant digits, enough to round-trip any double.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string format_optional(const std::optional<double>& x) { return x ? format_number(*x) : ""; }

/// mu list as ';'-separated entries; a run of k > 2 equal values v is
/// written v*k.
inline std::string join_mu(const std::vector<int>& mu) {
  std::string s;
  for (std::size_t i = 0; i < mu.size();) {
    std::size_t j = i;
    while (j < mu.size() && mu[j] == mu[i]) ++j;
    const std::size_t run = j - i;
    for (std::size_t k = 0; k < (run > 2 ? 1 : run); ++k) {
      if (!s.empty()) s += ';';
      s += std::to_string(mu[i]);
    }
    if (run > 2) s += '*' + std::to_string(run);
    i = j;
  }
  return s;
}

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline std::string single_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

inline void write_csv_header(std::ostream& os, const std::map<std::string, std::string>& meta) {
  for (const auto& [k, v] : meta) os << "# " << k << '=' << single_line(v) << '\n';
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
}

inline void write_csv_row(std::ostream& os, const OutputRow& r) {
  const std::vector<std::string> f = {r.system,
                                      format_number(r.strength),
                                      std::to_string(r.D),
                                      std::to_string(r.n),
                                      std::to_string(r.l),
                                      join_mu(r.mu),
                                      r.measure,
                                      r.space,
                                      format_optional(r.q),
                                      format_optional(r.alpha),
                                      format_optional(r.beta),
                                      r.method,
                                      format_optional(r.value),
                                      format_optional(r.abs_error),
                                      r.converged ? "true" : "false",
                                      format_optional(r.predicted),
                                      format_optional(r.residual),
                                      format_optional(r.closed),
                                      format_optional(r.quadrature),
                                      format_optional(r.relative_difference),
                                      single_line(r.status)};
  for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << csv_escape(f[i]);
  os << '\n';
}

inline void write_csv(std::ostream& os, const Table& t) {
  write_csv_header(os, t.meta);
  for (const OutputRow& r : t.rows) write_csv_row(os, r);
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

inline nlohmann::json optional_to_json(const std::optional<double>& x) {
  if (!x || !std::isfinite(*x)) return nullptr;
  return *x;
}

inline std::optional<double> optional_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace detail

inline nlohmann::json row_to_json(const OutputRow& r) {
  using detail::optional_to_json;
  return {{"system", r.system},
          {"strength", r.strength},
          {"D", r.D},
          {"n", r.n},
          {"l", r.l},
          {"mu", r.mu},
          {"measure", r.measure},
          {"space", r.space},
          {"q", optional_to_json(r.q)},
          {"alpha", optional_to_json(r.alpha)},
          {"beta", optional_to_json(r.beta)},
          {"method", r.method},
          {"value", optional_to_json(r.value)},
          {"abs_error", optional_to_json(r.abs_error)},
          {"converged", r.converged},
          {"predicted", optional_to_json(r.predicted)},
          {"residual", optional_to_json(r.residual)},
          {"closed", optional_to_json(r.closed)},
          {"quadrature", optional_to_json(r.quadrature)},
          {"relative_difference", optional_to_json(r.relative_difference)},
          {"status", r.status}};
}

inline OutputRow row_from_json(const nlohmann::json& j) {
  using detail::optional_from_json;
  OutputRow r;
  r.system = j.at("system").get<std::string>();
  r.strength = j.at("strength").get<double>();
  r.D = j.at("D").get<int>();
  r.n = j.at("n").get<int>();
  r.l = j.at("l").get<int>();
  r.mu = j.at("mu").get<std::vector<int>>();
  r.measure = j.at("measure").get<std::string>();
  r.space = j.at("space").get<std::string>();
  r.q = optional_from_json(j.at("q"));
  r.alpha = optional_from_json(j.at("alpha"));
  r.beta = optional_from_json(j.at("beta"));
  r.method = j.at("method").get<std::string>();
  r.value = optional_from_json(j.at("value"));
  r.abs_error = optional_from_json(j.at("abs_error"));
  r.converged = j.at("converged").get<bool>();
  r.predicted = optional_from_json(j.at("predicted"));
  r.residual = optional_from_json(j.at("residual"));
  r.closed = optional_from_json(j.at("closed"));
  r.quadrature = optional_from_json(j.at("quadrature"));
  r.relative_difference = optional_from_json(j.at("relative_difference"));
  r.status = j.at("status").get<std::string>();
  return r;
}

inline nlohmann::json table_to_json(const Table& t) {
  nlohmann::json meta = nlohmann::json::object();
  for (const auto& [k, v] : t.meta) meta[k] = v;
  nlohmann::json rows = nlohmann::json::array();
  for (const OutputRow& r : t.rows) rows.push_back(row_to_json(r));
  return {{"meta", meta}, {"rows", rows}};
}

inline Table table_from_json(const nlohmann::json& j) {
  Table t;
  for (const auto& [k, v] : j.at("meta").items()) t.meta[k] = v.get<std::string>();
  for (const auto& r : j.at("rows")) t.rows.push_back(row_from_json(r));
  return t;
}

inline void write_json(std::ostream& os, const Table& t) { os << table_to_json(t).dump(2) << '\n'; }

}  // namespace hdqi::cli
