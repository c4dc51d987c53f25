#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <json.hpp>

#include "degree_matrix.hpp"
#include "metrics.hpp"
#include "pipeline.hpp"
#include "rational.hpp"
#include "rescale.hpp"

namespace dkscale::json {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline Json document(const char* kind) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = kind;
  return j;
}

/// Float view of an exact value, 12 significant digits.
inline Json number(const Rational& x) { return rendered(x); }

/// Percentage rounded to two decimals.
inline double percent(const Rational& x) {
  return std::round(to_double(x * 10000)) / 100.0;
}

/// Decimal rounded to four significant digits.
inline double four_digits(const Rational& x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", to_double(x));
  return std::strtod(buf, nullptr);
}

// Matrices are arrays of [i, j, value]. Integer matrices store integers;
// rational ones store the exact "p/q" text.
template <class T>
Json matrix(const DegreeMatrix<T>& m) {
  Json arr = Json::array();
  for (const auto& [key, v] : m.entries()) {
    if constexpr (std::is_same_v<T, Rational>)
      arr.push_back(Json::array({key.row, key.col, to_string(v)}));
    else
      arr.push_back(Json::array({key.row, key.col, v}));
  }
  return arr;
}

inline SparseDegreeMatrix count_matrix(const Json& arr, MatrixKind kind) {
  SparseDegreeMatrix m(kind);
  for (const auto& e : arr) m.set(e.at(0).get<Degree>(), e.at(1).get<Degree>(), e.at(2).get<Count>());
  return m;
}

inline RationalDegreeMatrix rational_matrix(const Json& arr, MatrixKind kind) {
  RationalDegreeMatrix m(kind);
  for (const auto& e : arr)
    m.set(e.at(0).get<Degree>(), e.at(1).get<Degree>(), parse_rational(e.at(2).get<std::string>()));
  return m;
}

inline Json sparsity(const SparsityReport& r) {
  Json j = document("stats");
  j["n"] = r.n;
  j["e"] = r.e;
  j["nnz_dcm"] = r.nnz_dcm;
  j["nnz_jdm"] = r.nnz_jdm;
  j["pct_dcm"] = four_digits(r.pct_dcm);
  j["pct_jdm"] = four_digits(r.pct_jdm);
  return j;
}

inline Json interval_bound(const Interval& iv, bool upper) {
  if (iv.degenerate) return nullptr;
  return number(upper ? iv.upper : iv.lower);
}

inline Json deviation(const DeviationReport& r) {
  Json params;
  params["k"] = to_string(r.params.k);
  params["p"] = r.params.p;
  params["m_jdm"] = r.params.m_a;
  params["n_jdm"] = r.params.n_a;
  params["m_dcm"] = r.params.m_b;
  params["n_dcm"] = r.params.n_b;
  params["refined"] = r.params.refined;

  Json entries = Json::array();
  for (const auto& e : r.entries) {
    const Interval& iv = r.active(e);
    Json x;
    x["i"] = e.i;
    x["j"] = e.j;
    x["distribution"] = to_string(e.kind);
    x["lower"] = interval_bound(iv, false);
    x["upper"] = interval_bound(iv, true);
    x["achieved"] = e.achieved ? number(*e.achieved) : Json(nullptr);
    x["verdict"] = to_string(e.verdict);
    entries.push_back(std::move(x));
  }

  Json summary;
  for (auto v : {Verdict::Inside, Verdict::Outside, Verdict::Degenerate, Verdict::Unbounded})
    summary[to_string(v)] = r.count(v);

  Json j;
  j["params"] = std::move(params);
  j["summary"] = std::move(summary);
  j["entries"] = std::move(entries);
  return j;
}

inline Json diagnosis(const Infeasibility& d) {
  Json j;
  j["stage"] = to_string(d.stage);
  j["message"] = d.message;
  switch (d.stage) {
    case InfeasibilityStage::NegativeCap:
      j["at"] = Json::array({d.at->row, d.at->col});
      j["p"] = d.value;
      break;
    case InfeasibilityStage::NegativeDelta:
      j["degree"] = *d.degree;
      j["delta"] = d.value;
      break;
    case InfeasibilityStage::StubImbalance:
      j["row_delta_total"] = d.row_total;
      j["col_delta_total"] = d.col_total;
      j["imbalance"] = d.value;
      break;
    case InfeasibilityStage::PrefixViolation:
      j["prefix"] = d.prefix;
      j["demand"] = d.prefix_demand;
      j["supply"] = d.prefix_supply;
      break;
  }
  return j;
}

inline Json delta_map(const std::map<Degree, Count>& m) {
  Json arr = Json::array();
  for (const auto& [d, v] : m) arr.push_back(Json::array({d, v}));
  return arr;
}

/// Full record of a run. Hashes of the input and sample files are left to
/// the caller, who knows the bytes on disk.
inline Json run_record(const SampleRun& run) {
  Json j = document("sample-run");
  j["k"] = to_string(run.k);
  j["seed"] = run.seed;
  j["rounding"] = to_string(run.options.rounding);
  j["refined_bounds"] = run.options.refined_bounds;
  j["outcome"] = run.ok() ? "success" : "infeasible";

  Json m;
  m["jdm"] = matrix(run.a);
  m["dcm"] = matrix(run.b);
  m["jdm_scaled"] = matrix(run.rescaled.a_ring);
  m["dcm_scaled"] = matrix(run.rescaled.b_ring);
  m["jdm_rounded"] = matrix(run.rescaled.a_prime);
  m["dcm_rounded"] = matrix(run.rescaled.b_prime);
  if (run.success) {
    m["adjustment"] = matrix(run.success->adjustment);
    m["jdm_target"] = matrix(run.success->a_target);
    m["dcm_target"] = matrix(run.success->b_target);
  }
  j["matrices"] = std::move(m);

  if (run.adjustment) {
    Json a;
    a["row_delta"] = delta_map(run.adjustment->r_delta);
    a["col_delta"] = delta_map(run.adjustment->c_delta);
    a["p"] = run.adjustment->p;
    if (run.adjustment->argmin)
      a["p_at"] = Json::array({run.adjustment->argmin->row, run.adjustment->argmin->col});
    j["adjustment"] = std::move(a);
  }

  if (run.success) {
    j["sample"] = {{"nodes", run.success->graph.node_count()},
                   {"edges", run.success->graph.edge_count()}};
    j["deviation"] = deviation(run.success->deviation);
  } else {
    j["diagnosis"] = diagnosis(*run.infeasibility);
  }
  return j;
}

}  // namespace dkscale::json
