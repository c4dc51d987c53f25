#pragma once

#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "degree_matrix.hpp"
#include "rational.hpp"

namespace dkscale {

/// How rescaled entries are brought back to integers, as (JDM, DCM).
/// Paper is floor for the JDM and ceiling for the DCM; the adjustment
/// guarantees downstream only hold for that pair.
enum class RoundingMode { Paper, FloorFloor, CeilCeil, RoundRound };

inline const char* to_string(RoundingMode m) {
  switch (m) {
    case RoundingMode::Paper: return "paper";
    case RoundingMode::FloorFloor: return "floor-floor";
    case RoundingMode::CeilCeil: return "ceil-ceil";
    case RoundingMode::RoundRound: return "round-round";
  }
  return "?";
}

inline RoundingMode parse_rounding_mode(const std::string& s) {
  if (s == "paper") return RoundingMode::Paper;
  if (s == "floor-floor") return RoundingMode::FloorFloor;
  if (s == "ceil-ceil") return RoundingMode::CeilCeil;
  if (s == "round-round") return RoundingMode::RoundRound;
  throw std::invalid_argument("unknown rounding mode '" + s + "'");
}

/// Why a sampling run cannot proceed. Each stage corresponds to one way the
/// adjustment matrix can fail to exist.
enum class InfeasibilityStage { NegativeCap, NegativeDelta, StubImbalance, PrefixViolation };

inline const char* to_string(InfeasibilityStage s) {
  switch (s) {
    case InfeasibilityStage::NegativeCap: return "negative-cap";
    case InfeasibilityStage::NegativeDelta: return "negative-delta";
    case InfeasibilityStage::StubImbalance: return "stub-imbalance";
    case InfeasibilityStage::PrefixViolation: return "prefix-violation";
  }
  return "?";
}

struct Infeasibility {
  InfeasibilityStage stage;
  std::string message;
  std::optional<DegreePair> at;  // negative-cap entry
  std::optional<Degree> degree;  // negative-delta line
  Count value = 0;               // the offending cap / delta / imbalance
  Count row_total = 0;           // stub-imbalance: sum of row deltas
  Count col_total = 0;           //                 sum of column deltas
  std::size_t prefix = 0;        // prefix-violation: t
  Count prefix_demand = 0;
  Count prefix_supply = 0;
};

class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(Infeasibility d) : std::runtime_error(d.message), diag_(std::move(d)) {}
  const Infeasibility& diagnosis() const { return diag_; }

 private:
  Infeasibility diag_;
};

struct RescaledMatrices {
  Rational k;
  RoundingMode mode = RoundingMode::Paper;
  SparseDegreeMatrix a_prime{MatrixKind::JDM};
  SparseDegreeMatrix b_prime{MatrixKind::DCM};
  RationalDegreeMatrix a_ring{MatrixKind::JDM};
  RationalDegreeMatrix b_ring{MatrixKind::DCM};
};

namespace detail {

inline Count round_entry(const Rational& x, bool up, bool nearest) {
  if (nearest) return to_count(round_of(x));
  return to_count(up ? ceil_of(x) : floor_of(x));
}

inline std::string describe(const ConsistencyResult& c) {
  std::string s;
  for (const auto& r : c.residuals) {
    if (!s.empty()) s += ", ";
    s += (r.axis == ConsistencyResidual::Axis::Row ? "row " : "col ") + std::to_string(r.degree) +
         ": " + std::to_string(r.jdm_sum) + " != " + std::to_string(r.degree_times);
  }
  return s;
}

}  // namespace detail

/// Divides every entry by k exactly, then integerizes: floor for the JDM and
/// ceiling for the DCM under RoundingMode::Paper.
inline RescaledMatrices rescale(const SparseDegreeMatrix& a, const SparseDegreeMatrix& b,
                                const Rational& k, RoundingMode mode = RoundingMode::Paper) {
  if (k <= 0) throw std::invalid_argument("sample coefficient k must be positive");
  if (a.kind() != MatrixKind::JDM || b.kind() != MatrixKind::DCM)
    throw std::invalid_argument("rescale expects a JDM and a DCM");
  if (auto c = consistency_check(a, b); !c.consistent)
    throw std::invalid_argument("JDM and DCM are inconsistent (" + detail::describe(c) + ")");

  const bool a_up = mode == RoundingMode::CeilCeil;
  const bool b_up = mode == RoundingMode::Paper || mode == RoundingMode::CeilCeil;
  const bool nearest = mode == RoundingMode::RoundRound;

  RescaledMatrices r;
  r.k = k;
  r.mode = mode;
  for (const auto& [key, v] : a.entries()) {
    Rational ring = Rational(v) / k;
    r.a_ring.set(key.row, key.col, ring);
    r.a_prime.set(key.row, key.col, detail::round_entry(ring, a_up, nearest));
  }
  for (const auto& [key, v] : b.entries()) {
    Rational ring = Rational(v) / k;
    r.b_ring.set(key.row, key.col, ring);
    r.b_prime.set(key.row, key.col, detail::round_entry(ring, b_up, nearest));
  }
  return r;
}

/// Line sums and entry cap for the adjustment matrix D that repairs the
/// integerized JDM so its line sums match the integerized DCM.
struct AdjustmentProblem {
  std::vector<Degree> row_degrees;  // D's row index -> out-degree
  std::vector<Degree> col_degrees;  // D's column index -> in-degree
  std::map<Degree, Count> r_delta;  // i * r_B'(i) - r_A'(i)
  std::map<Degree, Count> c_delta;  // j * c_B'(j) - c_A'(j)
  std::map<DegreePair, Count> l;    // r_B'(i) * c_B'(j) - b'_ij
  Count p = 0;                      // min over pairs of l_ij - a'_ij
  std::optional<DegreePair> argmin;

  std::vector<Count> row_sums() const {
    std::vector<Count> v;
    for (auto d : row_degrees) v.push_back(r_delta.at(d));
    return v;
  }
  std::vector<Count> col_sums() const {
    std::vector<Count> v;
    for (auto d : col_degrees) v.push_back(c_delta.at(d));
    return v;
  }
};

/// Computes r_delta, c_delta, L and the cap p. Throws InfeasibleError when p
/// is negative or a delta is negative (no nonnegative D can exist).
inline AdjustmentProblem derive_adjustment(const RescaledMatrices& rm) {
  const auto a_sums = line_sums(rm.a_prime);
  const auto b_sums = line_sums(rm.b_prime);

  AdjustmentProblem adj;
  std::map<Degree, bool> rows, cols;
  for (const auto& [d, v] : b_sums.rows)
    if (d >= 1 && v > 0) rows[d] = true;
  for (const auto& [d, v] : a_sums.rows)
    if (d >= 1 && v > 0) rows[d] = true;
  for (const auto& [d, v] : b_sums.cols)
    if (d >= 1 && v > 0) cols[d] = true;
  for (const auto& [d, v] : a_sums.cols)
    if (d >= 1 && v > 0) cols[d] = true;

  for (const auto& [i, _] : rows) {
    adj.row_degrees.push_back(i);
    adj.r_delta[i] = i * b_sums.row(i) - a_sums.row(i);
  }
  for (const auto& [j, _] : cols) {
    adj.col_degrees.push_back(j);
    adj.c_delta[j] = j * b_sums.col(j) - a_sums.col(j);
  }

  Count best = std::numeric_limits<Count>::max();
  for (auto i : adj.row_degrees) {
    for (auto j : adj.col_degrees) {
      Count lij = b_sums.row(i) * b_sums.col(j) - rm.b_prime.at(i, j);
      adj.l[DegreePair{i, j}] = lij;
      Count slack = lij - rm.a_prime.at(i, j);
      if (slack < best) {
        best = slack;
        adj.argmin = DegreePair{i, j};
      }
    }
  }
  adj.p = adj.argmin ? best : 0;

  if (adj.p < 0) {
    Infeasibility d{InfeasibilityStage::NegativeCap, {}};
    d.at = adj.argmin;
    d.value = adj.p;
    d.message = "adjustment cap negative at (" + std::to_string(adj.argmin->row) + "," +
                std::to_string(adj.argmin->col) + "): p = " + std::to_string(adj.p);
    throw InfeasibleError(std::move(d));
  }
  auto negative = [](const std::map<Degree, Count>& m, const char* what) {
    for (const auto& [deg, v] : m)
      if (v < 0) {
        Infeasibility d{InfeasibilityStage::NegativeDelta, {}};
        d.degree = deg;
        d.value = v;
        d.message = std::string(what) + " delta negative at degree " + std::to_string(deg) +
                    ": " + std::to_string(v);
        throw InfeasibleError(std::move(d));
      }
  };
  negative(adj.r_delta, "row");
  negative(adj.c_delta, "column");
  return adj;
}

}  // namespace dkscale
