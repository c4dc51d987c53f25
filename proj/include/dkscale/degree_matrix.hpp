#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "graph.hpp"
#include "rational.hpp"

namespace dkscale {

using Degree = std::int64_t;

/// JDM: edges keyed by (source out-degree, target in-degree), indices >= 1.
/// DCM: nodes keyed by (out-degree, in-degree), indices >= 0.
enum class MatrixKind { JDM, DCM };

inline const char* to_string(MatrixKind k) { return k == MatrixKind::JDM ? "jdm" : "dcm"; }

struct DegreePair {
  Degree row = 0;
  Degree col = 0;

  friend auto operator<=>(const DegreePair&, const DegreePair&) = default;
};

/// Sparse matrix keyed by degree values. Zero entries are never stored.
template <class T>
class DegreeMatrix {
 public:
  using value_type = T;
  using Map = std::map<DegreePair, T>;

  explicit DegreeMatrix(MatrixKind kind = MatrixKind::JDM) : kind_(kind) {}

  MatrixKind kind() const { return kind_; }
  Degree min_index() const { return kind_ == MatrixKind::JDM ? 1 : 0; }

  const Map& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  T at(Degree i, Degree j) const {
    auto it = entries_.find(DegreePair{i, j});
    return it == entries_.end() ? T(0) : it->second;
  }

  void set(Degree i, Degree j, const T& v) {
    check_index(i, j);
    if (v < 0) throw std::invalid_argument("degree matrix entries must be non-negative");
    if (v == 0)
      entries_.erase(DegreePair{i, j});
    else
      entries_[DegreePair{i, j}] = v;
  }

  void add(Degree i, Degree j, const T& v) { set(i, j, at(i, j) + v); }

  T total() const {
    T s = 0;
    for (const auto& [_, v] : entries_) s += v;
    return s;
  }

  /// Largest row (column) index holding a nonzero entry, or min_index()-1
  /// when empty.
  Degree max_row() const {
    Degree m = min_index() - 1;
    for (const auto& [k, _] : entries_) m = std::max(m, k.row);
    return m;
  }
  Degree max_col() const {
    Degree n = min_index() - 1;
    for (const auto& [k, _] : entries_) n = std::max(n, k.col);
    return n;
  }

  /// Logical dimensions: indices run from min_index() to the largest
  /// occupied index.
  Degree rows() const { return max_row() - min_index() + 1; }
  Degree cols() const { return max_col() - min_index() + 1; }

  friend bool operator==(const DegreeMatrix& a, const DegreeMatrix& b) {
    return a.kind_ == b.kind_ && a.entries_ == b.entries_;
  }

 private:
  void check_index(Degree i, Degree j) const {
    if (i < min_index() || j < min_index())
      throw std::out_of_range(std::string(to_string(kind_)) + " index (" + std::to_string(i) +
                              "," + std::to_string(j) + ") below " +
                              std::to_string(min_index()));
  }

  MatrixKind kind_;
  Map entries_;
};

using SparseDegreeMatrix = DegreeMatrix<Count>;
using RationalDegreeMatrix = DegreeMatrix<Rational>;

inline SparseDegreeMatrix extract_jdm(const DirectedGraph& g) {
  auto deg = degrees(g);
  SparseDegreeMatrix a(MatrixKind::JDM);
  const auto& d = deg.degrees();
  for (const auto& e : g.edges())
    a.add(d[g.index_of(e.source)].out, d[g.index_of(e.target)].in, 1);
  return a;
}

inline SparseDegreeMatrix extract_dcm(const DirectedGraph& g) {
  auto deg = degrees(g);
  SparseDegreeMatrix b(MatrixKind::DCM);
  for (const auto& nd : deg.degrees()) b.add(nd.out, nd.in, 1);
  return b;
}

template <class T>
struct LineSumVectors {
  std::map<Degree, T> rows;
  std::map<Degree, T> cols;

  T row(Degree i) const {
    auto it = rows.find(i);
    return it == rows.end() ? T(0) : it->second;
  }
  T col(Degree j) const {
    auto it = cols.find(j);
    return it == cols.end() ? T(0) : it->second;
  }
};

template <class T>
LineSumVectors<T> line_sums(const DegreeMatrix<T>& a) {
  LineSumVectors<T> s;
  for (const auto& [k, v] : a.entries()) {
    s.rows[k.row] += v;
    s.cols[k.col] += v;
  }
  return s;
}

struct ConsistencyResidual {
  enum class Axis { Row, Col };
  Axis axis;
  Degree degree;
  Count jdm_sum;       // sum of the JDM line
  Count degree_times;  // degree * sum of the DCM line
};

struct ConsistencyResult {
  bool consistent = true;
  std::vector<ConsistencyResidual> residuals;  // only failing degrees
};

/// Checks that every JDM row i sums to i times the number of DCM nodes with
/// out-degree i, and likewise for columns and in-degrees.
inline ConsistencyResult consistency_check(const SparseDegreeMatrix& jdm,
                                           const SparseDegreeMatrix& dcm) {
  auto a = line_sums(jdm);
  auto b = line_sums(dcm);
  ConsistencyResult r;
  auto check = [&](ConsistencyResidual::Axis axis, const std::map<Degree, Count>& asum,
                   const std::map<Degree, Count>& bsum) {
    std::map<Degree, std::pair<Count, Count>> merged;
    for (const auto& [d, v] : asum) merged[d].first = v;
    for (const auto& [d, v] : bsum)
      if (d >= 1) merged[d].second = d * v;
    for (const auto& [d, pr] : merged)
      if (pr.first != pr.second) {
        r.consistent = false;
        r.residuals.push_back({axis, d, pr.first, pr.second});
      }
  };
  check(ConsistencyResidual::Axis::Row, a.rows, b.rows);
  check(ConsistencyResidual::Axis::Col, a.cols, b.cols);
  return r;
}

struct SparsityReport {
  std::size_t n = 0;
  std::size_t e = 0;
  std::size_t nnz_dcm = 0;
  std::size_t nnz_jdm = 0;
  Rational pct_dcm;  // nnz_dcm / n
  Rational pct_jdm;  // nnz_jdm / e
};

inline SparsityReport sparsity_report(const DirectedGraph& g) {
  if (g.node_count() == 0 || g.edge_count() == 0)
    throw std::domain_error("undefined percentages");
  SparsityReport r;
  r.n = g.node_count();
  r.e = g.edge_count();
  r.nnz_dcm = extract_dcm(g).nnz();
  r.nnz_jdm = extract_jdm(g).nnz();
  r.pct_dcm = make_rational(static_cast<Count>(r.nnz_dcm), static_cast<Count>(r.n));
  r.pct_jdm = make_rational(static_cast<Count>(r.nnz_jdm), static_cast<Count>(r.e));
  return r;
}

/// Fraction of zero entries in each row and column, measured against the
/// matrix's logical dimensions.
struct SparsityCoefficients {
  Degree rows = 0;  // m
  Degree cols = 0;  // n
  Degree min_index = 1;
  std::map<Degree, Count> row_nonzeros;
  std::map<Degree, Count> col_nonzeros;

  Rational row(Degree i) const { return 1 - make_rational(lookup(row_nonzeros, i), cols); }
  Rational col(Degree j) const { return 1 - make_rational(lookup(col_nonzeros, j), rows); }

  /// n * (1 - s_R(i)): nonzeros in row i.
  Count effective_cols(Degree i) const { return lookup(row_nonzeros, i); }
  /// m * (1 - s_C(j)): nonzeros in column j.
  Count effective_rows(Degree j) const { return lookup(col_nonzeros, j); }

 private:
  static Count lookup(const std::map<Degree, Count>& m, Degree k) {
    auto it = m.find(k);
    return it == m.end() ? 0 : it->second;
  }
};

template <class T>
SparsityCoefficients sparsity_coefficients(const DegreeMatrix<T>& a) {
  SparsityCoefficients s;
  s.rows = a.rows();
  s.cols = a.cols();
  s.min_index = a.min_index();
  if (s.rows <= 0 || s.cols <= 0)
    throw std::domain_error("sparsity coefficients need a non-empty matrix");
  for (const auto& [k, _] : a.entries()) {
    ++s.row_nonzeros[k.row];
    ++s.col_nonzeros[k.col];
  }
  return s;
}

/// "i\tj\tvalue" lines in (i, j) order.
template <class T>
void write_matrix_tsv(const DegreeMatrix<T>& a, std::ostream& out) {
  for (const auto& [k, v] : a.entries()) {
    out << k.row << '\t' << k.col << '\t';
    if constexpr (std::is_same_v<T, Rational>)
      out << to_string(v);
    else
      out << v;
    out << '\n';
  }
}

}  // namespace dkscale
