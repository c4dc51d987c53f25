#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <vector>

#include "degree_matrix.hpp"
#include "graph.hpp"
#include "rational.hpp"

namespace dkscale {

/// The four degree distributions of a graph, as exact fractions:
/// in/out-degree, degree correlation (share of nodes per (out, in) class)
/// and joint degree (share of edges per (source out, target in) pair).
struct DistributionSet {
  std::map<Degree, Rational> in_degree;
  std::map<Degree, Rational> out_degree;
  std::map<DegreePair, Rational> degree_correlation;
  std::map<DegreePair, Rational> joint_degree;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;

  friend bool operator==(const DistributionSet&, const DistributionSet&) = default;
};

inline DistributionSet distributions(const SparseDegreeMatrix& jdm, const SparseDegreeMatrix& dcm) {
  DistributionSet d;
  const Count nodes = dcm.total();
  const Count edges = jdm.total();
  if (nodes <= 0) throw std::domain_error("distributions of an empty graph are undefined");
  d.node_count = static_cast<std::size_t>(nodes);
  d.edge_count = static_cast<std::size_t>(edges);
  for (const auto& [key, b] : dcm.entries()) {
    Rational share = make_rational(b, nodes);
    d.degree_correlation[key] = share;
    d.out_degree[key.row] += share;
    d.in_degree[key.col] += share;
  }
  if (edges > 0)
    for (const auto& [key, a] : jdm.entries()) d.joint_degree[key] = make_rational(a, edges);
  return d;
}

inline DistributionSet distributions(const DirectedGraph& g) {
  if (g.empty()) throw std::domain_error("distributions of an empty graph are undefined");
  return distributions(extract_jdm(g), extract_dcm(g));
}

/// L1 distance per distribution over the union of supports. Total variation
/// is half of it.
struct DistributionDistance {
  Rational in_degree;
  Rational out_degree;
  Rational degree_correlation;
  Rational joint_degree;

  static Rational tv(const Rational& l1) { return l1 / 2; }
  bool all_zero() const {
    return in_degree == 0 && out_degree == 0 && degree_correlation == 0 && joint_degree == 0;
  }
};

namespace detail {

template <class K>
Rational l1(const std::map<K, Rational>& x, const std::map<K, Rational>& y) {
  Rational s = 0;
  auto ix = x.begin();
  auto iy = y.begin();
  while (ix != x.end() || iy != y.end()) {
    if (iy == y.end() || (ix != x.end() && ix->first < iy->first)) {
      s += abs(ix->second);
      ++ix;
    } else if (ix == x.end() || iy->first < ix->first) {
      s += abs(iy->second);
      ++iy;
    } else {
      s += abs(ix->second - iy->second);
      ++ix;
      ++iy;
    }
  }
  return s;
}

}  // namespace detail

inline DistributionDistance distribution_distance(const DistributionSet& a, const DistributionSet& b) {
  return DistributionDistance{detail::l1(a.in_degree, b.in_degree),
                              detail::l1(a.out_degree, b.out_degree),
                              detail::l1(a.degree_correlation, b.degree_correlation),
                              detail::l1(a.joint_degree, b.joint_degree)};
}

/// TSV, one support point per line: "kind\ti\tj\tvalue". One-dimensional
/// distributions put the degree in column i and "-" in column j.
inline void write_distributions_tsv(const DistributionSet& d, std::ostream& out) {
  for (const auto& [k, v] : d.in_degree) out << "in\t" << k << "\t-\t" << to_string(v) << '\n';
  for (const auto& [k, v] : d.out_degree) out << "out\t" << k << "\t-\t" << to_string(v) << '\n';
  for (const auto& [k, v] : d.degree_correlation)
    out << "correlation\t" << k.row << '\t' << k.col << '\t' << to_string(v) << '\n';
  for (const auto& [k, v] : d.joint_degree)
    out << "joint\t" << k.row << '\t' << k.col << '\t' << to_string(v) << '\n';
}

// --- deviation bounds --------------------------------------------------------

enum class DistributionKind { Correlation, Joint };

inline const char* to_string(DistributionKind k) {
  return k == DistributionKind::Correlation ? "correlation" : "joint";
}

enum class Verdict { Pending, Inside, Outside, Degenerate, Unbounded };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pending: return "pending";
    case Verdict::Inside: return "inside";
    case Verdict::Outside: return "outside";
    case Verdict::Degenerate: return "degenerate";
    case Verdict::Unbounded: return "unbounded";
  }
  return "?";
}

/// Open interval for one achieved probability. Lower bounds below zero are
/// clamped to zero. Degenerate when a denominator is non-positive or the
/// interval is empty.
struct Interval {
  Rational lower;
  Rational upper;
  bool degenerate = false;

  bool contains(const Rational& x) const { return !degenerate && lower <= x && x <= upper; }
};

inline Interval make_interval(const Rational& lo_num, const Rational& lo_den, const Rational& up_num,
                              const Rational& up_den) {
  Interval iv;
  if (lo_den <= 0 || up_den <= 0) {
    iv.degenerate = true;
    return iv;
  }
  iv.lower = lo_num / lo_den;
  if (iv.lower < 0) iv.lower = 0;
  iv.upper = up_num / up_den;
  iv.degenerate = iv.lower >= iv.upper;
  return iv;
}

/// Bounds on the sample's share of nodes in class (i, j) given the rescaled
/// count b̊ = b/k, the rescaled total, and the number of integerized cells M.
inline Interval correlation_interval(const Rational& ring, const Rational& ring_total, Count cells) {
  return make_interval(ring, ring_total + cells - 1, ring + 1, ring_total + 1);
}

/// Bounds on the sample's share of edges in pair (i, j): integerization of
/// å = a/k plus up to p adjustment edges in each of the M cells.
inline Interval joint_interval(const Rational& ring, const Rational& ring_total, Count cells, Count p) {
  return make_interval(ring - 1, ring_total + Rational(cells) * p - p - 1, ring + p,
                       ring_total + p - cells + 1);
}

struct BoundEntry {
  Degree i = 0;
  Degree j = 0;
  DistributionKind kind = DistributionKind::Correlation;
  std::optional<Rational> ring;  // absent for unbounded entries
  Interval unrefined;
  Interval refined;
  std::optional<Rational> achieved;
  Verdict verdict = Verdict::Pending;
};

struct DeviationParams {
  Rational k = 1;
  Count p = 0;
  Degree m_a = 0, n_a = 0;  // logical JDM dimensions
  Degree m_b = 0, n_b = 0;  // logical DCM dimensions
  bool refined = true;
};

struct DeviationReport {
  DeviationParams params;
  std::vector<BoundEntry> entries;

  const Interval& active(const BoundEntry& e) const { return params.refined ? e.refined : e.unrefined; }

  std::size_t count(Verdict v) const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.verdict == v;
    return n;
  }
  std::size_t count(Verdict v, DistributionKind k) const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.verdict == v && e.kind == k;
    return n;
  }
};

/// Per-entry intervals over the support of the rescaled matrices. Unrefined
/// intervals use M = m * n; refined ones use (nonzeros in column j) *
/// (nonzeros in row i) of the same matrix.
inline DeviationReport deviation_bounds(const RationalDegreeMatrix& a_ring,
                                        const RationalDegreeMatrix& b_ring, Count p, bool refined) {
  if (p < 0) throw std::invalid_argument("deviation bounds need p >= 0");
  DeviationReport r;
  r.params.p = p;
  r.params.refined = refined;

  if (!b_ring.empty()) {
    auto s = sparsity_coefficients(b_ring);
    r.params.m_b = s.rows;
    r.params.n_b = s.cols;
    const Rational total = b_ring.total();
    const Count full = s.rows * s.cols;
    for (const auto& [key, ring] : b_ring.entries()) {
      BoundEntry e;
      e.i = key.row;
      e.j = key.col;
      e.kind = DistributionKind::Correlation;
      e.ring = ring;
      e.unrefined = correlation_interval(ring, total, full);
      e.refined = correlation_interval(ring, total, s.effective_rows(key.col) * s.effective_cols(key.row));
      r.entries.push_back(e);
    }
  }
  if (!a_ring.empty()) {
    auto s = sparsity_coefficients(a_ring);
    r.params.m_a = s.rows;
    r.params.n_a = s.cols;
    const Rational total = a_ring.total();
    const Count full = s.rows * s.cols;
    for (const auto& [key, ring] : a_ring.entries()) {
      BoundEntry e;
      e.i = key.row;
      e.j = key.col;
      e.kind = DistributionKind::Joint;
      e.ring = ring;
      e.unrefined = joint_interval(ring, total, full, p);
      e.refined = joint_interval(ring, total, s.effective_rows(key.col) * s.effective_cols(key.row), p);
      r.entries.push_back(e);
    }
  }
  return r;
}

/// Fills achieved values from the sample and assigns verdicts. Boundary
/// equality counts as inside. Sample mass outside the bounded support is
/// appended as Unbounded entries.
inline DeviationReport verify_bounds(const DistributionSet& sample, DeviationReport report) {
  std::set<std::pair<int, DegreePair>> seen;
  for (auto& e : report.entries) {
    const auto& dist = e.kind == DistributionKind::Correlation ? sample.degree_correlation
                                                               : sample.joint_degree;
    auto it = dist.find(DegreePair{e.i, e.j});
    e.achieved = it == dist.end() ? Rational(0) : it->second;
    seen.insert({static_cast<int>(e.kind), DegreePair{e.i, e.j}});
    const Interval& iv = report.active(e);
    if (iv.degenerate)
      e.verdict = Verdict::Degenerate;
    else
      e.verdict = iv.contains(*e.achieved) ? Verdict::Inside : Verdict::Outside;
  }
  auto extra = [&](const std::map<DegreePair, Rational>& dist, DistributionKind kind) {
    for (const auto& [key, v] : dist) {
      if (seen.count({static_cast<int>(kind), key})) continue;
      BoundEntry e;
      e.i = key.row;
      e.j = key.col;
      e.kind = kind;
      e.unrefined.degenerate = e.refined.degenerate = true;
      e.achieved = v;
      e.verdict = Verdict::Unbounded;
      report.entries.push_back(e);
    }
  };
  extra(sample.degree_correlation, DistributionKind::Correlation);
  extra(sample.joint_degree, DistributionKind::Joint);
  return report;
}

}  // namespace dkscale
