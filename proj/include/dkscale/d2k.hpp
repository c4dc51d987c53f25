#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "degree_matrix.hpp"
#include "graph.hpp"

namespace dkscale {

/// Target JDM and DCM for a directed 2K construction.
struct TargetPair {
  SparseDegreeMatrix jdm{MatrixKind::JDM};
  SparseDegreeMatrix dcm{MatrixKind::DCM};
};

struct D2KViolation {
  enum class Condition {
    OutStubs,  // sum_j a_ij == i * |V_i,out|
    InStubs,   // sum_i a_ij == j * |V_j,in|
    Capacity,  // a_ij + b_ij <= |V_i,out| * |V_j,in|
  };
  Condition condition;
  Degree i = 0;
  Degree j = 0;  // unused for OutStubs/InStubs
  Count lhs = 0;
  Count rhs = 0;
};

inline const char* to_string(D2KViolation::Condition c) {
  switch (c) {
    case D2KViolation::Condition::OutStubs: return "out-stubs";
    case D2KViolation::Condition::InStubs: return "in-stubs";
    case D2KViolation::Condition::Capacity: return "capacity";
  }
  return "?";
}

struct D2KCheck {
  bool ok = true;
  std::vector<D2KViolation> violations;
  explicit operator bool() const { return ok; }
};

/// Realizability of (JDM, DCM) as a simple digraph. Lists every violated
/// line and class pair.
inline D2KCheck check_d2k(const TargetPair& tp) {
  if (tp.jdm.kind() != MatrixKind::JDM || tp.dcm.kind() != MatrixKind::DCM)
    throw std::invalid_argument("check_d2k expects a JDM and a DCM");
  const auto a = line_sums(tp.jdm);
  const auto b = line_sums(tp.dcm);
  D2KCheck r;

  std::map<Degree, bool> rows, cols;
  for (const auto& [d, _] : a.rows) rows[d] = true;
  for (const auto& [d, _] : b.rows)
    if (d >= 1) rows[d] = true;
  for (const auto& [d, _] : a.cols) cols[d] = true;
  for (const auto& [d, _] : b.cols)
    if (d >= 1) cols[d] = true;

  for (const auto& [i, _] : rows)
    if (a.row(i) != i * b.row(i))
      r.violations.push_back({D2KViolation::Condition::OutStubs, i, 0, a.row(i), i * b.row(i)});
  for (const auto& [j, _] : cols)
    if (a.col(j) != j * b.col(j))
      r.violations.push_back({D2KViolation::Condition::InStubs, j, 0, a.col(j), j * b.col(j)});
  // Pairs with a_ij == 0 satisfy the capacity bound trivially.
  for (const auto& [key, aij] : tp.jdm.entries()) {
    Count lhs = aij + tp.dcm.at(key.row, key.col);
    Count rhs = b.row(key.row) * b.col(key.col);
    if (lhs > rhs)
      r.violations.push_back({D2KViolation::Condition::Capacity, key.row, key.col, lhs, rhs});
  }
  r.ok = r.violations.empty();
  return r;
}

class ConstructionStuck : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

/// One attempt at realizing a TargetPair. Nodes carry their target
/// (out, in) class; edges are added class pair by class pair, always
/// between the nodes with the most unused stubs.
class D2KBuilder {
 public:
  using Node = std::uint32_t;

  D2KBuilder(const TargetPair& tp, std::uint64_t seed) {
    for (const auto& [key, count] : tp.dcm.entries()) {
      for (Count c = 0; c < count; ++c) {
        Node v = static_cast<Node>(out_target_.size());
        out_target_.push_back(key.row);
        in_target_.push_back(key.col);
        if (key.row > 0) out_class_[key.row].push_back(v);
        if (key.col > 0) in_class_[key.col].push_back(v);
      }
    }
    const std::size_t n = out_target_.size();
    out_left_.assign(out_target_.begin(), out_target_.end());
    in_left_.assign(in_target_.begin(), in_target_.end());
    succ_.resize(n);
    pred_.resize(n);

    std::vector<Node> perm(n);
    for (std::size_t v = 0; v < n; ++v) perm[v] = static_cast<Node>(v);
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    rank_.resize(n);
    for (std::size_t r = 0; r < n; ++r) rank_[perm[r]] = static_cast<std::uint32_t>(r);
  }

  std::size_t node_count() const { return out_target_.size(); }

  /// Adds `count` edges from out-class i to in-class j.
  bool place(Degree i, Degree j, Count count) {
    const auto& xs = out_class_[i];
    const auto& ys = in_class_[j];
    for (Count c = 0; c < count; ++c)
      if (!place_one(xs, ys)) return false;
    return true;
  }

  bool complete() const {
    return std::all_of(out_left_.begin(), out_left_.end(), [](Count x) { return x == 0; }) &&
           std::all_of(in_left_.begin(), in_left_.end(), [](Count x) { return x == 0; });
  }

  DirectedGraph graph() const {
    GraphBuilder b;
    for (std::size_t v = 0; v < node_count(); ++v) b.add_node(v);
    for (std::size_t u = 0; u < node_count(); ++u)
      for (Node v : succ_[u]) b.add_edge(u, v);
    return b.build();
  }

  std::size_t repairs() const { return repairs_; }

 private:
  static std::uint64_t key(Node u, Node v) { return (std::uint64_t{u} << 32) | v; }

  bool admissible(Node u, Node v) const { return u != v && !edges_.count(key(u, v)); }

  void add_edge(Node u, Node v) {
    edges_.insert(key(u, v));
    succ_[u].push_back(v);
    pred_[v].push_back(u);
  }

  void remove_edge(Node u, Node v) {
    edges_.erase(key(u, v));
    auto drop = [](std::vector<Node>& vec, Node x) {
      auto it = std::find(vec.begin(), vec.end(), x);
      *it = vec.back();
      vec.pop_back();
    };
    drop(succ_[u], v);
    drop(pred_[v], u);
  }

  // Larger residual first, then seeded rank.
  bool out_before(Node a, Node b) const {
    return out_left_[a] != out_left_[b] ? out_left_[a] > out_left_[b] : rank_[a] < rank_[b];
  }
  bool in_before(Node a, Node b) const {
    return in_left_[a] != in_left_[b] ? in_left_[a] > in_left_[b] : rank_[a] < rank_[b];
  }

  void commit(Node u, Node v) {
    --out_left_[u];
    --in_left_[v];
  }

  bool place_one(const std::vector<Node>& xs, const std::vector<Node>& ys) {
    // Fast path: best source, then its best admissible target.
    Node best_u = 0;
    bool have_u = false;
    for (Node u : xs)
      if (out_left_[u] > 0 && (!have_u || out_before(u, best_u))) {
        best_u = u;
        have_u = true;
      }
    if (!have_u) return false;
    Node best_v = 0;
    bool have_v = false;
    for (Node v : ys)
      if (in_left_[v] > 0 && admissible(best_u, v) && (!have_v || in_before(v, best_v))) {
        best_v = v;
        have_v = true;
      }
    if (have_v) {
      add_edge(best_u, best_v);
      commit(best_u, best_v);
      return true;
    }

    std::vector<Node> sources, targets;
    for (Node u : xs)
      if (out_left_[u] > 0) sources.push_back(u);
    for (Node v : ys)
      if (in_left_[v] > 0) targets.push_back(v);
    std::sort(sources.begin(), sources.end(), [&](Node a, Node b) { return out_before(a, b); });
    std::sort(targets.begin(), targets.end(), [&](Node a, Node b) { return in_before(a, b); });
    if (targets.empty()) return false;

    for (Node u : sources)
      for (Node v : targets)
        if (admissible(u, v)) {
          add_edge(u, v);
          commit(u, v);
          return true;
        }

    // Every free (u, v) is a self-loop or an existing edge. Trade the
    // endpoints of one existing edge so that (u, v)'s stubs get used while
    // every other edge keeps its class pair.
    for (Node u : sources)
      for (Node v : targets)
        if (swap_in(u, v, xs, ys)) {
          commit(u, v);
          ++repairs_;
          return true;
        }
    return false;
  }

  bool swap_in(Node u, Node v, const std::vector<Node>& xs, const std::vector<Node>& ys) {
    // (x, y) with y in the in-class  ->  (x, v) and (u, y)
    for (Node y : ys) {
      if (!admissible(u, y)) continue;
      for (Node x : pred_[y]) {
        if (!admissible(x, v)) continue;
        remove_edge(x, y);
        add_edge(x, v);
        add_edge(u, y);
        return true;
      }
    }
    // (x, y) with x in the out-class  ->  (u, y) and (x, v)
    for (Node x : xs) {
      if (!admissible(x, v)) continue;
      for (Node y : succ_[x]) {
        if (!admissible(u, y)) continue;
        remove_edge(x, y);
        add_edge(u, y);
        add_edge(x, v);
        return true;
      }
    }
    return false;
  }

  std::vector<Degree> out_target_, in_target_;
  std::vector<Count> out_left_, in_left_;
  std::vector<std::uint32_t> rank_;
  std::map<Degree, std::vector<Node>> out_class_, in_class_;
  std::unordered_set<std::uint64_t> edges_;
  std::vector<std::vector<Node>> succ_, pred_;
  std::size_t repairs_ = 0;
};

}  // namespace detail

/// Builds a simple digraph on nodes 0..N-1 whose JDM and DCM equal the
/// targets exactly. Class pairs are processed largest first. The seed only
/// permutes tie-breaks, so different seeds give different graphs with the
/// same matrices.
inline DirectedGraph construct_graph(const TargetPair& tp, std::uint64_t seed = 0) {
  if (auto c = check_d2k(tp); !c) throw std::invalid_argument("targets fail the D2K condition");
  if (tp.dcm.total() >= std::numeric_limits<std::uint32_t>::max())
    throw std::length_error("too many nodes for construction");

  std::vector<std::pair<DegreePair, Count>> order(tp.jdm.entries().begin(),
                                                  tp.jdm.entries().end());
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& x, const auto& y) { return x.second > y.second; });

  // A stuck attempt restarts with a derived tie-break order.
  constexpr int kAttempts = 4;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    detail::D2KBuilder builder(tp, seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(attempt));
    bool ok = true;
    for (const auto& [key, count] : order)
      if (!builder.place(key.row, key.col, count)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    if (!builder.complete()) throw ConstructionStuck("construction stuck: residual stubs remain");
    DirectedGraph g = builder.graph();
    if (!(extract_jdm(g) == tp.jdm) || !(extract_dcm(g) == tp.dcm))
      throw ConstructionStuck("construction produced mismatching matrices");
    return g;
  }
  throw ConstructionStuck("construction stuck");
}

}  // namespace dkscale
