#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <compare>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace dkscale {

using NodeId = std::uint64_t;

struct Edge {
  NodeId source = 0;
  NodeId target = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct EdgeHash {
  std::size_t operator()(const Edge& e) const noexcept {
    // splitmix64 finalizer over the packed pair
    std::uint64_t x = e.source * 0x9E3779B97F4A7C15ULL ^ (e.target + 0x632BE59BD9B4E019ULL);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return static_cast<std::size_t>(x);
  }
};

/// Simple directed graph: no self-loops, no repeated ordered pairs. Isolated
/// nodes are kept. Immutable once built; use GraphBuilder to make one.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  const std::vector<NodeId>& nodes() const { return nodes_; }
  /// Sorted by (source, target).
  const std::vector<Edge>& edges() const { return edges_; }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return nodes_.empty(); }

  bool has_node(NodeId v) const { return index_.count(v) != 0; }
  bool has_edge(NodeId u, NodeId v) const { return edge_set_.count(Edge{u, v}) != 0; }

  /// Position of v in nodes(); throws std::out_of_range for unknown ids.
  std::size_t index_of(NodeId v) const { return index_.at(v); }

  friend bool operator==(const DirectedGraph& a, const DirectedGraph& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  friend class GraphBuilder;

  std::vector<NodeId> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::unordered_set<Edge, EdgeHash> edge_set_;
};

/// Accumulates nodes and edges, sanitizing as it goes.
class GraphBuilder {
 public:
  void add_node(NodeId v) { nodes_.insert(v); }

  /// Returns false (and counts it) for self-loops and repeated edges.
  bool add_edge(NodeId u, NodeId v) {
    if (u == v) {
      ++self_loops_;
      return false;
    }
    if (!edges_.insert(Edge{u, v}).second) {
      ++duplicates_;
      return false;
    }
    nodes_.insert(u);
    nodes_.insert(v);
    return true;
  }

  std::size_t self_loops_dropped() const { return self_loops_; }
  std::size_t duplicates_collapsed() const { return duplicates_; }

  DirectedGraph build() const {
    DirectedGraph g;
    g.nodes_.assign(nodes_.begin(), nodes_.end());
    std::sort(g.nodes_.begin(), g.nodes_.end());
    g.index_.reserve(g.nodes_.size());
    for (std::size_t i = 0; i < g.nodes_.size(); ++i) g.index_.emplace(g.nodes_[i], i);
    g.edges_.assign(edges_.begin(), edges_.end());
    std::sort(g.edges_.begin(), g.edges_.end());
    g.edge_set_ = edges_;
    return g;
  }

 private:
  std::unordered_set<NodeId> nodes_;
  std::unordered_set<Edge, EdgeHash> edges_;
  std::size_t self_loops_ = 0;
  std::size_t duplicates_ = 0;
};

inline DirectedGraph make_graph(const std::vector<Edge>& edges,
                                const std::vector<NodeId>& isolated = {}) {
  GraphBuilder b;
  for (auto v : isolated) b.add_node(v);
  for (auto e : edges) b.add_edge(e.source, e.target);
  return b.build();
}

struct NodeDegree {
  std::int64_t out = 0;
  std::int64_t in = 0;

  friend bool operator==(const NodeDegree&, const NodeDegree&) = default;
};

/// Per-node degrees, aligned with DirectedGraph::nodes().
class DegreeTable {
 public:
  DegreeTable() = default;
  DegreeTable(std::vector<NodeId> ids, std::vector<NodeDegree> degrees)
      : ids_(std::move(ids)), degrees_(std::move(degrees)) {}

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  const std::vector<NodeId>& ids() const { return ids_; }
  const std::vector<NodeDegree>& degrees() const { return degrees_; }

  NodeDegree at(NodeId v) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
    if (it == ids_.end() || *it != v) throw std::out_of_range("unknown node " + std::to_string(v));
    return degrees_[static_cast<std::size_t>(it - ids_.begin())];
  }

 private:
  std::vector<NodeId> ids_;  // sorted
  std::vector<NodeDegree> degrees_;
};

inline DegreeTable degrees(const DirectedGraph& g) {
  std::vector<NodeDegree> deg(g.node_count());
  for (const auto& e : g.edges()) {
    ++deg[g.index_of(e.source)].out;
    ++deg[g.index_of(e.target)].in;
  }
  return DegreeTable(g.nodes(), std::move(deg));
}

// --- edge-list text format -------------------------------------------------

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct ParseResult {
  DirectedGraph graph;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_collapsed = 0;
};

/// Comment directive that carries isolated nodes, which an edge list cannot
/// otherwise express. Other readers see it as an ordinary comment.
inline constexpr std::string_view kIsolatedDirective = "% isolated:";

namespace detail {

inline bool parse_node_id(std::string_view tok, NodeId& out) {
  if (tok.empty()) return false;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> toks;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) toks.push_back(line.substr(i, j - i));
    i = j;
  }
  return toks;
}

}  // namespace detail

/// Reads a KONECT-style edge list: one "source target [ignored...]" pair per
/// line, '%' and '#' lines are comments. Self-loops are dropped and repeated
/// edges collapsed; both are counted in the result.
inline ParseResult parse_edge_list(std::istream& in) {
  GraphBuilder b;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv(line);
    if (!sv.empty() && sv.back() == '\r') sv.remove_suffix(1);
    if (sv.substr(0, kIsolatedDirective.size()) == kIsolatedDirective) {
      for (auto tok : detail::split_ws(sv.substr(kIsolatedDirective.size()))) {
        NodeId v;
        if (!detail::parse_node_id(tok, v))
          throw ParseError(lineno, "bad node id '" + std::string(tok) + "' in isolated directive");
        b.add_node(v);
      }
      continue;
    }
    auto toks = detail::split_ws(sv);
    if (toks.empty()) continue;
    if (toks[0].front() == '%' || toks[0].front() == '#') continue;
    if (toks.size() < 2) throw ParseError(lineno, "expected two node ids");
    NodeId u, v;
    if (!detail::parse_node_id(toks[0], u))
      throw ParseError(lineno, "bad source id '" + std::string(toks[0]) + "'");
    if (!detail::parse_node_id(toks[1], v))
      throw ParseError(lineno, "bad target id '" + std::string(toks[1]) + "'");
    b.add_edge(u, v);
  }
  return ParseResult{b.build(), b.self_loops_dropped(), b.duplicates_collapsed()};
}

inline ParseResult parse_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_edge_list(in);
}

/// One "u\tv" line per edge in (u, v) order. Isolated nodes, if any, go on a
/// leading directive line so the output parses back to the same graph.
inline void write_edge_list(const DirectedGraph& g, std::ostream& out) {
  std::vector<NodeId> isolated;
  if (g.node_count() > 0) {
    std::vector<bool> touched(g.node_count(), false);
    for (const auto& e : g.edges()) {
      touched[g.index_of(e.source)] = true;
      touched[g.index_of(e.target)] = true;
    }
    for (std::size_t i = 0; i < touched.size(); ++i)
      if (!touched[i]) isolated.push_back(g.nodes()[i]);
  }
  if (!isolated.empty()) {
    out << kIsolatedDirective;
    for (auto v : isolated) out << ' ' << v;
    out << '\n';
  }
  for (const auto& e : g.edges()) out << e.source << '\t' << e.target << '\n';
}

inline std::string write_edge_list(const DirectedGraph& g) {
  std::ostringstream out;
  write_edge_list(g, out);
  return out.str();
}

}  // namespace dkscale
