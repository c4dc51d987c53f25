#include <gtest/gtest.h>

#include <random>

#include <dkscale/d2k.hpp>

#include "support/generators.hpp"

using namespace dkscale;

namespace {

TargetPair targets(std::initializer_list<std::tuple<Degree, Degree, Count>> a,
                   std::initializer_list<std::tuple<Degree, Degree, Count>> b) {
  TargetPair tp;
  for (auto [i, j, v] : a) tp.jdm.set(i, j, v);
  for (auto [i, j, v] : b) tp.dcm.set(i, j, v);
  return tp;
}

bool simple(const DirectedGraph& g) {
  for (const auto& e : g.edges())
    if (e.source == e.target) return false;
  for (std::size_t i = 1; i < g.edges().size(); ++i)
    if (g.edges()[i] == g.edges()[i - 1]) return false;
  return true;
}

}  // namespace

TEST(CheckD2K, SingleEdgeHolds) {
  EXPECT_TRUE(check_d2k(targets({{1, 1, 1}}, {{1, 0, 1}, {0, 1, 1}})));
}

TEST(CheckD2K, ReportsEveryViolatedCondition) {
  auto c = check_d2k(targets({{1, 1, 2}}, {{1, 1, 1}}));
  EXPECT_FALSE(c);
  bool out = false, cap = false;
  for (const auto& v : c.violations) {
    if (v.condition == D2KViolation::Condition::OutStubs && v.i == 1) {
      out = true;
      EXPECT_EQ(v.lhs, 2);
      EXPECT_EQ(v.rhs, 1);
    }
    if (v.condition == D2KViolation::Condition::Capacity && v.i == 1 && v.j == 1) {
      cap = true;
      EXPECT_EQ(v.lhs, 3);
      EXPECT_EQ(v.rhs, 1);
    }
  }
  EXPECT_TRUE(out);
  EXPECT_TRUE(cap);
}

TEST(ConstructGraph, SingleEdge) {
  auto tp = targets({{1, 1, 1}}, {{1, 0, 1}, {0, 1, 1}});
  auto g = construct_graph(tp, 0);
  EXPECT_EQ(g.node_count(), 2u);
  EXPECT_EQ(g.edge_count(), 1u);
}

TEST(ConstructGraph, TightTwoCycle) {
  auto tp = targets({{1, 1, 2}}, {{1, 1, 2}});
  auto g = construct_graph(tp, 3);
  ASSERT_EQ(g.edge_count(), 2u);
  auto [u, v] = g.edges()[0];
  EXPECT_TRUE(g.has_edge(v, u));
}

TEST(ConstructGraph, RejectsUnrealizableTargets) {
  EXPECT_THROW(construct_graph(targets({{1, 1, 2}}, {{1, 1, 1}})), std::invalid_argument);
}

TEST(ConstructGraph, RoundTripsRandomDigraphs) {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 60; ++t) {
    auto g = testgen::random_digraph(2 + t % 39, t % 2 ? 0.1 : 0.35, rng);
    TargetPair tp{extract_jdm(g), extract_dcm(g)};
    ASSERT_TRUE(check_d2k(tp));
    for (std::uint64_t seed : {0u, 1u}) {
      auto h = construct_graph(tp, seed);
      EXPECT_EQ(extract_jdm(h), tp.jdm);
      EXPECT_EQ(extract_dcm(h), tp.dcm);
      EXPECT_TRUE(simple(h));
      EXPECT_EQ(h.node_count(), static_cast<std::size_t>(tp.dcm.total()));
      EXPECT_EQ(h.edge_count(), static_cast<std::size_t>(tp.jdm.total()));
    }
  }
}

TEST(ConstructGraph, DenseGraphsNeedRepairsButStayExact) {
  std::mt19937_64 rng(78);
  for (int t = 0; t < 20; ++t) {
    auto g = testgen::random_digraph(6 + t % 10, 0.8, rng);
    TargetPair tp{extract_jdm(g), extract_dcm(g)};
    auto h = construct_graph(tp, t);
    EXPECT_EQ(extract_jdm(h), tp.jdm);
    EXPECT_EQ(extract_dcm(h), tp.dcm);
  }
}

TEST(ConstructGraph, DeterministicPerSeed) {
  std::mt19937_64 rng(79);
  auto g = testgen::random_digraph(30, 0.2, rng);
  TargetPair tp{extract_jdm(g), extract_dcm(g)};
  EXPECT_EQ(construct_graph(tp, 5), construct_graph(tp, 5));
  bool differs = false;
  for (std::uint64_t s = 1; s < 6 && !differs; ++s) differs = !(construct_graph(tp, 0) == construct_graph(tp, s));
  EXPECT_TRUE(differs);
}
