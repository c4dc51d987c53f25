#include <gtest/gtest.h>

#include <random>

#include <dkscale/pipeline.hpp>

#include "support/generators.hpp"

using namespace dkscale;

namespace {

SparseDegreeMatrix make(MatrixKind kind, std::initializer_list<std::tuple<Degree, Degree, Count>> cells) {
  SparseDegreeMatrix m(kind);
  for (auto [i, j, v] : cells) m.set(i, j, v);
  return m;
}

std::map<Degree, Rational> marginal(const SparseDegreeMatrix& b, bool rows) {
  std::map<Degree, Rational> m;
  Rational total = b.total();
  for (const auto& [k, v] : b.entries()) m[rows ? k.row : k.col] += Rational(v) / total;
  return m;
}

}  // namespace

TEST(Sample, IdentityAtOne) {
  std::mt19937_64 rng(50);
  for (int t = 0; t < 30; ++t) {
    auto g = testgen::random_digraph(2 + t, 0.2, rng);
    auto run = sample_graph_input(g, 1, t);
    ASSERT_TRUE(run.ok());
    EXPECT_TRUE(run.success->adjustment.empty());
    EXPECT_EQ(run.success->a_target, extract_jdm(g));
    EXPECT_EQ(run.success->b_target, extract_dcm(g));
    EXPECT_EQ(extract_jdm(run.success->graph), extract_jdm(g));
    EXPECT_TRUE(distribution_distance(distributions(g), distributions(run.success->graph)).all_zero());
    EXPECT_EQ(run.success->deviation.count(Verdict::Outside), 0u);
    EXPECT_EQ(run.success->deviation.count(Verdict::Unbounded), 0u);
  }
}

TEST(Sample, FourDisjointEdgesHalved) {
  auto run = sample(make(MatrixKind::JDM, {{1, 1, 4}}), make(MatrixKind::DCM, {{1, 0, 4}, {0, 1, 4}}), 2);
  ASSERT_TRUE(run.ok());
  EXPECT_EQ(run.rescaled.a_prime, make(MatrixKind::JDM, {{1, 1, 2}}));
  EXPECT_EQ(run.adjustment->r_delta.at(1), 0);
  EXPECT_EQ(run.adjustment->c_delta.at(1), 0);
  EXPECT_TRUE(run.success->adjustment.empty());
  EXPECT_EQ(run.success->graph.node_count(), 4u);
  EXPECT_EQ(run.success->graph.edge_count(), 2u);
}

TEST(Sample, AdjustmentPathEndToEnd) {
  auto run = sample(make(MatrixKind::JDM, {{1, 1, 3}}), make(MatrixKind::DCM, {{1, 0, 3}, {0, 1, 3}}), 2);
  ASSERT_TRUE(run.ok());
  EXPECT_EQ(run.rescaled.a_prime, make(MatrixKind::JDM, {{1, 1, 1}}));
  EXPECT_EQ(run.rescaled.b_prime, make(MatrixKind::DCM, {{1, 0, 2}, {0, 1, 2}}));
  EXPECT_EQ(run.adjustment->r_delta.at(1), 1);
  EXPECT_EQ(run.adjustment->c_delta.at(1), 1);
  EXPECT_EQ(run.adjustment->l.at(DegreePair{1, 1}), 4);
  EXPECT_EQ(run.adjustment->p, 3);
  EXPECT_EQ(run.success->adjustment, make(MatrixKind::JDM, {{1, 1, 1}}));
  EXPECT_EQ(run.success->a_target, make(MatrixKind::JDM, {{1, 1, 2}}));
  EXPECT_EQ(run.success->graph.edge_count(), 2u);
  EXPECT_EQ(run.success->graph.node_count(), 4u);

  // The joint entry's interval collapses to a point on this tiny instance.
  bool flagged = false;
  for (const auto& e : run.success->deviation.entries)
    if (e.kind == DistributionKind::Joint && e.i == 1 && e.j == 1) {
      EXPECT_TRUE(e.unrefined.degenerate);
      EXPECT_EQ(e.verdict, Verdict::Degenerate);
      EXPECT_EQ(*e.achieved, 1);
      flagged = true;
    }
  EXPECT_TRUE(flagged);
}

TEST(Sample, TrianglePathRoundTrip) {
  auto g = parse_edge_list("1 2\n2 3\n1 3\n").graph;
  auto run = sample_graph_input(g, 1);
  ASSERT_TRUE(run.ok());
  EXPECT_EQ(run.success->graph.node_count(), 3u);
  EXPECT_EQ(extract_dcm(run.success->graph), extract_dcm(g));
}

TEST(Sample, InfeasibilityIsAValue) {
  // One (1,1) node: the only edge it could carry is a self-loop.
  auto run = sample(make(MatrixKind::JDM, {{1, 1, 1}, {2, 2, 2}}),
                    make(MatrixKind::DCM, {{1, 1, 1}, {2, 2, 1}, {0, 0, 0}}), 1);
  EXPECT_FALSE(run.ok());
  ASSERT_TRUE(run.infeasibility);
}

TEST(Sample, RejectsEmptyAndBadK) {
  EXPECT_THROW(sample_graph_input(DirectedGraph{}, 2), std::invalid_argument);
  auto g = make_graph({{1, 2}});
  EXPECT_THROW(sample_graph_input(g, 0), std::invalid_argument);
}

TEST(Sample, LemmaMarginalsAndScale) {
  std::mt19937_64 rng(51);
  int successes = 0;
  for (int t = 0; t < 40; ++t) {
    auto g = testgen::heavy_tailed_digraph(60 + 4 * t, rng, {1, 2, 4, 8}, 1.0);
    auto a = extract_jdm(g);
    auto b = extract_dcm(g);
    for (Count k : {2, 3}) {
      SampleRun run;
      ASSERT_NO_THROW(run = sample(a, b, k, t));
      if (!run.ok()) {
        ASSERT_TRUE(run.infeasibility);
        continue;
      }
      ++successes;
      const auto& s = *run.success;
      EXPECT_TRUE(check_d2k(TargetPair{s.a_target, s.b_target}));
      auto d = distributions(s.graph);
      EXPECT_EQ(d.out_degree, marginal(s.b_target, true));
      EXPECT_EQ(d.in_degree, marginal(s.b_target, false));
      Rational n = Rational(b.total()) / k;
      EXPECT_GE(Rational(s.graph.node_count()), n);
      EXPECT_LE(Rational(s.graph.node_count()), n + b.nnz());
      EXPECT_EQ(static_cast<Count>(s.graph.edge_count()), s.a_target.total());
      for (const auto& [key, v] : s.adjustment.entries()) EXPECT_LE(v, run.adjustment->p);
    }
  }
  EXPECT_GT(successes, 0);
}

TEST(Sample, DiagnosesEachFailureStage) {
  std::mt19937_64 rng(52);
  std::set<InfeasibilityStage> seen;
  for (int t = 0; t < 300; ++t) {
    auto g = testgen::random_digraph(8 + t % 30, 0.15, rng);
    if (g.edge_count() == 0) continue;
    auto run = sample_graph_input(g, 2 + t % 3, 0);
    if (run.infeasibility) {
      seen.insert(run.infeasibility->stage);
      EXPECT_FALSE(run.infeasibility->message.empty());
      if (run.infeasibility->stage == InfeasibilityStage::StubImbalance)
        EXPECT_NE(run.infeasibility->row_total, run.infeasibility->col_total);
    }
  }
  // Random sparse graphs shrink badly; both GRAPHICAL failure modes show up.
  EXPECT_TRUE(seen.count(InfeasibilityStage::StubImbalance));
  EXPECT_TRUE(seen.count(InfeasibilityStage::PrefixViolation));
}
