#include <gtest/gtest.h>

#include <random>

#include <dkscale/rescale.hpp>

#include "support/generators.hpp"

using namespace dkscale;

namespace {

SparseDegreeMatrix make(MatrixKind kind, std::initializer_list<std::tuple<Degree, Degree, Count>> cells) {
  SparseDegreeMatrix m(kind);
  for (auto [i, j, v] : cells) m.set(i, j, v);
  return m;
}

// Builds a RescaledMatrices directly from rounded matrices for adjustment
// examples that start from A' and B'.
RescaledMatrices from_rounded(SparseDegreeMatrix a_prime, SparseDegreeMatrix b_prime) {
  RescaledMatrices rm;
  rm.k = 1;
  rm.a_prime = std::move(a_prime);
  rm.b_prime = std::move(b_prime);
  return rm;
}

}  // namespace

TEST(Rescale, FloorsJdmCeilsDcm) {
  // One edge class with 5 edges between 5 sources and 1 hub.
  auto a = make(MatrixKind::JDM, {{1, 5, 5}});
  auto b = make(MatrixKind::DCM, {{1, 0, 5}, {0, 5, 1}});
  auto r = rescale(a, b, 2);
  EXPECT_EQ(r.a_prime.at(1, 5), 2);
  EXPECT_EQ(r.b_prime.at(1, 0), 3);
  EXPECT_EQ(r.a_ring.at(1, 5), make_rational(5, 2));
}

TEST(Rescale, IdentityAtOne) {
  std::mt19937_64 rng(1);
  auto g = testgen::random_digraph(20, 0.2, rng);
  auto r = rescale(extract_jdm(g), extract_dcm(g), 1);
  EXPECT_EQ(r.a_prime, extract_jdm(g));
  EXPECT_EQ(r.b_prime, extract_dcm(g));
}

TEST(Rescale, ExactRationalK) {
  auto a = make(MatrixKind::JDM, {{1, 3, 3}});
  auto b = make(MatrixKind::DCM, {{1, 0, 3}, {0, 3, 1}});
  auto r = rescale(a, b, make_rational(3, 2));
  EXPECT_EQ(r.a_ring.at(1, 3), 2);
  EXPECT_EQ(r.a_prime.at(1, 3), 2);
}

TEST(Rescale, RejectsBadInput) {
  auto a = make(MatrixKind::JDM, {{1, 1, 2}});
  auto b = make(MatrixKind::DCM, {{1, 0, 1}, {0, 1, 1}});
  EXPECT_THROW(rescale(a, b, 2), std::invalid_argument);  // inconsistent
  auto ok_b = make(MatrixKind::DCM, {{1, 0, 2}, {0, 1, 2}});
  EXPECT_THROW(rescale(a, ok_b, 0), std::invalid_argument);
  EXPECT_THROW(rescale(a, ok_b, -1), std::invalid_argument);
  EXPECT_THROW(rescale(ok_b, a, 1), std::invalid_argument);
}

TEST(Rescale, IntegerizationInequalitiesAndSupport) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> num(1, 40), den(1, 9);
  for (int t = 0; t < 60; ++t) {
    auto g = testgen::random_digraph(5 + t % 30, 0.2, rng);
    if (g.edge_count() == 0) continue;
    Rational k(num(rng), den(rng));
    auto a = extract_jdm(g);
    auto b = extract_dcm(g);
    auto r = rescale(a, b, k);
    for (const auto& [key, v] : a.entries()) {
      Rational ring = Rational(v) / k;
      Rational ap = r.a_prime.at(key.row, key.col);
      EXPECT_LT(ring - 1, ap);
      EXPECT_LE(ap, ring);
    }
    for (const auto& [key, v] : b.entries()) {
      Rational ring = Rational(v) / k;
      Rational bp = r.b_prime.at(key.row, key.col);
      EXPECT_LE(ring, bp);
      EXPECT_LT(bp, ring + 1);
      EXPECT_GE(bp, 1);
    }
    for (const auto& [key, _] : r.a_prime.entries()) EXPECT_GT(a.at(key.row, key.col), 0);
    EXPECT_EQ(r.b_prime.nnz(), b.nnz());

    // Deltas are never negative for the floor/ceiling pair.
    if (auto adj = derive_adjustment(r); true) {
      for (const auto& [_, v] : adj.r_delta) EXPECT_GE(v, 0);
      for (const auto& [_, v] : adj.c_delta) EXPECT_GE(v, 0);
    }
  }
}

TEST(Rescale, Deterministic) {
  std::mt19937_64 rng(2);
  auto g = testgen::random_digraph(30, 0.2, rng);
  auto x = rescale(extract_jdm(g), extract_dcm(g), make_rational(7, 3));
  auto y = rescale(extract_jdm(g), extract_dcm(g), make_rational(7, 3));
  EXPECT_EQ(x.a_prime, y.a_prime);
  EXPECT_EQ(x.b_prime, y.b_prime);
  EXPECT_EQ(x.a_ring, y.a_ring);
}

TEST(Rescale, OtherRoundingModes) {
  auto a = make(MatrixKind::JDM, {{1, 5, 5}});
  auto b = make(MatrixKind::DCM, {{1, 0, 5}, {0, 5, 1}});
  auto ff = rescale(a, b, 2, RoundingMode::FloorFloor);
  EXPECT_EQ(ff.b_prime.at(1, 0), 2);
  EXPECT_EQ(ff.b_prime.at(0, 5), 0);
  auto cc = rescale(a, b, 2, RoundingMode::CeilCeil);
  EXPECT_EQ(cc.a_prime.at(1, 5), 3);
  auto rr = rescale(a, b, 2, RoundingMode::RoundRound);
  EXPECT_EQ(rr.a_prime.at(1, 5), 3);
  EXPECT_EQ(rr.b_prime.at(0, 5), 1);
  EXPECT_EQ(parse_rounding_mode("ceil-ceil"), RoundingMode::CeilCeil);
  EXPECT_THROW(parse_rounding_mode("nearest"), std::invalid_argument);
}

TEST(DeriveAdjustment, IdentityHasZeroDeltas) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) {
    auto g = testgen::random_digraph(3 + t, 0.3, rng);
    auto adj = derive_adjustment(rescale(extract_jdm(g), extract_dcm(g), 1));
    for (const auto& [_, v] : adj.r_delta) EXPECT_EQ(v, 0);
    for (const auto& [_, v] : adj.c_delta) EXPECT_EQ(v, 0);
    EXPECT_GE(adj.p, 0);
  }
}

TEST(DeriveAdjustment, HandExampleWithSlack) {
  auto adj = derive_adjustment(from_rounded(make(MatrixKind::JDM, {{1, 1, 1}}),
                                            make(MatrixKind::DCM, {{1, 1, 2}})));
  EXPECT_EQ(adj.r_delta.at(1), 1);
  EXPECT_EQ(adj.c_delta.at(1), 1);
  EXPECT_EQ(adj.l.at(DegreePair{1, 1}), 2);
  EXPECT_EQ(adj.p, 1);
  EXPECT_EQ(adj.argmin, (DegreePair{1, 1}));
}

TEST(DeriveAdjustment, HandExampleTight) {
  auto adj = derive_adjustment(from_rounded(make(MatrixKind::JDM, {{1, 1, 1}}),
                                            make(MatrixKind::DCM, {{1, 0, 1}, {0, 1, 1}})));
  EXPECT_EQ(adj.r_delta.at(1), 0);
  EXPECT_EQ(adj.c_delta.at(1), 0);
  EXPECT_EQ(adj.l.at(DegreePair{1, 1}), 1);
  EXPECT_EQ(adj.p, 0);
}

TEST(DeriveAdjustment, NegativeCapIsStructured) {
  // A single (1,1) node cannot host the edge it would need to itself.
  try {
    derive_adjustment(from_rounded(make(MatrixKind::JDM, {{1, 1, 1}}), make(MatrixKind::DCM, {{1, 1, 1}})));
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    EXPECT_EQ(e.diagnosis().stage, InfeasibilityStage::NegativeCap);
    EXPECT_EQ(e.diagnosis().at, (DegreePair{1, 1}));
    EXPECT_EQ(e.diagnosis().value, -1);
    EXPECT_NE(std::string(e.what()).find("adjustment cap negative at (1,1)"), std::string::npos);
  }
}

TEST(DeriveAdjustment, NegativeDeltaUnderCeilCeil) {
  // Ceiling each JDM entry of a row separately can outgrow the row's nodes.
  auto a = make(MatrixKind::JDM, {{1, 1, 1}, {1, 2, 2}});
  auto b = make(MatrixKind::DCM, {{1, 0, 3}, {0, 1, 1}, {0, 2, 1}});
  auto r = rescale(a, b, 3, RoundingMode::CeilCeil);
  try {
    derive_adjustment(r);
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    EXPECT_EQ(e.diagnosis().stage, InfeasibilityStage::NegativeDelta);
    EXPECT_EQ(e.diagnosis().degree, 1);
    EXPECT_EQ(e.diagnosis().value, -1);
  }
}
