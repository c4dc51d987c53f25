#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "bounded_matrix.hpp"
#include "d2k.hpp"
#include "degree_matrix.hpp"
#include "graph.hpp"
#include "metrics.hpp"
#include "rescale.hpp"

namespace dkscale {

struct SampleOptions {
  RoundingMode rounding = RoundingMode::Paper;
  bool refined_bounds = true;
};

/// A check that must hold whenever the adjustment matrix exists failed.
/// Always a bug, never a property of the input.
class InvariantBreach : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct SampleSuccess {
  DirectedGraph graph;
  SparseDegreeMatrix a_target{MatrixKind::JDM};  // A' + D
  SparseDegreeMatrix b_target{MatrixKind::DCM};  // B'
  SparseDegreeMatrix adjustment{MatrixKind::JDM};
  DeviationReport deviation;
};

/// Everything a run produced. Exactly one of success / infeasibility is set.
struct SampleRun {
  SparseDegreeMatrix a{MatrixKind::JDM};
  SparseDegreeMatrix b{MatrixKind::DCM};
  Rational k;
  std::uint64_t seed = 0;
  SampleOptions options;

  RescaledMatrices rescaled;
  std::optional<AdjustmentProblem> adjustment;
  std::optional<FeasibilityResult> feasibility;

  std::optional<SampleSuccess> success;
  std::optional<Infeasibility> infeasibility;

  bool ok() const { return success.has_value(); }
};

namespace detail {

inline Infeasibility diagnose(const FeasibilityResult& f) {
  Infeasibility d{InfeasibilityStage::StubImbalance, {}};
  d.row_total = f.row_total;
  d.col_total = f.col_total;
  if (f.failure == FeasibilityResult::Failure::PrefixViolation) {
    d.stage = InfeasibilityStage::PrefixViolation;
    d.prefix = f.prefix;
    d.prefix_demand = f.prefix_demand;
    d.prefix_supply = f.prefix_supply;
    d.value = f.prefix_demand - f.prefix_supply;
    d.message = "adjustment infeasible: the " + std::to_string(f.prefix) +
                " largest column deltas need " + std::to_string(f.prefix_demand) +
                " but rows can supply " + std::to_string(f.prefix_supply);
  } else {
    d.value = f.row_total - f.col_total;
    d.message = "stub imbalance: row deltas sum to " + std::to_string(f.row_total) +
                ", column deltas to " + std::to_string(f.col_total);
  }
  return d;
}

}  // namespace detail

/// Shrinks (A, B) by k and builds a simple digraph realizing the adjusted
/// targets. Infeasibility is reported in the run, not thrown.
inline SampleRun sample(const SparseDegreeMatrix& a, const SparseDegreeMatrix& b, const Rational& k,
                        std::uint64_t seed = 0, SampleOptions opts = {}) {
  SampleRun run;
  run.a = a;
  run.b = b;
  run.k = k;
  run.seed = seed;
  run.options = opts;
  run.rescaled = rescale(a, b, k, opts.rounding);

  try {
    run.adjustment = derive_adjustment(run.rescaled);
  } catch (const InfeasibleError& e) {
    run.infeasibility = e.diagnosis();
    return run;
  }
  const AdjustmentProblem& adj = *run.adjustment;

  BoundedMatrixInstance inst{adj.row_sums(), adj.col_sums(), adj.p};
  run.feasibility = graphical(inst);
  if (!*run.feasibility) {
    run.infeasibility = detail::diagnose(*run.feasibility);
    return run;
  }

  CountMatrix d = construct(inst);
  SampleSuccess s;
  s.a_target = run.rescaled.a_prime;
  s.b_target = run.rescaled.b_prime;
  for (std::size_t r = 0; r < d.rows(); ++r)
    for (std::size_t c = 0; c < d.cols(); ++c)
      if (d(r, c) > 0) {
        s.adjustment.set(adj.row_degrees[r], adj.col_degrees[c], d(r, c));
        s.a_target.add(adj.row_degrees[r], adj.col_degrees[c], d(r, c));
      }

  TargetPair tp{s.a_target, s.b_target};
  if (auto c = check_d2k(tp); !c) {
    const auto& v = c.violations.front();
    throw InvariantBreach("adjusted targets fail the D2K condition (" + std::string(to_string(v.condition)) +
                          " at " + std::to_string(v.i) + "," + std::to_string(v.j) + ")");
  }

  s.graph = construct_graph(tp, seed);
  DistributionSet achieved = distributions(s.graph);
  s.deviation = verify_bounds(achieved, deviation_bounds(run.rescaled.a_ring, run.rescaled.b_ring,
                                                         adj.p, opts.refined_bounds));
  s.deviation.params.k = k;
  run.success = std::move(s);
  return run;
}

inline SampleRun sample_graph_input(const DirectedGraph& g, const Rational& k, std::uint64_t seed = 0,
                                    SampleOptions opts = {}) {
  if (g.empty()) throw std::invalid_argument("cannot sample an empty graph");
  return sample(extract_jdm(g), extract_dcm(g), k, seed, opts);
}

}  // namespace dkscale
