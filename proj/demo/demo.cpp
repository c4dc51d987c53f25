// Shrinks a small directed graph by k = 2 and prints what survived.
#include <iostream>

#include <dkscale/dkscale.hpp>

int main() {
  using namespace dkscale;

  // Two copies of a 4-node motif plus a few stray edges.
  std::vector<Edge> edges{{1, 2}, {1, 3}, {2, 3}, {3, 4}, {4, 1},
                          {5, 6}, {5, 7}, {6, 7}, {7, 8}, {8, 5},
                          {9, 10}, {11, 12}, {13, 14}, {15, 16}};
  DirectedGraph g = make_graph(edges);

  SampleRun run = sample_graph_input(g, Rational(2), /*seed=*/1);
  if (!run.ok()) {
    std::cout << "infeasible: " << run.infeasibility->message << '\n';
    return 2;
  }
  const auto& s = *run.success;
  std::cout << "original: " << g.node_count() << " nodes, " << g.edge_count() << " edges\n";
  std::cout << "sample:   " << s.graph.node_count() << " nodes, " << s.graph.edge_count()
            << " edges, cap p = " << run.adjustment->p << '\n';
  std::cout << "bounds:   " << s.deviation.count(Verdict::Inside) << " inside, "
            << s.deviation.count(Verdict::Outside) << " outside, "
            << s.deviation.count(Verdict::Degenerate) << " degenerate\n";
  std::cout << write_edge_list(s.graph);
}
