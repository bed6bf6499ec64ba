#ifndef LVPOP_STATE_HPP
#define LVPOP_STATE_HPP

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace lvpop {

// How the scheduler weights ordered species pairs on the complete graph.
//   exact: an ordered pair of distinct agents u.a.r., weight n_i(n_j - [i==j]) / (n(n-1))
//   paper: independent draws with weight n_i n_j / n^2 (self pairs allowed)
// The two differ only in no-op mass for LV protocols (P_ii = 0), so hitting
// distributions coincide and step counts rescale proportionally.
enum class PairingMode { exact, paper };

// Counts-only Markov state for the complete interaction graph.
struct AggregateState {
  std::vector<std::int64_t> counts;
  std::int64_t n = 0;        // invariant: sum of counts
  std::uint64_t step = 0;    // raw scheduler steps

  static AggregateState from_counts(std::vector<std::int64_t> c) {
    AggregateState s;
    s.n = std::accumulate(c.begin(), c.end(), std::int64_t{0});
    s.counts = std::move(c);
    return s;
  }
};

// Undirected interaction graph, stored as an edge list so the scheduler can
// sample edges uniformly (the scheduler is edge-uniform by definition).
struct Graph {
  std::int64_t node_count = 0;
  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
};

Graph complete_graph(std::int64_t n);
// Star on leaves+1 vertices; the hub is node 0.
Graph star_graph(std::int64_t leaves);
bool is_connected(const Graph& g);

// Per-agent state on an explicit interaction graph.
struct GraphState {
  Graph graph;
  std::vector<std::int32_t> species;   // one entry per node
  std::vector<std::int64_t> counts;    // derived k-vector
  std::uint64_t step = 0;

  static GraphState from_species(Graph g, std::vector<std::int32_t> sp, int k);
};

// Star specialization: (hub type, leaf counts). The hub is not counted in
// leaf_counts, following the quadruple convention.
struct StarState {
  std::int32_t center = 0;
  std::vector<std::int64_t> leaf_counts;
  std::int64_t n = 0;        // number of leaves
  std::uint64_t step = 0;

  static StarState from_counts(std::int32_t center, std::vector<std::int64_t> leaves) {
    StarState s;
    s.center = center;
    s.n = std::accumulate(leaves.begin(), leaves.end(), std::int64_t{0});
    s.leaf_counts = std::move(leaves);
    return s;
  }
};

}  // namespace lvpop

#endif
