#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include "sdg/instance.hpp"
#include "sdg/solve.hpp"

namespace sdg {

// A hand-built network with known optima, used by the test suites and the
// generator CLI.
struct Fixture {
  std::string name;
  Instance instance;
  std::map<std::string, int> named_agents;          // e.g. "x" -> id
  std::map<SolveMode, std::int64_t> expected_welfare;
  std::map<SolveMode, std::int64_t> expected_optimal_count;
};

// Ten agents: a 5-path whose endpoints both attach to a 5-clique, so the
// network is a 6-cycle with one "thick" vertex.  Under scoring
// (1,1,-1,-1,-1,-1) the unique welfare optimum (the grand coalition, welfare
// 62) is not individually rational; expelling the path centre gives 60.
Fixture make_ring_fixture();

// Same ring over a 4-clique plus a pendant agent "y" on the path centre "x".
// The unique individually rational optimum ({y} apart, welfare 48) is not
// Nash stable; the Nash stable optimum ({x,y} apart) has welfare 46.
Fixture make_pendant_ring_fixture();

// A graph on 3t vertices together with a vertex-disjoint triangle cover.
struct TriangleCoveredGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::array<int, 3>> triangles;
};

// Complement construction linking 3-colorability to a welfare threshold:
// the covered graph is 3-colorable exactly when its complement, under unit
// scoring (s1), reaches welfare 3*t*s1*(t-1).
struct ColoringReduction {
  Instance instance;
  std::int64_t threshold = 0;
};
ColoringReduction reduce_triangle_cover_coloring(const TriangleCoveredGraph& g,
                                                 std::int64_t s1);

struct RandomGraphOptions {
  bool require_connected = false;
  bool forbid_isolated = false;
  int max_attempts = 10000;
};

// Erdos-Renyi style network, deterministic under seed.
Instance random_instance(int n, double edge_prob, std::uint64_t seed,
                         ScoringVector scoring, bool open_mode = false,
                         const RandomGraphOptions& options = {});

// Uniform random attachment tree.
Instance random_tree(int n, std::uint64_t seed, ScoringVector scoring,
                     bool open_mode = false);

// Random k-tree: treewidth exactly k (for n > k).
Instance random_ktree(int n, int k, std::uint64_t seed, ScoringVector scoring,
                      bool open_mode = false);

// Random connected graph whose degrees never exceed max_degree; extra_edges
// are added on top of a degree-respecting random spanning tree.
Instance random_bounded_degree(int n, int max_degree, int extra_edges,
                               std::uint64_t seed, ScoringVector scoring,
                               bool open_mode = false);

}  // namespace sdg
