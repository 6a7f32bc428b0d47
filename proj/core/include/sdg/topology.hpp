#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sdg {

// Dense adjacency over at most 64 vertices; the building block for coalition
// topologies and the vertex-cover solver's representative graphs.
class SmallGraph {
 public:
  explicit SmallGraph(int n) : n_(n), adj_(n, 0) {}

  int size() const { return n_; }
  void add_edge(int a, int b) {
    adj_[a] |= 1ULL << b;
    adj_[b] |= 1ULL << a;
  }
  bool has_edge(int a, int b) const { return (adj_[a] >> b) & 1; }
  std::uint64_t neighbors(int v) const { return adj_[v]; }

  // One extra vertex appended without edges.
  void grow() {
    ++n_;
    adj_.push_back(0);
  }

  bool connected() const;
  // Distances from source; -1 for unreachable vertices.
  std::vector<int> bfs_distances(int source) const;
  // perm[old] = new position.
  SmallGraph permuted(const std::vector<int>& perm) const;

 private:
  int n_;
  std::vector<std::uint64_t> adj_;
};

// One partially-built coalition: the bag agents still visible ("labeled",
// occupying graph vertices 0..L-1 in sorted id order) plus some number of
// already-forgotten anonymous members (vertices L..L+anon_count-1), with the
// full induced adjacency among all of them.
struct CoalitionTopology {
  std::vector<int> labeled;
  int anon_count = 0;
  SmallGraph graph;

  CoalitionTopology() : graph(0) {}
  int size() const { return static_cast<int>(labeled.size()) + anon_count; }
};

// Serialization that is invariant exactly under permutations of the
// anonymous vertices: equal keys iff the topologies are isomorphic by a
// bijection fixing every labeled agent.  Computed by neighbourhood-signature
// refinement plus minimization within the remaining symmetric classes.
std::string canonical_topology_key(const CoalitionTopology& t);

}  // namespace sdg
