#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sdg/scoring.hpp"

namespace sdg {

// A simple undirected social network over agents 0..n-1 together with the
// scoring vector that turns within-coalition distances into utilities.
// Immutable once constructed and safe to share across threads.
class Instance {
 public:
  Instance(int agent_count, std::vector<std::pair<int, int>> edges,
           ScoringVector scoring, bool open_mode = false,
           std::vector<std::string> labels = {});

  int agent_count() const { return n_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::vector<int>>& adjacency() const { return adj_; }
  const std::vector<int>& neighbors(int v) const { return adj_.at(v); }
  const ScoringVector& scoring() const { return scoring_; }
  bool open_mode() const { return open_mode_; }

  bool has_edge(int a, int b) const;
  int degree(int v) const { return static_cast<int>(adj_.at(v).size()); }
  int max_degree() const;

  // Optional external names, indexed by agent id; empty when unlabeled.
  const std::vector<std::string>& labels() const { return labels_; }

  Welfare score(int d) const { return scoring_.score(d, open_mode_); }

  // Shortest-path distances from source in the whole network,
  // kInfiniteDistance for unreachable agents.
  std::vector<int> bfs_distances(int source) const;

  // Connected components, each sorted, ordered by smallest member.
  std::vector<std::vector<int>> connected_components() const;

  // Subnetwork induced on the given (sorted) agents, renumbered 0..k-1 in
  // order; shares the scoring vector and mode.  members[i] is the original
  // id of new agent i.
  Instance induced_subinstance(const std::vector<int>& members) const;

 private:
  int n_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
  ScoringVector scoring_;
  bool open_mode_;
  std::vector<std::string> labels_;
};

}  // namespace sdg
