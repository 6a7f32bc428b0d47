#pragma once

#include <vector>

#include "sdg/instance.hpp"
#include "sdg/welfare.hpp"

namespace sdg {

// Non-empty, sorted, duplicate-free set of agents.
struct Coalition {
  std::vector<int> members;

  static Coalition of(std::vector<int> members);

  int size() const { return static_cast<int>(members.size()); }
  bool contains(int agent) const;
};

// Pairwise shortest-path distances measured inside the subgraph induced by
// one coalition, indexed by position in the coalition's member order.
// Entries across different components are kInfiniteDistance.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(int size)
      : size_(size), d_(static_cast<std::size_t>(size) * size, 0) {}

  int size() const { return size_; }
  int at(int i, int j) const { return d_[static_cast<std::size_t>(i) * size_ + j]; }
  void set(int i, int j, int v) { d_[static_cast<std::size_t>(i) * size_ + j] = v; }

 private:
  int size_;
  std::vector<int> d_;
};

DistanceMatrix distances_within(const Instance& inst, const Coalition& c);

// Utility of one member: the sum of scores of its distances to every other
// member, measured inside the coalition.  0 for singletons; -inf whenever the
// induced subgraph leaves some member unreachable.
Welfare utility(const Instance& inst, int agent, const Coalition& c);

// All members' utilities in coalition member order.
std::vector<Welfare> member_utilities(const Instance& inst, const Coalition& c);

// A full partition of the agents with its welfare cached.  Coalitions are
// kept in canonical order (sorted by smallest member).
struct Outcome {
  std::vector<Coalition> coalitions;
  Welfare welfare = Welfare(0);

  // Validates, canonicalizes and computes welfare; throws PartitionError when
  // the blocks do not partition the agents.
  static Outcome from_blocks(const Instance& inst,
                             std::vector<std::vector<int>> blocks);

  int coalition_count() const { return static_cast<int>(coalitions.size()); }
  int coalition_of(int agent) const;  // index into coalitions
};

// Problems that keep blocks from being a partition of the agents (missing,
// duplicated, out-of-range ids; empty blocks).  Empty result means valid.
std::vector<std::string> validate_partition(
    const Instance& inst, const std::vector<std::vector<int>>& blocks);

// Welfare of a partition, recomputed from scratch.
Welfare partition_welfare(const Instance& inst,
                          const std::vector<Coalition>& coalitions);

inline Welfare welfare(const Instance& inst, const Outcome& outcome) {
  return partition_welfare(inst, outcome.coalitions);
}

}  // namespace sdg
