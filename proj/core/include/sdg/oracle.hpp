#pragma once

#include <functional>

#include "sdg/solve.hpp"

namespace sdg {

struct OracleOptions {
  int limit_n = 12;               // refuse instances with more agents
  std::optional<int> size_cap;    // only consider coalitions up to this size
  bool prune_distance = true;     // skip pairs beyond the closed horizon early
  bool prune_neg_inf = true;      // skip partitions containing a -inf coalition
  int threads = 1;
};

// Ground truth by exhaustive enumeration of set partitions in
// restricted-growth order.  Ties resolve to the lexicographically least
// restricted-growth string, independent of thread count.
SolveResult solve_exact(const Instance& inst, SolveMode mode,
                        const OracleOptions& options = {});

// Visit every set partition of {0..n-1}; blocks appear in first-member order.
// Used by property suites that need raw enumeration.
void for_each_partition(
    int n, const std::function<void(const std::vector<std::vector<int>>&)>& visit);

}  // namespace sdg
