#pragma once

#include <cstddef>

#include "sdg/solve.hpp"
#include "sdg/topology.hpp"
#include "sdg/treewidth.hpp"

namespace sdg {

struct DpOptions {
  // Maximum coalition size; unset resolves through effective_size_cap (and
  // falls back to n in open mode, where no bound is proven).
  std::optional<int> size_cap;
  // Verify at every introduce that the new agent has no edges into already
  // forgotten agents of the child subtree (guaranteed by decomposition
  // validity; this re-checks the machinery).
  bool check_introduce_edges = false;
  int oracle_fallback_limit = 12;  // wf-ns fallback enumeration guard
};

struct DpStats {
  std::vector<std::size_t> table_sizes;  // entries per decomposition node
  std::size_t max_table_entries = 0;
  std::uint64_t transitions = 0;
};

// Welfare maximization over outcomes whose coalitions have at most size_cap
// members, by dynamic programming over a nice tree decomposition.  Record
// keys pair a partition of the bag with one anonymized coalition topology per
// part; welfare is credited when a coalition loses its last bag agent.
//
// wf and wf-ir run natively.  Nash stability is a global property, so wf-ns
// runs the individually-rational program first and verifies the winner; if
// the winner admits a deviation, a size-capped exhaustive search finishes the
// job (guarded by oracle_fallback_limit).
SolveResult solve_dp(const Instance& inst, SolveMode mode,
                     const NiceTreeDecomposition& dec,
                     const DpOptions& options = {}, DpStats* stats = nullptr);

// Convenience overload that builds its own decomposition.
SolveResult solve_dp(const Instance& inst, SolveMode mode,
                     const DpOptions& options = {}, DpStats* stats = nullptr);

}  // namespace sdg
