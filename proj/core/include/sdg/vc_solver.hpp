#pragma once

#include <cstdint>
#include <vector>

#include "sdg/solve.hpp"
#include "sdg/welfare.hpp"

namespace sdg {

// Exact minimum vertex cover by bounded branching; sorted agent ids.
std::vector<int> compute_vertex_cover(const Instance& inst);

// Agents outside the cover bucketed by their exact neighbourhood, which is
// always a subset of the cover.  Members of one group are interchangeable.
struct AgentGroup {
  std::uint64_t signature = 0;  // neighbourhood as a bitmask over cover positions
  std::vector<int> members;     // sorted
};

struct CoverStructure {
  std::vector<int> cover;         // sorted
  std::vector<AgentGroup> groups; // sorted by signature
};

CoverStructure group_signatures(const Instance& inst, std::vector<int> cover);

// One coalition pattern inside a branch: some cover agents plus the groups
// that place at least one member here.
struct BlockPattern {
  std::vector<int> cover_positions;  // indices into CoverStructure.cover, sorted
  std::vector<int> group_ids;        // indices into CoverStructure.groups, sorted
};

// Count-independent pairwise distances between the member types of a block:
// cover agents first, then one representative per present group.  Adding
// more members of a group never shortens any path, so one representative
// fixes all distances; two members of the same group always sit at distance
// 2 (stored on the group diagonal).
struct TypeDistances {
  bool connected = false;
  std::vector<std::vector<int>> dist;
};

TypeDistances type_distances(const Instance& inst, const CoverStructure& cs,
                             const BlockPattern& block);

// The per-branch optimization problem over group counts x[block][group] >= 1:
// a quadratic welfare objective with linear stability constraints, solved by
// exact enumeration.  Kept as explicit data so the structure stays visible.
struct CountProgram {
  struct Block {
    BlockPattern pattern;
    TypeDistances distances;
    Welfare cover_pair_welfare;                  // 2 * sum over cover pairs
    std::vector<std::vector<Welfare>> cover_group;  // [cover pos][group pos]
    std::vector<std::vector<Welfare>> group_group;  // off-diagonal pair scores
    std::vector<Welfare> same_group;                // score of distance 2
  };
  std::vector<Block> blocks;
  std::vector<std::int64_t> group_capacity;  // n_W per group id
  bool feasible = false;
};

CountProgram build_count_program(const Instance& inst, const CoverStructure& cs,
                                 const std::vector<BlockPattern>& blocks);

// Welfare of the outcome encoded by concrete counts (leftover group members
// count as singletons, contributing nothing).
Welfare evaluate_objective(const CountProgram& program,
                           const std::vector<std::vector<std::int64_t>>& counts);

// Stability verdicts for concrete counts, matching what the stability module
// would say about the materialized outcome.
bool counts_individually_rational(
    const Instance& inst, const CoverStructure& cs, const CountProgram& program,
    const std::vector<std::vector<std::int64_t>>& counts);
bool counts_nash_stable(const Instance& inst, const CoverStructure& cs,
                        const CountProgram& program,
                        const std::vector<std::vector<std::int64_t>>& counts);

// Concrete outcome for the counts: group members are dealt to blocks in id
// order, leftovers become singletons.
Outcome materialize_counts(const Instance& inst, const CoverStructure& cs,
                           const CountProgram& program,
                           const std::vector<std::vector<std::int64_t>>& counts);

struct VcOptions {
  int cover_guard = 8;  // refuse instances whose minimum cover is larger
};

// Welfare maximization parameterized by the vertex cover: branch over
// partitions of the cover and group-presence patterns, then optimize the
// group counts exactly per branch.
SolveResult solve_vc(const Instance& inst, SolveMode mode,
                     const VcOptions& options = {});

}  // namespace sdg
