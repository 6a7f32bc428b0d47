#pragma once

#include <optional>
#include <string>

#include "sdg/instance.hpp"

namespace sdg {

// Structural bounds derived from the scoring vector and network shape; used
// as solver caps and by the property suites.
struct BoundsReport {
  int max_degree = 0;
  int treewidth_upper = 0;  // width of the decomposition actually built
  std::optional<std::int64_t> degree_size_bound;     // nullopt: unbounded (overflow)
  std::optional<std::int64_t> treewidth_size_bound;  // nullopt: s_2 >= 0, not applicable
  std::optional<int> wf_diameter_bound;              // closed vectors only: delta
  std::optional<std::int64_t> ns_ir_diameter_bound;  // open vectors with a negative entry
};

// (s_1 + 1) * max_degree * (max_degree - 1)^(delta - 1); coalitions strictly
// larger leave every member with negative utility on graphs of that degree
// (degenerate low-degree cases aside, see effective_size_cap).  max_degree 0
// yields 1: isolated agents only ever form singletons.  nullopt on overflow.
std::optional<std::int64_t> degree_size_bound(const ScoringVector& scoring,
                                              int max_degree);

// 2 * (s_1 + 1) * treewidth + 1 when s_2 < 0 (delta == 1 counts): coalitions
// strictly larger have negative total utility.  nullopt when not applicable.
std::optional<std::int64_t> treewidth_size_bound(const ScoringVector& scoring,
                                                 int treewidth);

// Open vectors: coalitions of diameter beyond 2 * s_1 * delta are neither
// Nash stable nor individually rational.
std::int64_t ns_ir_diameter_bound(const ScoringVector& scoring);

// Largest coalition that can avoid a beyond-horizon pair on a graph of this
// maximum degree: 1 + sum of Delta*(Delta-1)^(a-1) over a = 1..delta.
// Always a welfare-safe cap for closed vectors.  nullopt on overflow.
std::optional<std::int64_t> reachability_size_bound(const ScoringVector& scoring,
                                                    int max_degree);

struct CapResolution {
  std::optional<int> cap;  // nullopt: unbounded
  std::string source;      // which bound produced the cap
};

// Resolves a coalition-size cap that provably preserves every optimum of the
// requested kind.  An explicit request passes through; otherwise the minimum
// welfare-safe bound applies (closed mode) or the cap stays unbounded (open
// mode, where no size bound is proven).
CapResolution effective_size_cap(const Instance& inst,
                                 std::optional<int> requested);

BoundsReport compute_bounds_report(const Instance& inst);

}  // namespace sdg
