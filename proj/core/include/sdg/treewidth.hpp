#pragma once

#include <string>
#include <vector>

#include "sdg/instance.hpp"

namespace sdg {

enum class NodeKind { Leaf, Introduce, Forget, Join };

std::string to_string(NodeKind kind);

struct DecompositionNode {
  NodeKind kind = NodeKind::Leaf;
  int agent = -1;             // the introduced/forgotten agent
  std::vector<int> bag;       // sorted
  std::vector<int> children;  // node ids
};

// Rooted tree of bags where the root and every leaf carry an empty bag and
// interior nodes change one agent at a time (or join two equal bags).
struct NiceTreeDecomposition {
  std::vector<DecompositionNode> nodes;
  int root = -1;

  int width() const;
  // Children-before-parents order ending at the root.
  std::vector<int> post_order() const;
};

struct DecompositionOptions {
  // Exact width via subset dynamic programming up to this many agents;
  // min-fill elimination beyond.  Correctness of the solvers never depends
  // on width, only their running time does.
  int exact_limit = 13;
};

NiceTreeDecomposition build_nice_decomposition(
    const Instance& inst, const DecompositionOptions& options = {});

// Every violated decomposition condition, as human-readable strings: edge
// coverage, per-agent connected subtrees, empty root/leaf bags, node shapes,
// and separation of the two subtrees below each join.  Empty means valid.
std::vector<std::string> validate_decomposition(
    const Instance& inst, const NiceTreeDecomposition& dec);

// Exact treewidth by elimination-order dynamic programming over subsets;
// exponential memory, intended for graphs up to ~20 agents.
int exact_treewidth(const Instance& inst);

}  // namespace sdg
