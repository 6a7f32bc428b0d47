#include "sdg/treewidth.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <numeric>
#include <set>
#include <stdexcept>

namespace sdg {

std::string to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Leaf: return "leaf";
    case NodeKind::Introduce: return "introduce";
    case NodeKind::Forget: return "forget";
    case NodeKind::Join: return "join";
  }
  return "?";
}

int NiceTreeDecomposition::width() const {
  int w = 0;
  for (const auto& node : nodes)
    w = std::max(w, static_cast<int>(node.bag.size()));
  return w - 1;
}

std::vector<int> NiceTreeDecomposition::post_order() const {
  std::vector<int> order;
  order.reserve(nodes.size());
  // Iterative DFS; second visit emits the node.
  std::vector<std::pair<int, bool>> stack = {{root, false}};
  while (!stack.empty()) {
    auto [id, expanded] = stack.back();
    stack.pop_back();
    if (expanded) {
      order.push_back(id);
      continue;
    }
    stack.emplace_back(id, true);
    for (int c : nodes[id].children) stack.emplace_back(c, false);
  }
  return order;
}

namespace {

// Effective degree of v when eliminated after the set S: neighbors of v
// outside S reachable from v through S.
int eliminated_degree(const std::vector<std::uint64_t>& adj, int n,
                      std::uint64_t s, int v) {
  std::uint64_t visited = 1ULL << v;
  std::uint64_t frontier = visited;
  std::uint64_t reached = 0;
  while (frontier != 0) {
    std::uint64_t next = 0;
    for (std::uint64_t f = frontier; f != 0; f &= f - 1)
      next |= adj[std::countr_zero(f)];
    next &= ~visited;
    reached |= next & ~s;
    frontier = next & s;
    visited |= next;
  }
  return std::popcount(reached & ~(1ULL << v));
}

// Exact minimum over elimination orders of the maximum effective degree,
// by dynamic programming over subsets of already-eliminated agents.
std::vector<int> exact_elimination_order(const std::vector<std::uint64_t>& adj,
                                         int n, int* width_out) {
  const std::size_t size = std::size_t(1) << n;
  std::vector<std::int8_t> best(size, 0);
  for (std::uint64_t s = 1; s < size; ++s) {
    int opt = n;  // width never exceeds n - 1
    for (std::uint64_t rest = s; rest != 0; rest &= rest - 1) {
      int v = std::countr_zero(rest);
      int cost = std::max<int>(best[s & ~(1ULL << v)],
                               eliminated_degree(adj, n, s & ~(1ULL << v), v));
      opt = std::min(opt, cost);
    }
    best[s] = static_cast<std::int8_t>(opt);
  }
  if (width_out) *width_out = best[size - 1];
  // Recover one optimal order back to front.
  std::vector<int> order(n);
  std::uint64_t s = size - 1;
  for (int i = n - 1; i >= 0; --i) {
    for (std::uint64_t rest = s; rest != 0; rest &= rest - 1) {
      int v = std::countr_zero(rest);
      int cost = std::max<int>(best[s & ~(1ULL << v)],
                               eliminated_degree(adj, n, s & ~(1ULL << v), v));
      if (cost == best[s]) {
        order[i] = v;
        s &= ~(1ULL << v);
        break;
      }
    }
  }
  return order;
}

// Min-fill greedy elimination; ties break to the lowest agent id.
std::vector<int> min_fill_order(const Instance& inst) {
  const int n = inst.agent_count();
  std::vector<std::set<int>> adj(n);
  for (const auto& [a, b] : inst.edges()) {
    adj[a].insert(b);
    adj[b].insert(a);
  }
  std::vector<bool> gone(n, false);
  std::vector<int> order;
  order.reserve(n);
  for (int step = 0; step < n; ++step) {
    int best_v = -1;
    long best_fill = -1;
    for (int v = 0; v < n; ++v) {
      if (gone[v]) continue;
      long fill = 0;
      for (auto it = adj[v].begin(); it != adj[v].end(); ++it)
        for (auto jt = std::next(it); jt != adj[v].end(); ++jt)
          if (!adj[*it].count(*jt)) ++fill;
      if (best_v == -1 || fill < best_fill) {
        best_v = v;
        best_fill = fill;
      }
    }
    order.push_back(best_v);
    gone[best_v] = true;
    std::vector<int> nb(adj[best_v].begin(), adj[best_v].end());
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        adj[nb[i]].insert(nb[j]);
        adj[nb[j]].insert(nb[i]);
      }
    for (int u : nb) adj[u].erase(best_v);
    adj[best_v].clear();
  }
  return order;
}

// Bags from an elimination order on the filled graph.
struct BagTree {
  std::vector<std::vector<int>> bags;  // per elimination position
  std::vector<int> parent;             // position of parent bag, -1 for roots
};

BagTree bags_from_order(const Instance& inst, const std::vector<int>& order) {
  const int n = inst.agent_count();
  std::vector<int> position(n);
  for (int i = 0; i < n; ++i) position[order[i]] = i;
  std::vector<std::set<int>> adj(n);
  for (const auto& [a, b] : inst.edges()) {
    adj[a].insert(b);
    adj[b].insert(a);
  }
  BagTree tree;
  tree.bags.resize(n);
  tree.parent.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    int v = order[i];
    std::vector<int> higher;
    for (int u : adj[v])
      if (position[u] > i) higher.push_back(u);
    // Fill in: later neighbors become mutually adjacent.
    for (std::size_t a = 0; a < higher.size(); ++a)
      for (std::size_t b = a + 1; b < higher.size(); ++b) {
        adj[higher[a]].insert(higher[b]);
        adj[higher[b]].insert(higher[a]);
      }
    tree.bags[i] = higher;
    tree.bags[i].push_back(v);
    std::sort(tree.bags[i].begin(), tree.bags[i].end());
    if (!higher.empty()) {
      int first = n;
      for (int u : higher) first = std::min(first, position[u]);
      tree.parent[i] = first;
    }
  }
  return tree;
}

class NiceBuilder {
 public:
  explicit NiceBuilder(NiceTreeDecomposition& dec) : dec_(dec) {}

  int add(NodeKind kind, int agent, std::vector<int> bag,
          std::vector<int> children) {
    dec_.nodes.push_back(
        {kind, agent, std::move(bag), std::move(children)});
    return static_cast<int>(dec_.nodes.size()) - 1;
  }

  // Introduce chain from an empty leaf up to the target bag.
  int leaf_chain(const std::vector<int>& bag) {
    int cur = add(NodeKind::Leaf, -1, {}, {});
    std::vector<int> acc;
    for (int v : bag) {
      acc.push_back(v);
      cur = add(NodeKind::Introduce, v, acc, {cur});
    }
    return cur;
  }

  // Forget-then-introduce chain morphing the node's bag into `to`.
  int morph(int node, const std::vector<int>& from, const std::vector<int>& to) {
    int cur = node;
    std::vector<int> bag = from;
    for (int v : from) {
      if (std::binary_search(to.begin(), to.end(), v)) continue;
      bag.erase(std::find(bag.begin(), bag.end(), v));
      cur = add(NodeKind::Forget, v, bag, {cur});
    }
    for (int v : to) {
      if (std::binary_search(from.begin(), from.end(), v)) continue;
      bag.insert(std::upper_bound(bag.begin(), bag.end(), v), v);
      cur = add(NodeKind::Introduce, v, bag, {cur});
    }
    return cur;
  }

 private:
  NiceTreeDecomposition& dec_;
};

}  // namespace

NiceTreeDecomposition build_nice_decomposition(
    const Instance& inst, const DecompositionOptions& options) {
  const int n = inst.agent_count();
  std::vector<int> order;
  if (n <= options.exact_limit && n <= 20) {
    std::vector<std::uint64_t> adj(n, 0);
    for (const auto& [a, b] : inst.edges()) {
      adj[a] |= 1ULL << b;
      adj[b] |= 1ULL << a;
    }
    order = exact_elimination_order(adj, n, nullptr);
  } else {
    order = min_fill_order(inst);
  }
  BagTree tree = bags_from_order(inst, order);

  NiceTreeDecomposition dec;
  NiceBuilder builder(dec);

  std::vector<std::vector<int>> kids(n);
  std::vector<int> roots;
  for (int i = 0; i < n; ++i) {
    if (tree.parent[i] == -1)
      roots.push_back(i);
    else
      kids[tree.parent[i]].push_back(i);
  }

  // Build each bag-tree node bottom-up into nice form.
  auto build = [&](auto&& self, int i) -> int {
    const std::vector<int>& bag = tree.bags[i];
    std::vector<int> tops;
    for (int c : kids[i]) {
      int child_top = self(self, c);
      tops.push_back(builder.morph(child_top, tree.bags[c], bag));
    }
    if (tops.empty()) return builder.leaf_chain(bag);
    while (tops.size() > 1) {
      int a = tops[tops.size() - 2];
      int b = tops[tops.size() - 1];
      tops.pop_back();
      tops.back() = builder.add(NodeKind::Join, -1, bag, {a, b});
    }
    return tops[0];
  };

  // Components' trees are forgotten down to empty bags, then joined.
  std::vector<int> component_tops;
  for (int r : roots)
    component_tops.push_back(
        builder.morph(build(build, r), tree.bags[r], {}));
  while (component_tops.size() > 1) {
    int a = component_tops[component_tops.size() - 2];
    int b = component_tops[component_tops.size() - 1];
    component_tops.pop_back();
    component_tops.back() = builder.add(NodeKind::Join, -1, {}, {a, b});
  }
  dec.root = component_tops.front();
  return dec;
}

int exact_treewidth(const Instance& inst) {
  const int n = inst.agent_count();
  if (n > 20) throw std::invalid_argument("exact_treewidth: graph too large");
  std::vector<std::uint64_t> adj(n, 0);
  for (const auto& [a, b] : inst.edges()) {
    adj[a] |= 1ULL << b;
    adj[b] |= 1ULL << a;
  }
  int width = 0;
  exact_elimination_order(adj, n, &width);
  return width;
}

namespace {

void collect_subtree_agents(const NiceTreeDecomposition& dec, int node,
                            std::vector<std::set<int>>& vx) {
  std::set<int>& mine = vx[node];
  for (int c : dec.nodes[node].children)
    mine.insert(vx[c].begin(), vx[c].end());
  mine.insert(dec.nodes[node].bag.begin(), dec.nodes[node].bag.end());
}

}  // namespace

std::vector<std::string> validate_decomposition(
    const Instance& inst, const NiceTreeDecomposition& dec) {
  std::vector<std::string> bad;
  const int m = static_cast<int>(dec.nodes.size());
  if (dec.root < 0 || dec.root >= m) {
    bad.push_back("root id out of range");
    return bad;
  }

  // Tree shape: every node reachable from the root exactly once.
  std::vector<int> seen(m, 0);
  std::vector<int> stack = {dec.root};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    if (id < 0 || id >= m) {
      bad.push_back("child id out of range");
      return bad;
    }
    if (++seen[id] > 1) {
      bad.push_back("node " + std::to_string(id) + " has two parents");
      return bad;
    }
    for (int c : dec.nodes[id].children) stack.push_back(c);
  }
  for (int id = 0; id < m; ++id)
    if (seen[id] == 0)
      bad.push_back("node " + std::to_string(id) + " unreachable from root");
  if (!bad.empty()) return bad;

  auto bag_sorted = [](const DecompositionNode& node) {
    return std::is_sorted(node.bag.begin(), node.bag.end()) &&
           std::adjacent_find(node.bag.begin(), node.bag.end()) ==
               node.bag.end();
  };

  // Node shapes.
  for (int id = 0; id < m; ++id) {
    const DecompositionNode& node = dec.nodes[id];
    std::string tag = "node " + std::to_string(id) + " (" +
                      to_string(node.kind) + ")";
    if (!bag_sorted(node)) bad.push_back(tag + ": bag not sorted/unique");
    switch (node.kind) {
      case NodeKind::Leaf:
        if (!node.children.empty()) bad.push_back(tag + ": leaf with children");
        if (!node.bag.empty()) bad.push_back(tag + ": leaf bag not empty");
        break;
      case NodeKind::Introduce:
      case NodeKind::Forget: {
        if (node.children.size() != 1) {
          bad.push_back(tag + ": needs exactly one child");
          break;
        }
        const auto& child = dec.nodes[node.children[0]];
        std::vector<int> smaller =
            node.kind == NodeKind::Introduce ? child.bag : node.bag;
        std::vector<int> larger =
            node.kind == NodeKind::Introduce ? node.bag : child.bag;
        std::vector<int> diff;
        std::set_difference(larger.begin(), larger.end(), smaller.begin(),
                            smaller.end(), std::back_inserter(diff));
        bool includes = std::includes(larger.begin(), larger.end(),
                                      smaller.begin(), smaller.end());
        if (!includes || diff.size() != 1 || diff[0] != node.agent ||
            larger.size() != smaller.size() + 1)
          bad.push_back(tag + ": bag does not change by exactly its agent");
        break;
      }
      case NodeKind::Join: {
        if (node.children.size() != 2) {
          bad.push_back(tag + ": needs exactly two children");
          break;
        }
        for (int c : node.children)
          if (dec.nodes[c].bag != node.bag)
            bad.push_back(tag + ": child " + std::to_string(c) +
                          " bag mismatch");
        break;
      }
    }
  }
  if (!dec.nodes[dec.root].bag.empty()) bad.push_back("root bag not empty");

  // Edge coverage and per-agent appearance.
  const int n = inst.agent_count();
  std::vector<bool> appears(n, false);
  for (const auto& node : dec.nodes)
    for (int v : node.bag) {
      if (v < 0 || v >= n) {
        bad.push_back("bag agent out of range");
        return bad;
      }
      appears[v] = true;
    }
  for (int v = 0; v < n; ++v)
    if (!appears[v])
      bad.push_back("agent " + std::to_string(v) + " in no bag");
  for (const auto& [a, b] : inst.edges()) {
    bool covered = false;
    for (const auto& node : dec.nodes) {
      if (std::binary_search(node.bag.begin(), node.bag.end(), a) &&
          std::binary_search(node.bag.begin(), node.bag.end(), b)) {
        covered = true;
        break;
      }
    }
    if (!covered)
      bad.push_back("edge (" + std::to_string(a) + "," + std::to_string(b) +
                    ") covered by no bag");
  }

  // Connected subtree per agent: the nodes holding v must form one subtree.
  auto order = dec.post_order();
  std::vector<int> parent(m, -1);
  for (int id = 0; id < m; ++id)
    for (int c : dec.nodes[id].children) parent[c] = id;
  for (int v = 0; v < n; ++v) {
    std::vector<int> holders;
    for (int id = 0; id < m; ++id)
      if (std::binary_search(dec.nodes[id].bag.begin(),
                             dec.nodes[id].bag.end(), v))
        holders.push_back(id);
    if (holders.empty()) continue;
    // Walk up from each holder; within the holder-induced subgraph each node
    // except one must have its parent holding v too.
    int roots_found = 0;
    for (int id : holders) {
      int p = parent[id];
      bool parent_holds =
          p != -1 && std::binary_search(dec.nodes[p].bag.begin(),
                                        dec.nodes[p].bag.end(), v);
      if (!parent_holds) ++roots_found;
    }
    if (roots_found != 1)
      bad.push_back("agent " + std::to_string(v) +
                    " does not induce a connected subtree");
  }

  // Join separation: no edge may run between the two children's exclusive
  // subtree agents; their overlap must be exactly the join bag.
  std::vector<std::set<int>> vx(m);
  for (int id : order) collect_subtree_agents(dec, id, vx);
  for (int id = 0; id < m; ++id) {
    const DecompositionNode& node = dec.nodes[id];
    if (node.kind != NodeKind::Join || node.children.size() != 2) continue;
    const std::set<int>& left = vx[node.children[0]];
    const std::set<int>& right = vx[node.children[1]];
    for (int v : left) {
      bool in_bag = std::binary_search(node.bag.begin(), node.bag.end(), v);
      if (!in_bag && right.count(v))
        bad.push_back("join " + std::to_string(id) + ": agent " +
                      std::to_string(v) + " in both subtrees");
    }
    for (const auto& [a, b] : inst.edges()) {
      bool a_left = left.count(a) && !std::binary_search(node.bag.begin(),
                                                         node.bag.end(), a);
      bool b_left = left.count(b) && !std::binary_search(node.bag.begin(),
                                                         node.bag.end(), b);
      bool a_right = right.count(a) && !std::binary_search(node.bag.begin(),
                                                           node.bag.end(), a);
      bool b_right = right.count(b) && !std::binary_search(node.bag.begin(),
                                                           node.bag.end(), b);
      if ((a_left && b_right) || (a_right && b_left))
        bad.push_back("join " + std::to_string(id) + ": edge (" +
                      std::to_string(a) + "," + std::to_string(b) +
                      ") crosses the join");
    }
  }

  return bad;
}

}  // namespace sdg
