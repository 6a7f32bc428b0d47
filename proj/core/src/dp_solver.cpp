#include "sdg/dp_solver.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "sdg/bounds.hpp"
#include "sdg/errors.hpp"
#include "sdg/oracle.hpp"
#include "sdg/stability.hpp"

namespace sdg {

namespace {

struct DpKey {
  std::vector<CoalitionTopology> blocks;  // sorted by smallest labeled agent

  void sort_blocks() {
    std::sort(blocks.begin(), blocks.end(),
              [](const CoalitionTopology& a, const CoalitionTopology& b) {
                return a.labeled.front() < b.labeled.front();
              });
  }

  std::string canon() const {
    std::string out;
    for (const auto& b : blocks) {
      out += canonical_topology_key(b);
      out.push_back('\x01');
    }
    return out;
  }

  // Signature of the bag partition alone (labeled sets, ignoring anons);
  // join nodes pair entries with equal partitions.
  std::string partition_signature() const {
    std::string out;
    for (const auto& b : blocks) {
      for (int v : b.labeled) {
        out.append(reinterpret_cast<const char*>(&v), sizeof(int));
      }
      out.push_back('\x01');
    }
    return out;
  }
};

struct BackRef {
  enum class Op { Leaf, IntroNew, IntroJoin, Forget, Join } op = Op::Leaf;
  int child_a = -1;      // entry index in (first) child table
  int child_b = -1;      // second child entry (join)
  int child_block = -1;  // IntroJoin: block index in the child key
};

struct Entry {
  DpKey key;
  std::string canon;
  std::int64_t welfare = 0;
  BackRef back;
};

using Table = std::vector<Entry>;

// Topology operations ------------------------------------------------------

// Insert agent v into the labeled section with the given adjacency to the
// existing labeled agents (anonymous members never gain new neighbours).
CoalitionTopology insert_labeled(const CoalitionTopology& t, int v,
                                 const Instance& inst) {
  const int L = static_cast<int>(t.labeled.size());
  CoalitionTopology out;
  out.labeled = t.labeled;
  auto pos_it = std::upper_bound(out.labeled.begin(), out.labeled.end(), v);
  const int p = static_cast<int>(pos_it - out.labeled.begin());
  out.labeled.insert(pos_it, v);
  out.anon_count = t.anon_count;
  out.graph = SmallGraph(t.size() + 1);
  auto remap = [&](int old) { return old < p ? old : old + 1; };
  for (int a = 0; a < t.size(); ++a)
    for (int b = a + 1; b < t.size(); ++b)
      if (t.graph.has_edge(a, b)) out.graph.add_edge(remap(a), remap(b));
  for (int i = 0; i < L; ++i)
    if (inst.has_edge(v, t.labeled[i])) out.graph.add_edge(p, remap(i));
  return out;
}

// Move agent v from the labeled section to the anonymous one (appended last).
CoalitionTopology forget_labeled(const CoalitionTopology& t, int v) {
  const int L = static_cast<int>(t.labeled.size());
  auto pos_it = std::lower_bound(t.labeled.begin(), t.labeled.end(), v);
  const int p = static_cast<int>(pos_it - t.labeled.begin());
  CoalitionTopology out;
  out.labeled = t.labeled;
  out.labeled.erase(out.labeled.begin() + p);
  out.anon_count = t.anon_count + 1;
  out.graph = SmallGraph(t.size());
  auto remap = [&](int old) {
    if (old == p) return t.size() - 1;          // v goes last
    int shifted = old < p ? old : old - 1;      // close the labeled gap
    return shifted;
  };
  for (int a = 0; a < t.size(); ++a)
    for (int b = a + 1; b < t.size(); ++b)
      if (t.graph.has_edge(a, b)) out.graph.add_edge(remap(a), remap(b));
  return out;
}

// Glue two topologies over their common labeled set; anonymous members stay
// disjoint and never share edges (their subtrees only meet in the bag).
CoalitionTopology glue(const CoalitionTopology& a, const CoalitionTopology& b) {
  assert(a.labeled == b.labeled);
  const int L = static_cast<int>(a.labeled.size());
  CoalitionTopology out;
  out.labeled = a.labeled;
  out.anon_count = a.anon_count + b.anon_count;
  out.graph = SmallGraph(L + out.anon_count);
  for (int i = 0; i < a.size(); ++i)
    for (int j = i + 1; j < a.size(); ++j)
      if (a.graph.has_edge(i, j)) out.graph.add_edge(i, j);
  auto remap_b = [&](int old) { return old < L ? old : old + a.anon_count; };
  for (int i = 0; i < b.size(); ++i)
    for (int j = i + 1; j < b.size(); ++j)
      if (b.graph.has_edge(i, j)) {
        // Labeled-labeled edges already copied from a (both equal G's).
        if (i < L && j < L) continue;
        out.graph.add_edge(remap_b(i), remap_b(j));
      }
  return out;
}

// Welfare of one finished coalition, plus the individual-rationality verdict.
struct Finalized {
  bool feasible = false;
  bool all_nonnegative = false;
  std::int64_t welfare = 0;
};

Finalized finalize_topology(const CoalitionTopology& t, const Instance& inst) {
  Finalized out;
  const int m = t.size();
  if (m == 1) return {true, true, 0};
  if (!t.graph.connected()) return out;
  const ScoringVector& s = inst.scoring();
  const bool open = inst.open_mode();
  std::int64_t total = 0;
  bool all_nonneg = true;
  for (int i = 0; i < m; ++i) {
    auto dist = t.graph.bfs_distances(i);
    std::int64_t u = 0;
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      Welfare sc = s.score(dist[j], open);
      if (!sc.is_finite()) return out;  // beyond the closed horizon
      u += sc.value();
    }
    if (u < 0) all_nonneg = false;
    total += u;
  }
  out.feasible = true;
  out.all_nonnegative = all_nonneg;
  out.welfare = total;
  return out;
}

// The DP ---------------------------------------------------------------

class DpRun {
 public:
  DpRun(const Instance& inst, const NiceTreeDecomposition& dec, int cap,
        bool ir_filter, const DpOptions& opts, DpStats* stats)
      : inst_(inst), dec_(dec), cap_(cap), ir_filter_(ir_filter), opts_(opts),
        stats_(stats) {
    if (opts_.check_introduce_edges) compute_subtree_agents();
    tables_.resize(dec_.nodes.size());
  }

  // Returns the root welfare, or nullopt when no admissible outcome exists
  // (cannot happen for cap >= 1, where all-singletons always survives).
  std::optional<std::int64_t> run() {
    order_ = dec_.post_order();
    for (int id : order_) {
      const DecompositionNode& node = dec_.nodes[id];
      switch (node.kind) {
        case NodeKind::Leaf: leaf(id); break;
        case NodeKind::Introduce: introduce(id); break;
        case NodeKind::Forget: forget(id); break;
        case NodeKind::Join: join(id); break;
      }
      finish_table(id);
    }
    const Table& root = tables_[dec_.root];
    if (root.empty()) return std::nullopt;
    assert(root.size() == 1 && root[0].key.blocks.empty());
    return root[0].welfare;
  }

  std::uint64_t transitions() const { return transitions_; }

  // Follow backpointers, replaying each node's operation on concrete agent
  // sets (anonymous members stay identifiable on the way down).
  std::vector<std::vector<int>> reconstruct() const {
    std::vector<std::vector<int>> finalized;
    walk(dec_.root, 0, finalized);
    return finalized;
  }

 private:
  // Open blocks keyed by their sorted labeled agent set.
  using OpenBlocks = std::map<std::vector<int>, std::vector<int>>;

  OpenBlocks walk(int node_id, int entry_idx,
                  std::vector<std::vector<int>>& finalized) const {
    const DecompositionNode& node = dec_.nodes[node_id];
    const Entry& e = tables_[node_id][entry_idx];
    switch (e.back.op) {
      case BackRef::Op::Leaf:
        return {};
      case BackRef::Op::IntroNew: {
        OpenBlocks open =
            walk(node.children[0], e.back.child_a, finalized);
        open[{node.agent}] = {node.agent};
        return open;
      }
      case BackRef::Op::IntroJoin: {
        OpenBlocks open =
            walk(node.children[0], e.back.child_a, finalized);
        const Entry& child =
            tables_[node.children[0]][e.back.child_a];
        const std::vector<int>& old_labeled =
            child.key.blocks[e.back.child_block].labeled;
        auto it = open.find(old_labeled);
        assert(it != open.end());
        std::vector<int> agents = it->second;
        open.erase(it);
        agents.push_back(node.agent);
        std::vector<int> labeled = old_labeled;
        labeled.insert(
            std::upper_bound(labeled.begin(), labeled.end(), node.agent),
            node.agent);
        open[labeled] = std::move(agents);
        return open;
      }
      case BackRef::Op::Forget: {
        OpenBlocks open =
            walk(node.children[0], e.back.child_a, finalized);
        // Find the child block holding the forgotten agent.
        for (auto it = open.begin(); it != open.end(); ++it) {
          if (!std::binary_search(it->first.begin(), it->first.end(),
                                  node.agent))
            continue;
          std::vector<int> labeled = it->first;
          std::vector<int> agents = std::move(it->second);
          open.erase(it);
          labeled.erase(
              std::find(labeled.begin(), labeled.end(), node.agent));
          if (labeled.empty())
            finalized.push_back(std::move(agents));
          else
            open[labeled] = std::move(agents);
          return open;
        }
        assert(false && "forgotten agent not in any open block");
        return open;
      }
      case BackRef::Op::Join: {
        OpenBlocks left = walk(node.children[0], e.back.child_a, finalized);
        OpenBlocks right = walk(node.children[1], e.back.child_b, finalized);
        // Same labeled sets on both sides; only the bag agents are shared.
        for (auto& [labeled, agents] : right) {
          auto it = left.find(labeled);
          assert(it != left.end());
          for (int a : agents)
            if (std::find(it->second.begin(), it->second.end(), a) ==
                it->second.end())
              it->second.push_back(a);
        }
        return left;
      }
    }
    return {};
  }

  void leaf(int id) {
    Entry e;
    e.canon = e.key.canon();
    e.welfare = 0;
    e.back = {BackRef::Op::Leaf, -1, -1, -1};
    insert(id, std::move(e));
  }

  void introduce(int id) {
    const DecompositionNode& node = dec_.nodes[id];
    const int child = node.children[0];
    const int v = node.agent;
    if (opts_.check_introduce_edges) check_introduce_edge_rule(id);
    const Table& source = tables_[child];
    for (int ci = 0; ci < static_cast<int>(source.size()); ++ci) {
      const Entry& ce = source[ci];
      // Branch 1: v opens a fresh coalition.
      {
        Entry e;
        e.key = ce.key;
        CoalitionTopology solo;
        solo.labeled = {v};
        solo.anon_count = 0;
        solo.graph = SmallGraph(1);
        e.key.blocks.push_back(std::move(solo));
        e.key.sort_blocks();
        e.welfare = ce.welfare;
        e.back = {BackRef::Op::IntroNew, ci, -1, -1};
        insert(id, std::move(e));
      }
      // Branch 2: v joins an existing open coalition.  Edges to its labeled
      // agents come from the network; there are never edges to anonymous
      // members (they were forgotten before v appeared).
      for (int b = 0; b < static_cast<int>(ce.key.blocks.size()); ++b) {
        const CoalitionTopology& block = ce.key.blocks[b];
        if (block.size() + 1 > cap_) continue;
        if (!inst_.open_mode() && beyond_horizon(v, block)) continue;
        Entry e;
        e.key = ce.key;
        e.key.blocks[b] = insert_labeled(block, v, inst_);
        e.key.sort_blocks();
        e.welfare = ce.welfare;
        e.back = {BackRef::Op::IntroJoin, ci, -1, b};
        insert(id, std::move(e));
      }
    }
  }

  void forget(int id) {
    const DecompositionNode& node = dec_.nodes[id];
    const int child = node.children[0];
    const int v = node.agent;
    const Table& source = tables_[child];
    for (int ci = 0; ci < static_cast<int>(source.size()); ++ci) {
      const Entry& ce = source[ci];
      int b = -1;
      for (int i = 0; i < static_cast<int>(ce.key.blocks.size()); ++i)
        if (std::binary_search(ce.key.blocks[i].labeled.begin(),
                               ce.key.blocks[i].labeled.end(), v))
          b = i;
      assert(b >= 0);
      const CoalitionTopology& block = ce.key.blocks[b];
      Entry e;
      e.welfare = ce.welfare;
      e.back = {BackRef::Op::Forget, ci, -1, -1};
      if (block.labeled.size() == 1) {
        // The coalition loses its last bag agent and is finished: connectivity
        // and distances are final, so its welfare is credited now.
        Finalized fin = finalize_topology(block, inst_);
        if (!fin.feasible) continue;
        if (ir_filter_ && !fin.all_nonnegative) continue;
        e.key = ce.key;
        e.key.blocks.erase(e.key.blocks.begin() + b);
        e.welfare += fin.welfare;
      } else {
        e.key = ce.key;
        e.key.blocks[b] = forget_labeled(block, v);
        e.key.sort_blocks();
      }
      insert(id, std::move(e));
    }
  }

  void join(int id) {
    const DecompositionNode& node = dec_.nodes[id];
    const Table& left = tables_[node.children[0]];
    const Table& right = tables_[node.children[1]];
    // Pair entries with identical bag partitions.
    std::unordered_map<std::string, std::vector<int>> by_partition;
    for (int i = 0; i < static_cast<int>(right.size()); ++i)
      by_partition[right[i].key.partition_signature()].push_back(i);
    for (int li = 0; li < static_cast<int>(left.size()); ++li) {
      const Entry& le = left[li];
      auto it = by_partition.find(le.key.partition_signature());
      if (it == by_partition.end()) continue;
      for (int ri : it->second) {
        const Entry& re = right[ri];
        Entry e;
        e.welfare = le.welfare + re.welfare;
        e.back = {BackRef::Op::Join, li, ri, -1};
        bool ok = true;
        e.key.blocks.reserve(le.key.blocks.size());
        for (std::size_t b = 0; b < le.key.blocks.size(); ++b) {
          CoalitionTopology glued = glue(le.key.blocks[b], re.key.blocks[b]);
          if (glued.size() > cap_) {
            ok = false;
            break;
          }
          e.key.blocks.push_back(std::move(glued));
        }
        if (!ok) continue;
        insert(id, std::move(e));
      }
    }
  }

  bool beyond_horizon(int v, const CoalitionTopology& block) {
    // Network distance lower-bounds any within-coalition distance, so a
    // labeled pair beyond delta can never finish finite in closed mode.
    if (network_dist_.empty()) {
      network_dist_.resize(inst_.agent_count());
      for (int a = 0; a < inst_.agent_count(); ++a)
        network_dist_[a] = inst_.bfs_distances(a);
    }
    for (int u : block.labeled)
      if (network_dist_[v][u] == kInfiniteDistance ||
          network_dist_[v][u] > inst_.scoring().delta())
        return true;
    return false;
  }

  void insert(int id, Entry&& e) {
    ++transitions_;
    if (stats_) ++stats_->transitions;
    e.canon = e.key.canon();
    auto [it, fresh] = index_[id].try_emplace(e.canon, tables_[id].size());
    if (fresh) {
      tables_[id].push_back(std::move(e));
    } else {
      Entry& have = tables_[id][it->second];
      if (e.welfare > have.welfare) have = std::move(e);
    }
  }

  void finish_table(int id) {
    Table& t = tables_[id];
    std::sort(t.begin(), t.end(),
              [](const Entry& a, const Entry& b) { return a.canon < b.canon; });
    index_[id].clear();
    if (stats_) {
      stats_->table_sizes.push_back(t.size());
      stats_->max_table_entries =
          std::max(stats_->max_table_entries, t.size());
    }
  }

  void compute_subtree_agents() {
    subtree_agents_.assign(dec_.nodes.size(), {});
    for (int id : dec_.post_order()) {
      std::vector<int>& mine = subtree_agents_[id];
      for (int c : dec_.nodes[id].children)
        mine.insert(mine.end(), subtree_agents_[c].begin(),
                    subtree_agents_[c].end());
      mine.insert(mine.end(), dec_.nodes[id].bag.begin(),
                  dec_.nodes[id].bag.end());
      std::sort(mine.begin(), mine.end());
      mine.erase(std::unique(mine.begin(), mine.end()), mine.end());
    }
  }

  void check_introduce_edge_rule(int id) const {
    const DecompositionNode& node = dec_.nodes[id];
    const int child = node.children[0];
    const auto& below = subtree_agents_[child];
    const auto& bag = dec_.nodes[child].bag;
    for (int u : below) {
      if (std::binary_search(bag.begin(), bag.end(), u)) continue;
      if (inst_.has_edge(node.agent, u))
        throw std::logic_error(
            "introduced agent has an edge to a forgotten agent");
    }
  }

  const Instance& inst_;
  const NiceTreeDecomposition& dec_;
  const int cap_;
  const bool ir_filter_;
  const DpOptions& opts_;
  DpStats* stats_;
  std::vector<int> order_;
  std::uint64_t transitions_ = 0;
  std::vector<Table> tables_;
  std::unordered_map<int, std::unordered_map<std::string, std::size_t>> index_;
  std::vector<std::vector<int>> network_dist_;
  std::vector<std::vector<int>> subtree_agents_;
};

Outcome all_singletons(const Instance& inst) {
  std::vector<std::vector<int>> blocks;
  for (int i = 0; i < inst.agent_count(); ++i) blocks.push_back({i});
  return Outcome::from_blocks(inst, blocks);
}

}  // namespace

SolveResult solve_dp(const Instance& inst, SolveMode mode,
                     const NiceTreeDecomposition& dec, const DpOptions& options,
                     DpStats* stats) {
  auto violations = validate_decomposition(inst, dec);
  if (!violations.empty())
    throw std::invalid_argument("solve_dp: invalid decomposition: " +
                                violations.front());

  CapResolution resolution = effective_size_cap(inst, options.size_cap);
  int cap = resolution.cap.value_or(inst.agent_count());
  cap = std::min(cap, inst.agent_count());
  if (cap < 1) throw std::invalid_argument("solve_dp: size cap must be >= 1");
  if (cap > 64)
    throw std::invalid_argument("solve_dp: coalition sizes beyond 64 unsupported");

  SolveResult result;
  result.algorithm = "dp";

  if (inst.scoring().first_entry_nonpositive()) {
    // Nothing scores positively, so all-singletons is optimal for every mode;
    // verify the stability claim rather than assuming it.
    Outcome singles = all_singletons(inst);
    if (mode != SolveMode::WF_NS || is_nash_stable(inst, singles)) {
      result.best = std::move(singles);
      result.welfare = result.best->welfare;
      return result;
    }
  }

  const bool ir_filter = mode != SolveMode::WF;
  DpRun run(inst, dec, cap, ir_filter, options, stats);
  auto welfare = run.run();
  if (!welfare.has_value()) return result;  // no admissible outcome

  std::vector<std::vector<int>> blocks = run.reconstruct();
  Outcome outcome = Outcome::from_blocks(inst, std::move(blocks));
  if (outcome.welfare != Welfare(*welfare))
    throw std::logic_error("solve_dp: reconstruction welfare mismatch");
  result.explored = run.transitions();

  if (mode == SolveMode::WF_NS) {
    if (!is_nash_stable(inst, outcome)) {
      // The best individually rational outcome is not Nash stable; fall back
      // to size-capped enumeration with the full stability filter.
      if (inst.agent_count() > options.oracle_fallback_limit)
        throw RefusalError(
            "solve_dp: wf-ns needs the enumeration fallback here, refused for "
            "n=" + std::to_string(inst.agent_count()) + " > " +
            std::to_string(options.oracle_fallback_limit));
      OracleOptions fallback;
      fallback.limit_n = options.oracle_fallback_limit;
      fallback.size_cap = cap;
      SolveResult r = solve_exact(inst, SolveMode::WF_NS, fallback);
      r.algorithm = "dp+fallback";
      r.optimal_count = 0;
      return r;
    }
  }

  result.best = std::move(outcome);
  result.welfare = result.best->welfare;
  return result;
}

SolveResult solve_dp(const Instance& inst, SolveMode mode,
                     const DpOptions& options, DpStats* stats) {
  NiceTreeDecomposition dec = build_nice_decomposition(inst);
  return solve_dp(inst, mode, dec, options, stats);
}

}  // namespace sdg
