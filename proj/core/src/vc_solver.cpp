#include "sdg/vc_solver.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <stdexcept>

#include "sdg/errors.hpp"
#include "sdg/stability.hpp"
#include "sdg/topology.hpp"

namespace sdg {

namespace {

// Branch and bound: either v joins the cover, or its whole neighbourhood does.
void min_cover_search(const std::vector<std::uint64_t>& adj,
                      std::uint64_t active, std::vector<int>& current,
                      std::vector<int>& best) {
  if (!best.empty() && current.size() >= best.size()) return;
  int pick = -1, pick_deg = -1;
  for (std::uint64_t rest = active; rest != 0; rest &= rest - 1) {
    int v = std::countr_zero(rest);
    int deg = std::popcount(adj[v] & active);
    if (deg > pick_deg) {
      pick = v;
      pick_deg = deg;
    }
  }
  if (pick_deg <= 0) {
    if (best.empty() || current.size() < best.size()) best = current;
    return;
  }
  std::uint64_t nb = adj[pick] & active;
  // Branch 1: pick joins the cover.
  current.push_back(pick);
  min_cover_search(adj, active & ~(1ULL << pick), current, best);
  current.pop_back();
  // Branch 2: pick stays out, so every neighbour joins.
  std::size_t mark = current.size();
  for (std::uint64_t rest = nb; rest != 0; rest &= rest - 1)
    current.push_back(std::countr_zero(rest));
  min_cover_search(adj, active & ~(nb | (1ULL << pick)), current, best);
  current.resize(mark);
}

}  // namespace

std::vector<int> compute_vertex_cover(const Instance& inst) {
  const int n = inst.agent_count();
  if (n > 64)
    throw std::invalid_argument("compute_vertex_cover: more than 64 agents");
  std::vector<std::uint64_t> adj(n, 0);
  for (const auto& [a, b] : inst.edges()) {
    adj[a] |= 1ULL << b;
    adj[b] |= 1ULL << a;
  }
  std::vector<int> current, best;
  for (int v = 0; v < n; ++v)
    if (adj[v] != 0) best.push_back(v);  // trivial baseline for pruning
  if (best.empty()) return {};
  min_cover_search(adj, n == 64 ? ~0ULL : (1ULL << n) - 1, current, best);
  std::sort(best.begin(), best.end());
  return best;
}

CoverStructure group_signatures(const Instance& inst, std::vector<int> cover) {
  std::sort(cover.begin(), cover.end());
  if (cover.size() > 64)
    throw std::invalid_argument("group_signatures: cover too large");
  std::vector<int> position(inst.agent_count(), -1);
  for (std::size_t i = 0; i < cover.size(); ++i) position[cover[i]] = i;
  for (const auto& [a, b] : inst.edges())
    if (position[a] < 0 && position[b] < 0)
      throw std::invalid_argument("group_signatures: set is not a vertex cover");

  std::vector<std::pair<std::uint64_t, int>> sigs;  // (signature, agent)
  for (int v = 0; v < inst.agent_count(); ++v) {
    if (position[v] >= 0) continue;
    std::uint64_t sig = 0;
    for (int u : inst.neighbors(v)) sig |= 1ULL << position[u];
    sigs.emplace_back(sig, v);
  }
  std::sort(sigs.begin(), sigs.end());
  CoverStructure cs;
  cs.cover = std::move(cover);
  for (const auto& [sig, agent] : sigs) {
    if (cs.groups.empty() || cs.groups.back().signature != sig)
      cs.groups.push_back({sig, {}});
    cs.groups.back().members.push_back(agent);
  }
  return cs;
}

namespace {

// Representative graph of one block: its cover agents, then one vertex per
// present group wired to the cover agents in that group's neighbourhood.
SmallGraph representative_graph(const Instance& inst, const CoverStructure& cs,
                                const BlockPattern& block) {
  const int c = static_cast<int>(block.cover_positions.size());
  const int g = static_cast<int>(block.group_ids.size());
  SmallGraph graph(c + g);
  for (int i = 0; i < c; ++i)
    for (int j = i + 1; j < c; ++j)
      if (inst.has_edge(cs.cover[block.cover_positions[i]],
                        cs.cover[block.cover_positions[j]]))
        graph.add_edge(i, j);
  for (int gi = 0; gi < g; ++gi) {
    std::uint64_t sig = cs.groups[block.group_ids[gi]].signature;
    for (int i = 0; i < c; ++i)
      if ((sig >> block.cover_positions[i]) & 1) graph.add_edge(i, c + gi);
  }
  return graph;
}

}  // namespace

TypeDistances type_distances(const Instance& inst, const CoverStructure& cs,
                             const BlockPattern& block) {
  SmallGraph graph = representative_graph(inst, cs, block);
  const int m = graph.size();
  TypeDistances out;
  out.connected = graph.connected();
  out.dist.assign(m, std::vector<int>(m, kInfiniteDistance));
  for (int i = 0; i < m; ++i) {
    auto d = graph.bfs_distances(i);
    for (int j = 0; j < m; ++j)
      if (d[j] >= 0) out.dist[i][j] = d[j];
  }
  // Two members of the same group share their whole neighbourhood; whenever
  // the group touches the block's cover agents they sit at distance 2.
  const int c = static_cast<int>(block.cover_positions.size());
  for (int gi = 0; gi < static_cast<int>(block.group_ids.size()); ++gi)
    out.dist[c + gi][c + gi] = 2;
  for (int i = 0; i < c; ++i) out.dist[i][i] = 0;
  return out;
}

CountProgram build_count_program(const Instance& inst, const CoverStructure& cs,
                                 const std::vector<BlockPattern>& blocks) {
  CountProgram program;
  program.feasible = true;
  for (const auto& g : cs.groups)
    program.group_capacity.push_back(
        static_cast<std::int64_t>(g.members.size()));
  for (const BlockPattern& pattern : blocks) {
    CountProgram::Block block;
    block.pattern = pattern;
    block.distances = type_distances(inst, cs, pattern);
    if (!block.distances.connected) {
      program.feasible = false;
      return program;
    }
    const int c = static_cast<int>(pattern.cover_positions.size());
    const int g = static_cast<int>(pattern.group_ids.size());
    auto score_at = [&](int i, int j) {
      return inst.score(block.distances.dist[i][j]);
    };
    Welfare cover_pairs(0);
    for (int i = 0; i < c; ++i)
      for (int j = i + 1; j < c; ++j) cover_pairs += scale(score_at(i, j), 2);
    block.cover_pair_welfare = cover_pairs;
    if (!cover_pairs.is_finite()) program.feasible = false;
    block.cover_group.assign(c, std::vector<Welfare>(g, Welfare(0)));
    for (int i = 0; i < c && program.feasible; ++i)
      for (int gi = 0; gi < g; ++gi) {
        block.cover_group[i][gi] = score_at(i, c + gi);
        if (!block.cover_group[i][gi].is_finite()) program.feasible = false;
      }
    block.group_group.assign(g, std::vector<Welfare>(g, Welfare(0)));
    for (int gi = 0; gi < g && program.feasible; ++gi)
      for (int gj = 0; gj < g; ++gj)
        if (gi != gj) {
          block.group_group[gi][gj] = score_at(c + gi, c + gj);
          if (!block.group_group[gi][gj].is_finite()) program.feasible = false;
        }
    block.same_group.assign(g, Welfare(0));
    for (int gi = 0; gi < g; ++gi)
      block.same_group[gi] = inst.score(2);  // -inf only forces x = 1
    program.blocks.push_back(std::move(block));
    if (!program.feasible) return program;
  }
  return program;
}

Welfare evaluate_objective(
    const CountProgram& program,
    const std::vector<std::vector<std::int64_t>>& counts) {
  Welfare total(0);
  for (std::size_t b = 0; b < program.blocks.size(); ++b) {
    const auto& block = program.blocks[b];
    const auto& x = counts[b];
    const int c = static_cast<int>(block.pattern.cover_positions.size());
    const int g = static_cast<int>(block.pattern.group_ids.size());
    total += block.cover_pair_welfare;
    for (int i = 0; i < c; ++i)
      for (int gi = 0; gi < g; ++gi)
        total += scale(block.cover_group[i][gi], 2 * x[gi]);
    for (int gi = 0; gi < g; ++gi)
      for (int gj = gi + 1; gj < g; ++gj)
        total += scale(block.group_group[gi][gj], 2 * x[gi] * x[gj]);
    for (int gi = 0; gi < g; ++gi)
      total += scale(block.same_group[gi], x[gi] * (x[gi] - 1));
    if (!total.is_finite()) return total;
  }
  return total;
}

namespace {

// Utility of one member type in its own block; linear in the counts.
// type < c addresses a cover agent, type == c + gi a member of group gi.
Welfare own_utility(const Instance& inst, const CountProgram::Block& block,
                    const std::vector<std::int64_t>& x, int type) {
  const int c = static_cast<int>(block.pattern.cover_positions.size());
  const int g = static_cast<int>(block.pattern.group_ids.size());
  Welfare u(0);
  for (int j = 0; j < c; ++j) {
    if (j == type) continue;
    u += inst.score(block.distances.dist[type][j]);
  }
  for (int gj = 0; gj < g; ++gj) {
    std::int64_t mult = x[gj] - (type == c + gj ? 1 : 0);
    u += scale(inst.score(block.distances.dist[type][c + gj]), mult);
  }
  return u;
}

struct Deviator {
  int home_block = -1;          // -1 for a leftover singleton
  int cover_position = -1;      // set for cover agents
  int group_id = -1;            // set for group members
};

// Utility the deviator would get by joining target block d: its edges into
// the block are fixed by the network (cover agents) or the group signature,
// and one representative per group already carries every shortcut.
Welfare deviation_utility(const Instance& inst, const CoverStructure& cs,
                          const CountProgram& program,
                          const std::vector<std::vector<std::int64_t>>& counts,
                          int d, const Deviator& dev) {
  const auto& block = program.blocks[d];
  const int c = static_cast<int>(block.pattern.cover_positions.size());
  const int g = static_cast<int>(block.pattern.group_ids.size());
  SmallGraph graph = representative_graph(inst, cs, block.pattern);
  graph.grow();
  const int me = c + g;
  if (dev.cover_position >= 0) {
    int agent = cs.cover[dev.cover_position];
    for (int i = 0; i < c; ++i)
      if (inst.has_edge(agent, cs.cover[block.pattern.cover_positions[i]]))
        graph.add_edge(me, i);
    for (int gi = 0; gi < g; ++gi)
      if ((cs.groups[block.pattern.group_ids[gi]].signature >>
           dev.cover_position) & 1)
        graph.add_edge(me, c + gi);
  } else {
    std::uint64_t sig = cs.groups[dev.group_id].signature;
    for (int i = 0; i < c; ++i)
      if ((sig >> block.pattern.cover_positions[i]) & 1) graph.add_edge(me, i);
  }
  auto dist = graph.bfs_distances(me);
  Welfare after(0);
  for (int i = 0; i < c; ++i) {
    after += inst.score(dist[i] < 0 ? kInfiniteDistance : dist[i]);
    if (!after.is_finite()) return after;
  }
  for (int gi = 0; gi < g; ++gi) {
    Welfare sc = inst.score(dist[c + gi] < 0 ? kInfiniteDistance : dist[c + gi]);
    after += scale(sc, counts[d][gi]);
    if (!after.is_finite()) return after;
  }
  return after;
}

std::vector<std::int64_t> group_slack(
    const CountProgram& program,
    const std::vector<std::vector<std::int64_t>>& counts) {
  std::vector<std::int64_t> slack = program.group_capacity;
  for (std::size_t b = 0; b < program.blocks.size(); ++b)
    for (std::size_t gi = 0; gi < program.blocks[b].pattern.group_ids.size();
         ++gi)
      slack[program.blocks[b].pattern.group_ids[gi]] -= counts[b][gi];
  return slack;
}

}  // namespace

bool counts_individually_rational(
    const Instance& inst, const CoverStructure& cs, const CountProgram& program,
    const std::vector<std::vector<std::int64_t>>& counts) {
  (void)cs;
  for (std::size_t b = 0; b < program.blocks.size(); ++b) {
    const auto& block = program.blocks[b];
    const int c = static_cast<int>(block.pattern.cover_positions.size());
    const int g = static_cast<int>(block.pattern.group_ids.size());
    for (int i = 0; i < c; ++i)
      if (own_utility(inst, block, counts[b], i) < Welfare(0)) return false;
    // One representative per group suffices: members are interchangeable.
    for (int gi = 0; gi < g; ++gi)
      if (counts[b][gi] > 0 &&
          own_utility(inst, block, counts[b], c + gi) < Welfare(0))
        return false;
  }
  return true;
}

bool counts_nash_stable(const Instance& inst, const CoverStructure& cs,
                        const CountProgram& program,
                        const std::vector<std::vector<std::int64_t>>& counts) {
  // The fresh-singleton target is exactly individual rationality.
  if (!counts_individually_rational(inst, cs, program, counts)) return false;

  std::vector<std::int64_t> slack = group_slack(program, counts);

  // Every deviator type paired with its current utility.
  std::vector<std::pair<Deviator, Welfare>> deviators;
  for (std::size_t b = 0; b < program.blocks.size(); ++b) {
    const auto& block = program.blocks[b];
    const int c = static_cast<int>(block.pattern.cover_positions.size());
    for (int i = 0; i < c; ++i)
      deviators.push_back({{static_cast<int>(b),
                            block.pattern.cover_positions[i], -1},
                           own_utility(inst, block, counts[b], i)});
    for (std::size_t gi = 0; gi < block.pattern.group_ids.size(); ++gi)
      if (counts[b][gi] > 0)
        deviators.push_back(
            {{static_cast<int>(b), -1, block.pattern.group_ids[gi]},
             own_utility(inst, block, counts[b], c + static_cast<int>(gi))});
  }
  for (std::size_t g = 0; g < slack.size(); ++g)
    if (slack[g] > 0)
      deviators.push_back({{-1, -1, static_cast<int>(g)}, Welfare(0)});

  for (const auto& [dev, before] : deviators) {
    for (int d = 0; d < static_cast<int>(program.blocks.size()); ++d) {
      if (d == dev.home_block) continue;
      if (deviation_utility(inst, cs, program, counts, d, dev) > before)
        return false;
    }
    // Joining a leftover singleton: only a cover agent in that group's
    // neighbourhood connects (group members never neighbour each other).
    if (dev.cover_position >= 0) {
      for (std::size_t g = 0; g < slack.size(); ++g)
        if (slack[g] > 0 &&
            ((cs.groups[g].signature >> dev.cover_position) & 1) &&
            inst.score(1) > before)
          return false;
    }
  }
  return true;
}

Outcome materialize_counts(const Instance& inst, const CoverStructure& cs,
                           const CountProgram& program,
                           const std::vector<std::vector<std::int64_t>>& counts) {
  std::vector<std::size_t> next_member(cs.groups.size(), 0);
  std::vector<std::vector<int>> blocks;
  for (std::size_t b = 0; b < program.blocks.size(); ++b) {
    std::vector<int> block;
    for (int pos : program.blocks[b].pattern.cover_positions)
      block.push_back(cs.cover[pos]);
    for (std::size_t gi = 0; gi < program.blocks[b].pattern.group_ids.size();
         ++gi) {
      int g = program.blocks[b].pattern.group_ids[gi];
      for (std::int64_t k = 0; k < counts[b][gi]; ++k)
        block.push_back(cs.groups[g].members.at(next_member[g]++));
    }
    blocks.push_back(std::move(block));
  }
  for (std::size_t g = 0; g < cs.groups.size(); ++g)
    for (std::size_t m = next_member[g]; m < cs.groups[g].members.size(); ++m)
      blocks.push_back({cs.groups[g].members[m]});
  return Outcome::from_blocks(inst, std::move(blocks));
}

namespace {

struct BranchBest {
  bool found = false;
  std::int64_t welfare = 0;
  std::vector<BlockPattern> patterns;
  std::vector<std::vector<std::int64_t>> counts;
};

class VcComponentSolver {
 public:
  VcComponentSolver(const Instance& inst, SolveMode mode)
      : inst_(inst), mode_(mode),
        cs_(group_signatures(inst, compute_vertex_cover(inst))) {}

  SolveResult solve() {
    SolveResult result;
    result.algorithm = "vc";
    const int k = static_cast<int>(cs_.cover.size());
    if (k == 0) {
      // Edgeless component: a single agent on its own.
      assert(inst_.agent_count() == 1);
      result.best = Outcome::from_blocks(inst_, {{0}});
      result.welfare = result.best->welfare;
      return result;
    }
    // Partitions of the cover in restricted-growth order.
    std::vector<int> rgs(k, 0);
    enumerate_partitions(rgs, 1, 1);
    result.explored = explored_;
    if (!best_.found) return result;  // no stable outcome in this component
    CountProgram program = build_count_program(inst_, cs_, best_.patterns);
    result.best = materialize_counts(inst_, cs_, program, best_.counts);
    result.welfare = result.best->welfare;
    if (result.welfare != Welfare(best_.welfare))
      throw std::logic_error("solve_vc: materialized welfare mismatch");
    return result;
  }

 private:
  void enumerate_partitions(std::vector<int>& rgs, int pos, int max_used) {
    if (pos == static_cast<int>(rgs.size())) {
      try_partition(rgs, max_used);
      return;
    }
    for (int b = 0; b < max_used + 1; ++b) {
      rgs[pos] = b;
      enumerate_partitions(rgs, pos + 1, std::max(max_used, b + 1));
    }
    rgs[pos] = 0;
  }

  void try_partition(const std::vector<int>& rgs, int block_count) {
    std::vector<BlockPattern> patterns(block_count);
    for (int pos = 0; pos < static_cast<int>(rgs.size()); ++pos)
      patterns[rgs[pos]].cover_positions.push_back(pos);

    // Which blocks each group may be placed in (it needs a neighbour there).
    const int groups = static_cast<int>(cs_.groups.size());
    std::vector<std::vector<int>> eligible(groups);
    for (int g = 0; g < groups; ++g)
      for (int b = 0; b < block_count; ++b) {
        bool touches = false;
        for (int pos : patterns[b].cover_positions)
          if ((cs_.groups[g].signature >> pos) & 1) touches = true;
        if (touches) eligible[g].push_back(b);
      }

    std::vector<std::vector<int>> chosen(groups);
    assign_groups(patterns, eligible, chosen, 0);
  }

  void assign_groups(std::vector<BlockPattern>& patterns,
                     const std::vector<std::vector<int>>& eligible,
                     std::vector<std::vector<int>>& chosen, int g) {
    if (g == static_cast<int>(cs_.groups.size())) {
      evaluate_branch(patterns, chosen);
      return;
    }
    const std::int64_t capacity =
        static_cast<std::int64_t>(cs_.groups[g].members.size());
    const int options = static_cast<int>(eligible[g].size());
    for (std::uint32_t subset = 0; subset < (1u << options); ++subset) {
      if (std::popcount(subset) > capacity) continue;
      chosen[g].clear();
      for (int i = 0; i < options; ++i)
        if ((subset >> i) & 1) chosen[g].push_back(eligible[g][i]);
      assign_groups(patterns, eligible, chosen, g + 1);
    }
    chosen[g].clear();
  }

  void evaluate_branch(std::vector<BlockPattern>& patterns,
                       const std::vector<std::vector<int>>& chosen) {
    for (auto& p : patterns) p.group_ids.clear();
    for (int g = 0; g < static_cast<int>(chosen.size()); ++g)
      for (int b : chosen[g]) patterns[b].group_ids.push_back(g);

    CountProgram program = build_count_program(inst_, cs_, patterns);
    if (!program.feasible) return;

    std::vector<std::vector<std::int64_t>> counts(patterns.size());
    for (std::size_t b = 0; b < patterns.size(); ++b)
      counts[b].assign(patterns[b].group_ids.size(), 0);
    std::vector<std::int64_t> used(cs_.groups.size(), 0);
    enumerate_counts(program, counts, used, 0, 0);
  }

  void enumerate_counts(const CountProgram& program,
                        std::vector<std::vector<std::int64_t>>& counts,
                        std::vector<std::int64_t>& used, std::size_t b,
                        std::size_t gi) {
    if (b == program.blocks.size()) {
      ++explored_;
      Welfare w = evaluate_objective(program, counts);
      if (!w.is_finite()) return;
      if (mode_ != SolveMode::WF &&
          !counts_individually_rational(inst_, cs_, program, counts))
        return;
      if (mode_ == SolveMode::WF_NS &&
          !counts_nash_stable(inst_, cs_, program, counts))
        return;
      if (!best_.found || w.value() > best_.welfare) {
        best_.found = true;
        best_.welfare = w.value();
        best_.patterns.clear();
        for (const auto& block : program.blocks)
          best_.patterns.push_back(block.pattern);
        best_.counts = counts;
      }
      return;
    }
    if (gi == program.blocks[b].pattern.group_ids.size()) {
      enumerate_counts(program, counts, used, b + 1, 0);
      return;
    }
    const int g = program.blocks[b].pattern.group_ids[gi];
    // A -inf same-group score caps the count at one.
    std::int64_t most = program.group_capacity[g] - used[g];
    if (!program.blocks[b].same_group[gi].is_finite())
      most = std::min<std::int64_t>(most, 1);
    for (std::int64_t x = 1; x <= most; ++x) {
      counts[b][gi] = x;
      used[g] += x;
      enumerate_counts(program, counts, used, b, gi + 1);
      used[g] -= x;
    }
    counts[b][gi] = 0;
  }

  const Instance& inst_;
  SolveMode mode_;
  CoverStructure cs_;
  BranchBest best_;
  std::uint64_t explored_ = 0;
};

Outcome vc_all_singletons(const Instance& inst) {
  std::vector<std::vector<int>> blocks;
  for (int i = 0; i < inst.agent_count(); ++i) blocks.push_back({i});
  return Outcome::from_blocks(inst, blocks);
}

}  // namespace

SolveResult solve_vc(const Instance& inst, SolveMode mode,
                     const VcOptions& options) {
  std::vector<int> cover = compute_vertex_cover(inst);
  if (static_cast<int>(cover.size()) > options.cover_guard)
    throw RefusalError("solve_vc refuses cover size " +
                       std::to_string(cover.size()) + " > guard " +
                       std::to_string(options.cover_guard));

  SolveResult result;
  result.algorithm = "vc";

  if (inst.scoring().first_entry_nonpositive()) {
    Outcome singles = vc_all_singletons(inst);
    if (mode != SolveMode::WF_NS || is_nash_stable(inst, singles)) {
      result.best = std::move(singles);
      result.welfare = result.best->welfare;
      return result;
    }
  }

  auto components = inst.connected_components();
  std::vector<std::vector<int>> blocks;
  Welfare total(0);
  bool feasible = true;
  for (const auto& comp : components) {
    Instance sub = inst.induced_subinstance(comp);
    VcComponentSolver solver(sub, mode);
    SolveResult r = solver.solve();
    result.explored += r.explored;
    if (!r.best) {
      feasible = false;
      continue;
    }
    for (const Coalition& c : r.best->coalitions) {
      std::vector<int> block;
      for (int local : c.members) block.push_back(comp[local]);
      blocks.push_back(std::move(block));
    }
    total += r.welfare;
  }
  if (!feasible) return result;
  result.best = Outcome::from_blocks(inst, std::move(blocks));
  result.welfare = result.best->welfare;
  if (result.welfare != total)
    throw std::logic_error("solve_vc: component welfare sum mismatch");
  return result;
}

}  // namespace sdg
