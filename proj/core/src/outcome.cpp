#include "sdg/outcome.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>

#include "sdg/errors.hpp"

namespace sdg {

Coalition Coalition::of(std::vector<int> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.empty())
    throw std::invalid_argument("coalition must be non-empty");
  return Coalition{std::move(members)};
}

bool Coalition::contains(int agent) const {
  return std::binary_search(members.begin(), members.end(), agent);
}

namespace {

// BFS from the member at position src, restricted to the coalition.
// Returns distances by member position.
std::vector<int> bfs_within(const Instance& inst, const Coalition& c, int src) {
  const int k = c.size();
  std::vector<int> dist(k, kInfiniteDistance);
  dist[src] = 0;
  std::queue<int> q;
  q.push(src);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int nb : inst.neighbors(c.members[u])) {
      auto it = std::lower_bound(c.members.begin(), c.members.end(), nb);
      if (it == c.members.end() || *it != nb) continue;
      int v = static_cast<int>(it - c.members.begin());
      if (dist[v] == kInfiniteDistance) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
    }
  }
  return dist;
}

}  // namespace

DistanceMatrix distances_within(const Instance& inst, const Coalition& c) {
  const int k = c.size();
  DistanceMatrix m(k);
  for (int i = 0; i < k; ++i) {
    auto dist = bfs_within(inst, c, i);
    for (int j = 0; j < k; ++j) m.set(i, j, dist[j]);
  }
  return m;
}

Welfare utility(const Instance& inst, int agent, const Coalition& c) {
  if (!c.contains(agent))
    throw std::invalid_argument("utility: agent " + std::to_string(agent) +
                                " is not a coalition member");
  if (c.size() == 1) return Welfare(0);
  auto it = std::lower_bound(c.members.begin(), c.members.end(), agent);
  int src = static_cast<int>(it - c.members.begin());
  auto dist = bfs_within(inst, c, src);
  Welfare total(0);
  for (int j = 0; j < c.size(); ++j) {
    if (j == src) continue;
    if (dist[j] == kInfiniteDistance) return Welfare::neg_inf();
    total += inst.score(dist[j]);
    if (!total.is_finite()) return total;
  }
  return total;
}

std::vector<Welfare> member_utilities(const Instance& inst, const Coalition& c) {
  std::vector<Welfare> out;
  out.reserve(c.size());
  for (int agent : c.members) out.push_back(utility(inst, agent, c));
  return out;
}

std::vector<std::string> validate_partition(
    const Instance& inst, const std::vector<std::vector<int>>& blocks) {
  std::vector<std::string> problems;
  std::vector<int> count(inst.agent_count(), 0);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty())
      problems.push_back("coalition " + std::to_string(b) + " is empty");
    for (int a : blocks[b]) {
      if (a < 0 || a >= inst.agent_count()) {
        problems.push_back("agent " + std::to_string(a) + " out of range");
        continue;
      }
      ++count[a];
    }
  }
  for (int a = 0; a < inst.agent_count(); ++a) {
    if (count[a] == 0)
      problems.push_back("agent " + std::to_string(a) + " missing");
    else if (count[a] > 1)
      problems.push_back("agent " + std::to_string(a) + " appears " +
                         std::to_string(count[a]) + " times");
  }
  return problems;
}

Welfare partition_welfare(const Instance& inst,
                          const std::vector<Coalition>& coalitions) {
  Welfare total(0);
  for (const auto& c : coalitions) {
    for (Welfare u : member_utilities(inst, c)) {
      total += u;
      if (!total.is_finite()) return total;
    }
  }
  return total;
}

Outcome Outcome::from_blocks(const Instance& inst,
                             std::vector<std::vector<int>> blocks) {
  auto problems = validate_partition(inst, blocks);
  if (!problems.empty()) {
    std::string msg = "not a partition:";
    for (const auto& p : problems) msg += " " + p + ";";
    throw PartitionError(msg);
  }
  Outcome out;
  out.coalitions.reserve(blocks.size());
  for (auto& b : blocks) out.coalitions.push_back(Coalition::of(std::move(b)));
  std::sort(out.coalitions.begin(), out.coalitions.end(),
            [](const Coalition& a, const Coalition& b) {
              return a.members.front() < b.members.front();
            });
  out.welfare = partition_welfare(inst, out.coalitions);
  return out;
}

int Outcome::coalition_of(int agent) const {
  for (std::size_t i = 0; i < coalitions.size(); ++i)
    if (coalitions[i].contains(agent)) return static_cast<int>(i);
  throw std::invalid_argument("agent " + std::to_string(agent) +
                              " not in outcome");
}

}  // namespace sdg
