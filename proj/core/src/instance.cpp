#include "sdg/instance.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>

namespace sdg {

Instance::Instance(int agent_count, std::vector<std::pair<int, int>> edges,
                   ScoringVector scoring, bool open_mode,
                   std::vector<std::string> labels)
    : n_(agent_count),
      edges_(std::move(edges)),
      scoring_(std::move(scoring)),
      open_mode_(open_mode),
      labels_(std::move(labels)) {
  if (n_ < 1) throw std::invalid_argument("instance needs at least one agent");
  if (!labels_.empty() && static_cast<int>(labels_.size()) != n_)
    throw std::invalid_argument("labels must cover every agent or be absent");
  for (auto& [a, b] : edges_) {
    if (a < 0 || a >= n_ || b < 0 || b >= n_)
      throw std::invalid_argument("edge endpoint out of range: (" +
                                  std::to_string(a) + "," + std::to_string(b) +
                                  ")");
    if (a == b)
      throw std::invalid_argument("self-loop at agent " + std::to_string(a));
    if (a > b) std::swap(a, b);
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
    throw std::invalid_argument("duplicate edge");
  adj_.assign(n_, {});
  for (const auto& [a, b] : edges_) {
    adj_[a].push_back(b);
    adj_[b].push_back(a);
  }
  for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
}

bool Instance::has_edge(int a, int b) const {
  const auto& nb = adj_.at(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

int Instance::max_degree() const {
  int d = 0;
  for (const auto& nb : adj_) d = std::max(d, static_cast<int>(nb.size()));
  return d;
}

std::vector<int> Instance::bfs_distances(int source) const {
  std::vector<int> dist(n_, kInfiniteDistance);
  dist[source] = 0;
  std::queue<int> q;
  q.push(source);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj_[u]) {
      if (dist[v] == kInfiniteDistance) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
    }
  }
  return dist;
}

std::vector<std::vector<int>> Instance::connected_components() const {
  std::vector<std::vector<int>> comps;
  std::vector<bool> seen(n_, false);
  for (int s = 0; s < n_; ++s) {
    if (seen[s]) continue;
    std::vector<int> comp;
    std::queue<int> q;
    q.push(s);
    seen[s] = true;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      comp.push_back(u);
      for (int v : adj_[u]) {
        if (!seen[v]) {
          seen[v] = true;
          q.push(v);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

Instance Instance::induced_subinstance(const std::vector<int>& members) const {
  std::vector<int> index(n_, -1);
  for (std::size_t i = 0; i < members.size(); ++i) index[members[i]] = i;
  std::vector<std::pair<int, int>> sub_edges;
  for (const auto& [a, b] : edges_) {
    if (index[a] >= 0 && index[b] >= 0)
      sub_edges.emplace_back(index[a], index[b]);
  }
  std::vector<std::string> sub_labels;
  if (!labels_.empty()) {
    sub_labels.reserve(members.size());
    for (int m : members) sub_labels.push_back(labels_[m]);
  }
  return Instance(static_cast<int>(members.size()), std::move(sub_edges),
                  scoring_, open_mode_, std::move(sub_labels));
}

}  // namespace sdg
