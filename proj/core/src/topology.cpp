#include "sdg/topology.hpp"

#include <algorithm>
#include <bit>
#include <map>

namespace sdg {

bool SmallGraph::connected() const {
  if (n_ <= 1) return true;
  std::uint64_t all = n_ == 64 ? ~0ULL : (1ULL << n_) - 1;
  std::uint64_t visited = 1;
  std::uint64_t frontier = 1;
  while (frontier != 0) {
    std::uint64_t next = 0;
    for (std::uint64_t f = frontier; f != 0; f &= f - 1)
      next |= adj_[std::countr_zero(f)];
    next &= all & ~visited;
    visited |= next;
    frontier = next;
  }
  return visited == all;
}

std::vector<int> SmallGraph::bfs_distances(int source) const {
  std::vector<int> dist(n_, -1);
  dist[source] = 0;
  std::uint64_t visited = 1ULL << source;
  std::uint64_t frontier = visited;
  int d = 0;
  while (frontier != 0) {
    ++d;
    std::uint64_t next = 0;
    for (std::uint64_t f = frontier; f != 0; f &= f - 1)
      next |= adj_[std::countr_zero(f)];
    next &= ~visited;
    for (std::uint64_t f = next; f != 0; f &= f - 1)
      dist[std::countr_zero(f)] = d;
    visited |= next;
    frontier = next;
  }
  return dist;
}

SmallGraph SmallGraph::permuted(const std::vector<int>& perm) const {
  SmallGraph out(n_);
  for (int v = 0; v < n_; ++v)
    for (std::uint64_t f = adj_[v]; f != 0; f &= f - 1) {
      int u = std::countr_zero(f);
      if (u > v) out.add_edge(perm[v], perm[u]);
    }
  return out;
}

namespace {

// Stable colors for the anonymous vertices: start from adjacency to the
// fixed labeled part, then refine by multisets of neighbour colors until the
// partition stops splitting.
std::vector<int> refine_anonymous_colors(const CoalitionTopology& t) {
  const int L = static_cast<int>(t.labeled.size());
  const int A = t.anon_count;
  const std::uint64_t labeled_mask = L == 64 ? ~0ULL : (1ULL << L) - 1;

  std::vector<std::uint64_t> initial(A);
  for (int i = 0; i < A; ++i)
    initial[i] = t.graph.neighbors(L + i) & labeled_mask;

  std::vector<int> color(A);
  {
    std::vector<std::uint64_t> sorted = initial;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (int i = 0; i < A; ++i)
      color[i] = static_cast<int>(
          std::lower_bound(sorted.begin(), sorted.end(), initial[i]) -
          sorted.begin());
  }

  for (int round = 0; round < A; ++round) {
    // Signature: own color plus sorted colors of anonymous neighbours.
    std::vector<std::vector<int>> sig(A);
    for (int i = 0; i < A; ++i) {
      sig[i].push_back(color[i]);
      std::vector<int> nb;
      for (int j = 0; j < A; ++j)
        if (j != i && t.graph.has_edge(L + i, L + j)) nb.push_back(color[j]);
      std::sort(nb.begin(), nb.end());
      sig[i].insert(sig[i].end(), nb.begin(), nb.end());
    }
    std::map<std::vector<int>, int> index;
    for (const auto& s : sig) index.emplace(s, 0);
    int next = 0;
    for (auto& [key, id] : index) id = next++;
    std::vector<int> fresh(A);
    for (int i = 0; i < A; ++i) fresh[i] = index[sig[i]];
    if (fresh == color) break;
    color = std::move(fresh);
  }
  return color;
}

std::string serialize(const CoalitionTopology& t,
                      const std::vector<int>& anon_order) {
  const int L = static_cast<int>(t.labeled.size());
  const int m = t.size();
  // perm[old] = new: labeled fixed, anonymous rearranged.
  std::vector<int> perm(m);
  for (int i = 0; i < L; ++i) perm[i] = i;
  for (int i = 0; i < t.anon_count; ++i) perm[L + anon_order[i]] = L + i;
  SmallGraph g = t.graph.permuted(perm);

  std::string out;
  out.reserve(8 + 4 * L + m * m / 8 + 1);
  out.push_back(static_cast<char>(L));
  out.push_back(static_cast<char>(t.anon_count));
  for (int id : t.labeled)
    for (int shift = 0; shift < 32; shift += 8)
      out.push_back(static_cast<char>((id >> shift) & 0xff));
  int bit = 0;
  char acc = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      if (g.has_edge(i, j)) acc |= static_cast<char>(1 << bit);
      if (++bit == 8) {
        out.push_back(acc);
        acc = 0;
        bit = 0;
      }
    }
  if (bit != 0) out.push_back(acc);
  return out;
}

}  // namespace

std::string canonical_topology_key(const CoalitionTopology& t) {
  const int A = t.anon_count;
  if (A <= 1) {
    std::vector<int> identity(A);
    for (int i = 0; i < A; ++i) identity[i] = i;
    return serialize(t, identity);
  }

  std::vector<int> color = refine_anonymous_colors(t);

  // Group by color; only same-color anonymous vertices may swap.
  std::vector<int> order(A);
  for (int i = 0; i < A; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return color[a] < color[b]; });

  // Minimize over the remaining permutations class by class.
  std::string best = serialize(t, order);
  std::vector<std::pair<int, int>> classes;  // [begin, end) in `order`
  int begin = 0;
  for (int i = 1; i <= A; ++i) {
    if (i == A || color[order[i]] != color[order[begin]]) {
      if (i - begin > 1) classes.emplace_back(begin, i);
      begin = i;
    }
  }
  if (classes.empty()) return best;

  // Odometer over per-class permutations; classes are tiny after refinement.
  std::vector<int> candidate = order;
  auto advance = [&](std::size_t c) -> bool {
    return std::next_permutation(candidate.begin() + classes[c].first,
                                 candidate.begin() + classes[c].second);
  };
  while (true) {
    std::size_t c = 0;
    while (c < classes.size() && !advance(c)) ++c;
    if (c == classes.size()) break;
    std::string key = serialize(t, candidate);
    if (key < best) best = key;
  }
  return best;
}

}  // namespace sdg
