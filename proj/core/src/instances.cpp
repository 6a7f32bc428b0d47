#include "sdg/instances.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace sdg {

namespace {

const std::vector<std::int64_t> kRingScores = {1, 1, -1, -1, -1, -1};

std::vector<std::pair<int, int>> clique_edges(const std::vector<int>& v) {
  std::vector<std::pair<int, int>> e;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) e.emplace_back(v[i], v[j]);
  return e;
}

}  // namespace

Fixture make_ring_fixture() {
  // Agents 0..4: the path, centre x = 2.  Agents 5..9: the clique; both path
  // endpoints attach to every clique agent.
  std::vector<std::pair<int, int>> edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4}};
  std::vector<int> clique = {5, 6, 7, 8, 9};
  for (auto e : clique_edges(clique)) edges.push_back(e);
  for (int k : clique) {
    edges.emplace_back(0, k);
    edges.emplace_back(4, k);
  }
  Fixture f{
      "ring",
      Instance(10, std::move(edges), ScoringVector(kRingScores), false,
               {"p0", "p1", "x", "p3", "p4", "k0", "k1", "k2", "k3", "k4"}),
      {{"x", 2}},
      {{SolveMode::WF, 62}, {SolveMode::WF_IR, 60}},
      {{SolveMode::WF, 1}, {SolveMode::WF_IR, 1}},
  };
  return f;
}

Fixture make_pendant_ring_fixture() {
  // Agents 0..4: the path, centre x = 2.  Agents 5..8: the clique; 9 is the
  // pendant agent y hanging off x.
  std::vector<std::pair<int, int>> edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4}};
  std::vector<int> clique = {5, 6, 7, 8};
  for (auto e : clique_edges(clique)) edges.push_back(e);
  for (int k : clique) {
    edges.emplace_back(0, k);
    edges.emplace_back(4, k);
  }
  edges.emplace_back(2, 9);
  Fixture f{
      "pendant-ring",
      Instance(10, std::move(edges), ScoringVector(kRingScores), false,
               {"p0", "p1", "x", "p3", "p4", "k0", "k1", "k2", "k3", "y"}),
      {{"x", 2}, {"y", 9}},
      {{SolveMode::WF, 48}, {SolveMode::WF_IR, 48}, {SolveMode::WF_NS, 46}},
      {{SolveMode::WF, 1}, {SolveMode::WF_IR, 1}, {SolveMode::WF_NS, 1}},
  };
  return f;
}

ColoringReduction reduce_triangle_cover_coloring(const TriangleCoveredGraph& g,
                                                 std::int64_t s1) {
  if (g.n % 3 != 0)
    throw std::invalid_argument("vertex count must be divisible by 3");
  const int t = g.n / 3;
  if (static_cast<int>(g.triangles.size()) != t)
    throw std::invalid_argument("expected exactly n/3 cover triangles");
  std::vector<int> used(g.n, 0);
  std::set<std::pair<int, int>> edge_set;
  for (auto [a, b] : g.edges) {
    if (a > b) std::swap(a, b);
    edge_set.emplace(a, b);
  }
  for (const auto& tri : g.triangles) {
    for (int v : tri) {
      if (v < 0 || v >= g.n)
        throw std::invalid_argument("triangle vertex out of range");
      if (++used[v] > 1)
        throw std::invalid_argument("triangle cover is not vertex-disjoint");
    }
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        auto e = std::minmax(tri[i], tri[j]);
        if (!edge_set.count({e.first, e.second}))
          throw std::invalid_argument("cover triangle misses an edge");
      }
  }

  // Complement graph under unit scoring.
  std::vector<std::pair<int, int>> comp_edges;
  for (int a = 0; a < g.n; ++a)
    for (int b = a + 1; b < g.n; ++b)
      if (!edge_set.count({a, b})) comp_edges.emplace_back(a, b);
  ColoringReduction red{
      Instance(g.n, std::move(comp_edges), ScoringVector({s1})),
      3 * static_cast<std::int64_t>(t) * s1 * (t - 1)};
  return red;
}

namespace {

bool has_isolated(const std::vector<std::vector<int>>& adj) {
  return std::any_of(adj.begin(), adj.end(),
                     [](const auto& nb) { return nb.empty(); });
}

}  // namespace

Instance random_instance(int n, double edge_prob, std::uint64_t seed,
                         ScoringVector scoring, bool open_mode,
                         const RandomGraphOptions& options) {
  if (edge_prob < 0.0 || edge_prob > 1.0)
    throw std::invalid_argument("edge_prob must lie in [0,1]");
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * attempt);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (coin(rng) < edge_prob) edges.emplace_back(a, b);
    Instance inst(n, std::move(edges), scoring, open_mode);
    if (options.forbid_isolated && has_isolated(inst.adjacency())) continue;
    if (options.require_connected && inst.connected_components().size() > 1)
      continue;
    return inst;
  }
  throw std::runtime_error("random_instance: no admissible sample found");
}

Instance random_tree(int n, std::uint64_t seed, ScoringVector scoring,
                     bool open_mode) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> pick(0, v - 1);
    edges.emplace_back(pick(rng), v);
  }
  return Instance(n, std::move(edges), std::move(scoring), open_mode);
}

Instance random_ktree(int n, int k, std::uint64_t seed, ScoringVector scoring,
                      bool open_mode) {
  if (k < 1 || n < k + 1)
    throw std::invalid_argument("random_ktree needs n > k >= 1");
  std::mt19937_64 rng(seed);
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> cliques;  // existing k-cliques to attach to
  std::vector<int> base(k);
  std::iota(base.begin(), base.end(), 0);
  for (auto e : clique_edges(base)) edges.push_back(e);
  cliques.push_back(base);
  for (int v = k; v < n; ++v) {
    std::uniform_int_distribution<std::size_t> pick(0, cliques.size() - 1);
    std::vector<int> host = cliques[pick(rng)];
    for (int u : host) edges.emplace_back(u, v);
    // v together with any k-1 members of the host clique forms a new host.
    for (int skip = 0; skip < k; ++skip) {
      std::vector<int> next;
      for (int i = 0; i < k; ++i)
        if (i != skip) next.push_back(host[i]);
      next.push_back(v);
      cliques.push_back(std::move(next));
    }
  }
  return Instance(n, std::move(edges), std::move(scoring), open_mode);
}

Instance random_bounded_degree(int n, int max_degree, int extra_edges,
                               std::uint64_t seed, ScoringVector scoring,
                               bool open_mode) {
  if (max_degree < 2 && n > 2)
    throw std::invalid_argument("max_degree must be >= 2 for connected n > 2");
  std::mt19937_64 rng(seed);
  std::vector<int> degree(n, 0);
  std::vector<std::pair<int, int>> edges;
  // Spanning tree first, attaching each vertex to a random earlier vertex
  // with spare degree.
  for (int v = 1; v < n; ++v) {
    std::vector<int> candidates;
    for (int u = 0; u < v; ++u)
      if (degree[u] < max_degree) candidates.push_back(u);
    if (candidates.empty())
      throw std::runtime_error("random_bounded_degree: degree budget too small");
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    int u = candidates[pick(rng)];
    edges.emplace_back(u, v);
    ++degree[u];
    ++degree[v];
  }
  std::set<std::pair<int, int>> edge_set(edges.begin(), edges.end());
  std::uniform_int_distribution<int> vertex(0, n - 1);
  int added = 0;
  for (int tries = 0; added < extra_edges && tries < 100 * (extra_edges + 1);
       ++tries) {
    int a = vertex(rng), b = vertex(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (degree[a] >= max_degree || degree[b] >= max_degree) continue;
    if (edge_set.count({a, b})) continue;
    edge_set.emplace(a, b);
    edges.emplace_back(a, b);
    ++degree[a];
    ++degree[b];
    ++added;
  }
  return Instance(n, std::move(edges), std::move(scoring), open_mode);
}

}  // namespace sdg
