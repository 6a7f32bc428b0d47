#include "sdg/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cassert>
#include <stdexcept>
#include <thread>

#include "sdg/errors.hpp"

namespace sdg {

std::string to_string(SolveMode mode) {
  switch (mode) {
    case SolveMode::WF: return "wf";
    case SolveMode::WF_IR: return "wf-ir";
    case SolveMode::WF_NS: return "wf-ns";
  }
  return "?";
}

std::optional<SolveMode> parse_solve_mode(const std::string& s) {
  if (s == "wf") return SolveMode::WF;
  if (s == "wf-ir" || s == "wf_ir") return SolveMode::WF_IR;
  if (s == "wf-ns" || s == "wf_ns" || s == "wf-nash") return SolveMode::WF_NS;
  return std::nullopt;
}

void for_each_partition(
    int n,
    const std::function<void(const std::vector<std::vector<int>>&)>& visit) {
  std::vector<std::vector<int>> blocks;
  auto recurse = [&](auto&& self, int agent) -> void {
    if (agent == n) {
      visit(blocks);
      return;
    }
    for (std::size_t b = 0; b <= blocks.size(); ++b) {
      if (b == blocks.size()) blocks.emplace_back();
      blocks[b].push_back(agent);
      self(self, agent + 1);
      blocks[b].pop_back();
      if (blocks[b].empty()) blocks.pop_back();
    }
  };
  if (n > 0) recurse(recurse, 0);
}

namespace {

constexpr std::int64_t kNegInfSentinel = INT64_MIN;

// Per-coalition evaluation keyed by member bitmask.  Utilities are stored in
// member-bit order; -inf coalitions keep an empty vector.
struct CoalitionEval {
  bool computed = false;
  bool finite = false;
  std::int64_t welfare = kNegInfSentinel;
  std::int64_t min_utility = kNegInfSentinel;
  std::vector<std::int64_t> utilities;
};

// Bitmask-based utility evaluation for one connected-component subproblem.
// The oracle guard keeps n small, so a flat mask-indexed cache is fine.
class MaskEvaluator {
 public:
  explicit MaskEvaluator(const Instance& inst)
      : n_(inst.agent_count()),
        delta_(inst.scoring().delta()),
        open_(inst.open_mode()),
        scores_(inst.scoring().entries()),
        adj_(n_, 0) {
    for (const auto& [a, b] : inst.edges()) {
      adj_[a] |= 1ULL << b;
      adj_[b] |= 1ULL << a;
    }
    cache_.resize(std::size_t(1) << n_);
  }

  const CoalitionEval& eval(std::uint64_t mask) {
    CoalitionEval& e = cache_[mask];
    if (e.computed) return e;
    e.computed = true;
    const int k = std::popcount(mask);
    e.utilities.assign(k, 0);
    bool finite = true;
    std::int64_t total = 0;
    std::int64_t min_u = INT64_MAX;
    int pos = 0;
    for (std::uint64_t rest = mask; rest != 0 && finite; rest &= rest - 1, ++pos) {
      int i = std::countr_zero(rest);
      std::int64_t u = 0;
      std::uint64_t visited = 1ULL << i;
      std::uint64_t frontier = visited;
      int d = 0;
      while (frontier != 0) {
        ++d;
        std::uint64_t next = 0;
        for (std::uint64_t f = frontier; f != 0; f &= f - 1)
          next |= adj_[std::countr_zero(f)];
        next &= mask & ~visited;
        if (next == 0) break;
        visited |= next;
        int cnt = std::popcount(next);
        if (d <= delta_) {
          u += cnt * scores_[d - 1];
        } else if (open_) {
          u += cnt * scores_.back();
        } else {
          finite = false;  // some member beyond the closed horizon
          break;
        }
        frontier = next;
      }
      if (visited != mask) finite = false;  // disconnected coalition
      if (!finite) break;
      e.utilities[pos] = u;
      total += u;
      min_u = std::min(min_u, u);
    }
    if (!finite) {
      e.utilities.clear();
      return e;
    }
    e.finite = true;
    e.welfare = total;
    e.min_utility = (k == 1) ? 0 : min_u;
    return e;
  }

 private:
  int n_;
  int delta_;
  bool open_;
  std::vector<std::int64_t> scores_;
  std::vector<std::uint64_t> adj_;
  std::vector<CoalitionEval> cache_;
};

struct EnumResult {
  bool found = false;
  std::int64_t welfare = 0;
  std::vector<std::uint8_t> rgs;  // block index per agent, canonical
  std::int64_t count = 0;
  std::uint64_t explored = 0;
};

// Merge b into a; ties keep a, so callers must merge in canonical order.
void merge_results(EnumResult& a, const EnumResult& b) {
  a.explored += b.explored;
  if (!b.found) return;
  if (!a.found || b.welfare > a.welfare) {
    a.found = true;
    a.welfare = b.welfare;
    a.rgs = b.rgs;
    a.count = b.count;
  } else if (b.welfare == a.welfare) {
    a.count += b.count;
  }
}

class ComponentEnumerator {
 public:
  ComponentEnumerator(const Instance& inst, SolveMode mode,
                      const OracleOptions& opts)
      : inst_(inst), mode_(mode), opts_(opts), n_(inst.agent_count()),
        adj_(n_, 0) {
    cap_ = opts.size_cap.value_or(n_);
    for (const auto& [a, b] : inst.edges()) {
      adj_[a] |= 1ULL << b;
      adj_[b] |= 1ULL << a;
    }
    if (opts.prune_distance && !inst.open_mode()) {
      incompatible_.assign(n_, 0);
      int delta = inst.scoring().delta();
      for (int v = 0; v < n_; ++v) {
        auto dist = inst.bfs_distances(v);
        for (int u = 0; u < n_; ++u)
          if (u != v && dist[u] > delta) incompatible_[v] |= 1ULL << u;
      }
    }
  }

  EnumResult run() {
    int threads = std::max(1, opts_.threads);
    if (threads == 1 || n_ < 8) {
      MaskEvaluator eval(inst_);
      State st;
      EnumResult result;
      extend(st, 0, eval, result);
      return result;
    }
    return run_parallel(threads);
  }

 private:
  struct State {
    std::vector<std::uint64_t> blocks;
    std::vector<std::uint8_t> rgs;
  };

  // A block can only reach finite welfare if its members are connected inside
  // G restricted to the block plus the agents not yet assigned.
  bool completable(std::uint64_t block, int next_agent) const {
    std::uint64_t allowed =
        block | (((n_ == 64 ? ~0ULL : (1ULL << n_) - 1)) &
                 ~((1ULL << next_agent) - 1));
    std::uint64_t visited = block & -block;  // lowest member
    std::uint64_t frontier = visited;
    while (frontier != 0) {
      std::uint64_t next = 0;
      for (std::uint64_t f = frontier; f != 0; f &= f - 1)
        next |= adj_[std::countr_zero(f)];
      next &= allowed & ~visited;
      visited |= next;
      frontier = next;
    }
    return (block & ~visited) == 0;
  }

  void extend(State& st, int agent, MaskEvaluator& eval, EnumResult& out) {
    if (agent == n_) {
      evaluate_leaf(st, eval, out);
      return;
    }
    const std::uint64_t bit = 1ULL << agent;
    const std::uint64_t bad =
        incompatible_.empty() ? 0 : incompatible_[agent];
    for (std::size_t b = 0; b <= st.blocks.size(); ++b) {
      bool fresh = b == st.blocks.size();
      if (!fresh) {
        if (std::popcount(st.blocks[b]) >= cap_) continue;
        if (st.blocks[b] & bad) continue;
      }
      if (fresh) st.blocks.push_back(0);
      st.blocks[b] |= bit;
      if (!opts_.prune_neg_inf || completable(st.blocks[b], agent + 1)) {
        st.rgs.push_back(static_cast<std::uint8_t>(b));
        extend(st, agent + 1, eval, out);
        st.rgs.pop_back();
      }
      st.blocks[b] &= ~bit;
      if (fresh) st.blocks.pop_back();
    }
  }

  void evaluate_leaf(const State& st, MaskEvaluator& eval, EnumResult& out) {
    ++out.explored;
    std::int64_t welfare = 0;
    for (std::uint64_t mask : st.blocks) {
      const CoalitionEval& e = eval.eval(mask);
      if (!e.finite) return;  // -inf outcome, never optimal or stable
      welfare += e.welfare;
    }
    if (mode_ != SolveMode::WF) {
      for (std::uint64_t mask : st.blocks)
        if (eval.eval(mask).min_utility < 0) return;
    }
    if (mode_ == SolveMode::WF_NS && !nash_stable(st, eval)) return;
    if (!out.found || welfare > out.welfare) {
      out.found = true;
      out.welfare = welfare;
      out.rgs = st.rgs;
      out.count = 1;
    } else if (welfare == out.welfare) {
      ++out.count;
    }
  }

  // Individual rationality already holds here, so the fresh-singleton target
  // never improves; only moves into existing coalitions are checked.
  bool nash_stable(const State& st, MaskEvaluator& eval) {
    for (int agent = 0; agent < n_; ++agent) {
      std::uint64_t own_mask = st.blocks[st.rgs[agent]];
      std::int64_t before = utility_of(eval.eval(own_mask), own_mask, agent);
      for (std::size_t b = 0; b < st.blocks.size(); ++b) {
        if (b == st.rgs[agent]) continue;
        std::uint64_t joined = st.blocks[b] | (1ULL << agent);
        const CoalitionEval& e = eval.eval(joined);
        if (!e.finite) continue;
        if (utility_of(e, joined, agent) > before) return false;
      }
    }
    return true;
  }

  static std::int64_t utility_of(const CoalitionEval& e, std::uint64_t mask,
                                 int agent) {
    assert(e.finite);
    int pos = std::popcount(mask & ((1ULL << agent) - 1));
    return e.utilities[pos];
  }

  EnumResult run_parallel(int threads) {
    // Split the search space by the restricted-growth prefix of the first
    // few agents; merging in prefix order keeps the result identical to a
    // sequential run.
    const int prefix_len = std::min(n_ - 1, 4);
    std::vector<State> tasks;
    State st;
    auto gen = [&](auto&& self, int agent) -> void {
      if (agent == prefix_len) {
        tasks.push_back(st);
        return;
      }
      const std::uint64_t bit = 1ULL << agent;
      const std::uint64_t bad =
          incompatible_.empty() ? 0 : incompatible_[agent];
      for (std::size_t b = 0; b <= st.blocks.size(); ++b) {
        bool fresh = b == st.blocks.size();
        if (!fresh) {
          if (std::popcount(st.blocks[b]) >= cap_) continue;
          if (st.blocks[b] & bad) continue;
        }
        if (fresh) st.blocks.push_back(0);
        st.blocks[b] |= bit;
        if (!opts_.prune_neg_inf || completable(st.blocks[b], agent + 1)) {
          st.rgs.push_back(static_cast<std::uint8_t>(b));
          self(self, agent + 1);
          st.rgs.pop_back();
        }
        st.blocks[b] &= ~bit;
        if (fresh) st.blocks.pop_back();
      }
    };
    gen(gen, 0);

    std::vector<EnumResult> partial(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      MaskEvaluator eval(inst_);
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) break;
        State local = tasks[i];
        extend(local, prefix_len, eval, partial[i]);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    EnumResult result;
    for (const EnumResult& p : partial) merge_results(result, p);
    return result;
  }

  const Instance& inst_;
  SolveMode mode_;
  const OracleOptions& opts_;
  int n_;
  int cap_;
  std::vector<std::uint64_t> adj_;
  std::vector<std::uint64_t> incompatible_;
};

SolveResult solve_component(const Instance& inst, SolveMode mode,
                            const OracleOptions& opts) {
  ComponentEnumerator enumerator(inst, mode, opts);
  EnumResult r = enumerator.run();
  SolveResult out;
  out.algorithm = "oracle";
  out.explored = r.explored;
  if (!r.found) return out;  // no feasible outcome (possible for wf-ns)
  std::size_t block_count = 0;
  for (std::uint8_t b : r.rgs)
    block_count = std::max<std::size_t>(block_count, b + 1);
  std::vector<std::vector<int>> blocks(block_count);
  for (int agent = 0; agent < inst.agent_count(); ++agent)
    blocks[r.rgs[agent]].push_back(agent);
  out.best = Outcome::from_blocks(inst, std::move(blocks));
  out.welfare = out.best->welfare;
  out.optimal_count = r.count;
  if (out.welfare != Welfare(r.welfare))
    throw std::logic_error("oracle: cached welfare disagrees with recomputation");
  return out;
}

}  // namespace

SolveResult solve_exact(const Instance& inst, SolveMode mode,
                        const OracleOptions& options) {
  if (inst.agent_count() > options.limit_n)
    throw RefusalError(
        "oracle refuses n=" + std::to_string(inst.agent_count()) +
        " > limit_n=" + std::to_string(options.limit_n) +
        "; raise OracleOptions::limit_n explicitly");
  if (options.size_cap && *options.size_cap < 1)
    throw std::invalid_argument("size_cap must be >= 1");

  auto components = inst.connected_components();
  if (components.size() == 1) return solve_component(inst, mode, options);

  // Optimal outcomes of a disconnected network are unions of per-component
  // optima, and deviations never pay across components (joining an
  // unreachable coalition scores -inf), so each component solves alone.
  SolveResult out;
  out.algorithm = "oracle";
  std::vector<std::vector<int>> blocks;
  std::int64_t count = 1;
  Welfare total(0);
  bool feasible = true;
  for (const auto& comp : components) {
    Instance sub = inst.induced_subinstance(comp);
    SolveResult r = solve_component(sub, mode, options);
    out.explored += r.explored;
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
    count *= r.optimal_count;
  }
  if (!feasible) return out;
  out.best = Outcome::from_blocks(inst, std::move(blocks));
  out.welfare = out.best->welfare;
  out.optimal_count = count;
  if (out.welfare != total)
    throw std::logic_error("oracle: component welfare sum mismatch");
  return out;
}

}  // namespace sdg
