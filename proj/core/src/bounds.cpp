#include "sdg/bounds.hpp"

#include <algorithm>

#include "sdg/treewidth.hpp"

namespace sdg {

namespace {

constexpr std::int64_t kBoundClamp = INT64_MAX / 4;

// a * b clamped; negative inputs never arise for the factors used here.
std::optional<std::int64_t> checked_mul(std::int64_t a, std::int64_t b) {
  __int128 r = static_cast<__int128>(a) * b;
  if (r > kBoundClamp) return std::nullopt;
  return static_cast<std::int64_t>(r);
}

}  // namespace

std::optional<std::int64_t> degree_size_bound(const ScoringVector& scoring,
                                              int max_degree) {
  if (max_degree == 0) return 1;
  __int128 bound = static_cast<__int128>(scoring.entry(1) + 1) * max_degree;
  for (int a = 1; a < scoring.delta(); ++a) {
    bound *= max_degree - 1;
    if (bound > kBoundClamp || bound < -kBoundClamp) return std::nullopt;
  }
  if (bound > kBoundClamp || bound < -kBoundClamp) return std::nullopt;
  return static_cast<std::int64_t>(bound);
}

std::optional<std::int64_t> treewidth_size_bound(const ScoringVector& scoring,
                                                 int treewidth) {
  if (!scoring.second_entry_negative()) return std::nullopt;
  auto m = checked_mul(2 * (scoring.entry(1) + 1), treewidth);
  if (!m) return std::nullopt;
  return *m + 1;
}

std::int64_t ns_ir_diameter_bound(const ScoringVector& scoring) {
  return 2 * scoring.entry(1) * scoring.delta();
}

std::optional<std::int64_t> reachability_size_bound(const ScoringVector& scoring,
                                                    int max_degree) {
  if (max_degree == 0) return 1;
  std::int64_t total = 0;
  std::int64_t level = max_degree;
  for (int a = 1; a <= scoring.delta(); ++a) {
    total += level;
    if (total > kBoundClamp) return std::nullopt;
    auto m = checked_mul(level, std::max(max_degree - 1, 0));
    if (!m) return std::nullopt;
    level = *m;
    if (level == 0) break;
  }
  return total + 1;
}

CapResolution effective_size_cap(const Instance& inst,
                                 std::optional<int> requested) {
  if (requested.has_value()) return {requested, "requested"};

  if (inst.open_mode()) return {std::nullopt, "open mode: no size bound proven"};

  const ScoringVector& s = inst.scoring();
  const int n = inst.agent_count();
  const int max_deg = inst.max_degree();

  CapResolution best{n, "agent count"};
  auto consider = [&](std::optional<std::int64_t> bound, const char* source) {
    if (bound && *bound < best.cap.value()) {
      best.cap = static_cast<int>(*bound);
      best.source = source;
    }
  };

  if (s.first_entry_nonpositive()) {
    // All-singletons is optimal and stable; nothing larger is ever needed.
    return {1, "nonpositive s1"};
  }

  // Any coalition larger than the closed-horizon reachability count has a
  // member pair beyond delta, hence -inf utilities; always safe.
  consider(reachability_size_bound(s, max_deg), "reachability");

  // The degree formula is welfare-safe for max degree >= 3 (where it
  // dominates the reachability count) and for delta == 1 (where no
  // admissible coalition can exceed it); degenerate low-degree networks with
  // long horizons admit counterexamples, so it is skipped there.
  if (max_deg >= 3 || s.delta() == 1)
    consider(degree_size_bound(s, max_deg), "degree bound");

  if (s.second_entry_negative()) {
    NiceTreeDecomposition dec = build_nice_decomposition(inst);
    consider(treewidth_size_bound(s, dec.width()), "treewidth bound");
  }

  return best;
}

BoundsReport compute_bounds_report(const Instance& inst) {
  BoundsReport report;
  report.max_degree = inst.max_degree();
  NiceTreeDecomposition dec = build_nice_decomposition(inst);
  report.treewidth_upper = dec.width();
  const ScoringVector& s = inst.scoring();
  report.degree_size_bound = degree_size_bound(s, report.max_degree);
  report.treewidth_size_bound = treewidth_size_bound(s, report.treewidth_upper);
  if (!inst.open_mode()) {
    report.wf_diameter_bound = s.delta();
  } else {
    bool has_negative = false;
    for (auto e : s.entries())
      if (e < 0) has_negative = true;
    if (has_negative) report.ns_ir_diameter_bound = ns_ir_diameter_bound(s);
  }
  return report;
}

}  // namespace sdg
