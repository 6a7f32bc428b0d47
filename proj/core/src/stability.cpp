#include "sdg/stability.hpp"

namespace sdg {

std::optional<Deviation> find_ir_deviation(const Instance& inst,
                                           const Outcome& outcome) {
  // Scan agents in id order; recompute utilities from scratch so a reported
  // deviation is reproducible by the caller.
  for (int agent = 0; agent < inst.agent_count(); ++agent) {
    const Coalition& own = outcome.coalitions[outcome.coalition_of(agent)];
    Welfare before = utility(inst, agent, own);
    if (before < Welfare(0)) {
      return Deviation{agent, DeviationKind::IR, kSingletonTarget, before,
                       Welfare(0)};
    }
  }
  return std::nullopt;
}

std::optional<Deviation> find_ns_deviation(const Instance& inst,
                                           const Outcome& outcome) {
  for (int agent = 0; agent < inst.agent_count(); ++agent) {
    int own_idx = outcome.coalition_of(agent);
    Welfare before = utility(inst, agent, outcome.coalitions[own_idx]);
    for (int t = 0; t < outcome.coalition_count(); ++t) {
      if (t == own_idx) continue;
      std::vector<int> joined = outcome.coalitions[t].members;
      joined.push_back(agent);
      Welfare after = utility(inst, agent, Coalition::of(std::move(joined)));
      if (after > before) {
        return Deviation{agent, DeviationKind::NS, t, before, after};
      }
    }
    if (Welfare(0) > before) {
      return Deviation{agent, DeviationKind::NS, kSingletonTarget, before,
                       Welfare(0)};
    }
  }
  return std::nullopt;
}

bool is_individually_rational(const Instance& inst, const Outcome& outcome) {
  return !find_ir_deviation(inst, outcome).has_value();
}

bool is_nash_stable(const Instance& inst, const Outcome& outcome) {
  return !find_ns_deviation(inst, outcome).has_value();
}

}  // namespace sdg
