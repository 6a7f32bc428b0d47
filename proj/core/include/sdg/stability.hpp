#pragma once

#include <optional>

#include "sdg/outcome.hpp"

namespace sdg {

// Deviation target "leave everyone and form a fresh singleton".
inline constexpr int kSingletonTarget = -1;

enum class DeviationKind { IR, NS };

struct Deviation {
  int agent = -1;
  DeviationKind kind = DeviationKind::IR;
  int target = kSingletonTarget;  // index into outcome.coalitions, or kSingletonTarget
  Welfare utility_before;
  Welfare utility_after;
};

// Lowest-id agent with negative utility, i.e. one who prefers going solo.
// nullopt means the outcome is individually rational.
std::optional<Deviation> find_ir_deviation(const Instance&, const Outcome&);

// Lexicographically first improving move (agent id, then target coalition in
// canonical order, with the fresh-singleton target scanned last).  nullopt
// means the outcome is Nash stable.
std::optional<Deviation> find_ns_deviation(const Instance&, const Outcome&);

bool is_individually_rational(const Instance&, const Outcome&);
bool is_nash_stable(const Instance&, const Outcome&);

}  // namespace sdg
