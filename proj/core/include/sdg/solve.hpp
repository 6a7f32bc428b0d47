#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sdg/outcome.hpp"

namespace sdg {

// What to maximize: welfare alone, or welfare over individually rational /
// Nash stable outcomes.
enum class SolveMode { WF, WF_IR, WF_NS };

std::string to_string(SolveMode mode);
std::optional<SolveMode> parse_solve_mode(const std::string& s);

struct SolveResult {
  std::optional<Outcome> best;       // nullopt when no feasible outcome exists
  Welfare welfare = Welfare::neg_inf();
  // Number of distinct optimal partitions.  Only exhaustive enumeration can
  // count this; the dp and vc solvers leave it at 0.
  std::int64_t optimal_count = 0;
  std::uint64_t explored = 0;        // partitions or internal states visited
  std::string algorithm;
};

}  // namespace sdg
