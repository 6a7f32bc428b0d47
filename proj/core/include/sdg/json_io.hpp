#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "sdg/bounds.hpp"
#include "sdg/instance.hpp"
#include "sdg/outcome.hpp"
#include "sdg/solve.hpp"
#include "sdg/treewidth.hpp"

namespace sdg {

// Instance document: {"agents": n, "edges": [[a,b],...], "scoring": [s1,...],
// "open": bool, "labels": {"name": id, ...}}.  Edge endpoints may be label
// strings; unlisted labels are assigned ids in order of first appearance.
// Throws ParseError on malformed input.
Instance instance_from_json(const std::string& text);
std::string instance_to_json(const Instance& inst, int indent = -1);

// Whitespace edge-list text: an "n m" header line, then one "a b" line per
// edge.  The scoring vector is not part of the format and comes from the
// caller.
Instance instance_from_edge_list(std::istream& in, ScoringVector scoring,
                                 bool open_mode);

// Outcome document: {"coalitions": [[ids]...], "welfare": int | "-inf"}.
struct ParsedOutcome {
  std::vector<std::vector<int>> blocks;
  std::optional<Welfare> declared_welfare;
};
ParsedOutcome outcome_from_json(const std::string& text);
std::string outcome_to_json(const Instance& inst, const Outcome& outcome,
                            int indent = -1);

std::string solve_result_to_json(const Instance& inst, const SolveResult& r,
                                 SolveMode mode, int indent = -1);

std::string bounds_report_to_json(const BoundsReport& report, int indent = -1);

// Decomposition document: {"nodes": [{"id":..,"kind":"introduce","agent":v,
// "bag":[...],"children":[...]}...], "root": id}.
std::string decomposition_to_json(const NiceTreeDecomposition& dec,
                                  int indent = -1);
NiceTreeDecomposition decomposition_from_json(const std::string& text);

std::string error_to_json(const std::string& kind, const std::string& message);

}  // namespace sdg
