#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "sdg/welfare.hpp"

namespace sdg {

// Within-coalition distance; this sentinel marks "no path".
inline constexpr int kInfiniteDistance = std::numeric_limits<int>::max();

// Non-increasing integer scores s_1..s_delta indexed by distance.  A closed
// vector treats distances beyond delta as inadmissible (-inf); an open vector
// clamps them to s_delta.  Unreachable pairs are inadmissible either way.
class ScoringVector {
 public:
  explicit ScoringVector(std::vector<std::int64_t> entries);

  int delta() const { return static_cast<int>(entries_.size()); }
  const std::vector<std::int64_t>& entries() const { return entries_; }
  std::int64_t entry(int d) const { return entries_.at(d - 1); }  // 1-based

  // s_1 <= 0 makes the all-singletons outcome optimal and stable; it is
  // accepted, and solvers may short-circuit on it.
  bool first_entry_nonpositive() const { return entries_.front() <= 0; }

  // s_2 < 0; a vector with delta == 1 counts, since its distance-2 score is
  // -inf.
  bool second_entry_negative() const {
    return delta() == 1 || entries_[1] < 0;
  }

  Welfare score(int d, bool open_mode) const;

 private:
  std::vector<std::int64_t> entries_;
};

}  // namespace sdg
