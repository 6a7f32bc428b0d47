#include "sdg/scoring.hpp"

#include <stdexcept>

namespace sdg {

ScoringVector::ScoringVector(std::vector<std::int64_t> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty())
    throw std::invalid_argument("scoring vector must have at least one entry");
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i] > entries_[i - 1])
      throw std::invalid_argument("scoring vector must be non-increasing");
  }
}

Welfare ScoringVector::score(int d, bool open_mode) const {
  if (d <= 0) throw std::invalid_argument("score: distance must be >= 1");
  if (d == kInfiniteDistance) return Welfare::neg_inf();
  if (d <= delta()) return Welfare(entries_[d - 1]);
  return open_mode ? Welfare(entries_.back()) : Welfare::neg_inf();
}

}  // namespace sdg
