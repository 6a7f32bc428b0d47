#pragma once

#include <stdexcept>
#include <string>

namespace sdg {

// Thrown when a solver declines an input that exceeds one of its practical
// guards (oracle agent limit, vertex-cover size guard).  The message names
// the guard so callers can raise it deliberately.
class RefusalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when a would-be partition does not cover the agents exactly; the
// message lists the missing and duplicated agents.
class PartitionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown on malformed input files (JSON or edge-list text).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sdg
