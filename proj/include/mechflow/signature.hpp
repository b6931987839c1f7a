#pragma once

#include <vector>

#include "mechflow/core.hpp"

namespace mechflow {

/// Level population counts g_1, g_2, ... of a tree seen from its root stop
/// (root excluded). For the moving tree odd levels hold rows and even levels
/// columns; for the fixed tree it is the other way round.
struct Signature {
  std::vector<Index> levels;

  Index odd_level_total() const {
    Index s = 0;
    for (std::size_t l = 0; l < levels.size(); l += 2) s += levels[l];
    return s;
  }
  Index even_level_total() const {
    Index s = 0;
    for (std::size_t l = 1; l < levels.size(); l += 2) s += levels[l];
    return s;
  }
  /// g_l with 1-based l; levels past the end read as 0.
  Index level(std::size_t l) const { return l >= 1 && l <= levels.size() ? levels[l - 1] : 0; }

  friend bool operator==(const Signature&, const Signature&) = default;
};

}  // namespace mechflow
