#pragma once

#include <cstdint>
#include <span>

#include "mechflow/core.hpp"
#include "mechflow/forest.hpp"

namespace mechflow {

/// Outcome of one descent: the distance travelled, the (row, column) pair
/// that closed to zero, and how many distances were evaluated.
struct DescentResult {
  Weight d = 0;
  Index row = kNone;
  Index col = kNone;
  std::int64_t scanned = 0;
};

/// Lowers every moving node by d.
void apply_descent(ForestState& s, Weight d);

/// Full scan over moving rows x fixed columns; ties go to the smallest row,
/// then the smallest column. Applies the descent.
DescentResult descent_step(ForestState& s);

/// Start rank for the early-exit scan over the m*n cells (rank = i*n + j).
/// Each search moves it forward by floor(K m n) mod m n, K = (sqrt 5 - 1) / 2.
struct ScanCursor {
  std::int64_t rank = 0;

  static std::int64_t stride(Index m, Index n);
  void advance(Index m, Index n) { rank = (rank + stride(m, n)) % (m * n); }
};

/// Scan from the cursor, stopping at the first zero distance; otherwise the
/// first minimum met in scan order. Applies the descent and advances the
/// cursor.
DescentResult descent_version_a(ForestState& s, ScanCursor& cursor);

/// Per-branch minimal distances for every row-headed branch and every column.
///
/// Stored relative to the branch head's height: offset(i,j) is the minimum
/// over rows r in the branch of alpha_r - alpha_i - c(r,j). All rows of a
/// branch share one tree, so offsets survive descents untouched and only
/// branches whose contents change need recomputing.
/// argmin_row(i,j) is the smallest row index achieving the minimum.
struct BranchDistances {
  CostMatrix offset;
  Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> argmin_row;

  /// delta(i,j): minimal gamma between the branch headed by row i and column j.
  Weight delta(const ForestState& s, Index i, Index j) const {
    return s.alpha(i) + offset(i, j) - s.beta(j);
  }
  CostMatrix materialize(const ForestState& s) const;

  friend bool operator==(const BranchDistances& x, const BranchDistances& y) {
    return x.offset == y.offset && x.argmin_row == y.argmin_row;
  }
};

/// Builds the cache from scratch by a post-order walk of every tree.
BranchDistances recompute_branch_distances(const ForestState& s);

/// Refreshes the branches headed by the given rows (the rows of the last main
/// path) after a capture. Other branches keep their contents and offsets.
void update_branch_distances(BranchDistances& cache, const ForestState& s,
                             std::span<const Index> dirty_rows);

/// Moving tree is one branch hanging from the active stop: scan the cached
/// distances of that branch against the fixed columns (smallest column wins
/// ties, contact row from the cache). Applies the descent.
DescentResult descent_version_b(ForestState& s, const BranchDistances& cache);

}  // namespace mechflow
