#include "mechflow/descent.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace mechflow {

namespace {

Index depth_of(const ForestState& s, Index v) {
  Index d = 0;
  for (Index u = s.parent[v]; u != kNone; u = s.parent[u]) ++d;
  return d;
}

// Merges the grandchild branches into the row's own distances. Grandchild
// branches must already be current.
void compute_row(BranchDistances& cache, const ForestState& s, Index i) {
  const Index n = s.n();
  Weight* off = cache.offset.data() + i * n;
  std::int32_t* arg = cache.argmin_row.data() + i * n;
  const Weight* crow = s.instance->c.data() + i * n;
  for (Index j = 0; j < n; ++j) {
    off[j] = -crow[j];
    arg[j] = static_cast<std::int32_t>(i);
  }
  for_each_child(s, s.row_node(i), [&](Index col) {
    for_each_child(s, col, [&](Index r) {
      const Weight shift = s.alpha(r) - s.alpha(i);
      const Weight* roff = cache.offset.data() + r * n;
      const std::int32_t* rarg = cache.argmin_row.data() + r * n;
      for (Index j = 0; j < n; ++j) {
        const Weight cand = roff[j] + shift;
        if (cand < off[j] || (cand == off[j] && rarg[j] < arg[j])) {
          off[j] = cand;
          arg[j] = rarg[j];
        }
      }
    });
  });
}

void refresh(BranchDistances& cache, const ForestState& s, std::vector<Index> rows) {
  std::vector<std::pair<Index, Index>> order;
  order.reserve(rows.size());
  for (Index i : rows) order.emplace_back(depth_of(s, s.row_node(i)), i);
  // Deepest first so that every grandchild is current before its grandparent.
  std::sort(order.begin(), order.end(), [](const auto& x, const auto& y) { return x > y; });
  order.erase(std::unique(order.begin(), order.end()), order.end());
  for (const auto& [depth, i] : order) compute_row(cache, s, i);
}

}  // namespace

CostMatrix BranchDistances::materialize(const ForestState& s) const {
  CostMatrix delta = offset;
  delta.colwise() += s.alpha;
  delta.rowwise() -= s.beta.transpose();
  return delta;
}

BranchDistances recompute_branch_distances(const ForestState& s) {
  BranchDistances cache;
  cache.offset.resize(s.m(), s.n());
  cache.argmin_row.resize(s.m(), s.n());
  std::vector<Index> rows(static_cast<std::size_t>(s.m()));
  for (Index i = 0; i < s.m(); ++i) rows[i] = i;
  refresh(cache, s, std::move(rows));
  return cache;
}

void update_branch_distances(BranchDistances& cache, const ForestState& s,
                             std::span<const Index> dirty_rows) {
  refresh(cache, s, std::vector<Index>(dirty_rows.begin(), dirty_rows.end()));
}

}  // namespace mechflow
