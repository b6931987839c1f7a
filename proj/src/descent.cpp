#include "mechflow/descent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mechflow {

namespace {

struct ScanLists {
  std::vector<Index> rows;  // moving rows, ascending
  std::vector<Index> cols;  // fixed columns, ascending
};

ScanLists scan_lists(const ForestState& s) {
  ScanLists lists;
  for (Index i = 0; i < s.m(); ++i)
    if (s.membership[s.row_node(i)] == Membership::Moving) lists.rows.push_back(i);
  for (Index j = 0; j < s.n(); ++j)
    if (s.membership[s.col_node(j)] == Membership::Fixed) lists.cols.push_back(j);
  if (lists.rows.empty() || lists.cols.empty())
    throw std::logic_error("descent needs a moving row and a fixed column");
  return lists;
}

}  // namespace

void apply_descent(ForestState& s, Weight d) {
  if (d == 0) return;
  for (Index i = 0; i < s.m(); ++i)
    if (s.membership[s.row_node(i)] == Membership::Moving) s.alpha(i) -= d;
  for (Index j = 0; j < s.n(); ++j)
    if (s.membership[s.col_node(j)] == Membership::Moving) s.beta(j) -= d;
}

DescentResult descent_step(ForestState& s) {
  const ScanLists lists = scan_lists(s);
  const CostMatrix& c = s.instance->c;
  const Weight* beta = s.beta.data();
  DescentResult out;
  out.d = std::numeric_limits<Weight>::max();
  for (const Index i : lists.rows) {
    const Weight ai = s.alpha(i);
    const Weight* crow = c.data() + i * c.cols();
    for (const Index j : lists.cols) {
      const Weight g = ai - beta[j] - crow[j];
      if (g < out.d) {
        out.d = g;
        out.row = i;
        out.col = j;
      }
    }
  }
  out.scanned = static_cast<std::int64_t>(lists.rows.size() * lists.cols.size());
  apply_descent(s, out.d);
  return out;
}

std::int64_t ScanCursor::stride(Index m, Index n) {
  const double k = (std::sqrt(5.0) - 1.0) / 2.0;
  return static_cast<std::int64_t>(std::floor(k * static_cast<double>(m * n)));
}

DescentResult descent_version_a(ForestState& s, ScanCursor& cursor) {
  const ScanLists lists = scan_lists(s);
  const CostMatrix& c = s.instance->c;
  const Weight* beta = s.beta.data();
  const Index n = s.n();
  const Index start_row = cursor.rank / n;
  const Index start_col = cursor.rank % n;

  DescentResult out;
  out.d = std::numeric_limits<Weight>::max();
  // Returns true once a zero distance is found.
  auto scan_row = [&](Index i, std::size_t from, std::size_t to) {
    const Weight ai = s.alpha(i);
    const Weight* crow = c.data() + i * c.cols();
    for (std::size_t k = from; k < to; ++k) {
      const Index j = lists.cols[k];
      const Weight g = ai - beta[j] - crow[j];
      ++out.scanned;
      if (g < out.d) {
        out.d = g;
        out.row = i;
        out.col = j;
        if (g == 0) return true;
      }
    }
    return false;
  };

  const std::size_t nrows = lists.rows.size();
  const std::size_t ncols = lists.cols.size();
  const std::size_t first =
      std::lower_bound(lists.rows.begin(), lists.rows.end(), start_row) - lists.rows.begin();
  const bool split = first < nrows && lists.rows[first] == start_row;
  const std::size_t split_col =
      std::lower_bound(lists.cols.begin(), lists.cols.end(), start_col) - lists.cols.begin();

  bool done = false;
  std::size_t k = first;
  if (split) {
    done = scan_row(start_row, split_col, ncols);
    ++k;
  }
  for (std::size_t step = split ? 1 : 0; !done && step < nrows; ++step, ++k)
    done = scan_row(lists.rows[k % nrows], 0, ncols);
  if (!done && split) scan_row(start_row, 0, split_col);

  cursor.advance(s.m(), s.n());
  apply_descent(s, out.d);
  return out;
}

DescentResult descent_version_b(ForestState& s, const BranchDistances& cache) {
  if (s.mode != StopMode::PerRow) throw std::logic_error("cached descent needs per-row stops");
  const Index head = s.first_child[s.active_stop];
  if (head == kNone || !s.is_row(head) || s.next_sibling[head] != kNone)
    throw std::logic_error("moving tree must be a single row-headed branch");

  DescentResult out;
  out.d = std::numeric_limits<Weight>::max();
  const Weight base = s.alpha(head);
  const Weight* off = cache.offset.data() + head * cache.offset.cols();
  for (Index j = 0; j < s.n(); ++j) {
    if (s.membership[s.col_node(j)] != Membership::Fixed) continue;
    ++out.scanned;
    const Weight g = base + off[j] - s.beta(j);
    if (g < out.d) {
      out.d = g;
      out.col = j;
    }
  }
  if (out.col == kNone) throw std::logic_error("descent needs a fixed column");
  out.row = cache.argmin_row(head, out.col);
  apply_descent(s, out.d);
  return out;
}

}  // namespace mechflow
