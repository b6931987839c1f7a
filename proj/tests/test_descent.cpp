#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "support.hpp"

using namespace testing;

namespace {

// Minimum distance between moving rows and fixed columns, by brute force.
Weight brute_descent(const ForestState& s) {
  Weight best = std::numeric_limits<Weight>::max();
  for (Index i = 0; i < s.m(); ++i)
    for (Index j = 0; j < s.n(); ++j)
      if (s.membership[i] == Membership::Moving && s.membership[s.col_node(j)] == Membership::Fixed)
        best = std::min(best, s.alpha(i) - s.beta(j) - s.instance->c(i, j));
  return best;
}

// delta(i, j) from its definition: walk the branch below row i.
Weight brute_delta(const ForestState& s, Index i, Index j) {
  Weight best = std::numeric_limits<Weight>::max();
  for_each_in_subtree(s, s.row_node(i), [&](Index v) {
    if (s.is_row(v)) best = std::min(best, gamma(s, v, j));
  });
  return best;
}

void one_cycle(ForestState& s, const DescentResult& d) {
  const ReadjustResult rr = contact_and_readjust(s, d.row, d.col);
  apply_capture(s, rr.path, rr.breaking_edge);
}

}  // namespace

TEST_CASE("worked example: first two descents") {
  const Instance inst = worked_example();
  ForestState s = init_forest(inst, StopMode::Single, 100);
  DescentResult d = descent_step(s);
  CHECK(d.d == 6);
  CHECK(d.row == 2);
  CHECK(d.col == 0);
  CHECK(d.scanned == 12);
  CHECK(s.alpha == vec({94, 94, 94}));
  one_cycle(s, d);
  d = descent_step(s);
  CHECK(d.d == 30);
  CHECK(d.row == 0);
  CHECK(d.col == 1);
}

TEST_CASE("descent is zero when a tight pair already spans the trees") {
  HandForest h;
  hand_forest(h);
  CHECK(descent_step(h.state).d == 0);
}

TEST_CASE("descent needs both trees populated") {
  const Instance inst{vec({5}), vec({5}), mat({{7}})};
  ForestState s = init_forest(inst, StopMode::Single, 8);
  const DescentResult d = descent_step(s);
  one_cycle(s, d);
  CHECK(moving_exhausted(s));
  CHECK_THROWS(descent_step(s));
}

TEST_CASE("golden-ratio cursor stride") {
  const double k = (std::sqrt(5.0) - 1.0) / 2.0;
  CHECK(ScanCursor::stride(10, 10) == static_cast<std::int64_t>(std::floor(k * 100)));
  CHECK(ScanCursor::stride(10, 10) == 61);
  ScanCursor c;
  c.advance(10, 10);
  CHECK(c.rank == 61);
  c.advance(10, 10);
  CHECK(c.rank == 22);
  for (Index mn : {1, 2, 7, 1000, 250000})
    CHECK(ScanCursor::stride(mn, 1) == static_cast<std::int64_t>(std::floor(k * mn)));
}

TEST_CASE("version A finds the same distance as the full scan") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 150; ++t) {
    const Instance inst = random_instance(rng, 1, 9);
    for (StopMode mode : {StopMode::Single, StopMode::PerRow}) {
      ForestState s = init_forest(inst, mode, default_c_sup(inst));
      ScanCursor cursor;
      cursor.rank = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(inst.rows() * inst.cols()));
      for (int guard = 0; guard < 10000; ++guard) {
        if (fixed_exhausted(s)) break;
        if (moving_exhausted(s)) {
          const Index k = s.active_stop - s.q_node(0) + 1;
          if (k >= s.stop_count()) break;
          activate_stop(s, k);
          continue;
        }
        const Weight expect = brute_descent(s);
        const std::int64_t before = cursor.rank;
        const DescentResult d = descent_version_a(s, cursor);
        REQUIRE(d.d == expect);
        CHECK(gamma(s, d.row, d.col) == 0);
        CHECK(s.membership[d.row] == Membership::Moving);
        CHECK(s.membership[s.col_node(d.col)] == Membership::Fixed);
        CHECK(cursor.rank == (before + ScanCursor::stride(s.m(), s.n())) % (s.m() * s.n()));
        one_cycle(s, d);
      }
    }
  }
}

TEST_CASE("version A stops scanning at the first zero") {
  const Instance inst{vec({1, 1, 1}), vec({1, 1, 1}), mat({{5, 5, 5}, {5, 5, 5}, {5, 5, 5}})};
  ForestState s = init_forest(inst, StopMode::Single, 6);
  ScanCursor cursor;
  cursor.rank = 4;  // row 2, column 2 (1-based)
  const DescentResult first = descent_version_a(s, cursor);
  CHECK(first.d == 1);
  CHECK(first.row == 1);
  CHECK(first.col == 1);
  CHECK(first.scanned == 9);
  one_cycle(s, first);
  const DescentResult second = descent_version_a(s, cursor);
  CHECK(second.d == 0);
  CHECK(second.scanned < 6);
}

TEST_CASE("version B requires per-row stops") {
  const Instance inst = worked_example();
  ForestState s = init_forest(inst, StopMode::Single, 100);
  const BranchDistances cache = recompute_branch_distances(s);
  CHECK_THROWS(descent_version_b(s, cache));
  SolveOptions o;
  o.descent = DescentStrategy::VersionB;
  CHECK_THROWS_AS(solve(inst, o), std::invalid_argument);
}

TEST_CASE("branch distances match brute force after every cycle") {
  std::mt19937_64 rng(5);
  int cycles = 0;
  for (int t = 0; t < 60; ++t) {
    const Instance inst = random_instance(rng, 1, 10);
    ForestState s = init_forest(inst, StopMode::PerRow, default_c_sup(inst));
    SolveOptions o;
    o.mode = StopMode::PerRow;
    o.descent = DescentStrategy::VersionB;
    CostMatrix prev_offset;
    run(s, o, [&](const CycleContext& c) {
      ++cycles;
      REQUIRE(c.cache != nullptr);
      const ForestState& u = c.state;
      const CostMatrix delta = c.cache->materialize(u);
      for (Index i = 0; i < u.m(); ++i)
        for (Index j = 0; j < u.n(); ++j) {
          REQUIRE(delta(i, j) == brute_delta(u, i, j));
          REQUIRE(c.cache->delta(u, i, j) == delta(i, j));
          const Index r = c.cache->argmin_row(i, j);
          CHECK(gamma(u, r, j) == delta(i, j));
        }
      CHECK(*c.cache == recompute_branch_distances(u));
      // Rows off the main path keep their offsets bit for bit.
      if (prev_offset.size() != 0) {
        std::vector<bool> on_path(static_cast<std::size_t>(u.m()), false);
        for (Index v : c.path.nodes)
          if (u.is_row(v)) on_path[v] = true;
        for (Index i = 0; i < u.m(); ++i)
          if (!on_path[i]) CHECK(c.cache->offset.row(i) == prev_offset.row(i));
      }
      prev_offset = c.cache->offset;
    });
  }
  CHECK(cycles > 200);
}

TEST_CASE("version B picks the same distance as the full scan") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    const Instance inst = random_instance(rng, 1, 8);
    ForestState s = init_forest(inst, StopMode::PerRow, default_c_sup(inst));
    BranchDistances cache = recompute_branch_distances(s);
    for (int guard = 0; guard < 10000; ++guard) {
      if (fixed_exhausted(s)) break;
      if (moving_exhausted(s)) {
        const Index k = s.active_stop - s.q_node(0) + 1;
        if (k >= s.stop_count()) break;
        activate_stop(s, k);
        continue;
      }
      const Weight expect = brute_descent(s);
      const DescentResult d = descent_version_b(s, cache);
      REQUIRE(d.d == expect);
      CHECK(gamma(s, d.row, d.col) == 0);
      const ReadjustResult rr = contact_and_readjust(s, d.row, d.col);
      apply_capture(s, rr.path, rr.breaking_edge);
      std::vector<Index> dirty;
      for (Index v : rr.path.nodes)
        if (s.is_row(v)) dirty.push_back(v);
      update_branch_distances(cache, s, dirty);
    }
  }
}
