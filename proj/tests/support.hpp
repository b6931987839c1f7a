#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mechflow/mechflow.hpp"

namespace testing {

using namespace mechflow;

inline std::string data_path(const std::string& name) { return std::string(MECHFLOW_TEST_DATA) + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline WeightVector vec(std::initializer_list<Weight> xs) {
  WeightVector v(static_cast<Index>(xs.size()));
  Index k = 0;
  for (Weight x : xs) v(k++) = x;
  return v;
}

inline CostMatrix mat(std::initializer_list<std::initializer_list<Weight>> rows) {
  const Index m = static_cast<Index>(rows.size());
  const Index n = m == 0 ? 0 : static_cast<Index>(rows.begin()->size());
  CostMatrix c(m, n);
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (Weight x : r) c(i, j++) = x;
    ++i;
  }
  return c;
}

// The worked example.
inline Instance worked_example() {
  return Instance{vec({86, 4, 56}), vec({44, 52, 13, 37}),
                  mat({{26, 64, 33, 62}, {63, 27, 13, 14}, {94, 4, 4, 52}})};
}

// Its known optimum.
inline FlowMatrix worked_optimum() { return mat({{0, 52, 9, 25}, {0, 0, 4, 0}, {44, 0, 0, 12}}); }

// Reference refined upper bounds, rows m = 1..10, columns n = 1..10.
inline constexpr std::uint64_t kRefinedBounds[10][10] = {
    {1, 2, 3, 4, 5, 6, 7, 8, 9, 10},
    {2, 4, 6, 8, 10, 12, 14, 16, 18, 20},
    {3, 6, 10, 14, 19, 24, 30, 36, 43, 50},
    {4, 8, 14, 22, 30, 40, 52, 64, 78, 94},
    {5, 10, 19, 30, 46, 62, 83, 108, 138, 170},
    {6, 12, 24, 40, 62, 94, 126, 168, 222, 284},
    {7, 14, 30, 52, 83, 126, 190, 254, 339, 448},
    {8, 16, 36, 64, 108, 168, 254, 382, 510, 682},
    {9, 18, 43, 78, 138, 222, 339, 510, 766, 1022},
    {10, 20, 50, 94, 170, 284, 448, 682, 1022, 1534},
};

// Random instance with independent m and n, optionally degenerate costs,
// negative costs and zero supplies.
inline Instance random_instance(std::mt19937_64& rng, Index m_lo, Index m_hi) {
  auto pick = [&](Weight lo, Weight hi) { return std::uniform_int_distribution<Weight>(lo, hi)(rng); };
  const Index m = pick(m_lo, m_hi);
  const Index n = pick(m_lo, m_hi);
  const bool degenerate = pick(0, 1) == 1;
  const Weight cmax = degenerate ? pick(1, 4) : pick(10, 500);
  const Weight cmin = pick(0, 3) == 0 ? -cmax : 0;
  Instance inst;
  inst.a.resize(m);
  inst.b.resize(n);
  inst.c.resize(m, n);
  for (Index i = 0; i < m; ++i) inst.a(i) = pick(0, 4) == 0 ? 0 : pick(1, 30);
  for (Index j = 0; j < n; ++j) inst.b(j) = pick(0, 4) == 0 ? 0 : pick(1, 30);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) inst.c(i, j) = pick(cmin, cmax);
  rebalance(inst.a, inst.b);
  return inst;
}

// Six rows, seven columns, hand-built forest:
//   moving: Q -> A6, A5;  A5 -> B4, B6;  B4 -> A2, A3
//   fixed:  P -> B2, B3, B7;  B3 -> A1;  A1 -> B1, B5;  B1 -> A4
// Every tree edge and the pair (A3, B1) is tight; other pairs have slack 3.
struct HandForest {
  Instance inst;
  ForestState state;
};

inline const Weight kHandAlpha[] = {50, 40, 45, 30, 60, 70};
inline const Weight kHandBeta[] = {20, 10, 30, 35, 15, 25, 5};

inline bool hand_tight(Index i, Index j) {
  static const std::pair<int, int> tight[] = {{1, 3}, {1, 1}, {1, 5}, {4, 1}, {5, 4},
                                              {5, 6}, {2, 4}, {3, 4}, {3, 1}};
  for (auto [r, c] : tight)
    if (r == i + 1 && c == j + 1) return true;
  return false;
}

inline void hand_forest(HandForest& h) {
  h.inst.a = vec({8, 1, 2, 2, 10, 3});
  h.inst.b = vec({3, 3, 9, 5, 1, 1, 4});
  h.inst.c.resize(6, 7);
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 7; ++j) h.inst.c(i, j) = kHandAlpha[i] - kHandBeta[j] - (hand_tight(i, j) ? 0 : 3);
  ForestState& s = h.state;
  s = init_forest(h.inst, StopMode::Single, 100);
  for (Index v = 0; v < s.m() + s.n(); ++v) unlink_child(s, v);
  for (Index i = 0; i < 6; ++i) s.alpha(i) = kHandAlpha[i];
  for (Index j = 0; j < 7; ++j) s.beta(j) = kHandBeta[j];
  const Index Q = s.q_node(0), P = s.p_node();
  auto A = [&](Index i) { return s.row_node(i - 1); };
  auto B = [&](Index j) { return s.col_node(j - 1); };
  link_child(s, Q, A(6), 3);
  link_child(s, Q, A(5), 7);
  link_child(s, A(5), B(6), 1);
  link_child(s, A(5), B(4), 2);
  link_child(s, B(4), A(3), 2);
  link_child(s, B(4), A(2), 1);
  link_child(s, P, B(7), 4);
  link_child(s, P, B(3), 3);
  link_child(s, P, B(2), 3);
  link_child(s, B(3), A(1), 6);
  link_child(s, A(1), B(5), 1);
  link_child(s, A(1), B(1), 1);
  link_child(s, B(1), A(4), 2);
  for (Index v : {A(6), A(5), B(6), B(4), A(3), A(2)}) s.membership[v] = Membership::Moving;
  for (Index v : {A(1), A(4), B(1), B(2), B(3), B(5), B(7)}) s.membership[v] = Membership::Fixed;
}

// Labels along a path, for readable comparisons.
inline std::vector<std::string> labels(const ForestState& s, const std::vector<Index>& nodes) {
  std::vector<std::string> out;
  for (Index v : nodes) out.push_back(s.label(v));
  return out;
}

inline const std::vector<SolveOptions>& all_configurations() {
  static const std::vector<SolveOptions> configs = [] {
    std::vector<SolveOptions> v;
    for (StopMode mode : {StopMode::Single, StopMode::PerRow})
      for (DescentStrategy d : {DescentStrategy::Naive, DescentStrategy::VersionA, DescentStrategy::VersionB}) {
        if (d == DescentStrategy::VersionB && mode == StopMode::Single) continue;
        SolveOptions o;
        o.mode = mode;
        o.descent = d;
        v.push_back(o);
      }
    return v;
  }();
  return configs;
}

// Per-cycle checks: P1..P7, both signature ranks strictly rising, and the
// row-column force total growing by exactly lambda. The moving rank is only
// compared within one stop's sub-run.
class InvariantTracker {
 public:
  explicit InvariantTracker(const ForestState& s)
      : moving_(extract_signature(s, TreeSide::Moving)),
        fixed_(extract_signature(s, TreeSide::Fixed)),
        force_(total_row_column_force(s)),
        stop_(s.active_stop) {}

  void operator()(const CycleContext& c) {
    ++cycles_;
    const ForestState& s = c.state;
    const PropertyReport props = check_properties(s);
    if (!props.ok()) fail(c, props.summary());
    const Signature moving = extract_signature(s, TreeSide::Moving);
    const Signature fixed = extract_signature(s, TreeSide::Fixed);
    if (s.active_stop == stop_ && compare_signatures(moving, moving_) <= 0) fail(c, "moving rank did not rise");
    if (compare_signatures(fixed, fixed_) <= 0) fail(c, "fixed rank did not rise");
    const Weight force = total_row_column_force(s);
    if (force - force_ != c.event.lambda) fail(c, "row-column force changed by other than lambda");
    moving_ = moving;
    fixed_ = fixed;
    force_ = force;
    stop_ = s.active_stop;
  }

  const std::vector<std::string>& failures() const { return failures_; }
  Index cycles() const { return cycles_; }

 private:
  void fail(const CycleContext& c, const std::string& what) {
    if (failures_.size() < 10) failures_.push_back("cycle " + std::to_string(c.event.cycle) + ": " + what);
  }

  Signature moving_, fixed_;
  Weight force_;
  Index stop_;
  Index cycles_ = 0;
  std::vector<std::string> failures_;
};

}  // namespace testing
