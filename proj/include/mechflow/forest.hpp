#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mechflow/core.hpp"
#include "mechflow/instance.hpp"
#include "mechflow/signature.hpp"

namespace mechflow {

/// One stop Q for all rows, or one stop Q_k per row released in index order.
enum class StopMode { Single, PerRow };

enum class Membership : std::uint8_t { Moving, Fixed, Parked };

/// Typed view of a dense node number.
struct NodeId {
  enum class Kind { Row, Column, StopP, StopQ };
  Kind kind;
  Index index;  // 0-based row, column or stop number; 0 for P

  /// "A3", "B1", "P", "Q" (single stop) or "Q2" (per-row stops), 1-based.
  std::string label(StopMode mode) const;
  friend bool operator==(const NodeId&, const NodeId&) = default;
};

/// The bipartite forest: heights, per-node links (parent / eldest child /
/// next sibling), the force on the edge from each node to its parent, and
/// tree membership.
///
/// Dense numbering: rows 0..m-1, columns m..m+n-1, P = m+n, stops Q_k from
/// m+n+1. Parked nodes are rows waiting for their stop in per-row mode and
/// stops already emptied; they belong to neither the moving nor the fixed tree.
///
/// The state keeps a pointer to the instance it was built from; the instance
/// must outlive it.
struct ForestState {
  const Instance* instance = nullptr;
  StopMode mode = StopMode::Single;
  Weight c_sup = 0;

  WeightVector alpha;  // row heights
  WeightVector beta;   // column heights

  std::vector<Index> parent;
  std::vector<Index> first_child;
  std::vector<Index> next_sibling;
  std::vector<Weight> edge_force;
  std::vector<Membership> membership;

  Index active_stop = kNone;  // root of the moving tree

  // Edge added by a contact and not yet folded into the links by a capture.
  Index contact_row = kNone;
  Index contact_col = kNone;
  Weight contact_force = 0;

  Index m() const { return alpha.size(); }
  Index n() const { return beta.size(); }
  Index stop_count() const { return mode == StopMode::Single ? 1 : m(); }
  Index node_count() const { return m() + n() + 1 + stop_count(); }

  Index row_node(Index i) const { return i; }
  Index col_node(Index j) const { return m() + j; }
  Index p_node() const { return m() + n(); }
  Index q_node(Index k) const { return m() + n() + 1 + k; }

  bool is_row(Index v) const { return v < m(); }
  bool is_col(Index v) const { return v >= m() && v < m() + n(); }
  bool is_stop(Index v) const { return v >= m() + n(); }
  /// Rows and P are male, columns and the Q stops female.
  bool is_male(Index v) const { return v < m() || v == p_node(); }

  NodeId node_id(Index v) const;
  std::string label(Index v) const { return node_id(v).label(mode); }

  bool has_contact() const { return contact_row != kNone; }
};

/// Initial state: every row hangs from its stop with force a_i, every column
/// from P with force b_j, alpha = c_sup, beta = 0. In per-row mode the first
/// stop is released immediately. Throws std::invalid_argument when
/// c_sup <= max c, and OverflowError when heights could leave the exact range.
ForestState init_forest(const Instance& inst, StopMode mode, Weight c_sup);

/// Makes Q_k the moving root (per-row mode); the previous stop must be empty.
void activate_stop(ForestState& state, Index k);

inline Weight gamma(const ForestState& s, Index i, Index j) {
  return s.alpha(i) - s.beta(j) - s.instance->c(i, j);
}

void link_child(ForestState& s, Index parent, Index child, Weight force);
void unlink_child(ForestState& s, Index child);

template <class Fn>
void for_each_child(const ForestState& s, Index v, Fn&& fn) {
  for (Index c = s.first_child[v]; c != kNone; c = s.next_sibling[c]) fn(c);
}

/// Pre-order walk of the subtree rooted at v.
template <class Fn>
void for_each_in_subtree(const ForestState& s, Index root, Fn&& fn) {
  std::vector<Index> stack{root};
  while (!stack.empty()) {
    const Index v = stack.back();
    stack.pop_back();
    fn(v);
    for (Index c = s.first_child[v]; c != kNone; c = s.next_sibling[c]) stack.push_back(c);
  }
}

bool moving_exhausted(const ForestState& s);
bool fixed_exhausted(const ForestState& s);

/// Inserts the edge (row i, column j) with force 0. Requires a moving row, a
/// fixed column, gamma(i,j) == 0 and no pending contact.
void insert_contact(ForestState& s, Index i, Index j);

/// Q-to-P path through the pending contact. Edge e (1-based) joins
/// nodes[e-1] and nodes[e]; the contact is edge contact_edge, always even.
struct MainPath {
  std::vector<Index> nodes;
  Index contact_edge = 0;

  Index edge_count() const { return static_cast<Index>(nodes.size()) - 1; }
};

MainPath main_path(const ForestState& s);

Weight path_edge_force(const ForestState& s, const MainPath& path, Index e);
void set_path_edge_force(ForestState& s, const MainPath& path, Index e, Weight force);

struct TreeEdge {
  Index parent = kNone;
  Index child = kNone;
  friend bool operator==(const TreeEdge&, const TreeEdge&) = default;
};

/// Tree edge numbered e on the path (e must not be the contact edge).
TreeEdge path_tree_edge(const ForestState& s, const MainPath& path, Index e);

enum class CaptureDirection { MovingGains, FixedGains, Termination };

struct CaptureOutcome {
  CaptureDirection direction;  // MovingGains or FixedGains
  Index transplanted_root;     // root of the re-hung subtree (the contact row or column)
  bool terminal;               // a stop is left alone
};

/// Deletes the zero-force breaking edge, folds the contact edge into the
/// links by re-rooting the cut-off part at its contact endpoint, and flips the
/// membership of the transplanted subtree.
CaptureOutcome apply_capture(ForestState& s, const MainPath& path, Index breaking_edge);
CaptureOutcome apply_capture(ForestState& s, TreeEdge breaking);

struct PropertyViolation {
  int property;  // 1..7
  std::string witness;
};

struct PropertyReport {
  std::vector<PropertyViolation> violations;

  bool ok() const { return violations.empty(); }
  bool violates(int property) const {
    for (const auto& v : violations)
      if (v.property == property) return true;
    return false;
  }
  std::string summary() const;
};

/// Checks P1..P7. Parked nodes are allowed as extra trees; P3 checks that
/// membership flags agree with the tree each node hangs in.
PropertyReport check_properties(const ForestState& s);

enum class TreeSide { Moving, Fixed };

Signature extract_signature(const ForestState& s, TreeSide which);

/// Sum of the forces on row-column edges, including a pending contact.
Weight total_row_column_force(const ForestState& s);

}  // namespace mechflow
