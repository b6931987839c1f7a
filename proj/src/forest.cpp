#include "mechflow/forest.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace mechflow {

std::string NodeId::label(StopMode mode) const {
  switch (kind) {
    case Kind::Row:
      return "A" + std::to_string(index + 1);
    case Kind::Column:
      return "B" + std::to_string(index + 1);
    case Kind::StopP:
      return "P";
    case Kind::StopQ:
      return mode == StopMode::Single ? std::string("Q") : "Q" + std::to_string(index + 1);
  }
  return "?";
}

NodeId ForestState::node_id(Index v) const {
  if (is_row(v)) return {NodeId::Kind::Row, v};
  if (is_col(v)) return {NodeId::Kind::Column, v - m()};
  if (v == p_node()) return {NodeId::Kind::StopP, 0};
  return {NodeId::Kind::StopQ, v - m() - n() - 1};
}

namespace {

// Every height stays within [-(m+n+2) R, c_sup] where R = max |c|: columns
// only descend from 0, rows start at c_sup, and every node is tied by
// zero-gamma edges (or by gamma >= 0 against a fixed column) to a P-child
// column sitting at height 0. Gamma values then stay within 2H + R.
void check_height_range(const Instance& inst, Weight c_sup) {
  Weight r = 0;
  for (Index i = 0; i < inst.c.rows(); ++i)
    for (Index j = 0; j < inst.c.cols(); ++j) {
      const Weight v = inst.c(i, j);
      if (v == std::numeric_limits<Weight>::min()) throw OverflowError("cost out of range");
      r = std::max(r, v < 0 ? -v : v);
    }
  if (c_sup == std::numeric_limits<Weight>::min()) throw OverflowError("c_sup out of range");
  const Weight depth = checked_add(checked_add(inst.rows(), inst.cols()), 2);
  const Weight h = checked_add(c_sup < 0 ? -c_sup : c_sup, checked_mul(depth, r));
  checked_add(checked_mul(h, 4), checked_mul(r, 2));
}

}  // namespace

ForestState init_forest(const Instance& inst, StopMode mode, Weight c_sup) {
  if (!validate(inst).ok()) throw std::invalid_argument("instance fails validation");
  if (c_sup <= inst.c.maxCoeff())
    throw std::invalid_argument("c_sup must exceed every cost coefficient");
  check_height_range(inst, c_sup);

  ForestState s;
  s.instance = &inst;
  s.mode = mode;
  s.c_sup = c_sup;
  s.alpha = WeightVector::Constant(inst.rows(), c_sup);
  s.beta = WeightVector::Zero(inst.cols());

  const auto nodes = static_cast<std::size_t>(s.node_count());
  s.parent.assign(nodes, kNone);
  s.first_child.assign(nodes, kNone);
  s.next_sibling.assign(nodes, kNone);
  s.edge_force.assign(nodes, 0);
  s.membership.assign(nodes, Membership::Parked);

  s.membership[s.p_node()] = Membership::Fixed;
  for (Index j = s.n() - 1; j >= 0; --j) {
    link_child(s, s.p_node(), s.col_node(j), inst.b(j));
    s.membership[s.col_node(j)] = Membership::Fixed;
  }
  if (mode == StopMode::Single) {
    const Index q = s.q_node(0);
    for (Index i = s.m() - 1; i >= 0; --i) link_child(s, q, s.row_node(i), inst.a(i));
    s.active_stop = q;
    for_each_in_subtree(s, q, [&](Index v) { s.membership[v] = Membership::Moving; });
  } else {
    for (Index i = 0; i < s.m(); ++i) link_child(s, s.q_node(i), s.row_node(i), inst.a(i));
    activate_stop(s, 0);
  }
  return s;
}

void activate_stop(ForestState& s, Index k) {
  if (s.mode != StopMode::PerRow) throw std::logic_error("activate_stop needs per-row stops");
  if (k < 0 || k >= s.stop_count()) throw std::out_of_range("stop index out of range");
  if (s.active_stop != kNone) {
    if (!moving_exhausted(s)) throw std::logic_error("previous stop still carries rows");
    s.membership[s.active_stop] = Membership::Parked;
  }
  s.active_stop = s.q_node(k);
  for_each_in_subtree(s, s.active_stop, [&](Index v) { s.membership[v] = Membership::Moving; });
}

void link_child(ForestState& s, Index parent, Index child, Weight force) {
  s.parent[child] = parent;
  s.next_sibling[child] = s.first_child[parent];
  s.first_child[parent] = child;
  s.edge_force[child] = force;
}

void unlink_child(ForestState& s, Index child) {
  const Index p = s.parent[child];
  if (p == kNone) return;
  if (s.first_child[p] == child) {
    s.first_child[p] = s.next_sibling[child];
  } else {
    Index c = s.first_child[p];
    while (c != kNone && s.next_sibling[c] != child) c = s.next_sibling[c];
    if (c == kNone) throw InvariantError("child missing from its parent's sibling list");
    s.next_sibling[c] = s.next_sibling[child];
  }
  s.parent[child] = kNone;
  s.next_sibling[child] = kNone;
  s.edge_force[child] = 0;
}

bool moving_exhausted(const ForestState& s) { return s.first_child[s.active_stop] == kNone; }
bool fixed_exhausted(const ForestState& s) { return s.first_child[s.p_node()] == kNone; }

void insert_contact(ForestState& s, Index i, Index j) {
  if (s.has_contact()) throw std::logic_error("a contact edge is already pending");
  if (s.membership[s.row_node(i)] != Membership::Moving ||
      s.membership[s.col_node(j)] != Membership::Fixed)
    throw std::invalid_argument("contact must join a moving row to a fixed column");
  if (gamma(s, i, j) != 0) throw std::invalid_argument("contact requires a zero distance");
  s.contact_row = s.row_node(i);
  s.contact_col = s.col_node(j);
  s.contact_force = 0;
}

MainPath main_path(const ForestState& s) {
  if (!s.has_contact()) throw std::logic_error("main path needs a pending contact (single tree)");
  MainPath path;
  for (Index v = s.contact_row; v != kNone; v = s.parent[v]) path.nodes.push_back(v);
  if (path.nodes.back() != s.active_stop)
    throw InvariantError("contact row does not hang from the moving stop");
  std::reverse(path.nodes.begin(), path.nodes.end());
  path.contact_edge = static_cast<Index>(path.nodes.size());
  for (Index v = s.contact_col; v != kNone; v = s.parent[v]) path.nodes.push_back(v);
  if (path.nodes.back() != s.p_node()) throw InvariantError("contact column does not hang from P");
  return path;
}

Weight path_edge_force(const ForestState& s, const MainPath& path, Index e) {
  if (e == path.contact_edge) return s.contact_force;
  const TreeEdge t = path_tree_edge(s, path, e);
  return s.edge_force[t.child];
}

void set_path_edge_force(ForestState& s, const MainPath& path, Index e, Weight force) {
  if (e == path.contact_edge) {
    s.contact_force = force;
    return;
  }
  s.edge_force[path_tree_edge(s, path, e).child] = force;
}

TreeEdge path_tree_edge(const ForestState& s, const MainPath& path, Index e) {
  if (e < 1 || e > path.edge_count() || e == path.contact_edge)
    throw std::out_of_range("not a tree edge of the main path");
  const Index u = path.nodes[e - 1];
  const Index v = path.nodes[e];
  if (s.parent[v] == u) return {u, v};
  if (s.parent[u] == v) return {v, u};
  throw InvariantError("main path edge missing from the forest");
}

CaptureOutcome apply_capture(ForestState& s, const MainPath& path, Index breaking_edge) {
  if (breaking_edge % 2 == 0) throw std::invalid_argument("breaking edge must be odd-numbered");
  const TreeEdge cut_edge = path_tree_edge(s, path, breaking_edge);
  if (s.edge_force[cut_edge.child] != 0)
    throw std::invalid_argument("breaking edge must carry zero force");

  const bool fixed_gains = breaking_edge < path.contact_edge;
  Index prev = fixed_gains ? s.contact_col : s.contact_row;
  Index cur = fixed_gains ? s.contact_row : s.contact_col;
  Weight carry = s.contact_force;
  // Reverse the links between the contact endpoint and the cut, re-hanging
  // the detached part under the other contact endpoint.
  while (true) {
    const Index up = s.parent[cur];
    const Weight up_force = s.edge_force[cur];
    unlink_child(s, cur);
    link_child(s, prev, cur, carry);
    if (cur == cut_edge.child) break;
    prev = cur;
    carry = up_force;
    cur = up;
  }

  const Index root = fixed_gains ? s.contact_row : s.contact_col;
  const Membership flag = fixed_gains ? Membership::Fixed : Membership::Moving;
  for_each_in_subtree(s, root, [&](Index v) { s.membership[v] = flag; });

  s.contact_row = s.contact_col = kNone;
  s.contact_force = 0;

  CaptureOutcome out;
  out.direction = fixed_gains ? CaptureDirection::FixedGains : CaptureDirection::MovingGains;
  out.transplanted_root = root;
  out.terminal = moving_exhausted(s) || fixed_exhausted(s);
  return out;
}

CaptureOutcome apply_capture(ForestState& s, TreeEdge breaking) {
  const MainPath path = main_path(s);
  for (Index e = 1; e <= path.edge_count(); e += 2)
    if (path_tree_edge(s, path, e) == breaking) return apply_capture(s, path, e);
  throw std::invalid_argument("breaking edge is not an odd edge of the main path");
}

std::string PropertyReport::summary() const {
  std::ostringstream out;
  for (const auto& v : violations) out << "P" << v.property << " at " << v.witness << "; ";
  return out.str();
}

PropertyReport check_properties(const ForestState& s) {
  PropertyReport report;
  constexpr int kMaxWitnesses = 5;
  int counts[8] = {};
  auto fail = [&](int p, const std::string& witness) {
    if (counts[p]++ < kMaxWitnesses) report.violations.push_back({p, witness});
  };
  auto edge_name = [&](Index u, Index v) { return s.label(u) + "-" + s.label(v); };
  const Index total = s.node_count();
  const Instance& inst = *s.instance;

  // P1: bipartite edge kinds.
  for (Index v = 0; v < total; ++v) {
    const Index u = s.parent[v];
    if (u == kNone) continue;
    bool ok = false;
    if (s.is_row(v)) ok = s.is_col(u) || (s.is_stop(u) && u != s.p_node());
    if (s.is_col(v)) ok = s.is_row(u) || u == s.p_node();
    if (!ok) fail(1, edge_name(u, v));
  }
  if (s.has_contact() && !(s.is_row(s.contact_row) && s.is_col(s.contact_col)))
    fail(1, edge_name(s.contact_row, s.contact_col));

  // P2: consistent links, no cycles, every rod hangs from a stop.
  Index linked = 0;
  for (Index u = 0; u < total; ++u) {
    Index steps = 0;
    for (Index c = s.first_child[u]; c != kNone; c = s.next_sibling[c]) {
      if (++steps > total) {
        fail(2, "sibling loop under " + s.label(u));
        break;
      }
      if (s.parent[c] != u) fail(2, "child list of " + s.label(u) + " holds " + s.label(c));
      ++linked;
    }
  }
  Index with_parent = 0;
  for (Index v = 0; v < total; ++v) {
    if (s.parent[v] != kNone) ++with_parent;
    Index r = v, steps = 0;
    while (s.parent[r] != kNone && steps <= total) {
      r = s.parent[r];
      ++steps;
    }
    if (steps > total)
      fail(2, "cycle through " + s.label(v));
    else if (!s.is_stop(r))
      fail(2, s.label(v) + " has root " + s.label(r));
  }
  if (linked != with_parent) fail(2, "parent and child links disagree");

  // P3: membership matches the tree each node hangs in.
  std::vector<Membership> expect(static_cast<std::size_t>(total), Membership::Parked);
  for_each_in_subtree(s, s.active_stop, [&](Index v) { expect[v] = Membership::Moving; });
  for_each_in_subtree(s, s.p_node(), [&](Index v) { expect[v] = Membership::Fixed; });
  for (Index v = 0; v < total; ++v)
    if (expect[v] != s.membership[v]) fail(3, s.label(v) + " has the wrong tree flag");
  if (s.has_contact() && (s.membership[s.contact_row] != Membership::Moving ||
                          s.membership[s.contact_col] != Membership::Fixed))
    fail(3, "contact " + edge_name(s.contact_row, s.contact_col) + " does not join the trees");

  // P4: no negative distance.
  for (Index i = 0; i < s.m(); ++i)
    for (Index j = 0; j < s.n(); ++j)
      if (gamma(s, i, j) < 0) fail(4, edge_name(s.row_node(i), s.col_node(j)));

  // P5: row-column edges are tight.
  for (Index v = 0; v < s.m() + s.n(); ++v) {
    const Index u = s.parent[v];
    if (u == kNone || s.is_stop(u)) continue;
    const Index row = s.is_row(v) ? v : u;
    const Index col = s.is_row(v) ? u : v;
    if (gamma(s, row, col - s.m()) != 0) fail(5, edge_name(u, v));
  }
  if (s.has_contact() && gamma(s, s.contact_row, s.contact_col - s.m()) != 0)
    fail(5, edge_name(s.contact_row, s.contact_col));

  // P6: nonnegative forces.
  for (Index v = 0; v < total; ++v)
    if (s.parent[v] != kNone && s.edge_force[v] < 0) fail(6, edge_name(s.parent[v], v));
  if (s.has_contact() && s.contact_force < 0) fail(6, edge_name(s.contact_row, s.contact_col));

  // P7: force balance at every rod.
  std::vector<Weight> load(static_cast<std::size_t>(s.m() + s.n()), 0);
  for (Index v = 0; v < total; ++v) {
    const Index u = s.parent[v];
    if (u == kNone) continue;
    if (v < s.m() + s.n()) load[v] += s.edge_force[v];
    if (u < s.m() + s.n()) load[u] += s.edge_force[v];
  }
  if (s.has_contact()) {
    load[s.contact_row] += s.contact_force;
    load[s.contact_col] += s.contact_force;
  }
  for (Index i = 0; i < s.m(); ++i)
    if (load[i] != inst.a(i)) fail(7, s.label(s.row_node(i)));
  for (Index j = 0; j < s.n(); ++j)
    if (load[s.col_node(j)] != inst.b(j)) fail(7, s.label(s.col_node(j)));

  return report;
}

Signature extract_signature(const ForestState& s, TreeSide which) {
  Signature sig;
  std::vector<Index> level{which == TreeSide::Moving ? s.active_stop : s.p_node()};
  std::vector<Index> next;
  while (true) {
    next.clear();
    for (Index v : level) for_each_child(s, v, [&](Index c) { next.push_back(c); });
    if (next.empty()) break;
    sig.levels.push_back(static_cast<Index>(next.size()));
    level.swap(next);
  }
  return sig;
}

Weight total_row_column_force(const ForestState& s) {
  Weight total = s.has_contact() ? s.contact_force : 0;
  for (Index v = 0; v < s.m() + s.n(); ++v) {
    const Index u = s.parent[v];
    if (u != kNone && !s.is_stop(u)) total += s.edge_force[v];
  }
  return total;
}

}  // namespace mechflow
