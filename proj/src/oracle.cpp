#include "mechflow/oracle.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mechflow {

namespace {

struct Arc {
  Index to;
  Index rev;
  Weight cap;
  Weight cost;
};

class Network {
 public:
  explicit Network(Index nodes) : adj_(static_cast<std::size_t>(nodes)) {}

  std::pair<Index, Index> add(Index from, Index to, Weight cap, Weight cost) {
    auto& out = adj_[from];
    auto& in = adj_[to];
    out.push_back({to, static_cast<Index>(in.size()), cap, cost});
    in.push_back({from, static_cast<Index>(out.size()) - 1, 0, -cost});
    return {from, static_cast<Index>(out.size()) - 1};
  }

  Index size() const { return static_cast<Index>(adj_.size()); }
  std::vector<Arc>& out(Index v) { return adj_[v]; }
  Arc& arc(std::pair<Index, Index> id) { return adj_[id.first][id.second]; }

  // Bellman-Ford over residual arcs; sources are all nodes with dist 0 when
  // from == kNone.
  bool shortest(Index from, std::vector<__int128>& dist, std::vector<std::pair<Index, Index>>& via) {
    constexpr __int128 inf = std::numeric_limits<__int128>::max() / 4;
    const Index n = size();
    dist.assign(static_cast<std::size_t>(n), from == kNone ? 0 : inf);
    via.assign(static_cast<std::size_t>(n), {kNone, kNone});
    if (from != kNone) dist[from] = 0;
    for (Index round = 0; round < n; ++round) {
      bool changed = false;
      for (Index u = 0; u < n; ++u) {
        if (dist[u] >= inf) continue;
        for (Index k = 0; k < static_cast<Index>(adj_[u].size()); ++k) {
          const Arc& e = adj_[u][k];
          if (e.cap > 0 && dist[u] + e.cost < dist[e.to]) {
            dist[e.to] = dist[u] + e.cost;
            via[e.to] = {u, k};
            changed = true;
          }
        }
      }
      if (!changed) return true;
    }
    return false;
  }

 private:
  std::vector<std::vector<Arc>> adj_;
};

}  // namespace

OracleResult oracle_solve(const Instance& inst, const OracleOptions& opts) {
  const ValidationReport v = validate(inst);
  if (!v.ok()) throw std::invalid_argument("invalid instance: " + v.failures.front().message);
  const Index m = inst.rows();
  const Index n = inst.cols();
  if (m * n > opts.max_cells)
    throw std::invalid_argument("oracle cap exceeded: m*n = " + std::to_string(m * n) + " > " +
                                std::to_string(opts.max_cells));

  const Weight c_sup = checked_add(inst.c.maxCoeff(), 1);
  const Weight total = inst.a.sum();
  const Index source = m + n;
  const Index sink = m + n + 1;
  Network net(m + n + 2);
  for (Index i = 0; i < m; ++i) net.add(source, i, inst.a(i), 0);
  for (Index j = 0; j < n; ++j) net.add(m + j, sink, inst.b(j), 0);
  std::vector<std::pair<Index, Index>> cell(static_cast<std::size_t>(m * n));
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j)
      cell[i * n + j] = net.add(i, m + j, total, checked_sub(c_sup, inst.c(i, j)));

  std::vector<__int128> dist;
  std::vector<std::pair<Index, Index>> via;
  Weight sent = 0;
  while (sent < total) {
    if (!net.shortest(source, dist, via)) throw std::logic_error("oracle: negative residual cycle");
    if (via[sink].first == kNone) throw std::logic_error("oracle: demand unreachable");
    Weight push = total - sent;
    for (Index v = sink; v != source; v = via[v].first)
      push = std::min(push, net.out(via[v].first)[via[v].second].cap);
    for (Index v = sink; v != source; v = via[v].first) {
      Arc& e = net.out(via[v].first)[via[v].second];
      e.cap -= push;
      net.out(e.to)[e.rev].cap += push;
    }
    sent += push;
  }

  OracleResult r;
  r.flows = FlowMatrix::Zero(m, n);
  __int128 cost = 0;
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) {
      const Arc& e = net.arc(cell[i * n + j]);
      r.flows(i, j) = net.out(e.to)[e.rev].cap;
      cost += static_cast<__int128>(r.flows(i, j)) * inst.c(i, j);
    }
  r.cost = narrow_checked(cost);

  // Potentials of the optimal residual graph (no negative cycles).
  if (!net.shortest(kNone, dist, via)) throw std::logic_error("oracle: negative residual cycle");
  r.alpha.resize(m);
  r.beta.resize(n);
  for (Index i = 0; i < m; ++i) r.alpha(i) = narrow_checked(c_sup + dist[i]);
  for (Index j = 0; j < n; ++j) r.beta(j) = narrow_checked(dist[m + j]);
  return r;
}

namespace {

struct Enumerator {
  const Instance& inst;
  WeightVector row_left;
  WeightVector col_left;
  __int128 best = 0;
  bool found = false;

  void go(Index cell, __int128 value) {
    const Index m = inst.rows();
    const Index n = inst.cols();
    if (cell == m * n) {
      if (!found || value > best) best = value;
      found = true;
      return;
    }
    const Index i = cell / n;
    const Index j = cell % n;
    Weight lo = 0;
    Weight hi = std::min(row_left(i), col_left(j));
    // The last cell of a row or column is forced.
    if (j == n - 1) lo = row_left(i);
    if (i == m - 1) lo = std::max(lo, col_left(j));
    if (j == n - 1 && i == m - 1 && row_left(i) != col_left(j)) return;
    for (Weight f = lo; f <= hi; ++f) {
      row_left(i) -= f;
      col_left(j) -= f;
      go(cell + 1, value + static_cast<__int128>(f) * inst.c(i, j));
      row_left(i) += f;
      col_left(j) += f;
    }
  }
};

}  // namespace

Weight enumerate_optimum(const Instance& inst) {
  const ValidationReport v = validate(inst);
  if (!v.ok()) throw std::invalid_argument("invalid instance: " + v.failures.front().message);
  if (inst.rows() > kEnumerateMaxDim || inst.cols() > kEnumerateMaxDim ||
      inst.a.sum() > kEnumerateMaxTotal)
    throw std::invalid_argument("instance too large to enumerate");
  Enumerator e{inst, inst.a, inst.b};
  e.go(0, 0);
  return narrow_checked(e.best);
}

}  // namespace mechflow
