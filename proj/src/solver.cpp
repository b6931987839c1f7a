#include "mechflow/solver.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mechflow/bounds.hpp"

namespace mechflow {

void validate_options(const SolveOptions& opts) {
  if (opts.descent == DescentStrategy::VersionB && opts.mode != StopMode::PerRow)
    throw std::invalid_argument("the cached descent (version B) requires per-row stops");
}

std::string to_string(CaptureDirection direction) {
  switch (direction) {
    case CaptureDirection::MovingGains:
      return "moving_gains";
    case CaptureDirection::FixedGains:
      return "fixed_gains";
    case CaptureDirection::Termination:
      return "termination";
  }
  return "?";
}

std::string format_trace_line(const CycleEvent& e, StopMode mode) {
  std::ostringstream out;
  out << e.cycle << '\t' << e.d << '\t' << e.contact_row + 1 << '\t' << e.contact_col + 1 << '\t'
      << e.lambda << '\t' << e.break_parent.label(mode) << '\t' << e.break_child.label(mode)
      << '\t' << to_string(e.direction);
  return out.str();
}

ReadjustResult contact_and_readjust(ForestState& s, Index i_c, Index j_c) {
  insert_contact(s, i_c, j_c);
  ReadjustResult r;
  r.path = main_path(s);
  const Index edges = r.path.edge_count();

  r.lambda = std::numeric_limits<Weight>::max();
  for (Index e = 1; e <= edges; e += 2) r.lambda = std::min(r.lambda, path_edge_force(s, r.path, e));
  for (Index e = 1; e <= edges; ++e) {
    const Weight f = path_edge_force(s, r.path, e);
    set_path_edge_force(s, r.path, e, e % 2 == 1 ? f - r.lambda : f + r.lambda);
  }
  for (Index e = 1; e <= edges; e += 2)
    if (path_edge_force(s, r.path, e) == 0) {
      r.breaking_edge = e;
      break;
    }
  r.breaking = path_tree_edge(s, r.path, r.breaking_edge);
  return r;
}

std::uint64_t cycle_budget(Index m, Index n) {
  try {
    const std::uint64_t z = z_sup(m, n);
    return z == UINT64_MAX ? z : z + 1;
  } catch (const OverflowError&) {
    return UINT64_MAX;
  }
}

namespace {

void verify_cycle(const ForestState& s, const BranchDistances* cache, Index cycle) {
  const PropertyReport props = check_properties(s);
  if (!props.ok())
    throw InvariantError("property check failed after cycle " + std::to_string(cycle) + ": " +
                         props.summary());
  if (cache && !(*cache == recompute_branch_distances(s)))
    throw InvariantError("stale branch-distance cache after cycle " + std::to_string(cycle));
}

}  // namespace

RunResult run(ForestState& s, const SolveOptions& opts, const CycleObserver& observer) {
  validate_options(opts);
  if (opts.mode != s.mode) throw std::invalid_argument("options and state disagree on stop mode");
  const std::uint64_t budget = cycle_budget(s.m(), s.n());

  RunResult out;
  ScanCursor cursor;
  std::optional<BranchDistances> cache;
  if (opts.descent == DescentStrategy::VersionB) cache = recompute_branch_distances(s);
  std::vector<Index> dirty;

  auto sub_run = [&] {
    while (!moving_exhausted(s) && !fixed_exhausted(s)) {
      DescentResult dr;
      switch (opts.descent) {
        case DescentStrategy::Naive:
          dr = descent_step(s);
          break;
        case DescentStrategy::VersionA:
          dr = descent_version_a(s, cursor);
          break;
        case DescentStrategy::VersionB:
          dr = descent_version_b(s, *cache);
          break;
      }
      ++out.descents;
      out.scanned_cells += dr.scanned;

      const ReadjustResult rr = contact_and_readjust(s, dr.row, dr.col);
      const CaptureOutcome co = apply_capture(s, rr.path, rr.breaking_edge);
      ++out.cycles;

      if (cache) {
        dirty.clear();
        for (const Index v : rr.path.nodes)
          if (s.is_row(v)) dirty.push_back(v);
        update_branch_distances(*cache, s, dirty);
      }

      CycleEvent ev;
      ev.cycle = out.cycles;
      ev.d = dr.d;
      ev.contact_row = dr.row;
      ev.contact_col = dr.col;
      ev.lambda = rr.lambda;
      ev.break_parent = s.node_id(rr.breaking.parent);
      ev.break_child = s.node_id(rr.breaking.child);
      ev.direction = co.terminal ? CaptureDirection::Termination : co.direction;

      if (opts.verify_each_cycle) verify_cycle(s, cache ? &*cache : nullptr, out.cycles);
      if (observer) observer(CycleContext{s, ev, rr.path, cache ? &*cache : nullptr});
      if (opts.trace) out.trace.push_back(ev);
      if (static_cast<std::uint64_t>(out.cycles) > budget)
        throw InvariantError("cycle budget exceeded");
    }
  };

  if (s.mode == StopMode::Single) {
    sub_run();
  } else {
    for (Index k = s.active_stop - s.q_node(0); k < s.stop_count(); ++k) {
      if (s.active_stop != s.q_node(k)) activate_stop(s, k);
      sub_run();
      if (fixed_exhausted(s)) break;
    }
  }
  return out;
}

Solution extract_solution(const ForestState& s) {
  if (s.has_contact()) throw std::logic_error("cannot extract with a pending contact");
  bool parked_rows = false;
  for (Index i = 0; i < s.m(); ++i)
    if (s.membership[s.row_node(i)] == Membership::Parked) parked_rows = true;
  if (!fixed_exhausted(s) && !(moving_exhausted(s) && !parked_rows))
    throw std::logic_error("extract_solution called before termination");

  Solution sol;
  for (Index v = 0; v < s.m() + s.n(); ++v) {
    const Index u = s.parent[v];
    if (u == kNone) continue;
    if (s.is_stop(u)) {
      if (s.edge_force[v] != 0)
        throw std::logic_error("stop edge " + s.label(u) + "-" + s.label(v) +
                               " still carries force at termination");
      continue;
    }
    if (s.edge_force[v] == 0) continue;
    const Index row = s.is_row(v) ? v : u;
    const Index col = (s.is_row(v) ? u : v) - s.m();
    sol.flows.emplace_back(row, col, s.edge_force[v]);
  }
  std::sort(sol.flows.begin(), sol.flows.end(), [](const FlowTriplet& x, const FlowTriplet& y) {
    return std::pair(x.row(), x.col()) < std::pair(y.row(), y.col());
  });
  sol.alpha = s.alpha;
  sol.beta = s.beta;
  return sol;
}

FlowMatrix dense_flows(const std::vector<FlowTriplet>& flows, Index m, Index n) {
  FlowMatrix f = FlowMatrix::Zero(m, n);
  for (const auto& t : flows) f(t.row(), t.col()) += t.value();
  return f;
}

CertificateReport verify_optimality(const Instance& inst, const FlowMatrix& flows,
                                    const WeightVector& alpha, const WeightVector& beta) {
  CertificateReport report;
  const Index m = inst.rows();
  const Index n = inst.cols();
  if (flows.rows() != m || flows.cols() != n || alpha.size() != m || beta.size() != n)
    throw std::invalid_argument("flow or dual dimensions do not match the instance");

  auto cell = [](Index i, Index j) {
    return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
  };
  __int128 primal = 0, dual = 0;
  for (Index i = 0; i < m; ++i) {
    __int128 row = 0;
    for (Index j = 0; j < n; ++j) {
      const Weight f = flows(i, j);
      row += f;
      primal += static_cast<__int128>(f) * inst.c(i, j);
      const __int128 g = static_cast<__int128>(alpha(i)) - beta(j) - inst.c(i, j);
      if (f < 0) report.violations.push_back({CertificateCheck::Nonnegative, cell(i, j)});
      if (g < 0) report.violations.push_back({CertificateCheck::DualFeasibility, cell(i, j)});
      if (f != 0 && g != 0)
        report.violations.push_back({CertificateCheck::ComplementarySlackness, cell(i, j)});
    }
    if (row != inst.a(i))
      report.violations.push_back({CertificateCheck::RowSums, "row " + std::to_string(i + 1)});
    dual += static_cast<__int128>(inst.a(i)) * alpha(i);
  }
  for (Index j = 0; j < n; ++j) {
    __int128 col = 0;
    for (Index i = 0; i < m; ++i) col += flows(i, j);
    if (col != inst.b(j))
      report.violations.push_back({CertificateCheck::ColumnSums, "column " + std::to_string(j + 1)});
    dual -= static_cast<__int128>(inst.b(j)) * beta(j);
  }
  if (primal != dual) report.violations.push_back({CertificateCheck::CostIdentity, "totals"});
  report.primal_cost = narrow_checked(primal);
  report.dual_value = narrow_checked(dual);
  return report;
}

Weight default_c_sup(const Instance& inst) { return checked_add(inst.c.maxCoeff(), 1); }

SolveReport solve(const Instance& inst, const SolveOptions& opts, const CycleObserver& observer) {
  const ValidationReport v = validate(inst);
  if (!v.ok()) throw std::invalid_argument("invalid instance: " + v.failures.front().message);
  validate_options(opts);

  SolveReport report;
  report.c_sup = opts.c_sup_override ? *opts.c_sup_override : default_c_sup(inst);

  const auto t0 = std::chrono::steady_clock::now();
  ForestState state = init_forest(inst, opts.mode, report.c_sup);
  RunResult rr = run(state, opts, observer);
  Solution sol = extract_solution(state);
  report.elapsed = std::chrono::steady_clock::now() - t0;

  report.certificate =
      verify_optimality(inst, dense_flows(sol.flows, inst.rows(), inst.cols()), sol.alpha,
                        sol.beta);
  report.cost = report.certificate.primal_cost;
  report.flows = std::move(sol.flows);
  report.alpha = std::move(sol.alpha);
  report.beta = std::move(sol.beta);
  report.cycles = rr.cycles;
  report.descents = rr.descents;
  report.scanned_cells = rr.scanned_cells;
  report.trace = std::move(rr.trace);
  return report;
}

}  // namespace mechflow
