#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "mechflow/core.hpp"
#include "mechflow/descent.hpp"
#include "mechflow/forest.hpp"
#include "mechflow/instance.hpp"

namespace mechflow {

enum class DescentStrategy { Naive, VersionA, VersionB };

struct SolveOptions {
  StopMode mode = StopMode::Single;
  DescentStrategy descent = DescentStrategy::Naive;
  std::optional<Weight> c_sup_override;
  bool verify_each_cycle = false;  // P1..P7 (and the cached distances) after every cycle
  bool trace = false;
};

/// Throws std::invalid_argument for unsupported combinations (the cached
/// descent needs per-row stops).
void validate_options(const SolveOptions& opts);

struct CycleEvent {
  Index cycle = 0;  // 1-based
  Weight d = 0;
  Index contact_row = kNone;  // 0-based row i_c
  Index contact_col = kNone;  // 0-based column j_c
  Weight lambda = 0;
  NodeId break_parent{NodeId::Kind::StopP, 0};
  NodeId break_child{NodeId::Kind::StopP, 0};
  CaptureDirection direction = CaptureDirection::MovingGains;
};

/// One tab-separated line: cycle d i_c j_c lambda break_parent break_child
/// direction, with 1-based indices and node labels.
std::string format_trace_line(const CycleEvent& event, StopMode mode);
std::string to_string(CaptureDirection direction);

struct ReadjustResult {
  Weight lambda = 0;
  Index breaking_edge = 0;  // 1-based number on the main path
  TreeEdge breaking;
  MainPath path;
};

/// Inserts the contact (i_c, j_c), pushes lambda = min odd-edge force along
/// the main path (+ on even edges, - on odd ones) and picks the zero-force odd
/// edge nearest Q as the breaking edge. The capture itself is left to
/// apply_capture.
ReadjustResult contact_and_readjust(ForestState& s, Index i_c, Index j_c);

/// Read-only view handed to a cycle observer right after each cycle.
struct CycleContext {
  const ForestState& state;
  const CycleEvent& event;
  const MainPath& path;
  const BranchDistances* cache;  // null unless the cached descent is in use
};

using CycleObserver = std::function<void(const CycleContext&)>;

struct RunResult {
  std::vector<CycleEvent> trace;  // filled when opts.trace is set
  Index cycles = 0;
  std::int64_t descents = 0;
  std::int64_t scanned_cells = 0;
};

/// Cycle budget: z_sup(m, n) + 1, saturated at the 64-bit range.
std::uint64_t cycle_budget(Index m, Index n);

/// Runs the cycle loop from an initialized state until termination (per-row
/// mode: each stop in turn until it is empty). Throws InvariantError if a
/// verification check fails or the cycle budget is exceeded.
RunResult run(ForestState& s, const SolveOptions& opts, const CycleObserver& observer = {});

using FlowTriplet = Eigen::Triplet<Weight, Index>;

struct Solution {
  std::vector<FlowTriplet> flows;  // nonzero f(i,j), row-major order
  WeightVector alpha;
  WeightVector beta;
};

/// Reads flows off the row-column edges of a terminated state. Throws
/// std::logic_error before termination or if any stop edge still carries force.
Solution extract_solution(const ForestState& s);

FlowMatrix dense_flows(const std::vector<FlowTriplet>& flows, Index m, Index n);

enum class CertificateCheck {
  RowSums,
  ColumnSums,
  Nonnegative,
  DualFeasibility,
  ComplementarySlackness,
  CostIdentity
};

struct CertificateViolation {
  CertificateCheck check;
  std::string witness;
};

struct CertificateReport {
  std::vector<CertificateViolation> violations;
  Weight primal_cost = 0;  // sum c f
  Weight dual_value = 0;   // sum a alpha - sum b beta

  bool certified() const { return violations.empty(); }
  bool violates(CertificateCheck check) const {
    for (const auto& v : violations)
      if (v.check == check) return true;
    return false;
  }
};

/// Feasibility, dual feasibility, complementary slackness and the cost
/// identity; together they prove the flows optimal.
CertificateReport verify_optimality(const Instance& inst, const FlowMatrix& flows,
                                    const WeightVector& alpha, const WeightVector& beta);

struct SolveReport {
  std::vector<FlowTriplet> flows;
  WeightVector alpha;
  WeightVector beta;
  Weight cost = 0;
  Weight c_sup = 0;
  Index cycles = 0;
  std::int64_t descents = 0;
  std::int64_t scanned_cells = 0;
  std::vector<CycleEvent> trace;
  std::chrono::duration<double> elapsed{0};
  CertificateReport certificate;
};

/// c_sup default: max c + 1.
Weight default_c_sup(const Instance& inst);

/// Validates, initializes, runs, extracts and certifies.
SolveReport solve(const Instance& inst, const SolveOptions& opts = {},
                  const CycleObserver& observer = {});

}  // namespace mechflow
