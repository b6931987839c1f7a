#pragma once

#include <cstdint>

#include "mechflow/core.hpp"
#include "mechflow/instance.hpp"

namespace mechflow {

struct OracleOptions {
  Index max_cells = 400;  // m * n cap
};

struct OracleResult {
  Weight cost = 0;
  FlowMatrix flows;
  // Duals recovered from the final potentials, in the solver's convention:
  // alpha_i - beta_j - c(i,j) >= 0, with equality wherever flow > 0.
  WeightVector alpha;
  WeightVector beta;
};

/// Reference optimum by successive shortest paths (Bellman-Ford) on the
/// minimization costs c_sup - c. Throws std::invalid_argument for invalid
/// instances or when m * n exceeds the cap.
OracleResult oracle_solve(const Instance& inst, const OracleOptions& opts = {});

inline constexpr Index kEnumerateMaxDim = 4;
inline constexpr Weight kEnumerateMaxTotal = 12;

/// Brute force over every integer feasible matrix. Only for m, n <= 4 and
/// total supply <= 12.
Weight enumerate_optimum(const Instance& inst);

}  // namespace mechflow
