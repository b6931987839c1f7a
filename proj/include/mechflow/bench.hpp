#pragma once

#include <cstdint>
#include <vector>

#include "mechflow/core.hpp"
#include "mechflow/solver.hpp"

namespace mechflow {

enum class Regime { NonDegenerate, Degenerate };

struct BenchConfig {
  std::vector<Index> sizes;  // square n x n
  Index reps = 100;
  Regime regime = Regime::NonDegenerate;
  StopMode mode = StopMode::PerRow;
  DescentStrategy descent = DescentStrategy::VersionB;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct BenchRow {
  Index n = 0;
  StopMode mode = StopMode::PerRow;
  DescentStrategy descent = DescentStrategy::VersionB;
  Index reps = 0;
  double mean_cycles = 0;
  double rms_cycles = 0;
  double mean_solve_seconds = 0;
  double rms_solve_seconds = 0;
  double mean_setup_seconds = 0;
  double mean_scanned_fraction = 0;  // distances evaluated per descent / (m n)
};

struct BenchReport {
  BenchConfig config;
  std::vector<BenchRow> rows;
};

/// Seed of repetition rep at size n, a pure function of the master seed.
std::uint64_t derive_seed(std::uint64_t master, Index n, Index rep);

/// Generates and solves config.reps random instances per size. Every solve
/// must certify; a failure throws InvariantError. Cycle counts are
/// reproducible for a given config, timings are not.
BenchReport run_bench(const BenchConfig& config);

}  // namespace mechflow
