#include "mechflow/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "mechflow/instance.hpp"

namespace mechflow {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Sample {
  double cycles = 0;
  double solve = 0;
  double setup = 0;
  double scanned_fraction = 0;
};

std::pair<double, double> mean_rms(const std::vector<Sample>& xs, double Sample::*field) {
  double mean = 0;
  for (const auto& x : xs) mean += x.*field;
  mean /= static_cast<double>(xs.size());
  double var = 0;
  for (const auto& x : xs) var += (x.*field - mean) * (x.*field - mean);
  return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, Index n, Index rep) {
  return splitmix(splitmix(splitmix(master) ^ static_cast<std::uint64_t>(n)) ^
                  static_cast<std::uint64_t>(rep));
}

BenchReport run_bench(const BenchConfig& config) {
  if (config.reps < 1) throw std::invalid_argument("bench needs reps >= 1");
  for (const Index n : config.sizes)
    if (n < 1) throw std::invalid_argument("bench sizes must be positive");
  SolveOptions opts;
  opts.mode = config.mode;
  opts.descent = config.descent;
  validate_options(opts);

  BenchReport report;
  report.config = config;
  for (const Index n : config.sizes) {
    std::vector<Sample> samples(static_cast<std::size_t>(config.reps));
    std::atomic<Index> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
      for (Index rep = next++; rep < config.reps; rep = next++) {
        try {
          const auto t0 = std::chrono::steady_clock::now();
          const Instance inst = gen_random(GeneratorConfig::benchmark(
              n, config.regime == Regime::Degenerate, derive_seed(config.seed, n, rep)));
          const auto t1 = std::chrono::steady_clock::now();
          const SolveReport r = solve(inst, opts);
          if (!r.certificate.certified())
            throw InvariantError("bench solve failed certification at n=" + std::to_string(n));
          Sample& s = samples[rep];
          s.cycles = static_cast<double>(r.cycles);
          s.solve = r.elapsed.count();
          s.setup = std::chrono::duration<double>(t1 - t0).count();
          s.scanned_fraction = r.descents == 0 ? 0.0
                                               : static_cast<double>(r.scanned_cells) /
                                                     static_cast<double>(r.descents) /
                                                     static_cast<double>(n * n);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = config.reps;
        }
      }
    };

    const unsigned threads = std::max(1u, config.threads);
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    BenchRow row;
    row.n = n;
    row.mode = config.mode;
    row.descent = config.descent;
    row.reps = config.reps;
    std::tie(row.mean_cycles, row.rms_cycles) = mean_rms(samples, &Sample::cycles);
    std::tie(row.mean_solve_seconds, row.rms_solve_seconds) = mean_rms(samples, &Sample::solve);
    row.mean_setup_seconds = mean_rms(samples, &Sample::setup).first;
    row.mean_scanned_fraction = mean_rms(samples, &Sample::scanned_fraction).first;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace mechflow
