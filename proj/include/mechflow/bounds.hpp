#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "mechflow/core.hpp"
#include "mechflow/signature.hpp"

namespace mechflow {

/// Alternating lexicographic order on signatures: g_1 descending, g_2
/// ascending, g_3 descending, ... with missing levels read as 0. "less" means
/// earlier in the ranking, so a tree's rank grows when its signature moves to
/// a greater one.
std::strong_ordering compare_signatures(const Signature& x, const Signature& y);

/// All signatures whose odd levels hold odd_total nodes and even levels
/// even_total nodes, first level non-empty; there are C(odd + even - 1, even).
std::vector<Signature> enumerate_signatures(Index odd_total, Index even_total);

/// Exact binomial coefficient; throws OverflowError past 64 bits.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// C(m+n, m) - 1: every non-terminal moving signature, each visited at most once.
std::uint64_t z_sup(Index m, Index n);

inline constexpr Index kZPrimeSupMaxDim = 12;

/// Longest chain of (moving rank, fixed rank) pairs strictly increasing in
/// both, over all pairs compatible with the row/column split. m, n must lie
/// in [1, kZPrimeSupMaxDim].
std::uint64_t z_prime_sup(Index m, Index n);

/// 3 * 2^(n-1) - 2, the cycle count of the worst-case family; n in [1, 62].
std::uint64_t z_inf(Index n);

struct BoundsResult {
  std::uint64_t z_sup = 0;
  std::uint64_t z_prime_sup = 0;
  std::uint64_t z_inf = 0;
};

/// All three bounds for the square n x n case.
BoundsResult square_bounds(Index n);

}  // namespace mechflow
