#include "mechflow/bounds.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace mechflow {

std::strong_ordering compare_signatures(const Signature& x, const Signature& y) {
  const std::size_t depth = std::max(x.levels.size(), y.levels.size());
  for (std::size_t l = 1; l <= depth; ++l) {
    const Index gx = x.level(l);
    const Index gy = y.level(l);
    if (gx == gy) continue;
    // Odd levels rank larger counts first, even levels smaller counts first.
    if (l % 2 == 1) return gx > gy ? std::strong_ordering::less : std::strong_ordering::greater;
    return gx < gy ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

namespace {

void enumerate_from(std::vector<Index>& levels, Index odd_left, Index even_left, bool odd_next,
                    std::vector<Signature>& out) {
  if (odd_left == 0 && even_left == 0) {
    out.push_back(Signature{levels});
    return;
  }
  const Index left = odd_next ? odd_left : even_left;
  for (Index g = 1; g <= left; ++g) {
    levels.push_back(g);
    if (odd_next)
      enumerate_from(levels, odd_left - g, even_left, false, out);
    else
      enumerate_from(levels, odd_left, even_left - g, true, out);
    levels.pop_back();
  }
}

}  // namespace

std::vector<Signature> enumerate_signatures(Index odd_total, Index even_total) {
  if (odd_total < 0 || even_total < 0) throw std::invalid_argument("negative level totals");
  std::vector<Signature> out;
  std::vector<Index> levels;
  enumerate_from(levels, odd_total, even_total, true, out);
  return out;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > static_cast<unsigned __int128>(UINT64_MAX))
      throw OverflowError("binomial coefficient exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t z_sup(Index m, Index n) {
  if (m < 1 || n < 1) throw std::invalid_argument("z_sup needs m, n >= 1");
  return binomial(static_cast<std::uint64_t>(m + n), static_cast<std::uint64_t>(m)) - 1;
}

namespace {

// Signatures of one side for every (odd, even) split, with their rank in the
// global order.
struct RankedSide {
  std::vector<Signature> sigs;
  std::vector<std::pair<Index, Index>> split;  // (odd_total, even_total) per signature
  std::vector<std::size_t> rank;               // position in the sorted order
};

RankedSide rank_side(Index odd_lo, Index odd_hi, Index even_lo, Index even_hi) {
  RankedSide side;
  for (Index o = odd_lo; o <= odd_hi; ++o)
    for (Index e = even_lo; e <= even_hi; ++e)
      for (auto& sig : enumerate_signatures(o, e)) {
        side.sigs.push_back(std::move(sig));
        side.split.emplace_back(o, e);
      }
  std::vector<std::size_t> order(side.sigs.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return compare_signatures(side.sigs[x], side.sigs[y]) < 0;
  });
  side.rank.resize(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) side.rank[order[r]] = r;
  return side;
}

}  // namespace

std::uint64_t z_prime_sup(Index m, Index n) {
  if (m < 1 || n < 1 || m > kZPrimeSupMaxDim || n > kZPrimeSupMaxDim)
    throw std::invalid_argument("z_prime_sup is limited to 1 <= m, n <= " +
                                std::to_string(kZPrimeSupMaxDim));
  // Moving tree: p rows on odd levels (1..m), q columns on even levels (0..n-1).
  const RankedSide moving = rank_side(1, m, 0, n - 1);
  // Fixed tree: q' = n - q columns on odd levels, p' = m - p rows on even levels.
  const RankedSide fixed = rank_side(1, n, 0, m - 1);

  // Fixed ranks per (p, q) of the moving side, sorted descending so that
  // points sharing a moving rank can never chain with each other.
  std::map<std::pair<Index, Index>, std::vector<std::size_t>> fixed_ranks;
  for (std::size_t k = 0; k < fixed.sigs.size(); ++k) {
    const auto [q_fixed, p_fixed] = fixed.split[k];
    fixed_ranks[{m - p_fixed, n - q_fixed}].push_back(fixed.rank[k]);
  }
  for (auto& [key, ranks] : fixed_ranks) std::sort(ranks.rbegin(), ranks.rend());

  std::vector<std::size_t> by_rank(moving.sigs.size());
  for (std::size_t k = 0; k < moving.sigs.size(); ++k) by_rank[moving.rank[k]] = k;

  // Longest strictly increasing chain via patience sorting.
  std::vector<std::size_t> tails;
  for (const std::size_t k : by_rank) {
    const auto it = fixed_ranks.find(moving.split[k]);
    if (it == fixed_ranks.end()) continue;
    for (const std::size_t r : it->second) {
      auto pos = std::lower_bound(tails.begin(), tails.end(), r);
      if (pos == tails.end())
        tails.push_back(r);
      else
        *pos = r;
    }
  }
  return tails.size();
}

std::uint64_t z_inf(Index n) {
  if (n < 1 || n > 62) throw std::invalid_argument("z_inf needs 1 <= n <= 62");
  return 3 * (std::uint64_t{1} << (n - 1)) - 2;
}

BoundsResult square_bounds(Index n) {
  BoundsResult r;
  r.z_sup = z_sup(n, n);
  r.z_prime_sup = z_prime_sup(n, n);
  r.z_inf = z_inf(n);
  return r;
}

}  // namespace mechflow
