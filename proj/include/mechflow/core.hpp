#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace mechflow {

/// All supplies, demands, costs, heights and forces are exact 64-bit integers.
using Weight = std::int64_t;
using Index = Eigen::Index;

using WeightVector = Eigen::Matrix<Weight, Eigen::Dynamic, 1>;
using CostMatrix = Eigen::Matrix<Weight, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using FlowMatrix = CostMatrix;

inline constexpr Index kNone = -1;

/// Raised whenever an exact integer computation would leave the 64-bit range.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Raised when an internal invariant is found broken at run time.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline Weight checked_add(Weight x, Weight y) {
  Weight r;
  if (__builtin_add_overflow(x, y, &r)) throw OverflowError("integer overflow in addition");
  return r;
}

inline Weight checked_sub(Weight x, Weight y) {
  Weight r;
  if (__builtin_sub_overflow(x, y, &r)) throw OverflowError("integer overflow in subtraction");
  return r;
}

inline Weight checked_mul(Weight x, Weight y) {
  Weight r;
  if (__builtin_mul_overflow(x, y, &r)) throw OverflowError("integer overflow in multiplication");
  return r;
}

inline Weight narrow_checked(__int128 v) {
  if (v > std::numeric_limits<Weight>::max() || v < std::numeric_limits<Weight>::min())
    throw OverflowError("value does not fit in 64 bits");
  return static_cast<Weight>(v);
}

}  // namespace mechflow
