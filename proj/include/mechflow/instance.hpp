#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mechflow/core.hpp"

namespace mechflow {

/// A balanced transportation problem in maximization form: find f >= 0 with
/// row sums a and column sums b maximizing sum c(i,j) f(i,j).
struct Instance {
  WeightVector a;  // row supplies, size m
  WeightVector b;  // column demands, size n
  CostMatrix c;    // m x n profit coefficients, any sign

  Index rows() const { return a.size(); }
  Index cols() const { return b.size(); }

  friend bool operator==(const Instance& x, const Instance& y) {
    return x.a.size() == y.a.size() && x.b.size() == y.b.size() && x.c.rows() == y.c.rows() &&
           x.c.cols() == y.c.cols() && x.a == y.a && x.b == y.b && x.c == y.c;
  }
};

enum class ValidationCheck { Dimensions, Nonnegativity, Balance, Range };

struct ValidationFailure {
  ValidationCheck check;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationFailure> failures;

  bool ok() const { return failures.empty(); }
  bool failed(ValidationCheck check) const {
    for (const auto& f : failures)
      if (f.check == check) return true;
    return false;
  }
};

ValidationReport validate(const Instance& inst);

/// Parameters of the random instance model: a in [1,a_max], b in [1,b_max],
/// c in [1,c_max], with m * a_max == n * b_max.
struct GeneratorConfig {
  Index m = 1;
  Index n = 1;
  Weight a_max = 1;
  Weight b_max = 1;
  Weight c_max = 1;
  std::uint64_t seed = 0;

  /// Degeneracy ratio c_max / (m n).
  double c_star() const { return static_cast<double>(c_max) / static_cast<double>(m * n); }

  /// Square benchmark protocol: a_max = b_max = max(160000 / n, 2), c_max = n^2
  /// (c_star = 1) or 20 when degenerate.
  static GeneratorConfig benchmark(Index n, bool degenerate, std::uint64_t seed);
};

Instance gen_random(const GeneratorConfig& cfg);

/// Largest n accepted by gen_worst_case; the Fibonacci supplies of n = 46
/// already sum past 2^63.
inline constexpr Index kWorstCaseMaxN = 45;

/// Exponential worst-case instance: Fibonacci supplies and geometrically
/// growing costs. Requires 2 <= n <= kWorstCaseMaxN.
Instance gen_worst_case(Index n);

Instance gen_assignment(Index n, Weight c_max, std::uint64_t seed);

/// Adds one unit round-robin (starting at index 0) to the entries of the
/// smaller-sum vector until both sums agree.
void rebalance(WeightVector& a, WeightVector& b);

enum class ParseErrorKind { MissingHeader, MalformedHeader, NonInteger, WrongCount, Invalid };

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ParseErrorKind kind() const { return kind_; }

 private:
  ParseErrorKind kind_;
};

/// Whitespace-separated text: "m n", then a, then b, then m rows of c.
/// Lines whose first non-blank character is '#' are ignored.
Instance parse_instance(std::string_view text);
std::string serialize_instance(const Instance& inst);

}  // namespace mechflow
