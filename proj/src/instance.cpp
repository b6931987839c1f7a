#include "mechflow/instance.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <random>
#include <sstream>

namespace mechflow {

namespace {

// Sum with overflow detection; returns false when the sum leaves the range.
bool safe_sum(const WeightVector& v, Weight& out) {
  Weight s = 0;
  for (Index k = 0; k < v.size(); ++k)
    if (__builtin_add_overflow(s, v(k), &s)) return false;
  out = s;
  return true;
}

}  // namespace

ValidationReport validate(const Instance& inst) {
  ValidationReport report;
  const Index m = inst.rows();
  const Index n = inst.cols();
  if (m < 1 || n < 1)
    report.failures.push_back({ValidationCheck::Dimensions, "m and n must both be positive"});
  if (inst.c.rows() != m || inst.c.cols() != n) {
    std::ostringstream msg;
    msg << "cost matrix is " << inst.c.rows() << "x" << inst.c.cols() << ", expected " << m << "x"
        << n;
    report.failures.push_back({ValidationCheck::Dimensions, msg.str()});
  }
  for (Index i = 0; i < m; ++i)
    if (inst.a(i) < 0) {
      report.failures.push_back(
          {ValidationCheck::Nonnegativity, "a[" + std::to_string(i + 1) + "] is negative"});
      break;
    }
  for (Index j = 0; j < n; ++j)
    if (inst.b(j) < 0) {
      report.failures.push_back(
          {ValidationCheck::Nonnegativity, "b[" + std::to_string(j + 1) + "] is negative"});
      break;
    }
  Weight sa = 0, sb = 0;
  if (!safe_sum(inst.a, sa) || !safe_sum(inst.b, sb)) {
    report.failures.push_back({ValidationCheck::Range, "supply or demand total exceeds 64 bits"});
  } else if (sa != sb) {
    report.failures.push_back({ValidationCheck::Balance, "balance violated: sum a = " +
                                                             std::to_string(sa) + ", sum b = " +
                                                             std::to_string(sb)});
  }
  return report;
}

GeneratorConfig GeneratorConfig::benchmark(Index n, bool degenerate, std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.m = n;
  cfg.n = n;
  cfg.a_max = std::max<Weight>(160000 / n, 2);
  cfg.b_max = cfg.a_max;
  cfg.c_max = degenerate ? 20 : n * n;
  cfg.seed = seed;
  return cfg;
}

void rebalance(WeightVector& a, WeightVector& b) {
  const Weight sa = a.sum();
  const Weight sb = b.sum();
  if (sa == sb) return;
  WeightVector& low = sa < sb ? a : b;
  const Weight delta = sa < sb ? sb - sa : sa - sb;
  const Weight len = low.size();
  if (len == 0) throw std::invalid_argument("cannot rebalance against an empty vector");
  // Equivalent to handing out one unit at a time, round-robin from index 0.
  low.array() += delta / len;
  for (Index k = 0; k < delta % len; ++k) low(k) += 1;
}

Instance gen_random(const GeneratorConfig& cfg) {
  if (cfg.m < 1 || cfg.n < 1) throw std::invalid_argument("generator dimensions must be positive");
  if (cfg.a_max < 1 || cfg.b_max < 1 || cfg.c_max < 1)
    throw std::invalid_argument("generator bounds must be positive");
  if (checked_mul(cfg.m, cfg.a_max) != checked_mul(cfg.n, cfg.b_max))
    throw std::invalid_argument("generator requires m * a_max == n * b_max");

  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<Weight> ua(1, cfg.a_max), ub(1, cfg.b_max), uc(1, cfg.c_max);
  Instance inst;
  inst.a.resize(cfg.m);
  inst.b.resize(cfg.n);
  inst.c.resize(cfg.m, cfg.n);
  for (Index i = 0; i < cfg.m; ++i) inst.a(i) = ua(rng);
  for (Index j = 0; j < cfg.n; ++j) inst.b(j) = ub(rng);
  for (Index i = 0; i < cfg.m; ++i)
    for (Index j = 0; j < cfg.n; ++j) inst.c(i, j) = uc(rng);
  rebalance(inst.a, inst.b);
  return inst;
}

Instance gen_worst_case(Index n) {
  if (n < 2) throw std::invalid_argument("worst-case instance needs n >= 2");
  if (n > kWorstCaseMaxN)
    throw std::invalid_argument("worst-case instance is capped at n = " +
                                std::to_string(kWorstCaseMaxN));
  Instance inst;
  inst.a.resize(n);
  inst.b.resize(n);
  inst.c.resize(n, n);
  inst.a(0) = 1;
  inst.b(0) = 2;
  for (Index k = 1; k < n - 1; ++k) {
    inst.a(k) = checked_add(inst.a(k - 1), inst.b(k - 1));
    inst.b(k) = checked_add(inst.b(k - 1), inst.a(k));
  }
  inst.a(n - 1) = checked_add(inst.a(n - 2), inst.b(n - 2));
  inst.b(n - 1) = inst.b(n - 2);

  const Weight nn = checked_mul(n, n);
  for (Index i = 1; i <= n; ++i) {
    for (Index j = 1; j <= n; ++j) {
      const Weight base = (n + 1 - i) * (n + 1 - j);
      Weight pow_term;
      if (i == j)
        pow_term = checked_add(Weight{1} << i, Weight{1} << j);
      else
        pow_term = Weight{1} << std::max(i, j);
      inst.c(i - 1, j - 1) = checked_sub(base, checked_mul(nn, pow_term));
    }
  }
  return inst;
}

Instance gen_assignment(Index n, Weight c_max, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("assignment instance needs n >= 1");
  if (c_max < 1) throw std::invalid_argument("c_max must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Weight> uc(1, c_max);
  Instance inst;
  inst.a = WeightVector::Ones(n);
  inst.b = WeightVector::Ones(n);
  inst.c.resize(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) inst.c(i, j) = uc(rng);
  return inst;
}

namespace {

std::vector<std::string_view> tokenize(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    const auto first = line.find_first_not_of(" \t\r\f\v");
    if (first == std::string_view::npos || line[first] == '#') continue;
    std::size_t k = first;
    while (k < line.size()) {
      while (k < line.size() && std::isspace(static_cast<unsigned char>(line[k]))) ++k;
      std::size_t start = k;
      while (k < line.size() && !std::isspace(static_cast<unsigned char>(line[k]))) ++k;
      if (k > start) tokens.push_back(line.substr(start, k - start));
    }
  }
  return tokens;
}

bool to_integer(std::string_view tok, Weight& out) {
  const char* begin = tok.data();
  const char* end = tok.data() + tok.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && begin != end;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  const auto tokens = tokenize(text);
  if (tokens.empty()) throw ParseError(ParseErrorKind::MissingHeader, "missing header");
  if (tokens.size() < 2)
    throw ParseError(ParseErrorKind::MalformedHeader, "malformed header: expected 'm n'");
  Weight m = 0, n = 0;
  if (!to_integer(tokens[0], m) || !to_integer(tokens[1], n) || m < 1 || n < 1)
    throw ParseError(ParseErrorKind::MalformedHeader,
                     "malformed header: m and n must be positive integers");

  // Guard the expected token count before allocating anything.
  Weight cells = 0, expected = 0;
  if (__builtin_mul_overflow(m, n, &cells) || __builtin_add_overflow(cells, m, &expected) ||
      __builtin_add_overflow(expected, n, &expected) ||
      static_cast<std::size_t>(expected) != tokens.size() - 2) {
    std::ostringstream msg;
    msg << "wrong count: header " << m << " " << n << " requires m + n + m*n values, found "
        << tokens.size() - 2;
    throw ParseError(ParseErrorKind::WrongCount, msg.str());
  }

  std::size_t cursor = 2;
  auto next = [&]() {
    Weight v = 0;
    const auto tok = tokens[cursor];
    if (!to_integer(tok, v))
      throw ParseError(ParseErrorKind::NonInteger,
                       "non-integer token '" + std::string(tok) + "' at position " +
                           std::to_string(cursor + 1));
    ++cursor;
    return v;
  };

  Instance inst;
  inst.a.resize(m);
  inst.b.resize(n);
  inst.c.resize(m, n);
  for (Index i = 0; i < m; ++i) inst.a(i) = next();
  for (Index j = 0; j < n; ++j) inst.b(j) = next();
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) inst.c(i, j) = next();

  const auto report = validate(inst);
  if (!report.ok()) throw ParseError(ParseErrorKind::Invalid, report.failures.front().message);
  return inst;
}

std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  out << inst.rows() << ' ' << inst.cols() << '\n';
  auto line = [&out](auto&& values) {
    for (Index k = 0; k < values.size(); ++k) out << (k ? " " : "") << values(k);
    out << '\n';
  };
  line(inst.a);
  line(inst.b);
  for (Index i = 0; i < inst.rows(); ++i) line(inst.c.row(i));
  return out.str();
}

}  // namespace mechflow
