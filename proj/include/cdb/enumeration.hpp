#pragma once

#include "cdb/automaton.hpp"
#include "cdb/core.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace cdb {

using BigCount = boost::multiprecision::cpp_int;

struct CountQuery {
  std::size_t n = 0;
  ConstraintParams c;
};

/// |C_DB(n,b,k)| by dynamic programming over the prefix automaton.
BigCount count_exact(const CountQuery& q, std::size_t state_budget = kDefaultStateBudget);

/// |A(n; f)| for an arbitrary pattern set.
BigCount count_avoiding(const PatternSet& f, std::size_t n, std::size_t state_budget = kDefaultStateBudget);

inline constexpr std::uint64_t kDefaultBruteCap = std::uint64_t{1} << 24;

/// Exhaustive filter of all sigma^n words through is_constrained_acyclic.
BigCount count_brute(const CountQuery& q, std::uint64_t cap = kDefaultBruteCap);

/// Number of cyclic words (up to rotation) of length n that are cyclically
/// constrained. Brute force; n <= 20.
BigCount count_cyclic_brute(const CountQuery& q, std::uint64_t cap = kDefaultBruteCap);

/// Closed form for k = 1: C(sigma,b) b! (sigma-b+1)^(n-b) when n >= b, 0 if
/// b > sigma. For n < b every symbol must differ, giving the falling
/// factorial sigma (sigma-1) ... (sigma-n+1).
BigCount count_k1(std::size_t n, std::uint32_t b, std::uint32_t sigma);

/// b = 1 is unconstrained: sigma^n.
BigCount count_b1(std::size_t n, std::uint32_t sigma);

/// (sigma!)^(sigma^(k-1)): the count for b = sigma^k once n >= sigma^k + k - 1.
BigCount count_full_window(std::uint32_t k, std::uint32_t sigma);

struct RedundancyBound {
  double bound = 0;                   // sigma^n (1 - (b-1) n sigma^-k)
  bool single_symbol_regime = false;  // k >= ceil(log n + log(b-1)) + 1, logs base sigma
};

/// Lower bound on |C_DB(n,b,k)| for 2 <= b < k.
RedundancyBound redundancy_lower_bound(std::size_t n, const ConstraintParams& c);

/// Largest real root of x^(2k-1) = sum_l c_l x^(2k-1-l) where c_l counts
/// pairs (i, j), 1 <= i <= k-1, 1 <= j <= k, i + j = l. log2 of the root is
/// the binary (3,k) capacity. Bisection on [1, 2] to 1e-10.
double b3_polynomial_root(std::uint32_t k);

/// Coefficients c_2 .. c_(2k-1) of the characteristic recursion above.
std::vector<std::uint64_t> b3_recursion_coefficients(std::uint32_t k);

struct B3Counts {
  BigCount starting_with_zero;
  BigCount starting_with_one;
  BigCount total;
};

/// Binary words of length n avoiding {0^k, 1^(k+1)}, by the mutual recursion on
/// words starting with 0 and with 1. count_exact(n+1, b=3, k) == 2 * total.
B3Counts count_recursion_b3(std::size_t n, std::uint32_t k);

/// Lexicographic rank/unrank of C_DB(n,b,k) from a table of completion counts
/// per (prefix-automaton state, remaining length).
class Enumerator {
 public:
  Enumerator(const ConstraintParams& c, std::size_t n, std::size_t state_budget = kDefaultStateBudget);

  const ConstraintParams& params() const noexcept { return params_; }
  std::size_t length() const noexcept { return n_; }
  const BigCount& count() const;

  /// Throws DomainError if s is not a constrained word of length n.
  BigCount rank(WordView s) const;
  /// Throws DomainError if r >= count().
  Word unrank(const BigCount& r) const;

 private:
  const BigCount& completions(std::size_t remaining, ConstraintAutomaton::State s) const;

  ConstraintParams params_;
  std::size_t n_;
  ConstraintAutomaton automaton_;
  std::vector<BigCount> table_;  // (n+1) * states
};

struct CapacityCell {
  std::uint32_t b = 0;
  std::uint32_t k = 0;
  bool ok = false;
  PerronResult result;
  std::string error;  // set when !ok
  bool published = false;
};

struct CapacityTable {
  std::uint32_t sigma = 2;
  std::vector<std::uint32_t> b_values;
  std::vector<std::uint32_t> k_values;
  std::vector<CapacityCell> cells;  // row major over b, then k

  const CapacityCell& cell(std::uint32_t b, std::uint32_t k) const;
  /// header "b\k,<k values>", one row per b, 4 decimals; failed cells print ERR
  /// and cells with b >= 2 but no reference rate end in "?"
  std::string to_csv() const;
  std::string to_json() const;
};

/// True for the binary cells with a published reference rate
/// (2 <= b <= 5 with 2 <= k <= 10, and b = 6 with 2 <= k <= 7).
bool has_published_rate(std::uint32_t b, std::uint32_t k, std::uint32_t sigma) noexcept;

CapacityTable capacity_table(std::uint32_t b_min, std::uint32_t b_max, std::uint32_t k_min, std::uint32_t k_max,
                             std::uint32_t sigma, double tol = kDefaultTolerance,
                             std::size_t state_budget = kDefaultStateBudget);

std::string to_string(const BigCount& v);
BigCount parse_big_count(const std::string& decimal);

}  // namespace cdb
