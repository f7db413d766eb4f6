#pragma once

#include "cdb/core.hpp"
#include "cdb/patterns.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace cdb {

enum class AutomatonForm {
  Window,  // labels are the last min(b+k-2, length) symbols
  Prefix,  // labels are the longest suffix that is a proper prefix of a forbidden word
};

inline constexpr std::size_t kDefaultStateBudget = std::size_t{1} << 22;

/// Deterministic labeled graph whose accepted paths from the initial state
/// spell exactly the constrained words.
class ConstraintAutomaton {
 public:
  using State = std::uint32_t;
  static constexpr State kNone = std::numeric_limits<State>::max();

  ConstraintAutomaton() = default;
  ConstraintAutomaton(std::uint32_t sigma, std::vector<Word> labels, std::vector<State> next, State initial);

  std::uint32_t sigma() const noexcept { return sigma_; }
  std::size_t num_states() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  State initial() const noexcept { return initial_; }
  const Word& label(State s) const { return labels_.at(s); }
  State next(State s, Symbol a) const noexcept { return next_[std::size_t(s) * sigma_ + a]; }
  std::size_t num_transitions() const noexcept;

  /// Runs w from the initial state; false as soon as a transition is missing.
  bool accepts(WordView w) const;

  /// {"initial": i, "sigma": s, "states": [{"index", "label"}], "transitions": [{"from", "symbol", "to"}]}
  std::string to_json() const;

 private:
  std::uint32_t sigma_ = 2;
  std::vector<Word> labels_;
  std::vector<State> next_;  // num_states * sigma, kNone for missing edges
  State initial_ = kNone;
};

ConstraintAutomaton build_automaton(const ConstraintParams& c, AutomatonForm form,
                                    std::size_t state_budget = kDefaultStateBudget);

/// Aho-Corasick automaton over the words avoiding f. States are the proper
/// prefixes of patterns that do not end in a pattern.
ConstraintAutomaton build_avoiding_automaton(const PatternSet& f,
                                             std::size_t state_budget = kDefaultStateBudget);

/// Restriction to states lying on arbitrarily long paths: reachable from a
/// cycle and able to reach a cycle. The initial state is kept only if it
/// survives.
ConstraintAutomaton essential_component(const ConstraintAutomaton& a);

/// Sparse nonnegative matrix; entry (u, v) is the number of symbols on edges u -> v.
struct TransferMatrix {
  std::uint32_t sigma = 2;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> rows;

  std::size_t dimension() const noexcept { return rows.size(); }
  std::uint32_t at(std::size_t u, std::size_t v) const;
  std::string to_csv() const;
};

TransferMatrix transfer_matrix(const ConstraintAutomaton& a);

/// Strongly connected components, each sorted, in reverse topological order.
std::vector<std::vector<std::uint32_t>> strongly_connected_components(const TransferMatrix& m);

struct PerronResult {
  double lambda = 0;
  double capacity = 0;  // log_sigma(lambda), 0 when lambda <= 1
  std::size_t iterations = 0;
  double residual = 0;
};

inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr std::size_t kDefaultIterationCap = 1'000'000;

/// Power iteration on each strongly connected component of (M + I), bracketing
/// the root between the min and max Collatz-Wielandt ratios. lambda is the
/// maximum over components. Throws NumericError if the bracket does not close
/// to `tol` within the cap.
PerronResult largest_eigenvalue(const TransferMatrix& m, double tol = kDefaultTolerance,
                                std::size_t max_iterations = kDefaultIterationCap);

/// Capacity of the (b,k) constraint via the prefix automaton.
PerronResult constraint_capacity(const ConstraintParams& c, double tol = kDefaultTolerance,
                                 std::size_t state_budget = kDefaultStateBudget);

}  // namespace cdb
