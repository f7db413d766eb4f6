#pragma once

#include "cdb/core.hpp"
#include "cdb/enumeration.hpp"
#include "cdb/gf.hpp"

#include <cstdint>
#include <vector>

namespace cdb {

struct Construction1Block {
  Polynomial generator;  // primitive, degree k
  std::uint32_t epsilon = 0;  // trailing zeros, 0..k+1
};

struct Construction1Choice {
  std::vector<Construction1Block> blocks;
};

/// Concatenations s_1 0^e_1 s_2 0^e_2 ... s_l 0^e_l of canonical m-sequences
/// of order k over F_q, each a (q^k - 1, 2k)-constrained word.
class Construction1Code {
 public:
  /// Throws DomainError for k < 3 or ell < 1.
  Construction1Code(std::uint32_t q, std::uint32_t k, std::uint32_t ell);

  std::uint32_t q() const noexcept { return field_.q(); }
  std::uint32_t k() const noexcept { return k_; }
  std::uint32_t ell() const noexcept { return ell_; }
  const Field& field() const noexcept { return field_; }
  const std::vector<MSequence>& sequences() const noexcept { return sequences_; }

  /// Choices per block: (number of m-sequences) * (k + 2).
  std::uint64_t block_choices() const noexcept { return sequences_.size() * (k_ + 2); }
  BigCount size() const;
  std::size_t period() const noexcept { return sequences_.front().word.size(); }
  std::size_t min_length() const noexcept { return ell_ * period(); }
  std::size_t max_length() const noexcept { return ell_ * (period() + k_ + 1); }
  /// (q^k - 1, 2k) over F_q.
  ConstraintParams constraint() const noexcept;
  /// floor(ell (k + 1) / 2)
  std::uint32_t cyclic_zero_budget() const noexcept { return ell_ * (k_ + 1) / 2; }

  Word encode(const Construction1Choice& c) const;

  /// Mixed radix over block_choices(), first block most significant; within a
  /// block, digit = generator_index * (k + 2) + epsilon.
  Construction1Choice choice_from_index(const BigCount& index) const;
  BigCount index_of(const Construction1Choice& c) const;

  /// Lexicographically least codeword: (s_min 0^(k+1))^ell.
  Word reference_codeword() const;
  /// encode(choice_from_index(index)) extended by a prefix of the reference
  /// codeword to length ell (q^k + k).
  Word encode_fixed_length(const BigCount& index) const;
  std::size_t fixed_length() const noexcept { return max_length(); }

  /// Throws DomainError unless the epsilons sum to cyclic_zero_budget().
  CyclicWord encode_cyclic(const Construction1Choice& c) const;

 private:
  std::size_t generator_index(const Polynomial& p) const;
  void check(const Construction1Choice& c) const;

  Field field_;
  std::uint32_t k_;
  std::uint32_t ell_;
  std::vector<MSequence> sequences_;
};

/// Every de Bruijn cycle of order k over sigma symbols, each written starting
/// at 0^k, in lexicographic order. Throws ResourceError past `limit` cycles.
std::vector<Word> de_bruijn_cycles(std::uint32_t sigma, std::uint32_t k, std::size_t limit = 1u << 16);

/// True iff the cyclic words share a cyclic window of the given length.
bool share_window(const Word& a, const Word& b, std::size_t length);

struct IndependentSetOptions {
  std::uint64_t seed = 1;
  std::size_t iterations = 200000;  // local-search perturbations
};

struct IndependentSetResult {
  std::uint32_t sigma = 2;
  std::uint32_t k = 1;
  std::uint32_t delta = 0;
  std::size_t cycles = 0;
  std::size_t conflicts = 0;  // edges in the conflict graph
  std::vector<Word> members;  // chosen cycles, sorted
};

/// Large set of order-k de Bruijn cycles with no common cyclic window of
/// length k + delta + 1 between any two of them. Greedy start, then iterated
/// local search with (1,2)-swaps under a seeded perturbation.
IndependentSetResult db_independent_set(std::uint32_t sigma, std::uint32_t k, std::uint32_t delta,
                                        const IndependentSetOptions& options = {});

}  // namespace cdb
