#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cdb {

using Symbol = std::uint16_t;
using Word = std::vector<Symbol>;
using WordView = std::span<const Symbol>;

inline constexpr std::uint32_t kMaxSigma = 1u << 16;

/// Symbols are 0..sigma-1.
struct Alphabet {
  std::uint32_t sigma = 2;

  void validate() const;
  bool contains(Symbol s) const noexcept { return s < sigma; }
};

/// (b, k) over an alphabet of size sigma: no k-tuple repeats among any b
/// consecutive k-windows.
struct ConstraintParams {
  std::uint32_t b = 1;
  std::uint32_t k = 1;
  std::uint32_t sigma = 2;

  void validate() const;
  Alphabet alphabet() const noexcept { return Alphabet{sigma}; }
  friend bool operator==(const ConstraintParams&, const ConstraintParams&) = default;
};

/// m-limited length for period-p substrings.
struct LpParams {
  std::size_t m = 1;
  std::size_t p = 1;
};

/// A word read with wraparound. Equality is rotation invariant.
class CyclicWord {
 public:
  CyclicWord() = default;
  explicit CyclicWord(Word symbols) : symbols_(std::move(symbols)) {}

  const Word& symbols() const noexcept { return symbols_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  Symbol at(std::size_t i) const { return symbols_[i % symbols_.size()]; }

  friend bool operator==(const CyclicWord& a, const CyclicWord& b);

 private:
  Word symbols_;
};

/// Throws InvalidInput if any symbol is outside the alphabet.
void check_symbols(WordView s, Alphabet a);

bool is_constrained_acyclic(WordView s, const ConstraintParams& c);
bool is_constrained_cyclic(const CyclicWord& s, const ConstraintParams& c);

/// Least p >= 1 with s[i] == s[i+p] wherever both exist.
std::size_t period_of(WordView s);

/// True iff s[i] == s[i+p] for all valid i.
bool has_period(WordView s, std::size_t p) noexcept;

bool is_lp_member(WordView s, const LpParams& lp);

/// Lexicographically least rotation.
Word canonical_rotation(const CyclicWord& s);

/// Position of the least rotation in s.
std::size_t least_rotation_index(WordView s);

// Word text format: one word per line, base-10 symbols separated by single
// spaces, optional first line "# sigma=<n>".
struct WordFile {
  std::uint32_t sigma = 0;  // 0 when no header was present
  std::vector<Word> words;
};

WordFile parse_word_file(const std::string& text);
std::string format_word(WordView s);
std::string format_word_file(const std::vector<Word>& words, std::uint32_t sigma);

}  // namespace cdb
