#pragma once

#include "cdb/core.hpp"

#include <set>
#include <vector>

namespace cdb {

/// A duplicate-free set of forbidden words over one alphabet.
class PatternSet {
 public:
  PatternSet() = default;
  PatternSet(std::uint32_t sigma, std::vector<Word> patterns);

  std::uint32_t sigma() const noexcept { return sigma_; }
  const std::vector<Word>& patterns() const noexcept { return patterns_; }
  std::size_t size() const noexcept { return patterns_.size(); }
  bool empty() const noexcept { return patterns_.empty(); }
  bool contains(WordView w) const;
  std::size_t max_length() const noexcept;

  friend bool operator==(const PatternSet&, const PatternSet&) = default;

 private:
  std::uint32_t sigma_ = 2;
  std::vector<Word> patterns_;  // sorted, unique
};

inline constexpr std::size_t kMaxFamilySize = std::size_t{1} << 22;

/// Union over 1 <= p <= b-1 of all words of length p+k whose least period is
/// exactly p. Empty when b < 2.
PatternSet forbidden_family(const ConstraintParams& c);

/// Drops patterns that contain another pattern, then replaces every complete
/// sibling family {u.a : a in alphabet} by u, until neither rule applies.
///
/// Substring elimination leaves the avoiding set unchanged. Sibling collapse
/// only preserves it up to the word tail: a word may end in u without ending
/// in a full u.a, so A(n; reduced) can be a strict subset of A(n; f). Every
/// word of A(n; f) that extends to the right by max_length() symbols is kept.
PatternSet reduce_forbidden(const PatternSet& f);

/// True iff no pattern of f occurs as a contiguous substring of s.
bool avoids(WordView s, const PatternSet& f);

}  // namespace cdb
