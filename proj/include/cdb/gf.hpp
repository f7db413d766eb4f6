#pragma once

#include "cdb/core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cdb {

/// F_q with q = p^m. Elements are integers 0..q-1 whose base-p digits are the
/// coefficients of the residue modulo `modulus` (low digit = constant term).
struct FieldSpec {
  std::uint32_t p = 2;
  std::uint32_t m = 1;
  std::vector<std::uint32_t> modulus;  // monic, low-to-high over F_p; {0, 1} when m = 1

  std::uint32_t q() const noexcept;
  /// Throws InvalidInput unless p is prime, q <= 2^16 and the modulus is an irreducible monic of degree m.
  void validate() const;
  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

/// Lexicographically least monic irreducible of degree m over F_p, by integer
/// encoding of the lower coefficients.
FieldSpec default_field_spec(std::uint32_t q);

class Field {
 public:
  using Element = std::uint32_t;

  explicit Field(std::uint32_t q) : Field(default_field_spec(q)) {}
  explicit Field(FieldSpec spec);

  const FieldSpec& spec() const noexcept { return spec_; }
  std::uint32_t q() const noexcept { return q_; }
  std::uint32_t characteristic() const noexcept { return spec_.p; }
  bool contains(Element a) const noexcept { return a < q_; }

  Element add(Element a, Element b) const noexcept;
  Element sub(Element a, Element b) const noexcept;
  Element neg(Element a) const noexcept;
  Element mul(Element a, Element b) const noexcept;
  /// Throws DomainError on zero.
  Element inv(Element a) const;
  Element div(Element a, Element b) const { return mul(a, inv(b)); }
  Element pow(Element a, std::uint64_t e) const noexcept;
  /// A fixed primitive element; its powers index the log tables.
  Element generator() const noexcept { return exp_[1]; }

 private:
  FieldSpec spec_;
  std::uint32_t q_;
  std::vector<Element> exp_;  // 2(q-1) entries
  std::vector<std::uint32_t> log_;
};

/// Coefficients over a Field, low-to-high. Trailing zeros are trimmed.
struct Polynomial {
  std::vector<Field::Element> coeffs;

  Polynomial() = default;
  explicit Polynomial(std::vector<Field::Element> c);

  bool is_zero() const noexcept { return coeffs.empty(); }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return int(coeffs.size()) - 1; }
  Field::Element at(std::size_t i) const noexcept { return i < coeffs.size() ? coeffs[i] : 0; }
  friend auto operator<=>(const Polynomial&, const Polynomial&) = default;
};

/// "1,1,0,1" is 1 + x + x^3.
Polynomial parse_polynomial(const std::string& text, const Field& f);
std::string format_polynomial(const Polynomial& p);

Polynomial poly_add(const Polynomial& a, const Polynomial& b, const Field& f);
Polynomial poly_mul(const Polynomial& a, const Polynomial& b, const Field& f);
/// Remainder of a modulo a nonzero m.
Polynomial poly_mod(const Polynomial& a, const Polynomial& m, const Field& f);
Polynomial poly_pow_mod(const Polynomial& base, std::uint64_t e, const Polynomial& m, const Field& f);

/// Distinct primes dividing n, by trial division.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

/// x has multiplicative order q^k - 1 modulo poly, k = deg poly, and poly(0) != 0.
/// Throws ResourceError when q^k - 1 exceeds 2^40.
bool is_primitive(const Polynomial& poly, const Field& f);

/// Every primitive monic polynomial of degree k, ordered by integer encoding
/// of the coefficients.
std::vector<Polynomial> enumerate_primitive_polys(const Field& f, std::uint32_t k);

/// Linear feedback shift register for the connection polynomial
/// c(x) = c_0 + c_1 x + ... + c_k x^k with c_0 != 0 and c_k != 0:
/// s[t+k] = sum_i a_i s[t+k-i] with a_i = -c_i / c_0.
class Lfsr {
 public:
  Lfsr(const Field& f, const Polynomial& connection, Word seed);

  std::size_t order() const noexcept { return taps_.size(); }
  const Word& state() const noexcept { return state_; }
  /// Emits the oldest state symbol and shifts in the feedback.
  Symbol step();
  Word run(std::size_t count);

 private:
  const Field* field_;
  std::vector<Field::Element> taps_;  // a_1..a_k
  Word state_;                        // s[t] .. s[t+k-1]
};

struct MSequence {
  std::uint32_t q = 2;
  std::uint32_t k = 1;
  Word word;  // length q^k - 1, read cyclically
  Polynomial generator;
};

/// One period of the LFSR output started from 0^(k-1) 1, canonicalized.
/// Throws DomainError if poly is not primitive.
MSequence lfsr_msequence(const Polynomial& poly, const Field& f);

/// Rotation ending in 0^(k-1). The run occurs q-1 times for q > 2; the
/// lexicographically least such rotation is returned.
Word canonicalize_msequence(const MSequence& m);

/// Every primitive polynomial's m-sequence, in enumeration order.
std::vector<MSequence> all_msequences(const Field& f, std::uint32_t k);

/// True iff each 2k-tuple appears at most once as a cyclic window across the set.
bool verify_pairwise_2k(const std::vector<MSequence>& seqs, std::uint32_t k);

/// Cycles of the LFSR state graph: each entry is the output word along one
/// cycle, starting from its least state. Throws ResourceError when q^deg exceeds the budget.
std::vector<Word> lfsr_cycles(const Polynomial& connection, const Field& f, std::size_t state_budget = 1u << 22);

}  // namespace cdb
