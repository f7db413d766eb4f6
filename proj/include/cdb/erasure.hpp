#pragma once

#include "cdb/core.hpp"
#include "cdb/gf.hpp"

#include <cstdint>
#include <vector>

namespace cdb {

/// q-ary code of length n that fills in any t erased positions.
struct ErasureCodeSpec {
  std::uint32_t q = 2;
  std::size_t n = 1;
  std::size_t t = 0;
};

/// Systematic Reed-Solomon erasure code. When q >= n the code is MDS over F_q
/// with n - t data symbols. Otherwise s consecutive symbols are packed into
/// one symbol of F_(q^s), using the least s with q^s >= ceil(n / s); the
/// first packed symbol is topped up with zeros that are never stored. Any t
/// erased positions touch at most t packed symbols.
class ErasureCode {
 public:
  /// Throws InvalidInput when no packing exists or t >= n.
  explicit ErasureCode(ErasureCodeSpec spec);

  const ErasureCodeSpec& spec() const noexcept { return spec_; }
  std::size_t group_size() const noexcept { return group_; }
  std::uint32_t packed_field_size() const noexcept { return field_.q(); }
  /// Number of q-ary message symbols.
  std::size_t data_length() const noexcept { return (groups() - spec_.t) * group_ - padding(); }

  /// Data symbols first, then parity.
  Word encode(WordView data) const;
  /// Full codeword from a received word whose listed positions are unknown.
  /// Throws DecodeError when more than t positions are erased or when the
  /// surviving symbols are not consistent with a single codeword.
  Word decode(WordView received, const std::vector<std::size_t>& erasures) const;
  Word extract_data(WordView codeword) const;

 private:
  std::size_t groups() const noexcept { return (spec_.n + group_ - 1) / group_; }
  std::size_t padding() const noexcept { return groups() * group_ - spec_.n; }
  std::vector<Field::Element> pack(WordView w) const;
  Word unpack(const std::vector<Field::Element>& v) const;
  /// Values at every evaluation point of the polynomial through (xs[i], ys[i]).
  std::vector<Field::Element> interpolate_all(const std::vector<std::size_t>& xs,
                                              const std::vector<Field::Element>& ys) const;

  ErasureCodeSpec spec_;
  std::size_t group_ = 1;
  Field field_;
};

}  // namespace cdb
