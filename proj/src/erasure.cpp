#include "cdb/erasure.hpp"

#include "cdb/error.hpp"

#include <algorithm>

namespace cdb {

namespace {

std::uint64_t ipow(std::uint64_t base, std::size_t e) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) {
    r *= base;
    if (r > (1u << 16)) return r;
  }
  return r;
}

std::size_t choose_group(const ErasureCodeSpec& s) {
  for (std::size_t g = 1; g <= s.n; ++g) {
    const std::uint64_t size = ipow(s.q, g);
    if (size > (1u << 16)) break;
    const std::size_t groups = (s.n + g - 1) / g;
    if (size >= groups && groups > s.t) return g;
  }
  throw InvalidInput("no Reed-Solomon packing for q=" + std::to_string(s.q) + ", n=" + std::to_string(s.n) +
                     ", t=" + std::to_string(s.t));
}

}  // namespace

ErasureCode::ErasureCode(ErasureCodeSpec spec)
    : spec_(spec), group_(choose_group(spec)), field_(std::uint32_t(ipow(spec.q, group_))) {
  default_field_spec(spec.q);  // q itself must be a prime power
  if (spec_.n == 0) throw InvalidInput("code length must be positive");
  if (data_length() == 0) throw InvalidInput("erasure capability leaves no data symbols");
}

std::vector<Field::Element> ErasureCode::pack(WordView w) const {
  Word padded(padding(), 0);
  padded.insert(padded.end(), w.begin(), w.end());
  std::vector<Field::Element> v(groups(), 0);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = group_; j-- > 0;) v[i] = v[i] * spec_.q + padded[i * group_ + j];
  return v;
}

Word ErasureCode::unpack(const std::vector<Field::Element>& v) const {
  Word w(v.size() * group_);
  for (std::size_t i = 0; i < v.size(); ++i) {
    Field::Element x = v[i];
    for (std::size_t j = 0; j < group_; ++j, x /= spec_.q) w[i * group_ + j] = Symbol(x % spec_.q);
  }
  return Word(w.begin() + std::ptrdiff_t(padding()), w.end());
}

std::vector<Field::Element> ErasureCode::interpolate_all(const std::vector<std::size_t>& xs,
                                                         const std::vector<Field::Element>& ys) const {
  // Lagrange form evaluated at every point 0..groups()-1; points are field elements by index
  const std::size_t g = groups();
  std::vector<Field::Element> out(g, 0);
  for (std::size_t at = 0; at < g; ++at) {
    Field::Element sum = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      Field::Element num = 1, den = 1;
      for (std::size_t j = 0; j < xs.size(); ++j) {
        if (j == i) continue;
        num = field_.mul(num, field_.sub(Field::Element(at), Field::Element(xs[j])));
        den = field_.mul(den, field_.sub(Field::Element(xs[i]), Field::Element(xs[j])));
      }
      sum = field_.add(sum, field_.mul(ys[i], field_.div(num, den)));
    }
    out[at] = sum;
  }
  return out;
}

Word ErasureCode::encode(WordView data) const {
  if (data.size() != data_length())
    throw InvalidInput("expected " + std::to_string(data_length()) + " data symbols, got " +
                       std::to_string(data.size()));
  check_symbols(data, Alphabet{spec_.q});
  Word message(data.begin(), data.end());
  message.resize(spec_.n, 0);
  const auto packed = pack(message);
  std::vector<std::size_t> xs(groups() - spec_.t);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = i;
  return unpack(interpolate_all(xs, packed));
}

Word ErasureCode::decode(WordView received, const std::vector<std::size_t>& erasures) const {
  if (received.size() != spec_.n) throw InvalidInput("received word has the wrong length");
  std::vector<bool> lost(groups(), false);
  for (auto p : erasures) {
    if (p >= spec_.n) throw InvalidInput("erasure position out of range");
    lost[(p + padding()) / group_] = true;
  }
  Word filled(received.begin(), received.end());
  for (auto p : erasures) filled[p] = 0;
  check_symbols(filled, Alphabet{spec_.q});
  const auto packed = pack(filled);

  std::vector<std::size_t> known;
  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < groups(); ++i) (lost[i] ? missing : known).push_back(i);
  const std::size_t need = groups() - spec_.t;
  if (known.size() < need) {
    const std::size_t first = missing.front() * group_ > padding() ? missing.front() * group_ - padding() : 0;
    throw DecodeError(std::to_string(missing.size()) + " packed symbols erased, at most " +
                          std::to_string(spec_.t) + " recoverable",
                      first, "erasure");
  }
  std::vector<std::size_t> xs(known.begin(), known.begin() + std::ptrdiff_t(need));
  std::vector<Field::Element> ys;
  for (auto x : xs) ys.push_back(packed[x]);
  const auto full = interpolate_all(xs, ys);
  for (std::size_t i = need; i < known.size(); ++i)
    if (full[known[i]] != packed[known[i]])
      throw DecodeError("surviving symbols are not a codeword",
                        std::max(known[i] * group_, padding()) - padding(), "erasure");
  return unpack(full);
}

Word ErasureCode::extract_data(WordView codeword) const {
  if (codeword.size() != spec_.n) throw InvalidInput("codeword has the wrong length");
  return Word(codeword.begin(), codeword.begin() + std::ptrdiff_t(data_length()));
}

}  // namespace cdb
