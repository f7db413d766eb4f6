#include "cdb/gf.hpp"

#include "cdb/error.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

namespace cdb {

namespace {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Polynomial arithmetic over the prime field F_p on plain coefficient vectors.
using PrimePoly = std::vector<std::uint32_t>;

void trim(PrimePoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint32_t inv_mod_prime(std::uint32_t a, std::uint32_t p) {
  // a^(p-2) mod p
  std::uint64_t r = 1, b = a % p;
  for (std::uint32_t e = p - 2; e; e >>= 1) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
  }
  return std::uint32_t(r);
}

PrimePoly prime_mod(PrimePoly a, const PrimePoly& m, std::uint32_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint64_t lead_inv = inv_mod_prime(m.back(), p);
  while (a.size() >= m.size()) {
    const std::uint64_t factor = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i)
      a[shift + i] = std::uint32_t((a[shift + i] + (p - factor) * m[i]) % p);
    trim(a);
  }
  return a;
}

bool prime_irreducible(const PrimePoly& f, std::uint32_t p) {
  const std::size_t deg = f.size() - 1;
  if (deg == 0) return false;
  if (deg == 1) return true;
  // trial division by every monic polynomial of degree 1..deg/2
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t code = 0; code < count; ++code) {
      PrimePoly g(d + 1, 0);
      std::uint64_t v = code;
      for (std::size_t i = 0; i < d; ++i) {
        g[i] = std::uint32_t(v % p);
        v /= p;
      }
      g[d] = 1;
      if (prime_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace

std::uint32_t FieldSpec::q() const noexcept {
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < m; ++i) q *= p;
  return q > (1u << 16) ? 0 : std::uint32_t(q);
}

void FieldSpec::validate() const {
  if (!is_prime(p)) throw InvalidInput("field characteristic " + std::to_string(p) + " is not prime");
  if (m < 1) throw InvalidInput("extension degree must be >= 1");
  if (q() == 0) throw InvalidInput("field size exceeds 2^16");
  if (modulus.size() != m + 1 || modulus.back() != 1) throw InvalidInput("modulus must be monic of degree m");
  for (auto c : modulus)
    if (c >= p) throw InvalidInput("modulus coefficient outside F_p");
  if (!prime_irreducible(modulus, p)) throw InvalidInput("modulus is reducible");
}

FieldSpec default_field_spec(std::uint32_t q) {
  if (q < 2 || q > (1u << 16)) throw InvalidInput("field size must be in 2..65536");
  std::uint32_t p = 0;
  for (std::uint32_t d = 2; d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  std::uint32_t m = 0;
  for (std::uint32_t v = q; v > 1; v /= p) {
    if (v % p != 0) throw InvalidInput(std::to_string(q) + " is not a prime power");
    ++m;
  }
  FieldSpec spec{p, m, {}};
  if (m == 1) {
    spec.modulus = {0, 1};
    return spec;
  }
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < m; ++i) count *= p;
  for (std::uint64_t code = 0; code < count; ++code) {
    PrimePoly f(m + 1, 0);
    std::uint64_t v = code;
    for (std::uint32_t i = 0; i < m; ++i) {
      f[i] = std::uint32_t(v % p);
      v /= p;
    }
    f[m] = 1;
    if (prime_irreducible(f, p)) {
      spec.modulus = std::move(f);
      return spec;
    }
  }
  throw InvalidInput("no irreducible modulus found");  // unreachable for valid p, m
}

Field::Field(FieldSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  q_ = spec_.q();
  const std::uint32_t p = spec_.p, m = spec_.m;

  auto to_poly = [&](Element a) {
    PrimePoly r(m, 0);
    for (std::uint32_t i = 0; i < m; ++i, a /= p) r[i] = a % p;
    return r;
  };
  auto from_poly = [&](const PrimePoly& r) {
    Element a = 0;
    for (std::size_t i = r.size(); i-- > 0;) a = a * p + r[i];
    return a;
  };
  auto slow_mul = [&](Element a, Element b) {
    const PrimePoly x = to_poly(a), y = to_poly(b);
    PrimePoly z(2 * m, 0);
    for (std::uint32_t i = 0; i < m; ++i)
      for (std::uint32_t j = 0; j < m; ++j) z[i + j] = std::uint32_t((z[i + j] + std::uint64_t(x[i]) * y[j]) % p);
    return from_poly(prime_mod(z, spec_.modulus, p));
  };

  const std::uint32_t order = q_ - 1;
  std::vector<std::uint64_t> primes = prime_factors(order);
  Element g = 0;
  for (Element cand = 1; cand < q_ && g == 0; ++cand) {
    auto slow_pow = [&](Element a, std::uint64_t e) {
      Element r = 1;
      for (; e; e >>= 1) {
        if (e & 1) r = slow_mul(r, a);
        a = slow_mul(a, a);
      }
      return r;
    };
    bool ok = true;
    for (auto r : primes) ok = ok && slow_pow(cand, order / r) != 1;
    if (ok) g = cand;
  }
  exp_.assign(2 * std::size_t(order), 0);
  log_.assign(q_, 0);
  Element x = 1;
  for (std::uint32_t i = 0; i < order; ++i) {
    exp_[i] = exp_[i + order] = x;
    log_[x] = i;
    x = slow_mul(x, g);
  }
}

Field::Element Field::add(Element a, Element b) const noexcept {
  if (spec_.p == 2) return a ^ b;
  Element r = 0, scale = 1;
  for (std::uint32_t i = 0; i < spec_.m; ++i) {
    r += ((a % spec_.p + b % spec_.p) % spec_.p) * scale;
    a /= spec_.p;
    b /= spec_.p;
    scale *= spec_.p;
  }
  return r;
}

Field::Element Field::neg(Element a) const noexcept {
  if (spec_.p == 2) return a;
  Element r = 0, scale = 1;
  for (std::uint32_t i = 0; i < spec_.m; ++i) {
    r += ((spec_.p - a % spec_.p) % spec_.p) * scale;
    a /= spec_.p;
    scale *= spec_.p;
  }
  return r;
}

Field::Element Field::sub(Element a, Element b) const noexcept { return add(a, neg(b)); }

Field::Element Field::mul(Element a, Element b) const noexcept {
  if (a == 0 || b == 0) return 0;
  return exp_[log_[a] + log_[b]];
}

Field::Element Field::inv(Element a) const {
  if (a == 0) throw DomainError("zero has no inverse");
  return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

Field::Element Field::pow(Element a, std::uint64_t e) const noexcept {
  if (e == 0) return 1;
  if (a == 0) return 0;
  return exp_[(std::uint64_t(log_[a]) * (e % (q_ - 1))) % (q_ - 1)];
}

Polynomial::Polynomial(std::vector<Field::Element> c) : coeffs(std::move(c)) {
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
}

Polynomial parse_polynomial(const std::string& text, const Field& f) {
  std::vector<Field::Element> c;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    const std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    Field::Element v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || p != tok.data() + tok.size())
      throw InvalidInput("bad polynomial coefficient '" + tok + "'");
    if (!f.contains(v)) throw InvalidInput("polynomial coefficient " + tok + " outside the field");
    c.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return Polynomial(std::move(c));
}

std::string format_polynomial(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(p.coeffs[i]);
  }
  return out;
}

Polynomial poly_add(const Polynomial& a, const Polynomial& b, const Field& f) {
  std::vector<Field::Element> c(std::max(a.coeffs.size(), b.coeffs.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = f.add(a.at(i), b.at(i));
  return Polynomial(std::move(c));
}

Polynomial poly_mul(const Polynomial& a, const Polynomial& b, const Field& f) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Field::Element> c(a.coeffs.size() + b.coeffs.size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) c[i + j] = f.add(c[i + j], f.mul(a.coeffs[i], b.coeffs[j]));
  return Polynomial(std::move(c));
}

Polynomial poly_mod(const Polynomial& a, const Polynomial& m, const Field& f) {
  if (m.is_zero()) throw DomainError("polynomial division by zero");
  std::vector<Field::Element> r = a.coeffs;
  const std::size_t dm = m.coeffs.size() - 1;
  const Field::Element lead_inv = f.inv(m.coeffs.back());
  while (r.size() > dm) {
    const Field::Element factor = f.mul(r.back(), lead_inv);
    const std::size_t shift = r.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) r[shift + i] = f.sub(r[shift + i], f.mul(factor, m.coeffs[i]));
    while (!r.empty() && r.back() == 0) r.pop_back();
  }
  return Polynomial(std::move(r));
}

Polynomial poly_pow_mod(const Polynomial& base, std::uint64_t e, const Polynomial& m, const Field& f) {
  Polynomial result = poly_mod(Polynomial({1}), m, f);
  Polynomial b = poly_mod(base, m, f);
  for (; e; e >>= 1) {
    if (e & 1) result = poly_mod(poly_mul(result, b, f), m, f);
    b = poly_mod(poly_mul(b, b, f), m, f);
  }
  return result;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

namespace {

constexpr std::uint64_t kMaxGroupOrder = std::uint64_t{1} << 40;

std::uint64_t group_order(std::uint32_t q, int k) {
  std::uint64_t v = 1;
  for (int i = 0; i < k; ++i) {
    if (v > kMaxGroupOrder / q) throw ResourceError("q^k - 1 exceeds the factoring budget", kMaxGroupOrder);
    v *= q;
  }
  return v - 1;
}

}  // namespace

bool is_primitive(const Polynomial& poly, const Field& f) {
  const int k = poly.degree();
  if (k < 1 || poly.at(0) == 0) return false;
  const std::uint64_t n = group_order(f.q(), k);
  const Polynomial x({0, 1});
  const Polynomial one = poly_mod(Polynomial({1}), poly, f);
  if (poly_pow_mod(x, n, poly, f) != one) return false;
  for (auto r : prime_factors(n))
    if (poly_pow_mod(x, n / r, poly, f) == one) return false;
  return true;
}

std::vector<Polynomial> enumerate_primitive_polys(const Field& f, std::uint32_t k) {
  if (k < 1) throw InvalidInput("degree must be >= 1");
  const std::uint64_t candidates = group_order(f.q(), int(k)) + 1;
  if (candidates > (std::uint64_t{1} << 24)) throw ResourceError("too many candidate polynomials", 1u << 24);
  std::vector<Polynomial> out;
  for (std::uint64_t code = 0; code < candidates; ++code) {
    std::vector<Field::Element> c(k + 1, 0);
    std::uint64_t v = code;
    for (std::uint32_t i = 0; i < k; ++i, v /= f.q()) c[i] = Field::Element(v % f.q());
    if (c[0] == 0) continue;
    c[k] = 1;
    Polynomial p(std::move(c));
    if (is_primitive(p, f)) out.push_back(std::move(p));
  }
  return out;
}

Lfsr::Lfsr(const Field& f, const Polynomial& connection, Word seed) : field_(&f), state_(std::move(seed)) {
  const int k = connection.degree();
  if (k < 1) throw InvalidInput("connection polynomial must have degree >= 1");
  if (connection.at(0) == 0) throw InvalidInput("connection polynomial needs a nonzero constant term");
  if (state_.size() != std::size_t(k)) throw InvalidInput("seed length must equal the register order");
  for (Symbol s : state_)
    if (!f.contains(s)) throw InvalidInput("seed symbol outside the field");
  const Field::Element c0_inv = f.inv(connection.at(0));
  for (int i = 1; i <= k; ++i) taps_.push_back(f.neg(f.mul(connection.at(i), c0_inv)));
}

Symbol Lfsr::step() {
  const std::size_t k = taps_.size();
  Field::Element next = 0;
  for (std::size_t i = 1; i <= k; ++i) next = field_->add(next, field_->mul(taps_[i - 1], state_[k - i]));
  const Symbol out = state_[0];
  std::rotate(state_.begin(), state_.begin() + 1, state_.end());
  state_[k - 1] = Symbol(next);
  return out;
}

Word Lfsr::run(std::size_t count) {
  Word out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(step());
  return out;
}

MSequence lfsr_msequence(const Polynomial& poly, const Field& f) {
  if (!is_primitive(poly, f)) throw DomainError("polynomial " + format_polynomial(poly) + " is not primitive");
  const auto k = std::uint32_t(poly.degree());
  const std::uint64_t period = group_order(f.q(), int(k));
  if (period > (std::uint64_t{1} << 24)) throw ResourceError("m-sequence too long", 1u << 24);
  Word seed(k, 0);
  seed[k - 1] = 1;
  Lfsr reg(f, poly, seed);
  MSequence m{f.q(), k, reg.run(period), poly};
  m.word = canonicalize_msequence(m);
  return m;
}

Word canonicalize_msequence(const MSequence& m) {
  const Word& w = m.word;
  const std::size_t n = w.size();
  if (n == 0) return w;
  const std::size_t run = m.k - 1;
  bool found = false;
  Word best;
  for (std::size_t r = 0; r < n; ++r) {
    // rotation starting at r ends with positions r-run .. r-1
    bool zeros = true;
    for (std::size_t t = 1; t <= run && zeros; ++t) zeros = w[(r + n - t) % n] == 0;
    if (!zeros) continue;
    Word cand(w.begin() + r, w.end());
    cand.insert(cand.end(), w.begin(), w.begin() + r);
    if (!found || cand < best) best = std::move(cand);
    found = true;
  }
  if (!found) throw DomainError("word has no run of k-1 zeros");
  return best;
}

std::vector<MSequence> all_msequences(const Field& f, std::uint32_t k) {
  std::vector<MSequence> out;
  for (const auto& p : enumerate_primitive_polys(f, k)) out.push_back(lfsr_msequence(p, f));
  return out;
}

bool verify_pairwise_2k(const std::vector<MSequence>& seqs, std::uint32_t k) {
  std::map<Word, int> seen;
  const std::size_t len = 2 * std::size_t(k);
  for (const auto& s : seqs) {
    const std::size_t n = s.word.size();
    for (std::size_t i = 0; i < n; ++i) {
      Word w(len);
      for (std::size_t t = 0; t < len; ++t) w[t] = s.word[(i + t) % n];
      if (++seen[w] > 1) return false;
    }
  }
  return true;
}

std::vector<Word> lfsr_cycles(const Polynomial& connection, const Field& f, std::size_t state_budget) {
  const int k = connection.degree();
  if (k < 1) throw InvalidInput("connection polynomial must have degree >= 1");
  std::size_t states = 1;
  for (int i = 0; i < k; ++i) {
    if (states > state_budget / f.q()) throw ResourceError("state graph exceeds the budget", state_budget);
    states *= f.q();
  }
  auto encode = [&](const Word& s) {
    std::size_t v = 0;
    for (Symbol x : s) v = v * f.q() + x;
    return v;
  };
  std::vector<bool> seen(states, false);
  std::vector<Word> cycles;
  Word start(k, 0);
  for (std::size_t code = 0; code < states; ++code) {
    if (seen[code]) continue;
    std::size_t v = code;
    for (int i = k; i-- > 0; v /= f.q()) start[i] = Symbol(v % f.q());
    Lfsr reg(f, connection, start);
    Word out;
    do {
      seen[encode(reg.state())] = true;
      out.push_back(reg.step());
    } while (reg.state() != start);
    cycles.push_back(std::move(out));
  }
  return cycles;
}

}  // namespace cdb
