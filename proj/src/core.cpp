#include "cdb/core.hpp"

#include "cdb/error.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace cdb {

void Alphabet::validate() const {
  if (sigma < 2 || sigma > kMaxSigma)
    throw InvalidInput("alphabet size must be in [2, 65536], got " + std::to_string(sigma));
}

void ConstraintParams::validate() const {
  alphabet().validate();
  if (b < 1) throw InvalidInput("b must be >= 1");
  if (k < 1) throw InvalidInput("k must be >= 1");
}

void check_symbols(WordView s, Alphabet a) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!a.contains(s[i]))
      throw InvalidInput("symbol " + std::to_string(s[i]) + " at position " + std::to_string(i) +
                         " is outside the alphabet of size " + std::to_string(a.sigma));
  }
}

namespace {

bool windows_equal(WordView s, std::size_t i, std::size_t j, std::size_t k) {
  return std::equal(s.begin() + i, s.begin() + i + k, s.begin() + j);
}

}  // namespace

bool is_constrained_acyclic(WordView s, const ConstraintParams& c) {
  c.validate();
  check_symbols(s, c.alphabet());
  const std::size_t n = s.size();
  const std::size_t k = c.k;
  if (n < k || c.b < 2) return true;
  const std::size_t count = n - k + 1;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t last = std::min<std::size_t>(count - 1, i + c.b - 1);
    for (std::size_t j = i + 1; j <= last; ++j)
      if (windows_equal(s, i, j, k)) return false;
  }
  return true;
}

bool is_constrained_cyclic(const CyclicWord& s, const ConstraintParams& c) {
  c.validate();
  const Word& w = s.symbols();
  check_symbols(w, c.alphabet());
  const std::size_t n = w.size();
  if (n == 0) throw InvalidInput("cyclic word must be nonempty");
  if (c.b < 2) return true;
  auto equal_at = [&](std::size_t i, std::size_t j) {
    for (std::size_t t = 0; t < c.k; ++t)
      if (w[(i + t) % n] != w[(j + t) % n]) return false;
    return true;
  };
  // every pair of distinct start positions whose forward or wraparound
  // distance is at most b-1
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t d = std::min(j - i, n - (j - i));
      if (d <= c.b - 1 && equal_at(i, j)) return false;
    }
  }
  return true;
}

bool has_period(WordView s, std::size_t p) noexcept {
  if (p == 0) return false;
  for (std::size_t i = 0; i + p < s.size(); ++i)
    if (s[i] != s[i + p]) return false;
  return true;
}

std::size_t period_of(WordView s) {
  if (s.empty()) throw InvalidInput("period of the empty word is undefined");
  // KMP failure function: period = n - longest proper border
  const std::size_t n = s.size();
  std::vector<std::size_t> fail(n, 0);
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    while (j > 0 && s[i] != s[j]) j = fail[j - 1];
    if (s[i] == s[j]) ++j;
    fail[i] = j;
  }
  return n - fail[n - 1];
}

bool is_lp_member(WordView s, const LpParams& lp) {
  if (lp.p == 0 || lp.m < lp.p) throw InvalidInput("LP parameters need m >= p >= 1");
  const std::size_t len = lp.m + 1;
  if (s.size() < len) return true;
  // a length-(m+1) substring with period p exists iff some run of
  // s[i] == s[i+p] matches has length >= m+1-p
  const std::size_t need = len - lp.p;
  std::size_t run = 0;
  for (std::size_t i = 0; i + lp.p < s.size(); ++i) {
    run = (s[i] == s[i + lp.p]) ? run + 1 : 0;
    if (run >= need) return false;
  }
  return true;
}

std::size_t least_rotation_index(WordView s) {
  const std::size_t n = s.size();
  if (n == 0) return 0;
  std::size_t i = 0, j = 1, k = 0;
  while (i < n && j < n && k < n) {
    const Symbol a = s[(i + k) % n];
    const Symbol b = s[(j + k) % n];
    if (a == b) {
      ++k;
      continue;
    }
    if (a > b)
      i += k + 1;
    else
      j += k + 1;
    if (i == j) ++j;
    k = 0;
  }
  return std::min(i, j);
}

Word canonical_rotation(const CyclicWord& s) {
  const Word& w = s.symbols();
  if (w.empty()) throw InvalidInput("cyclic word must be nonempty");
  Word out(w.size());
  std::rotate_copy(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(least_rotation_index(w)),
                   w.end(), out.begin());
  return out;
}

bool operator==(const CyclicWord& a, const CyclicWord& b) {
  if (a.size() != b.size()) return false;
  if (a.size() == 0) return true;
  return canonical_rotation(a) == canonical_rotation(b);
}

WordFile parse_word_file(const std::string& text) {
  WordFile out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first && line.rfind("# sigma=", 0) == 0) {
      const std::string v = line.substr(8);
      std::uint32_t sigma = 0;
      auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), sigma);
      if (ec != std::errc{} || p != v.data() + v.size())
        throw InvalidInput("line " + std::to_string(lineno) + ": bad sigma header");
      out.sigma = sigma;
      first = false;
      continue;
    }
    first = false;
    Word w;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
      unsigned long v = 0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc{} || v >= kMaxSigma)
        throw InvalidInput("line " + std::to_string(lineno) + ": expected a symbol at column " +
                           std::to_string(p - line.data() + 1));
      w.push_back(static_cast<Symbol>(v));
      p = next;
      if (p < end) {
        if (*p != ' ' || p + 1 == end)
          throw InvalidInput("line " + std::to_string(lineno) + ": symbols must be separated by single spaces");
        ++p;
      }
    }
    if (out.sigma != 0) {
      for (Symbol s : w)
        if (s >= out.sigma)
          throw InvalidInput("line " + std::to_string(lineno) + ": symbol " + std::to_string(s) +
                             " exceeds sigma");
    }
    out.words.push_back(std::move(w));
  }
  return out;
}

std::string format_word(WordView s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(s[i]);
  }
  return out;
}

std::string format_word_file(const std::vector<Word>& words, std::uint32_t sigma) {
  std::string out;
  if (sigma) out += "# sigma=" + std::to_string(sigma) + "\n";
  for (const Word& w : words) {
    out += format_word(w);
    out += '\n';
  }
  return out;
}

}  // namespace cdb
