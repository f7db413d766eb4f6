#include "cdb/patterns.hpp"

#include "cdb/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace cdb {

PatternSet::PatternSet(std::uint32_t sigma, std::vector<Word> patterns)
    : sigma_(sigma), patterns_(std::move(patterns)) {
  Alphabet{sigma}.validate();
  for (const Word& p : patterns_) check_symbols(p, Alphabet{sigma});
  std::sort(patterns_.begin(), patterns_.end());
  patterns_.erase(std::unique(patterns_.begin(), patterns_.end()), patterns_.end());
}

bool PatternSet::contains(WordView w) const {
  return std::binary_search(patterns_.begin(), patterns_.end(), Word(w.begin(), w.end()));
}

std::size_t PatternSet::max_length() const noexcept {
  std::size_t m = 0;
  for (const Word& p : patterns_) m = std::max(m, p.size());
  return m;
}

PatternSet forbidden_family(const ConstraintParams& c) {
  c.validate();
  std::vector<Word> out;
  if (c.b < 2) return PatternSet(c.sigma, {});
  double total = 0;
  for (std::size_t p = 1; p + 1 <= c.b; ++p) total += std::pow(double(c.sigma), double(p));
  if (total > double(kMaxFamilySize))
    throw ResourceError("forbidden family would exceed " + std::to_string(kMaxFamilySize) + " candidate words",
                        kMaxFamilySize);
  for (std::size_t p = 1; p + 1 <= c.b; ++p) {
    // odometer over the first p symbols; the rest is the periodic extension
    Word u(p, 0);
    bool done = false;
    while (!done) {
      Word w(p + c.k);
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = u[i % p];
      if (period_of(w) == p) out.push_back(std::move(w));
      done = true;
      for (std::size_t i = p; i-- > 0;) {
        if (++u[i] < c.sigma) {
          done = false;
          break;
        }
        u[i] = 0;
      }
    }
  }
  return PatternSet(c.sigma, std::move(out));
}

namespace {

bool contains_substring(const Word& hay, const Word& needle) {
  if (needle.size() > hay.size()) return false;
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

std::vector<Word> drop_superstrings(std::vector<Word> v) {
  std::sort(v.begin(), v.end(), [](const Word& a, const Word& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  v.erase(std::unique(v.begin(), v.end()), v.end());
  std::vector<Word> kept;
  for (Word& w : v) {
    bool redundant = false;
    for (const Word& s : kept) {
      if (contains_substring(w, s)) {
        redundant = true;
        break;
      }
    }
    if (!redundant) kept.push_back(std::move(w));
  }
  return kept;
}

}  // namespace

PatternSet reduce_forbidden(const PatternSet& f) {
  const std::uint32_t sigma = f.sigma();
  std::vector<Word> cur = f.patterns();
  while (true) {
    // group nonempty patterns by their prefix without the last symbol
    std::map<Word, std::vector<Symbol>> children;
    for (const Word& w : cur) {
      if (w.empty()) continue;
      children[Word(w.begin(), w.end() - 1)].push_back(w.back());
    }
    std::vector<Word> collapsed;
    for (auto& [prefix, syms] : children) {
      std::sort(syms.begin(), syms.end());
      syms.erase(std::unique(syms.begin(), syms.end()), syms.end());
      if (syms.size() == sigma) collapsed.push_back(prefix);
    }
    if (collapsed.empty()) {
      // siblings first: dropping a superstring can break a family apart
      std::vector<Word> kept = drop_superstrings(cur);
      if (kept.size() == cur.size()) break;
      cur = std::move(kept);
      continue;
    }
    std::vector<Word> next;
    for (const Word& w : cur) {
      if (!w.empty() &&
          std::binary_search(collapsed.begin(), collapsed.end(), Word(w.begin(), w.end() - 1)))
        continue;
      next.push_back(w);
    }
    next.insert(next.end(), collapsed.begin(), collapsed.end());
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    cur = std::move(next);
  }
  return PatternSet(sigma, std::move(cur));
}

bool avoids(WordView s, const PatternSet& f) {
  for (const Word& p : f.patterns()) {
    if (p.empty()) return false;
    if (p.size() > s.size()) continue;
    if (std::search(s.begin(), s.end(), p.begin(), p.end()) != s.end()) return false;
  }
  return true;
}

}  // namespace cdb
