#pragma once
// Brute-force channel models for the tests: read positions are generated and
// applied straight from the definition of the error model.

#include "cdb/core.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

using cdb::Symbol;
using cdb::Word;

/// Every read-position sequence over a source of length n in which deleted
/// runs are at most max_burst long and each surviving position is read
/// 1..max_repeats times. Acyclic sequences keep position 0; cyclic ones may
/// lose a run that wraps around the end.
inline void for_each_positions(std::size_t n, bool cyclic, std::size_t max_burst, std::size_t max_repeats,
                               const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> pos;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t run) {
    if (i == n) {
      if (pos.empty()) return;
      const std::size_t end = (cyclic ? pos.front() : 0) + n;
      if (end - pos.back() <= max_burst + 1) visit(pos);
      return;
    }
    const bool leading = pos.empty();
    bool can_delete = run < max_burst;
    if (!cyclic && i == 0) can_delete = false;
    if (cyclic && leading && i >= max_burst) can_delete = false;
    if (can_delete) rec(i + 1, run + 1);
    for (std::size_t r = 1; r <= max_repeats; ++r) {
      pos.insert(pos.end(), r, i);
      rec(i + 1, 0);
      pos.resize(pos.size() - r);
    }
  };
  rec(0, 0);
}

/// The reads taken at the given source positions.
inline std::vector<Word> reads_at(const Word& x, std::size_t ell, bool cyclic, Symbol pad,
                                  const std::vector<std::size_t>& positions) {
  std::vector<Word> out;
  for (auto p : positions) {
    Word r;
    for (std::size_t j = 0; j < ell; ++j) {
      const std::size_t at = p + j;
      r.push_back(cyclic ? x[at % x.size()] : (at < x.size() ? x[at] : pad));
    }
    out.push_back(r);
  }
  return out;
}

/// Positions of `from` that survive in `to`, given which were deleted.
inline Word keep(const Word& w, const std::vector<std::size_t>& positions) {
  Word out;
  for (auto p : positions) out.push_back(w[p]);
  return out;
}

}  // namespace oracle
