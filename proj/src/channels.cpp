#include "cdb/channels.hpp"

#include "cdb/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace cdb {

ReadVector lsymbol_read(WordView x, std::size_t ell, ReadMode mode, Symbol pad) {
  if (ell == 0) throw InvalidInput("read length must be positive");
  if (x.empty()) throw InvalidInput("cannot read an empty word");
  const std::size_t n = x.size();
  ReadVector r{ell, {}};
  r.reads.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Word w(ell);
    for (std::size_t j = 0; j < ell; ++j) {
      const std::size_t at = i + j;
      if (mode == ReadMode::Cyclic)
        w[j] = x[at % n];
      else
        w[j] = at < n ? x[at] : pad;
    }
    r.reads.push_back(std::move(w));
  }
  return r;
}

std::vector<std::size_t> AdvancePattern::positions() const {
  std::vector<std::size_t> p{start};
  p.reserve(advances.size() + 1);
  for (auto a : advances) p.push_back(p.back() + a);
  return p;
}

AdvancePattern AdvancePattern::from_positions(const std::vector<std::size_t>& positions, ReadMode mode) {
  if (positions.empty()) throw InvalidInput("a pattern needs at least one read");
  AdvancePattern a{mode, positions.front(), {}};
  for (std::size_t i = 1; i < positions.size(); ++i) {
    if (positions[i] < positions[i - 1]) throw InvalidInput("read positions must not decrease");
    a.advances.push_back(positions[i] - positions[i - 1]);
  }
  return a;
}

void check_admissible(const AdvancePattern& a, std::size_t n, std::size_t max_advance) {
  if (a.mode == ReadMode::Acyclic && a.start != 0) throw DomainError("acyclic patterns start at read 0");
  if (a.mode == ReadMode::Cyclic && a.start >= std::max<std::size_t>(max_advance, 1))
    throw DomainError("start offset " + std::to_string(a.start) + " exceeds the burst bound");
  for (std::size_t i = 0; i < a.advances.size(); ++i)
    if (a.advances[i] > max_advance)
      throw DomainError("advance " + std::to_string(a.advances[i]) + " at step " + std::to_string(i) +
                        " is outside 0.." + std::to_string(max_advance));
  const auto p = a.positions();
  const std::size_t end = (a.mode == ReadMode::Cyclic ? a.start : 0) + n;
  if (p.back() >= end || end - p.back() > max_advance)
    throw DomainError("the pattern does not close within the burst bound");
}

ReadVector apply_advances(const ReadVector& r, const AdvancePattern& a) {
  const std::size_t n = r.reads.size();
  if (n == 0) throw InvalidInput("no reads to corrupt");
  const auto p = a.positions();
  const std::size_t limit = a.mode == ReadMode::Cyclic ? a.start + n : n;
  if (a.mode == ReadMode::Cyclic && a.start >= n) throw DomainError("start offset beyond the source");
  ReadVector out{r.ell, {}};
  out.reads.reserve(p.size());
  for (auto pos : p) {
    if (pos >= limit) throw DomainError("advances run past the end of the source");
    out.reads.push_back(r.reads[pos % n]);
  }
  return out;
}

namespace {

class LsymbolSolver {
 public:
  LsymbolSolver(const ReadVector& r, std::size_t n, const ConstraintParams& c, ReadMode mode,
                const DecodeOptions& opt)
      : r_(r), n_(n), b_(c.b), k_(c.k), ell_(r.ell), mode_(mode), opt_(opt) {
    const std::size_t cells = mode == ReadMode::Cyclic ? n : n + ell_;
    cell_.assign(cells, -1);
    if (mode == ReadMode::Acyclic) {
      for (std::size_t i = n; i < cells; ++i) {
        const std::size_t off = i - n;
        if (off < opt.tail.size() && opt.tail[off])
          cell_[i] = *opt.tail[off];
        else if (opt.pad)
          cell_[i] = *opt.pad;
      }
    }
  }

  void run() {
    pos_.assign(r_.reads.size(), 0);
    if (!place(0, 0)) {
      fail(0, "first read conflicts with known symbols");
      return;
    }
    search(1);
  }

  bool solved() const noexcept { return !alignments_.empty(); }
  bool conflict() const noexcept { return conflict_; }
  std::size_t failed_at() const noexcept { return fail_index_; }
  const std::string& reason() const noexcept { return fail_reason_; }
  const Word& word() const noexcept { return word_; }
  std::vector<std::vector<std::size_t>>& alignments() noexcept { return alignments_; }

 private:
  std::size_t wrap(std::size_t i) const noexcept { return mode_ == ReadMode::Cyclic ? i % n_ : i; }

  // Writes read t at source position p; on conflict leaves nothing behind.
  bool place(std::size_t t, std::size_t p) {
    const std::size_t mark = trail_.size();
    const Word& w = r_.reads[t];
    for (std::size_t i = 0; i < ell_; ++i) {
      const std::size_t at = wrap(p + i);
      if (cell_[at] < 0) {
        cell_[at] = w[i];
        trail_.push_back(at);
      } else if (cell_[at] != w[i]) {
        undo(mark);
        return false;
      }
    }
    pos_[t] = p;
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      cell_[trail_.back()] = -1;
      trail_.pop_back();
    }
  }

  bool matches(const Word& cur, std::size_t from, const Word& nxt, std::size_t len) const {
    return std::equal(nxt.begin(), nxt.begin() + std::ptrdiff_t(len), cur.begin() + std::ptrdiff_t(from));
  }

  void fail(std::size_t t, std::string why) {
    if (fail_reason_.empty() || t > fail_index_) {
      fail_index_ = t;
      fail_reason_ = std::move(why);
    }
  }

  // Offsets to try for read t after read t-1. Away from the acyclic tail every
  // window involved is a window of the constrained word, so at most one
  // offset fits.
  std::vector<std::size_t> offsets(std::size_t t) {
    const Word& cur = r_.reads[t - 1];
    const Word& nxt = r_.reads[t];
    const std::size_t p = pos_[t - 1];
    const bool body = mode_ == ReadMode::Cyclic || p + ell_ + 1 <= n_;
    std::vector<std::size_t> out;
    if (body) {
      for (std::size_t j = 0; j + 1 < b_ && p + j < n_; ++j)
        if (matches(cur, j, nxt, k_)) out.push_back(j);
      if (out.size() > 1) {
        fail(t, "read matches the previous one at several offsets");
        return {};
      }
      if (out.empty()) {
        if (!matches(cur, b_ - 1, nxt, k_ - 1)) {
          fail(t, "read does not overlap the previous one at any admissible offset");
          return {};
        }
        out.push_back(b_ - 1);
      }
    } else {
      for (std::size_t j = 0; j < b_; ++j) out.push_back(j);
    }
    return out;
  }

  void search(std::size_t t) {
    if (stopped_) return;
    if (++nodes_ > opt_.node_budget)
      throw ResourceError("alignment search exceeded its node budget", opt_.node_budget);
    if (t == r_.reads.size()) {
      finish();
      return;
    }
    for (auto j : offsets(t)) {
      const std::size_t p = pos_[t - 1] + j;
      if (p >= n_) {
        fail(t, "read lies beyond the end of the source");
        continue;
      }
      const std::size_t mark = trail_.size();
      if (!place(t, p)) {
        fail(t, "read disagrees with the symbols already recovered");
        continue;
      }
      search(t + 1);
      undo(mark);
      if (stopped_) return;
    }
  }

  void finish() {
    const std::size_t gap = n_ - pos_.back();
    if (gap < 1 || gap > b_ - 1) {
      fail(r_.reads.size(), "reads end too far from the end of the source");
      return;
    }
    Word w(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      if (cell_[i] < 0) {
        fail(r_.reads.size(), "some source symbols were never read");
        return;
      }
      w[i] = Symbol(cell_[i]);
    }
    if (alignments_.empty()) {
      word_ = std::move(w);
    } else if (w != word_) {
      conflict_ = true;
      stopped_ = true;
      return;
    }
    alignments_.push_back(pos_);
    if (alignments_.size() > opt_.hypothesis_budget)
      throw ResourceError("too many consistent alignments", opt_.hypothesis_budget);
  }

  const ReadVector& r_;
  std::size_t n_, b_, k_, ell_;
  ReadMode mode_;
  const DecodeOptions& opt_;
  std::vector<int> cell_;
  std::vector<std::size_t> trail_;
  std::vector<std::size_t> pos_;
  std::vector<std::vector<std::size_t>> alignments_;
  Word word_;
  bool conflict_ = false;
  bool stopped_ = false;
  std::size_t nodes_ = 0;
  std::size_t fail_index_ = 0;
  std::string fail_reason_;
};

}  // namespace

LsymbolDecoding decode_lsymbol(const ReadVector& r, std::size_t n, const ConstraintParams& c, ReadMode mode,
                               const DecodeOptions& options) {
  c.validate();
  if (c.b < 2) throw InvalidInput("read decoding needs b >= 2");
  if (r.ell != c.k + c.b - 2)
    throw InvalidInput("read length must be k + b - 2 = " + std::to_string(c.k + c.b - 2));
  if (n == 0) throw InvalidInput("source length must be positive");
  if (r.reads.empty()) throw InvalidInput("no reads to decode");
  for (const auto& w : r.reads) {
    if (w.size() != r.ell) throw InvalidInput("reads must all have length " + std::to_string(r.ell));
    check_symbols(w, c.alphabet());
  }

  LsymbolSolver solver(r, n, c, mode, options);
  solver.run();
  if (solver.conflict())
    throw DecodeError("reads are consistent with more than one word", solver.failed_at(), "lsymbol");
  if (!solver.solved()) throw DecodeError(solver.reason(), solver.failed_at(), "lsymbol");

  LsymbolDecoding out;
  out.word = solver.word();
  out.alignments = std::move(solver.alignments());
  std::sort(out.alignments.begin(), out.alignments.end());
  out.alignments.erase(std::unique(out.alignments.begin(), out.alignments.end()), out.alignments.end());
  out.positions = out.alignments.front();
  for (const auto& a : out.alignments)
    for (std::size_t t = 0; t < a.size(); ++t)
      if (a[t] != out.positions[t]) out.positions[t] = kUnknownPosition;
  return out;
}

ErrorSets error_sets_from_positions(const std::vector<std::size_t>& positions, std::size_t n) {
  ErrorSets e;
  std::vector<bool> seen(n, false);
  for (std::size_t t = 0; t < positions.size(); ++t) {
    const std::size_t p = positions[t];
    if (p >= n) throw InvalidInput("read position outside the source");
    if (seen[p])
      e.insertions.push_back(p);
    else
      seen[p] = true;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!seen[i]) e.deletions.push_back(i);
  std::sort(e.insertions.begin(), e.insertions.end());
  return e;
}

namespace {

void check_marker(WordView reference, std::uint32_t b) {
  if (b < 1) throw InvalidInput("b must be positive");
  for (std::size_t i = 0; i < reference.size(); ++i)
    for (std::size_t j = i + 1; j < std::min<std::size_t>(reference.size(), i + b); ++j)
      if (reference[i] == reference[j]) throw InvalidInput("reference is not (b,1)-constrained");
}

// Source index of every received symbol, matching greedily from the left.
std::vector<std::size_t> greedy_match(WordView reference, WordView received, std::size_t max_burst) {
  std::vector<std::size_t> at;
  at.reserve(received.size());
  std::size_t i = 0;
  std::size_t run = 0;
  for (std::size_t j = 0; j < received.size(); ++j) {
    while (i < reference.size() && reference[i] != received[j]) {
      ++i;
      if (++run > max_burst) throw DecodeError("deletion burst longer than allowed", j, "marker");
    }
    if (i == reference.size()) throw DecodeError("received symbol has no match in the reference", j, "marker");
    at.push_back(i++);
    run = 0;
  }
  if (reference.size() - i > max_burst) throw DecodeError("trailing deletion burst longer than allowed",
                                                          received.size(), "marker");
  return at;
}

ErrorSets deletions_from_matches(const std::vector<std::size_t>& at, std::size_t n) {
  ErrorSets e;
  std::size_t next = 0;
  for (auto p : at) {
    while (next < p) e.deletions.push_back(next++);
    next = p + 1;
  }
  while (next < n) e.deletions.push_back(next++);
  return e;
}

}  // namespace

ErrorSets locate_deletions_b1(WordView reference, WordView received, std::uint32_t b) {
  check_marker(reference, b);
  if (received.size() > reference.size()) throw DecodeError("received word is longer than the reference", 0, "marker");
  return deletions_from_matches(greedy_match(reference, received, b - 1), reference.size());
}

ErrorSets locate_sticky_and_deletions(WordView reference, WordView received, std::uint32_t b) {
  check_marker(reference, b);
  if (b < 2) throw InvalidInput("sticky correction needs b >= 2");
  Word collapsed;
  std::vector<std::size_t> copies;  // extra copies following each collapsed symbol
  for (auto s : received) {
    if (!collapsed.empty() && collapsed.back() == s) {
      ++copies.back();
    } else {
      collapsed.push_back(s);
      copies.push_back(0);
    }
  }
  const auto at = greedy_match(reference, collapsed, b - 2);
  ErrorSets e = deletions_from_matches(at, reference.size());
  for (std::size_t i = 0; i < at.size(); ++i) e.insertions.insert(e.insertions.end(), copies[i], at[i]);
  return e;
}

Word cyclic_marker(std::size_t n, std::uint32_t q1) {
  if (q1 == 0) throw InvalidInput("marker alphabet must be non-empty");
  Word w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = Symbol(i % q1);
  return w;
}

Construction2Code::Construction2Code(Construction2Params p)
    : params_(p),
      code_(ErasureCodeSpec{p.q2, p.n, p.t1 * (p.regime == ChannelRegime::DeletionsOnly ? p.b - 1 : p.b - 2)}),
      marker_(cyclic_marker(p.n, p.q1)) {
  if (p.b < 2 || (p.regime == ChannelRegime::StickyAndDeletions && p.b < 3))
    throw InvalidInput("sticky correction with deletions needs b >= 3");
  if (p.q1 < p.b) throw InvalidInput("marker alphabet must have at least b symbols");
  if (std::uint64_t(p.q1) * p.q2 > kMaxSigma) throw InvalidInput("product alphabet too large");
}

std::size_t Construction2Code::erasure_capability() const noexcept { return code_.spec().t; }

std::size_t Construction2Code::max_burst() const noexcept {
  return params_.regime == ChannelRegime::DeletionsOnly ? params_.b - 1 : params_.b - 2;
}

Word Construction2Code::encode(WordView data) const {
  const Word c = code_.encode(data);
  Word f(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) f[i] = Symbol(c[i] * params_.q1 + marker_[i]);
  return f;
}

Word Construction2Code::decode(WordView received) const {
  check_symbols(received, Alphabet{alphabet_size()});
  Word s(received.size()), c(received.size());
  for (std::size_t i = 0; i < received.size(); ++i) {
    s[i] = received[i] % params_.q1;
    c[i] = received[i] / params_.q1;
  }
  ErrorSets e;
  std::vector<std::size_t> at;
  if (params_.regime == ChannelRegime::DeletionsOnly) {
    at = greedy_match(marker_, s, params_.b - 1);
    e = deletions_from_matches(at, params_.n);
  } else {
    Word cs, cc;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!cs.empty() && cs.back() == s[i]) {
        if (cc.back() != c[i]) throw DecodeError("sticky copy disagrees with its original", i, "marker");
        continue;
      }
      cs.push_back(s[i]);
      cc.push_back(c[i]);
    }
    s = std::move(cs);
    c = std::move(cc);
    at = greedy_match(marker_, s, params_.b - 2);
    e = deletions_from_matches(at, params_.n);
  }
  Word filled(params_.n, 0);
  for (std::size_t i = 0; i < at.size(); ++i) filled[at[i]] = c[i];
  return code_.extract_data(code_.decode(filled, e.deletions));
}

void BoundSpec::validate() const {
  if (!(delta > 0 && delta < 1) || !(epsilon > 0 && epsilon < 1))
    throw InvalidInput("delta and epsilon must lie in (0, 1)");
}

double rate_bound(RateRegime regime, const BoundSpec& spec, std::uint32_t b, double q, std::size_t m,
                  double db_rate) {
  spec.validate();
  if (b < 1) throw InvalidInput("b must be positive");
  if (!(q > 1)) throw InvalidInput("q must exceed 1");
  const double tail = 1.0 - spec.delta - spec.epsilon;
  switch (regime) {
    case RateRegime::DeletionsOnly:
      return (1.0 - std::log(double(b) + 1) / std::log(q)) * tail;
    case RateRegime::StickyAndDeletions:
      return (1.0 - std::log(double(b) + 2) / std::log(q)) * tail;
    case RateRegime::ExtraHeads:
      if (m == 0) throw InvalidInput("m must be positive");
      return double(m - 1) / double(m) * tail + db_rate / double(m);
  }
  throw InvalidInput("unknown regime");
}

AdvancePattern sample_pattern(std::size_t n, ReadMode mode, const ChannelModel& model, std::mt19937_64& rng) {
  if (n == 0) throw InvalidInput("source length must be positive");
  std::vector<bool> deleted(n, false);
  if (model.max_burst > 0 && model.max_bursts > 0) {
    std::uniform_int_distribution<std::size_t> count(0, model.max_bursts);
    std::uniform_int_distribution<std::size_t> len(1, model.max_burst);
    std::uniform_int_distribution<std::size_t> where(0, n - 1);
    const std::size_t bursts = count(rng);
    for (std::size_t i = 0; i < bursts; ++i) {
      const std::size_t l = len(rng);
      const std::size_t s = where(rng);
      if (mode == ReadMode::Acyclic && (s == 0 || s + l > n)) continue;
      if (mode == ReadMode::Cyclic && l + 2 > n) continue;
      // keep a surviving read on both sides so bursts never merge
      bool ok = true;
      for (std::size_t d = 0; d < l + 2 && ok; ++d) {
        const std::size_t cell = s + n - 1 + d;
        if (mode == ReadMode::Acyclic && cell - n >= n) continue;
        ok = !deleted[cell % n];
      }
      if (!ok) continue;
      for (std::size_t d = 0; d < l; ++d) deleted[(s + d) % n] = true;
    }
  }
  std::size_t first = 0;
  while (deleted[first]) ++first;
  std::bernoulli_distribution sticky(model.sticky_probability);
  std::uniform_int_distribution<std::size_t> repeats(1, std::max<std::size_t>(model.max_repeats, 1));
  std::vector<std::size_t> pos;
  for (std::size_t i = first; i < n; ++i) {
    if (deleted[i]) continue;
    pos.push_back(i);
    if (model.sticky_probability > 0 && sticky(rng)) pos.insert(pos.end(), repeats(rng), i);
  }
  return AdvancePattern::from_positions(pos, mode);
}

BigCount random_below(const BigCount& bound, std::mt19937_64& rng) {
  if (bound <= 0) throw InvalidInput("bound must be positive");
  const std::size_t bits = boost::multiprecision::msb(bound) + 1;
  for (;;) {
    BigCount v = 0;
    for (std::size_t got = 0; got < bits; got += 64) {
      v <<= 64;
      v += rng();
    }
    v >>= (bits + 63) / 64 * 64 - bits;
    if (v < bound) return v;
  }
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) noexcept {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string format_reads(const ReadVector& r) {
  std::string out;
  for (const auto& w : r.reads) {
    out += format_word(w);
    out += '\n';
  }
  return out;
}

}  // namespace cdb
