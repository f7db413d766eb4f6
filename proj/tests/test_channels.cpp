#include "cdb/channels.hpp"
#include "cdb/error.hpp"
#include "channel_oracle.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace cdb;

namespace {

ReadVector as_reads(std::size_t ell, std::vector<Word> reads) { return ReadVector{ell, std::move(reads)}; }

Word random_constrained(const Enumerator& e, std::mt19937_64& rng) { return e.unrank(random_below(e.count(), rng)); }

Word random_symbols(std::size_t n, std::uint32_t q, std::mt19937_64& rng) {
  Word w(n);
  for (auto& s : w) s = Symbol(rng() % q);
  return w;
}

// Every (3,3) word under every pattern with deletion runs of one read and at
// most two copies of each read.
std::size_t sweep_failures(std::size_t n, ReadMode mode, std::optional<Symbol> pad) {
  const ConstraintParams c{3, 3, 2};
  const bool cyclic = mode == ReadMode::Cyclic;
  std::size_t failures = 0;
  for (const auto& x : oracle::all_words(2, n)) {
    if (cyclic ? !oracle::constrained_cyclic(x, 3, 3) : !oracle::constrained(x, 3, 3)) continue;
    oracle::for_each_positions(n, cyclic, 1, 2, [&](const std::vector<std::size_t>& pos) {
      DecodeOptions opt;
      opt.pad = pad;
      const auto r = as_reads(4, oracle::reads_at(x, 4, cyclic, 0, pos));
      try {
        const auto d = decode_lsymbol(r, n, c, mode, opt);
        const bool same = cyclic ? CyclicWord(d.word) == CyclicWord(x) : d.word == x;
        if (!same) ++failures;
      } catch (const DecodeError&) {
        ++failures;
      }
    });
  }
  return failures;
}

}  // namespace

TEST_CASE("two-symbol reads of the worked example") {
  const Word x{0, 1, 0, 0, 1, 0, 0, 0};
  const auto r = lsymbol_read(x, 2, ReadMode::Cyclic);
  const std::vector<Word> expect{{0, 1}, {1, 0}, {0, 0}, {0, 1}, {1, 0}, {0, 0}, {0, 0}, {0, 0}};
  CHECK(r.ell == 2);
  CHECK(r.reads == expect);

  const AdvancePattern a{ReadMode::Cyclic, 0, {1, 0, 1, 1, 1, 3}};
  const std::vector<Word> corrupted{{0, 1}, {1, 0}, {1, 0}, {0, 0}, {0, 1}, {1, 0}, {0, 0}};
  CHECK(apply_advances(r, a).reads == corrupted);
  CHECK(a.positions() == std::vector<std::size_t>{0, 1, 1, 2, 3, 4, 7});
}

TEST_CASE("the worked example word is outside the model with two-symbol reads") {
  const Word x{0, 1, 0, 0, 1, 0, 0, 0};
  // ell = 2 forces (b, k) = (2, 2); the run 000 repeats the window 00
  CHECK_FALSE(is_constrained_cyclic(CyclicWord(x), ConstraintParams{2, 2, 2}));
  CHECK_FALSE(is_constrained_acyclic(x, ConstraintParams{2, 2, 2}));
  const AdvancePattern a{ReadMode::Cyclic, 0, {1, 0, 1, 1, 1, 3}};
  CHECK_THROWS_AS(check_admissible(a, 8, 1), DomainError);
  const auto corrupted = apply_advances(lsymbol_read(x, 2, ReadMode::Cyclic), a);
  CHECK_THROWS_AS(decode_lsymbol(corrupted, 8, ConstraintParams{2, 2, 2}, ReadMode::Cyclic), DecodeError);
}

TEST_CASE("read vector basics") {
  const Word x{2, 0, 1};
  CHECK(lsymbol_read(x, 1, ReadMode::Cyclic).reads == std::vector<Word>{{2}, {0}, {1}});
  CHECK(lsymbol_read(Word{1, 1}, 2, ReadMode::Acyclic, 0).reads == std::vector<Word>{{1, 1}, {1, 0}});
  CHECK(lsymbol_read(Word{1, 1}, 3, ReadMode::Acyclic, 2).reads == std::vector<Word>{{1, 1, 2}, {1, 2, 2}});
  CHECK_THROWS_AS(lsymbol_read(x, 0, ReadMode::Cyclic), InvalidInput);
  CHECK(format_reads(lsymbol_read(x, 2, ReadMode::Cyclic)) == "2 0\n0 1\n1 2\n");
}

TEST_CASE("advance patterns") {
  std::mt19937_64 rng(5);
  const auto r = lsymbol_read(random_symbols(12, 2, rng), 3, ReadMode::Acyclic);
  CHECK(apply_advances(r, AdvancePattern{ReadMode::Acyclic, 0, std::vector<std::size_t>(11, 1)}) == r);

  std::vector<std::size_t> adv(11, 1);
  adv.insert(adv.begin() + 4, 0);
  const auto dup = apply_advances(r, AdvancePattern{ReadMode::Acyclic, 0, adv});
  CHECK(dup.reads.size() == 13);
  CHECK(dup.reads[4] == dup.reads[5]);

  CHECK_THROWS_AS(apply_advances(r, AdvancePattern{ReadMode::Acyclic, 0, std::vector<std::size_t>(12, 1)}),
                  DomainError);
  CHECK_THROWS_AS(check_admissible(AdvancePattern{ReadMode::Acyclic, 0, {1, 3}}, 5, 2), DomainError);
  CHECK_THROWS_AS(check_admissible(AdvancePattern{ReadMode::Acyclic, 1, {1}}, 3, 2), DomainError);
  CHECK_THROWS_AS(check_admissible(AdvancePattern{ReadMode::Acyclic, 0, {1}}, 5, 2), DomainError);
  CHECK_NOTHROW(check_admissible(AdvancePattern{ReadMode::Acyclic, 0, {1, 2}}, 5, 2));
  CHECK_NOTHROW(check_admissible(AdvancePattern{ReadMode::Cyclic, 1, {1, 2}}, 5, 2));
  CHECK_THROWS_AS(check_admissible(AdvancePattern{ReadMode::Cyclic, 2, {1, 2}}, 5, 2), DomainError);

  const auto p = AdvancePattern::from_positions({1, 1, 3, 4}, ReadMode::Cyclic);
  CHECK(p.start == 1);
  CHECK(p.advances == std::vector<std::size_t>{0, 2, 1});
  CHECK_THROWS_AS(AdvancePattern::from_positions({2, 1}, ReadMode::Cyclic), InvalidInput);
}

TEST_CASE("clean channel round-trips 500 random words") {
  const ConstraintParams c{3, 3, 2};
  const Enumerator e(c, 40);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const Word x = random_constrained(e, rng);
    const auto d = decode_lsymbol(lsymbol_read(x, 4, ReadMode::Acyclic), 40, c, ReadMode::Acyclic);
    REQUIRE(d.word == x);
    // past-end symbols are unknown, so only reads clear of the end are pinned
    for (std::size_t t = 0; t + 4 < 40; ++t) CHECK(d.positions[t] == t);
    CHECK(std::count(d.alignments.begin(), d.alignments.end(), d.alignments.front()) == 1);
  }
}

TEST_CASE("exhaustive recovery of (3,3) cyclic words of length 8") {
  CHECK(sweep_failures(8, ReadMode::Cyclic, std::nullopt) == 0);
}

TEST_CASE("exhaustive acyclic recovery for lengths up to 8, known and unknown pad") {
  for (std::size_t n = 1; n <= 8; ++n) {
    CAPTURE(n);
    CHECK(sweep_failures(n, ReadMode::Acyclic, Symbol(0)) == 0);
    CHECK(sweep_failures(n, ReadMode::Acyclic, std::nullopt) == 0);
  }
}

TEST_CASE("exhaustive cyclic recovery for short words") {
  for (std::size_t n = 1; n <= 7; ++n) {
    CAPTURE(n);
    CHECK(sweep_failures(n, ReadMode::Cyclic, std::nullopt) == 0);
  }
}

TEST_CASE("decoded positions match the injected pattern away from the tail") {
  const ConstraintParams c{4, 3, 3};
  const std::size_t n = 60, ell = 5;
  const Enumerator e(c, n);
  std::mt19937_64 rng(3);
  const ChannelModel model{2, 6, 0.2, 2};
  for (int i = 0; i < 200; ++i) {
    const Word x = random_constrained(e, rng);
    const auto a = sample_pattern(n, ReadMode::Acyclic, model, rng);
    check_admissible(a, n, 3);
    const auto d = decode_lsymbol(apply_advances(lsymbol_read(x, ell, ReadMode::Acyclic), a), n, c,
                                  ReadMode::Acyclic, DecodeOptions{Symbol(0), {}});
    REQUIRE(d.word == x);
    const auto truth = a.positions();
    for (std::size_t t = 0; t < truth.size(); ++t)
      if (truth[t] + ell < n) CHECK(d.positions[t] == truth[t]);
    bool found = false;
    for (const auto& al : d.alignments) found = found || al == truth;
    CHECK(found);
  }
}

TEST_CASE("random cyclic and acyclic trials at length 256") {
  SimulationSpec s;
  s.seed = 2024;
  s.n = 256;
  s.c = {3, 3, 2};
  s.t1 = 10;
  s.trials = 300;
  s.sticky_probability = 0.15;
  s.mode = ReadMode::Cyclic;
  CHECK(simulate_lsymbol(s).failures == 0);
  s.mode = ReadMode::Acyclic;
  CHECK(simulate_lsymbol(s).failures == 0);
  s.c = {5, 2, 3};
  CHECK(simulate_lsymbol(s).failures == 0);
}

TEST_CASE("a corrupted read is reported by index") {
  const ConstraintParams c{3, 3, 2};
  const Enumerator e(c, 30);
  std::mt19937_64 rng(8);
  const Word x = random_constrained(e, rng);
  auto r = lsymbol_read(x, 4, ReadMode::Cyclic);
  for (auto& s : r.reads[12]) s ^= 1;
  try {
    decode_lsymbol(r, 30, c, ReadMode::Cyclic);
    FAIL("corruption went unnoticed");
  } catch (const DecodeError& err) {
    CHECK(err.index() >= 12);
    CHECK(err.index() <= 13);
    CHECK(err.stage() == "lsymbol");
  }
  CHECK_THROWS_AS(decode_lsymbol(as_reads(3, {{0, 1, 1}}), 5, c, ReadMode::Cyclic), InvalidInput);
  CHECK_THROWS_AS(decode_lsymbol(as_reads(4, {}), 5, c, ReadMode::Cyclic), InvalidInput);
}

TEST_CASE("longer bursts than the model allows are never silently accepted as clean") {
  const ConstraintParams c{3, 3, 2};
  const std::size_t n = 40;
  const Enumerator e(c, n);
  std::mt19937_64 rng(21);
  std::size_t flagged = 0, wrong = 0;
  for (int i = 0; i < 300; ++i) {
    const Word x = random_constrained(e, rng);
    std::vector<std::size_t> pos;
    const std::size_t cut = 5 + rng() % 25;
    for (std::size_t p = 0; p < n; ++p)
      if (p < cut || p > cut + 1) pos.push_back(p);
    const auto r = as_reads(4, oracle::reads_at(x, 4, false, 0, pos));
    try {
      if (decode_lsymbol(r, n, c, ReadMode::Acyclic, DecodeOptions{Symbol(0), {}}).word != x) ++wrong;
    } catch (const DecodeError&) {
      ++flagged;
    }
  }
  CHECK(flagged + wrong == 300);
  CHECK(flagged > 0);
}

TEST_CASE("error sets from read positions") {
  const auto e = error_sets_from_positions({0, 1, 1, 3, 5, 5, 5}, 7);
  CHECK(e.deletions == std::vector<std::size_t>{2, 4, 6});
  CHECK(e.insertions == std::vector<std::size_t>{1, 5, 5});
}

TEST_CASE("deletion location in a marker word") {
  const Word ref{0, 1, 2, 0, 1, 2};
  CHECK(locate_deletions_b1(ref, Word{0, 0, 1, 2}, 3).deletions == std::vector<std::size_t>{1, 2});
  CHECK(locate_deletions_b1(ref, ref, 3) == ErrorSets{});
  CHECK(locate_deletions_b1(ref, Word{0, 1, 2, 0, 1}, 3).deletions == std::vector<std::size_t>{5});
  CHECK(locate_deletions_b1(ref, Word{1, 2, 0, 1, 2}, 3).deletions == std::vector<std::size_t>{0});
  CHECK(locate_deletions_b1(ref, Word{0, 2, 1}, 3).deletions == std::vector<std::size_t>{1, 3, 5});
  CHECK_THROWS_AS(locate_deletions_b1(ref, Word{0, 0, 0}, 3), DecodeError);
  CHECK_THROWS_AS(locate_deletions_b1(ref, Word{0, 2, 1, 0}, 3), DecodeError);
  CHECK_THROWS_AS(locate_deletions_b1(Word{0, 1, 0}, Word{0}, 3), InvalidInput);
}

TEST_CASE("sticky copies then deletions in a marker word") {
  const Word ref{0, 1, 2, 0, 1, 2};
  const auto e = locate_sticky_and_deletions(ref, Word{0, 1, 1, 2, 0, 1, 2}, 3);
  CHECK(e.insertions == std::vector<std::size_t>{1});
  CHECK(e.deletions.empty());
  CHECK(locate_sticky_and_deletions(ref, ref, 3) == ErrorSets{});

  const Word ref4{0, 1, 2, 3, 0, 1, 2, 3};
  // drop 1 and 2, repeat the first 0 and the 3
  const auto mixed = locate_sticky_and_deletions(ref4, Word{0, 0, 3, 3, 0, 1, 2, 3}, 4);
  CHECK(mixed.deletions == std::vector<std::size_t>{1, 2});
  CHECK(mixed.insertions == std::vector<std::size_t>{0, 3});
}

TEST_CASE("marker decoding recovers exactly the injected sets") {
  for (std::uint32_t b : {2u, 3u, 4u}) {
    for (std::size_t n = 1; n <= 10; ++n) {
      const Word ref = cyclic_marker(n, b);
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::vector<std::size_t> kept, gone;
        std::size_t run = 0, worst = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (mask >> i & 1) {
            gone.push_back(i);
            worst = std::max(worst, ++run);
          } else {
            kept.push_back(i);
            run = 0;
          }
        }
        if (kept.empty()) continue;
        if (worst <= b - 1) {
          const auto e = locate_deletions_b1(ref, oracle::keep(ref, kept), b);
          REQUIRE(e.deletions == gone);
        }
        if (b >= 3 && worst <= b - 2) {
          // one extra copy of every other surviving symbol
          std::vector<std::size_t> reads, extra;
          for (std::size_t j = 0; j < kept.size(); ++j) {
            reads.push_back(kept[j]);
            if (j % 2 == 0) {
              reads.push_back(kept[j]);
              extra.push_back(kept[j]);
            }
          }
          const auto e = locate_sticky_and_deletions(ref, oracle::keep(ref, reads), b);
          REQUIRE(e.deletions == gone);
          REQUIRE(e.insertions == extra);
        }
      }
    }
  }
}

TEST_CASE("Reed-Solomon erasure example over GF(16)") {
  const ErasureCode code(ErasureCodeSpec{16, 6, 2});
  CHECK(code.group_size() == 1);
  CHECK(code.data_length() == 4);
  const Word data{3, 14, 0, 9};
  const Word cw = code.encode(data);
  CHECK(Word(cw.begin(), cw.begin() + 4) == data);
  Word hit = cw;
  hit[1] = 0;
  hit[5] = 7;
  CHECK(code.decode(hit, {1, 5}) == cw);
  CHECK(code.extract_data(code.decode(cw, {})) == data);
  CHECK_THROWS_AS(code.decode(hit, {1, 4, 5}), DecodeError);
  Word bad = cw;
  bad[2] ^= 1;
  CHECK_THROWS_AS(code.decode(bad, {1}), DecodeError);
  CHECK_THROWS_AS(code.encode(Word{1, 2, 3}), InvalidInput);
  CHECK_THROWS_AS(ErasureCode(ErasureCodeSpec{6, 5, 1}), InvalidInput);
  CHECK_THROWS_AS(ErasureCode(ErasureCodeSpec{16, 4, 4}), InvalidInput);
}

TEST_CASE("every erasure pattern up to t is recovered") {
  std::mt19937_64 rng(99);
  for (std::uint32_t q : {11u, 16u}) {
    for (std::size_t n = 2; n <= 10; ++n) {
      for (std::size_t t = 0; t <= 3 && t < n; ++t) {
        const ErasureCode code(ErasureCodeSpec{q, n, t});
        REQUIRE(code.data_length() == n - t);
        for (int rep = 0; rep < 3; ++rep) {
          const Word data = random_symbols(n - t, q, rng);
          const Word cw = code.encode(data);
          for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            if (std::size_t(__builtin_popcount(mask)) > t) continue;
            std::vector<std::size_t> er;
            Word hit = cw;
            for (std::size_t i = 0; i < n; ++i)
              if (mask >> i & 1) {
                er.push_back(i);
                hit[i] = Symbol(rng() % q);
              }
            REQUIRE(code.decode(hit, er) == cw);
          }
        }
      }
    }
  }
}

TEST_CASE("small Reed-Solomon codes are MDS") {
  const ErasureCode code(ErasureCodeSpec{4, 4, 2});
  std::set<Word> words;
  for (const auto& d : oracle::all_words(4, 2)) words.insert(code.encode(d));
  CHECK(words.size() == 16);
  for (const auto& a : words)
    for (const auto& b : words) {
      if (a == b) continue;
      std::size_t dist = 0;
      for (std::size_t i = 0; i < 4; ++i) dist += a[i] != b[i];
      CHECK(dist >= 3);
    }
}

TEST_CASE("packed codes for lengths beyond the field") {
  const ErasureCode code(ErasureCodeSpec{4, 32, 2});
  CHECK(code.group_size() == 2);
  CHECK(code.packed_field_size() == 16);
  CHECK(code.data_length() == 28);
  const ErasureCode odd(ErasureCodeSpec{4, 5, 1});
  CHECK(odd.group_size() == 2);
  CHECK(odd.data_length() == 3);
  std::mt19937_64 rng(4);
  for (const ErasureCode* c : {&code, &odd}) {
    const auto& s = c->spec();
    const Word data = random_symbols(c->data_length(), s.q, rng);
    const Word cw = c->encode(data);
    CHECK(c->extract_data(cw) == data);
    for (std::size_t i = 0; i < s.n; ++i)
      for (std::size_t j = i; j < s.n; ++j) {
        std::vector<std::size_t> er{i};
        if (s.t > 1 && j != i) er.push_back(j);
        Word hit = cw;
        for (auto p : er) hit[p] = 0;
        REQUIRE(c->decode(hit, er) == cw);
      }
  }
}

TEST_CASE("marker construction with one burst of two deletions") {
  const Construction2Code code(Construction2Params{3, 3, 16, 12, 1, ChannelRegime::DeletionsOnly});
  CHECK(code.erasure_capability() == 2);
  CHECK(code.alphabet_size() == 48);
  CHECK(code.marker() == Word{0, 1, 2, 0, 1, 2, 0, 1, 2, 0, 1, 2});
  std::mt19937_64 rng(12);
  const Word data = random_symbols(code.data_length(), 16, rng);
  const Word f = code.encode(data);
  CHECK(code.decode(f) == data);
  for (std::size_t i = 0; i + 1 < 12; ++i) {
    Word r = f;
    r.erase(r.begin() + std::ptrdiff_t(i), r.begin() + std::ptrdiff_t(i + 2));
    REQUIRE(code.decode(r) == data);
  }
  Word three = f;
  three.erase(three.begin() + 3, three.begin() + 6);
  CHECK_THROWS_AS(code.decode(three), DecodeError);
  CHECK_THROWS_AS(Construction2Code(Construction2Params{3, 2, 16, 12, 1, ChannelRegime::DeletionsOnly}),
                  InvalidInput);
}

TEST_CASE("marker construction under bursts and sticky copies, 10^4 trials") {
  const Construction2Params p{4, 4, 32, 24, 2, ChannelRegime::StickyAndDeletions};
  const Construction2Code code(p);
  CHECK(code.erasure_capability() == 4);
  std::size_t failures = 0;
  for (std::uint64_t trial = 0; trial < 10000; ++trial) {
    std::mt19937_64 rng(trial_seed(77, trial));
    const Word data = random_symbols(code.data_length(), p.q2, rng);
    const Word f = code.encode(data);
    // t1 bursts of b - 2 deletions, then three sticky copies
    std::vector<bool> gone(p.n, false);
    std::size_t placed = 0;
    while (placed < p.t1) {
      const std::size_t s = rng() % (p.n - 1);
      if ((s > 0 && gone[s - 1]) || gone[s] || gone[s + 1] || (s + 2 < p.n && gone[s + 2])) continue;
      gone[s] = gone[s + 1] = true;
      ++placed;
    }
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < p.n; ++i)
      if (!gone[i]) kept.push_back(i);
    for (int s = 0; s < 3; ++s) {
      const std::size_t at = rng() % kept.size();
      kept.insert(kept.begin() + std::ptrdiff_t(at), kept[at]);
    }
    try {
      if (code.decode(oracle::keep(f, kept)) != data) ++failures;
    } catch (const DecodeError&) {
      ++failures;
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("marker construction beyond the model fails without crashing") {
  const Construction2Params p{4, 4, 32, 24, 1, ChannelRegime::StickyAndDeletions};
  const Construction2Code code(p);
  std::mt19937_64 rng(31);
  std::size_t flagged = 0, wrong = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Word data = random_symbols(code.data_length(), p.q2, rng);
    Word r = code.encode(data);
    const std::size_t s = rng() % (p.n - 3);
    r.erase(r.begin() + std::ptrdiff_t(s), r.begin() + std::ptrdiff_t(s + 3));  // b - 1 in a row
    const std::size_t at = rng() % r.size();
    r.insert(r.begin() + std::ptrdiff_t(at), r[at]);
    try {
      if (code.decode(r) != data) ++wrong;
    } catch (const DecodeError&) {
      ++flagged;
    }
  }
  CHECK(flagged + wrong == 500);
  CHECK(flagged == 500);
}

TEST_CASE("racetrack layout with two extra heads") {
  const RacetrackLayout l{3, 5, {3, 2, 2}, 1};
  CHECK(l.ell() == 3);
  CHECK(l.heads() == 5);
  CHECK(l.symbol_size() == 4);
  const RacetrackCode code(l);
  CHECK(code.erasure_code().data_length() == 3);
  const auto& e = code.first_segment_enumerator();
  std::mt19937_64 rng(6);
  for (BigCount idx = 0; idx < e.count(); ++idx) {
    const RacetrackMessage msg{idx, random_symbols(3, 4, rng)};
    const Word cells = code.encode(msg);
    CHECK(cells.size() == 15);
    CHECK(Word(cells.begin(), cells.begin() + 5) == e.unrank(idx));
    const AdvancePattern clean{ReadMode::Acyclic, 0, {1, 1, 1, 1}};
    const auto out = code.read(cells, clean);
    CHECK(out.size() == 5);
    for (std::size_t t = 0; t < 5; ++t) {
      CHECK(out[1][t] == cells[5 + t]);
      CHECK(out[3][t] == cells[t + 1]);
      CHECK(out[4][t] == cells[t + 2]);
    }
    CHECK(code.decode(out) == msg);
    CHECK(code.decode(code.read(cells, AdvancePattern{ReadMode::Acyclic, 0, {1, 2, 0, 1}})) == msg);
  }
}

TEST_CASE("racetrack round trips at n = 32") {
  SimulationSpec s;
  s.seed = 5;
  s.n = 32;
  s.m = 3;
  s.c = {3, 2, 2};
  s.t1 = 2;
  s.trials = 1000;
  const auto rep = simulate_racetrack(s);
  CHECK(rep.failures == 0);
  CHECK(rep.spec.mode == ReadMode::Acyclic);
}

TEST_CASE("racetrack failures are tagged by stage") {
  const RacetrackCode code(RacetrackLayout{3, 32, {3, 2, 2}, 2});
  std::mt19937_64 rng(14);
  const auto& e = code.first_segment_enumerator();
  const RacetrackMessage msg{random_below(e.count(), rng), random_symbols(28, 4, rng)};
  const Word cells = code.encode(msg);
  std::vector<std::size_t> pos;
  for (std::size_t p = 0; p < 32; ++p)
    if (p != 5 && p != 11 && p != 17) pos.push_back(p);
  auto out = code.read(cells, AdvancePattern::from_positions(pos, ReadMode::Acyclic));
  try {
    code.decode(out);
    FAIL("three erased columns decoded");
  } catch (const DecodeError& err) {
    CHECK(err.stage() == "erasure");
  }
  out = code.read(cells, AdvancePattern{ReadMode::Acyclic, 0, std::vector<std::size_t>(31, 1)});
  for (std::size_t t = 10; t < 14; ++t) out[3][t] ^= 1;
  try {
    code.decode(out);
    FAIL("corrupted trailing head decoded");
  } catch (const DecodeError& err) {
    CHECK(err.stage() == "lsymbol");
  }
  CHECK_THROWS_AS(RacetrackCode(RacetrackLayout{1, 32, {3, 2, 2}, 2}), InvalidInput);
  CHECK_THROWS_AS(RacetrackCode(RacetrackLayout{3, 32, {2, 2, 2}, 2}), InvalidInput);
}

TEST_CASE("a deletion before the last read can mimic a trailing deletion") {
  // With an unpacked MDS code two admissible patterns can give identical head
  // outputs for two different messages; the decoder must refuse to choose.
  const RacetrackLayout l{5, 16, {3, 2, 2}, 2};
  const RacetrackCode code(l);
  REQUIRE(code.erasure_code().group_size() == 1);
  const auto& e = code.first_segment_enumerator();
  std::mt19937_64 rng(17);
  Word first;
  do first = e.unrank(random_below(e.count(), rng));
  while (!(first[13] == 1 && first[14] == 0 && first[15] == 0));
  Word data;
  Word cw;
  do {
    data = random_symbols(code.erasure_code().data_length(), 16, rng);
    cw = code.erasure_code().encode(data);
  } while (cw[0] % 2 != 0 || cw[1] % 2 != 0);
  const RacetrackMessage one{e.rank(first), data};

  // the same outputs, read as a clean step into column 14 and a lost column 15
  Word shifted = cw;
  shifted[14] = cw[15];
  const Word other = code.erasure_code().decode(shifted, {6, 15});
  const RacetrackMessage two{one.first_segment, code.erasure_code().extract_data(other)};
  REQUIRE(two.data != one.data);

  std::vector<std::size_t> p1, p2;
  for (std::size_t p = 0; p < 16; ++p) {
    if (p != 6 && p != 14) p1.push_back(p);
    if (p != 6 && p != 15) p2.push_back(p);
  }
  const auto out1 = code.read(code.encode(one), AdvancePattern::from_positions(p1, ReadMode::Acyclic));
  const auto out2 = code.read(code.encode(two), AdvancePattern::from_positions(p2, ReadMode::Acyclic));
  CHECK(out1 == out2);
  CHECK_THROWS_AS(code.decode(out1), DecodeError);
}

TEST_CASE("rate bounds") {
  const BoundSpec s{0.1, 0.01};
  const double q = 1024;
  CHECK(rate_bound(RateRegime::DeletionsOnly, s, 3, q) == doctest::Approx(0.8 * 0.89).epsilon(1e-12));
  CHECK(rate_bound(RateRegime::StickyAndDeletions, s, 3, q) ==
        doctest::Approx((1 - std::log2(5.0) / 10) * 0.89).epsilon(1e-12));
  const BoundSpec tiny{1e-12, 1e-12};
  CHECK(rate_bound(RateRegime::DeletionsOnly, tiny, 3, 16) == doctest::Approx(0.5).epsilon(1e-9));

  const double rdb = 0.7946;
  for (std::size_t m : {2u, 4u, 10u}) {
    CHECK(rate_bound(RateRegime::ExtraHeads, BoundSpec{0.21, 1e-9}, 3, 2, m, rdb) > 0.79);
    CHECK(rate_bound(RateRegime::ExtraHeads, BoundSpec{0.20, 1e-9}, 3, 2, m, rdb) < 0.80);
  }
  CHECK(rate_bound(RateRegime::ExtraHeads, s, 3, 2, 1, rdb) == doctest::Approx(rdb));
  CHECK_THROWS_AS(rate_bound(RateRegime::DeletionsOnly, BoundSpec{0, 0.1}, 3, q), InvalidInput);
  CHECK_THROWS_AS(rate_bound(RateRegime::DeletionsOnly, BoundSpec{0.1, 1}, 3, q), InvalidInput);
  CHECK_THROWS_AS(rate_bound(RateRegime::DeletionsOnly, s, 3, 1), InvalidInput);
}

TEST_CASE("simulation manifests") {
  SimulationSpec s;
  s.seed = 9;
  s.n = 40;
  s.trials = 0;
  const auto empty = nlohmann::json::parse(simulate_lsymbol(s).to_json());
  CHECK(empty["schema"] == 1);
  CHECK(empty["trials"] == 0);
  CHECK(empty["failures"] == 0);
  CHECK(empty["failure_indices"].empty());
  CHECK(empty["ell"] == 4);
  CHECK(empty["mode"] == "cyclic");
  s.trials = 50;
  const std::string a = simulate_lsymbol(s).to_json();
  CHECK(a == simulate_lsymbol(s).to_json());
  s.seed = 10;
  CHECK(nlohmann::json::parse(simulate_lsymbol(s).to_json())["seed"] == 10);
  CHECK(trial_seed(1, 0) != trial_seed(1, 1));
  CHECK(trial_seed(1, 0) != trial_seed(2, 0));
}

TEST_CASE("uniform draws below a bound") {
  std::mt19937_64 rng(1);
  const BigCount bound = 5;
  std::vector<int> hits(5, 0);
  for (int i = 0; i < 5000; ++i) hits[int(random_below(bound, rng))]++;
  for (int h : hits) CHECK(h > 850);
  const BigCount big = BigCount(1) << 130;
  for (int i = 0; i < 20; ++i) CHECK(random_below(big, rng) < big);
  CHECK_THROWS_AS(random_below(0, rng), InvalidInput);
}
