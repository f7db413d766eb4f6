#include "cdb/channels.hpp"

#include "cdb/error.hpp"

#include <json.hpp>

#include <map>

namespace cdb {

std::uint32_t RacetrackLayout::symbol_size() const {
  std::uint64_t q = 1;
  for (std::size_t i = 1; i < m; ++i) {
    q *= c.sigma;
    if (q > kMaxSigma) throw InvalidInput("too many segments for one column symbol");
  }
  return std::uint32_t(q);
}

namespace {

const RacetrackLayout& checked(const RacetrackLayout& l) {
  l.c.validate();
  if (l.m < 2) throw InvalidInput("a racetrack needs at least two segments");
  if (l.c.b < 3) throw InvalidInput("racetrack decoding needs b >= 3");
  if (l.n < l.ell()) throw InvalidInput("segments must be at least k + b - 2 cells long");
  return l;
}

}  // namespace

RacetrackCode::RacetrackCode(RacetrackLayout layout)
    : layout_(checked(layout)),
      code_(ErasureCodeSpec{layout.symbol_size(), layout.n, layout.erasure_capability()}),
      enumerator_(layout.c, layout.n) {}

Word RacetrackCode::encode(const RacetrackMessage& msg) const {
  const auto& l = layout_;
  const Word first = enumerator_.unrank(msg.first_segment);
  const Word column = code_.encode(msg.data);
  Word cells(l.m * l.n);
  std::copy(first.begin(), first.end(), cells.begin());
  for (std::size_t j = 0; j < l.n; ++j) {
    std::uint32_t v = column[j];
    for (std::size_t i = 1; i < l.m; ++i, v /= l.c.sigma) cells[i * l.n + j] = Symbol(v % l.c.sigma);
  }
  return cells;
}

std::vector<Word> RacetrackCode::read(WordView cells, const AdvancePattern& a) const {
  const auto& l = layout_;
  if (cells.size() != l.m * l.n) throw InvalidInput("cell count does not match the layout");
  if (a.mode != ReadMode::Acyclic) throw InvalidInput("racetrack heads shift acyclically");
  const auto pos = a.positions();
  std::vector<Word> out(l.heads(), Word(pos.size()));
  for (std::size_t t = 0; t < pos.size(); ++t) {
    if (pos[t] >= l.n) throw DomainError("heads shifted past the end of a segment");
    for (std::size_t h = 0; h < l.m; ++h) out[h][t] = cells[h * l.n + pos[t]];
    for (std::size_t d = 1; d < l.ell(); ++d) out[l.m + d - 1][t] = cells[pos[t] + d];
  }
  return out;
}

RacetrackMessage RacetrackCode::decode(const std::vector<Word>& outputs) const {
  const auto& l = layout_;
  if (outputs.size() != l.heads()) throw InvalidInput("expected one output stream per head");
  const std::size_t reads = outputs.front().size();
  for (const auto& o : outputs)
    if (o.size() != reads) throw InvalidInput("head outputs differ in length");
  if (reads == 0) throw InvalidInput("no reads to decode");

  ReadVector first{l.ell(), std::vector<Word>(reads, Word(l.ell()))};
  for (std::size_t t = 0; t < reads; ++t) {
    first.reads[t][0] = outputs[0][t];
    for (std::size_t d = 1; d < l.ell(); ++d) first.reads[t][d] = outputs[l.m + d - 1][t];
  }

  // The trailing heads run into segment 2, whose first cells head 1 has
  // already seen at reads placed without ambiguity.
  LsymbolDecoding seg = decode_lsymbol(first, l.n, l.c, ReadMode::Acyclic);
  DecodeOptions hinted;
  hinted.tail.assign(l.ell() - 1, std::nullopt);
  for (std::size_t t = 0; t < reads; ++t)
    if (seg.positions[t] < l.ell() - 1) hinted.tail[seg.positions[t]] = outputs[1][t];
  seg = decode_lsymbol(first, l.n, l.c, ReadMode::Acyclic, hinted);

  std::vector<std::uint32_t> column(reads, 0);
  for (std::size_t t = 0; t < reads; ++t) {
    std::uint32_t v = 0;
    for (std::size_t i = l.m; i-- > 1;) v = v * l.c.sigma + outputs[i][t];
    column[t] = v;
  }

  // Every alignment that yields a consistent erasure pattern is a candidate.
  std::map<Word, std::size_t> decoded;
  std::optional<DecodeError> last;
  for (const auto& align : seg.alignments) {
    std::vector<int> cell(l.n, -1);
    bool clash = false;
    for (std::size_t t = 0; t < reads && !clash; ++t) {
      int& c = cell[align[t]];
      if (c >= 0 && c != int(column[t])) clash = true;
      c = int(column[t]);
    }
    if (clash) {
      if (!last) last = DecodeError("sticky reads of one column disagree", 0, "columns");
      continue;
    }
    Word received(l.n, 0);
    std::vector<std::size_t> erased;
    for (std::size_t j = 0; j < l.n; ++j) {
      if (cell[j] < 0)
        erased.push_back(j);
      else
        received[j] = Symbol(cell[j]);
    }
    try {
      decoded[code_.extract_data(code_.decode(received, erased))]++;
    } catch (const DecodeError& e) {
      last = e;
    }
  }
  if (decoded.empty()) {
    if (last) throw *last;
    throw DecodeError("no alignment survived erasure decoding", 0, "erasure");
  }
  if (decoded.size() > 1) throw DecodeError("several alignments decode to different data", 0, "erasure");
  return RacetrackMessage{enumerator_.rank(seg.word), decoded.begin()->first};
}

namespace {

std::string mode_name(ReadMode m) { return m == ReadMode::Cyclic ? "cyclic" : "acyclic"; }

Word random_data(std::size_t len, std::uint32_t q, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> d(0, q - 1);
  Word w(len);
  for (auto& s : w) s = Symbol(d(rng));
  return w;
}

}  // namespace

std::string SimulationReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["kind"] = kind == SimulationKind::Racetrack ? "racetrack" : "lsymbol";
  j["seed"] = spec.seed;
  j["n"] = spec.n;
  j["b"] = spec.c.b;
  j["k"] = spec.c.k;
  j["sigma"] = spec.c.sigma;
  j["ell"] = spec.c.k + spec.c.b - 2;
  j["mode"] = mode_name(spec.mode);
  j["t1"] = spec.t1;
  j["sticky_probability"] = spec.sticky_probability;
  j["trials"] = spec.trials;
  if (kind == SimulationKind::Racetrack) j["m"] = spec.m;
  j["failures"] = failures;
  j["failure_indices"] = failure_indices;
  return j.dump(2) + "\n";
}

SimulationReport simulate_lsymbol(const SimulationSpec& spec) {
  spec.c.validate();
  if (spec.c.b < 2) throw InvalidInput("read decoding needs b >= 2");
  SimulationReport rep{spec, 0, {}};
  if (spec.trials == 0) return rep;
  const Enumerator words(spec.c, spec.n);
  if (words.count() == 0) throw DomainError("no constrained words of this length");
  const ChannelModel model{spec.c.b - 2, spec.t1, spec.sticky_probability, 3};
  for (std::size_t i = 0; i < spec.trials; ++i) {
    std::mt19937_64 rng(trial_seed(spec.seed, i));
    Word x = words.unrank(random_below(words.count(), rng));
    // cyclic trials redraw until the wraparound windows are constrained too
    while (spec.mode == ReadMode::Cyclic && !is_constrained_cyclic(CyclicWord(x), spec.c))
      x = words.unrank(random_below(words.count(), rng));
    const auto pattern = sample_pattern(spec.n, spec.mode, model, rng);
    const auto received = apply_advances(lsymbol_read(x, spec.c.k + spec.c.b - 2, spec.mode), pattern);
    try {
      DecodeOptions opt;
      if (spec.mode == ReadMode::Acyclic) opt.pad = 0;
      const auto got = decode_lsymbol(received, spec.n, spec.c, spec.mode, opt);
      const bool same = spec.mode == ReadMode::Cyclic ? CyclicWord(got.word) == CyclicWord(x) : got.word == x;
      if (same) continue;
    } catch (const DecodeError&) {
    }
    ++rep.failures;
    rep.failure_indices.push_back(i);
  }
  return rep;
}

SimulationReport simulate_racetrack(const SimulationSpec& spec) {
  SimulationSpec s = spec;
  s.mode = ReadMode::Acyclic;
  SimulationReport rep{s, 0, {}, SimulationKind::Racetrack};
  const RacetrackCode code(RacetrackLayout{spec.m, spec.n, spec.c, spec.t1});
  if (spec.trials == 0) return rep;
  const ChannelModel model{spec.c.b - 2, spec.t1, spec.sticky_probability, 3};
  const auto& words = code.first_segment_enumerator();
  if (words.count() == 0) throw DomainError("no constrained words of this length");
  for (std::size_t i = 0; i < spec.trials; ++i) {
    std::mt19937_64 rng(trial_seed(spec.seed, i));
    RacetrackMessage msg{random_below(words.count(), rng),
                         random_data(code.erasure_code().data_length(), code.layout().symbol_size(), rng)};
    const auto pattern = sample_pattern(spec.n, ReadMode::Acyclic, model, rng);
    try {
      if (code.decode(code.read(code.encode(msg), pattern)) == msg) continue;
    } catch (const DecodeError&) {
    }
    ++rep.failures;
    rep.failure_indices.push_back(i);
  }
  return rep;
}

}  // namespace cdb
