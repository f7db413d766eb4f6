#pragma once

#include "cdb/core.hpp"
#include "cdb/enumeration.hpp"
#include "cdb/erasure.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace cdb {

enum class ReadMode { Cyclic, Acyclic };

/// Overlapping reads of one source word, all of length ell.
struct ReadVector {
  std::size_t ell = 1;
  std::vector<Word> reads;

  friend bool operator==(const ReadVector&, const ReadVector&) = default;
};

/// The n reads (x_i, ..., x_{i+ell-1}). Cyclic reads wrap around; acyclic
/// reads past the end see pad.
ReadVector lsymbol_read(WordView x, std::size_t ell, ReadMode mode, Symbol pad = 0);

/// How a read head moves between consecutive reads. Advance 0 is a sticky
/// repeat, 1 a clean step and a > 1 skips a - 1 reads. Cyclic patterns may
/// begin at start > 0 (the reads before it were lost).
struct AdvancePattern {
  ReadMode mode = ReadMode::Acyclic;
  std::size_t start = 0;
  std::vector<std::size_t> advances;

  /// Source index of every read taken.
  std::vector<std::size_t> positions() const;
  static AdvancePattern from_positions(const std::vector<std::size_t>& positions, ReadMode mode);
};

/// Throws DomainError unless every advance lies in 0..max_advance, the
/// pattern begins within reach (cyclic: start < max_advance, acyclic:
/// start = 0) and the gap from the last read back to the end of the source
/// is 1..max_advance.
void check_admissible(const AdvancePattern& a, std::size_t n, std::size_t max_advance);

/// Reads of r picked by the pattern; positions must stay inside one turn.
ReadVector apply_advances(const ReadVector& r, const AdvancePattern& a);

inline constexpr std::size_t kUnknownPosition = std::numeric_limits<std::size_t>::max();

struct DecodeOptions {
  /// Acyclic only: the symbol seen past the end, if the reader knows it.
  std::optional<Symbol> pad;
  /// Acyclic only: known symbols at n, n+1, ... (overrides pad).
  std::vector<std::optional<Symbol>> tail;
  std::size_t node_budget = 1u << 20;
  std::size_t hypothesis_budget = 4096;
};

struct LsymbolDecoding {
  /// Cyclic mode: the source rotated to begin at the first read.
  Word word;
  /// Source index of each read, kUnknownPosition where consistent
  /// alignments disagree.
  std::vector<std::size_t> positions;
  /// Every consistent alignment found.
  std::vector<std::vector<std::size_t>> alignments;
};

/// Recovers a (b,k)-constrained word of length n from reads of length
/// k + b - 2 corrupted by sticky repeats and skips of at most b - 2 reads.
/// Acyclic decoding assumes the first read is intact. Throws DecodeError
/// carrying the index of the first read that could not be placed.
LsymbolDecoding decode_lsymbol(const ReadVector& r, std::size_t n, const ConstraintParams& c, ReadMode mode,
                               const DecodeOptions& options = {});

/// Positions are indices into the reference word. Insertions form a
/// multiset: one entry per extra copy.
struct ErrorSets {
  std::vector<std::size_t> deletions;
  std::vector<std::size_t> insertions;

  friend bool operator==(const ErrorSets&, const ErrorSets&) = default;
};

/// Error sets implied by read positions over a source of length n.
ErrorSets error_sets_from_positions(const std::vector<std::size_t>& positions, std::size_t n);

/// Deleted positions of a (b,1)-constrained reference given a copy with
/// bursts of at most b - 1 deletions, by greedy leftmost matching.
ErrorSets locate_deletions_b1(WordView reference, WordView received, std::uint32_t b);

/// As locate_deletions_b1 after collapsing sticky repeats; bursts of at most
/// b - 2 deletions.
ErrorSets locate_sticky_and_deletions(WordView reference, WordView received, std::uint32_t b);

/// Period-q1 marker 0, 1, ..., q1-1, 0, 1, ... of length n.
Word cyclic_marker(std::size_t n, std::uint32_t q1);

enum class ChannelRegime { DeletionsOnly, StickyAndDeletions };

struct Construction2Params {
  std::uint32_t b = 3;
  std::uint32_t q1 = 3;
  std::uint32_t q2 = 16;
  std::size_t n = 16;
  std::size_t t1 = 1;
  ChannelRegime regime = ChannelRegime::DeletionsOnly;
};

/// Zips a (b,1)-constrained marker with an erasure codeword; the pair
/// (c, s) is the symbol c * q1 + s.
class Construction2Code {
 public:
  explicit Construction2Code(Construction2Params p);

  const Construction2Params& params() const noexcept { return params_; }
  std::uint32_t alphabet_size() const noexcept { return params_.q1 * params_.q2; }
  /// t1 (b - 1) without sticky errors, t1 (b - 2) with them.
  std::size_t erasure_capability() const noexcept;
  std::size_t data_length() const noexcept { return code_.data_length(); }
  /// The largest skip between consecutive received symbols.
  std::size_t max_burst() const noexcept;
  const Word& marker() const noexcept { return marker_; }
  const ErasureCode& erasure_code() const noexcept { return code_; }

  Word encode(WordView data) const;
  /// Throws DecodeError tagged "marker" or "erasure".
  Word decode(WordView received) const;

 private:
  Construction2Params params_;
  ErasureCode code_;
  Word marker_;
};

/// m segments of n cells read by m segment heads plus ell - 1 extra heads
/// trailing the first head, all shifted together.
struct RacetrackLayout {
  std::size_t m = 3;
  std::size_t n = 32;
  ConstraintParams c{3, 2, 2};
  std::size_t t1 = 2;

  std::size_t ell() const noexcept { return c.k + c.b - 2; }
  std::size_t heads() const noexcept { return m + ell() - 1; }
  std::uint32_t symbol_size() const;
  std::size_t erasure_capability() const noexcept { return t1 * (c.b - 2); }
};

struct RacetrackMessage {
  BigCount first_segment;
  Word data;

  friend bool operator==(const RacetrackMessage&, const RacetrackMessage&) = default;
};

class RacetrackCode {
 public:
  explicit RacetrackCode(RacetrackLayout layout);

  const RacetrackLayout& layout() const noexcept { return layout_; }
  const ErasureCode& erasure_code() const noexcept { return code_; }
  const Enumerator& first_segment_enumerator() const noexcept { return enumerator_; }

  /// m n cells, segment by segment.
  Word encode(const RacetrackMessage& msg) const;
  /// outputs[h][t] is what head h saw at read t. Heads 0..m-1 sit on the
  /// segment starts; head m + d - 1 trails head 0 by d cells.
  std::vector<Word> read(WordView cells, const AdvancePattern& a) const;
  /// Throws DecodeError tagged "lsymbol", "columns" or "erasure".
  RacetrackMessage decode(const std::vector<Word>& outputs) const;

 private:
  RacetrackLayout layout_;
  ErasureCode code_;
  Enumerator enumerator_;
};

enum class RateRegime { DeletionsOnly, StickyAndDeletions, ExtraHeads };

struct BoundSpec {
  double delta = 0.1;
  double epsilon = 0.01;

  void validate() const;
};

/// Asymptotic rate achievable by the marker construction (deletions only or
/// with sticky errors) over F_q, or by the racetrack layout with m segments
/// whose first segment carries rate db_rate.
double rate_bound(RateRegime regime, const BoundSpec& spec, std::uint32_t b, double q, std::size_t m = 1,
                  double db_rate = 0.0);

/// Bursts of deletions at most max_burst long, at most max_bursts of them,
/// and sticky repeats with the given probability per read.
struct ChannelModel {
  std::size_t max_burst = 1;
  std::size_t max_bursts = 1;
  double sticky_probability = 0.1;
  std::size_t max_repeats = 3;
};

/// Random admissible read positions over a source of length n. Acyclic
/// patterns keep read 0; cyclic ones start within max_burst.
AdvancePattern sample_pattern(std::size_t n, ReadMode mode, const ChannelModel& model, std::mt19937_64& rng);

/// Uniform value in [0, bound).
BigCount random_below(const BigCount& bound, std::mt19937_64& rng);

/// Independent seed for trial i.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) noexcept;

struct SimulationSpec {
  std::uint64_t seed = 1;
  std::size_t n = 64;
  ConstraintParams c{3, 3, 2};
  ReadMode mode = ReadMode::Cyclic;
  std::size_t t1 = 4;
  std::size_t trials = 100;
  double sticky_probability = 0.1;
  /// Racetrack only.
  std::size_t m = 3;
};

enum class SimulationKind { Lsymbol, Racetrack };

struct SimulationReport {
  SimulationSpec spec;
  std::size_t failures = 0;
  std::vector<std::size_t> failure_indices;
  SimulationKind kind = SimulationKind::Lsymbol;

  /// Manifest; racetrack reports also carry the segment count m.

  std::string to_json() const;
};

/// Random constrained words through random admissible patterns; failures
/// are trials whose decode threw or returned a different word.
SimulationReport simulate_lsymbol(const SimulationSpec& spec);
SimulationReport simulate_racetrack(const SimulationSpec& spec);

/// One read per line, symbols separated by spaces.
std::string format_reads(const ReadVector& r);

}  // namespace cdb
