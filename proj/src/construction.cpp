#include "cdb/construction.hpp"

#include "cdb/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace cdb {

Construction1Code::Construction1Code(std::uint32_t q, std::uint32_t k, std::uint32_t ell)
    : field_(q), k_(k), ell_(ell) {
  if (k < 3) throw DomainError("construction needs k >= 3");
  if (ell < 1) throw DomainError("construction needs at least one block");
  sequences_ = all_msequences(field_, k);
}

BigCount Construction1Code::size() const {
  BigCount r = 1;
  for (std::uint32_t i = 0; i < ell_; ++i) r *= block_choices();
  return r;
}

ConstraintParams Construction1Code::constraint() const noexcept {
  return ConstraintParams{std::uint32_t(period()), 2 * k_, field_.q()};
}

std::size_t Construction1Code::generator_index(const Polynomial& p) const {
  for (std::size_t i = 0; i < sequences_.size(); ++i)
    if (sequences_[i].generator == p) return i;
  throw DomainError("generator " + format_polynomial(p) + " is not a primitive polynomial of degree " +
                    std::to_string(k_));
}

void Construction1Code::check(const Construction1Choice& c) const {
  if (c.blocks.size() != ell_)
    throw InvalidInput("expected " + std::to_string(ell_) + " blocks, got " + std::to_string(c.blocks.size()));
  for (const auto& b : c.blocks) {
    generator_index(b.generator);
    if (b.epsilon > k_ + 1) throw InvalidInput("epsilon must be in 0..k+1");
  }
}

Word Construction1Code::encode(const Construction1Choice& c) const {
  check(c);
  Word out;
  out.reserve(max_length());
  for (const auto& b : c.blocks) {
    const Word& s = sequences_[generator_index(b.generator)].word;
    out.insert(out.end(), s.begin(), s.end());
    out.insert(out.end(), b.epsilon, Symbol{0});
  }
  return out;
}

Construction1Choice Construction1Code::choice_from_index(const BigCount& index) const {
  if (index < 0 || index >= size()) throw DomainError("codeword index out of range");
  Construction1Choice c;
  c.blocks.resize(ell_);
  BigCount rest = index;
  const BigCount radix = block_choices();
  for (std::size_t i = ell_; i-- > 0;) {
    const auto digit = static_cast<std::uint64_t>(rest % radix);
    rest /= radix;
    c.blocks[i].generator = sequences_[digit / (k_ + 2)].generator;
    c.blocks[i].epsilon = std::uint32_t(digit % (k_ + 2));
  }
  return c;
}

BigCount Construction1Code::index_of(const Construction1Choice& c) const {
  check(c);
  BigCount r = 0;
  for (const auto& b : c.blocks) r = r * block_choices() + generator_index(b.generator) * (k_ + 2) + b.epsilon;
  return r;
}

Word Construction1Code::reference_codeword() const {
  // every block starts with a nonzero symbol, so more trailing zeros sort first
  const auto least = std::min_element(sequences_.begin(), sequences_.end(),
                                      [](const MSequence& a, const MSequence& b) { return a.word < b.word; });
  Construction1Choice c;
  c.blocks.assign(ell_, Construction1Block{least->generator, k_ + 1});
  return encode(c);
}

Word Construction1Code::encode_fixed_length(const BigCount& index) const {
  Word w = encode(choice_from_index(index));
  const Word ref = reference_codeword();
  w.insert(w.end(), ref.begin(), ref.begin() + std::ptrdiff_t(fixed_length() - w.size()));
  return w;
}

CyclicWord Construction1Code::encode_cyclic(const Construction1Choice& c) const {
  check(c);
  std::uint32_t zeros = 0;
  for (const auto& b : c.blocks) zeros += b.epsilon;
  if (zeros != cyclic_zero_budget())
    throw DomainError("cyclic codewords need the epsilons to sum to " + std::to_string(cyclic_zero_budget()));
  return CyclicWord(encode(c));
}

std::vector<Word> de_bruijn_cycles(std::uint32_t sigma, std::uint32_t k, std::size_t limit) {
  Alphabet{sigma}.validate();
  if (k < 1) throw InvalidInput("k must be >= 1");
  std::size_t vertices = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    vertices *= sigma;
    if (vertices > (1u << 20)) throw ResourceError("de Bruijn graph too large", 1u << 20);
  }
  std::vector<Word> out;
  std::vector<bool> used(vertices, false);
  Word path(k, 0);  // symbols so far; vertex i is path[i .. i+k-1]
  used[0] = true;
  // iterative DFS: choice[d] is the next symbol to try at depth d
  std::vector<std::uint32_t> choice{0};
  std::vector<std::size_t> vertex{0};
  while (!choice.empty()) {
    const std::size_t depth = choice.size();  // vertices on the path
    if (depth == vertices) {
      // closes iff the last vertex shifts back into 0^k, i.e. it is a 0^(k-1)
      if (vertex.back() % (vertices / sigma) == 0) {
        if (out.size() == limit) throw ResourceError("more de Bruijn cycles than the limit", limit);
        out.emplace_back(path.begin(), path.begin() + std::ptrdiff_t(vertices));
      }
      choice.pop_back();
      used[vertex.back()] = false;
      vertex.pop_back();
      path.pop_back();
      continue;
    }
    std::uint32_t& a = choice.back();
    if (a == sigma) {
      choice.pop_back();
      if (!vertex.empty()) {
        used[vertex.back()] = false;
        vertex.pop_back();
      }
      if (path.size() > k) path.pop_back();
      continue;
    }
    const std::size_t next = (vertex.back() * sigma + a) % vertices;
    ++a;
    if (used[next]) continue;
    used[next] = true;
    vertex.push_back(next);
    path.push_back(Symbol(a - 1));
    choice.push_back(0);
  }
  return out;
}

namespace {

/// Sorted codes of the cyclic windows; requires sigma^length < 2^64.
std::vector<std::uint64_t> window_codes(const Word& w, std::size_t length, std::uint32_t sigma) {
  std::vector<std::uint64_t> codes;
  const std::size_t n = w.size();
  codes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t c = 0;
    for (std::size_t t = 0; t < length; ++t) c = c * sigma + w[(i + t) % n];
    codes.push_back(c);
  }
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  return codes;
}

bool intersects(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return true;
    a[i] < b[j] ? ++i : ++j;
  }
  return false;
}

class Graph {
 public:
  explicit Graph(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0), adj_(n) {}
  void connect(std::size_t u, std::size_t v) {
    bits_[u * words_ + v / 64] |= std::uint64_t{1} << (v % 64);
    bits_[v * words_ + u / 64] |= std::uint64_t{1} << (u % 64);
    adj_[u].push_back(std::uint32_t(v));
    adj_[v].push_back(std::uint32_t(u));
  }
  bool adjacent(std::size_t u, std::size_t v) const { return bits_[u * words_ + v / 64] >> (v % 64) & 1; }
  const std::vector<std::uint32_t>& neighbors(std::size_t u) const { return adj_[u]; }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_, words_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::vector<std::uint32_t>> adj_;
};

/// Solution state with tightness counts: tight[v] = number of solution neighbors.
class LocalSearch {
 public:
  LocalSearch(const Graph& g, std::mt19937_64& rng) : g_(g), rng_(rng), in_(g.size(), false), tight_(g.size(), 0) {}

  void add(std::size_t v) {
    in_[v] = true;
    ++count_;
    for (auto u : g_.neighbors(v)) ++tight_[u];
  }
  void remove(std::size_t v) {
    in_[v] = false;
    --count_;
    for (auto u : g_.neighbors(v)) --tight_[u];
  }
  std::size_t count() const { return count_; }
  const std::vector<bool>& members() const { return in_; }
  void assign(const std::vector<bool>& in) {
    for (std::size_t v = 0; v < g_.size(); ++v)
      if (in_[v]) remove(v);
    for (std::size_t v = 0; v < g_.size(); ++v)
      if (in[v]) add(v);
  }

  /// Adds free vertices (no solution neighbor) in random order.
  void fill() {
    std::vector<std::size_t> order(g_.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng_);
    for (auto v : order)
      if (!in_[v] && tight_[v] == 0) add(v);
  }

  /// Replaces one member by two non-adjacent vertices that are tight only on it.
  bool two_improvement() {
    std::vector<std::size_t> sol;
    for (std::size_t v = 0; v < g_.size(); ++v)
      if (in_[v]) sol.push_back(v);
    std::shuffle(sol.begin(), sol.end(), rng_);
    for (auto x : sol) {
      std::vector<std::uint32_t> cand;
      for (auto u : g_.neighbors(x))
        if (tight_[u] == 1) cand.push_back(u);
      for (std::size_t i = 0; i < cand.size(); ++i)
        for (std::size_t j = i + 1; j < cand.size(); ++j)
          if (!g_.adjacent(cand[i], cand[j])) {
            remove(x);
            add(cand[i]);
            add(cand[j]);
            fill();
            return true;
          }
    }
    return false;
  }

  void improve() {
    fill();
    while (two_improvement()) {
    }
  }

  /// Forces a random outside vertex in, evicting its solution neighbors.
  void perturb() {
    std::uniform_int_distribution<std::size_t> pick(0, g_.size() - 1);
    for (int tries = 0; tries < 64; ++tries) {
      const std::size_t v = pick(rng_);
      if (in_[v]) continue;
      for (auto u : g_.neighbors(v))
        if (in_[u]) remove(u);
      add(v);
      return;
    }
  }

 private:
  const Graph& g_;
  std::mt19937_64& rng_;
  std::vector<bool> in_;
  std::vector<std::uint32_t> tight_;
  std::size_t count_ = 0;
};

}  // namespace

bool share_window(const Word& a, const Word& b, std::size_t length) {
  if (a.empty() || b.empty()) return false;
  auto windows = [length](const Word& w) {
    std::vector<Word> out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      Word x(length);
      for (std::size_t t = 0; t < length; ++t) x[t] = w[(i + t) % w.size()];
      out.push_back(std::move(x));
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  const auto wa = windows(a), wb = windows(b);
  std::vector<Word> common;
  std::set_intersection(wa.begin(), wa.end(), wb.begin(), wb.end(), std::back_inserter(common));
  return !common.empty();
}

IndependentSetResult db_independent_set(std::uint32_t sigma, std::uint32_t k, std::uint32_t delta,
                                        const IndependentSetOptions& options) {
  const std::size_t length = std::size_t(k) + delta + 1;
  double bits = 0;
  for (std::size_t i = 0; i < length; ++i) bits += std::log2(double(sigma));
  if (bits >= 63) throw InvalidInput("window length k + delta + 1 too long for this alphabet");

  IndependentSetResult result;
  result.sigma = sigma;
  result.k = k;
  result.delta = delta;
  const std::vector<Word> cycles = de_bruijn_cycles(sigma, k);
  result.cycles = cycles.size();

  std::vector<std::vector<std::uint64_t>> codes;
  codes.reserve(cycles.size());
  for (const auto& c : cycles) codes.push_back(window_codes(c, length, sigma));
  Graph g(cycles.size());
  for (std::size_t u = 0; u < cycles.size(); ++u)
    for (std::size_t v = u + 1; v < cycles.size(); ++v)
      if (intersects(codes[u], codes[v])) {
        g.connect(u, v);
        ++result.conflicts;
      }

  std::mt19937_64 rng(options.seed);
  LocalSearch ls(g, rng);
  // greedy start: repeatedly take a minimum-degree vertex among the free ones
  {
    std::vector<std::size_t> order(g.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return g.neighbors(a).size() < g.neighbors(b).size(); });
    std::vector<bool> blocked(g.size(), false);
    for (auto v : order) {
      if (blocked[v]) continue;
      ls.add(v);
      for (auto u : g.neighbors(v)) blocked[u] = true;
    }
  }
  ls.improve();
  std::vector<bool> best = ls.members();
  std::size_t best_count = ls.count();
  for (std::size_t it = 0; it < options.iterations && best_count < g.size(); ++it) {
    ls.perturb();
    ls.improve();
    if (ls.count() > best_count) {
      best = ls.members();
      best_count = ls.count();
    } else if (ls.count() + 1 < best_count) {
      ls.assign(best);  // drifted too far; restart from the incumbent
    }
  }
  for (std::size_t v = 0; v < g.size(); ++v)
    if (best[v]) result.members.push_back(cycles[v]);
  std::sort(result.members.begin(), result.members.end());
  return result;
}

}  // namespace cdb
