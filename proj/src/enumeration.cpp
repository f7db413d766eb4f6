#include "cdb/enumeration.hpp"

#include "cdb/error.hpp"
#include "parallel.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace cdb {

namespace {

using State = ConstraintAutomaton::State;

BigCount count_paths(const ConstraintAutomaton& a, std::size_t n) {
  if (a.empty() || a.initial() == ConstraintAutomaton::kNone) return n == 0 ? 1 : 0;
  const std::size_t states = a.num_states();
  std::vector<BigCount> cur(states), nxt(states);
  cur[a.initial()] = 1;
  for (std::size_t step = 0; step < n; ++step) {
    for (auto& v : nxt) v = 0;
    for (State s = 0; s < states; ++s) {
      if (cur[s] == 0) continue;
      for (Symbol x = 0; x < a.sigma(); ++x) {
        const State t = a.next(s, x);
        if (t != ConstraintAutomaton::kNone) nxt[t] += cur[s];
      }
    }
    cur.swap(nxt);
  }
  BigCount total = 0;
  for (const auto& v : cur) total += v;
  return total;
}

BigCount power(std::uint64_t base, std::uint64_t exp) {
  BigCount r = 1;
  BigCount b = base;
  while (exp != 0) {
    if (exp & 1) r *= b;
    b *= b;
    exp >>= 1;
  }
  return r;
}

/// sigma^n, or throws ResourceError when it exceeds cap.
std::uint64_t checked_space(std::uint32_t sigma, std::size_t n, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > cap / sigma) throw ResourceError("sigma^n exceeds the brute-force cap", cap);
    total *= sigma;
  }
  if (total > cap) throw ResourceError("sigma^n exceeds the brute-force cap", cap);
  return total;
}

/// Visits every word of Sigma^n in lexicographic order.
template <class Visit>
void for_each_word(std::uint32_t sigma, std::size_t n, Visit&& visit) {
  Word w(n, 0);
  while (true) {
    visit(WordView(w));
    std::size_t i = n;
    while (i > 0 && w[i - 1] + 1u == sigma) w[--i] = 0;
    if (i == 0) return;
    ++w[i - 1];
  }
}

}  // namespace

BigCount count_exact(const CountQuery& q, std::size_t state_budget) {
  q.c.validate();
  if (q.c.b < 2) return count_b1(q.n, q.c.sigma);
  return count_paths(build_automaton(q.c, AutomatonForm::Prefix, state_budget), q.n);
}

BigCount count_avoiding(const PatternSet& f, std::size_t n, std::size_t state_budget) {
  return count_paths(build_avoiding_automaton(f, state_budget), n);
}

BigCount count_brute(const CountQuery& q, std::uint64_t cap) {
  q.c.validate();
  checked_space(q.c.sigma, q.n, cap);
  std::uint64_t hits = 0;
  for_each_word(q.c.sigma, q.n, [&](WordView w) { hits += is_constrained_acyclic(w, q.c) ? 1 : 0; });
  return hits;
}

BigCount count_cyclic_brute(const CountQuery& q, std::uint64_t cap) {
  q.c.validate();
  if (q.n > 20) throw DomainError("cyclic brute force is limited to n <= 20");
  checked_space(q.c.sigma, q.n, cap);
  if (q.n == 0) return 1;
  std::uint64_t hits = 0;
  for_each_word(q.c.sigma, q.n, [&](WordView w) {
    // one representative per rotation class: the word must be its own least rotation
    if (least_rotation_index(w) != 0) return;
    if (is_constrained_cyclic(CyclicWord(Word(w.begin(), w.end())), q.c)) ++hits;
  });
  return hits;
}

BigCount count_k1(std::size_t n, std::uint32_t b, std::uint32_t sigma) {
  if (b < 1) throw InvalidInput("b must be >= 1");
  Alphabet{sigma}.validate();
  if (n < b) {
    if (n > sigma) return 0;
    BigCount r = 1;
    for (std::size_t i = 0; i < n; ++i) r *= sigma - i;
    return r;
  }
  if (b > sigma) return 0;
  BigCount r = 1;
  for (std::uint32_t i = 0; i < b; ++i) r *= sigma - i;  // C(sigma,b) b!
  return r * power(sigma - b + 1, n - b);
}

BigCount count_b1(std::size_t n, std::uint32_t sigma) {
  Alphabet{sigma}.validate();
  return power(sigma, n);
}

BigCount count_full_window(std::uint32_t k, std::uint32_t sigma) {
  Alphabet{sigma}.validate();
  if (k < 1) throw InvalidInput("k must be >= 1");
  BigCount fact = 1;
  for (std::uint32_t i = 2; i <= sigma; ++i) fact *= i;
  BigCount exp = power(sigma, k - 1);
  if (exp > 1 << 20) throw ResourceError("exponent too large", 1 << 20);
  BigCount r = 1;
  for (auto e = exp.convert_to<std::uint64_t>(); e > 0; --e) r *= fact;
  return r;
}

RedundancyBound redundancy_lower_bound(std::size_t n, const ConstraintParams& c) {
  c.validate();
  if (c.b < 2) throw DomainError("redundancy bound needs b >= 2");
  if (c.b >= c.k) throw DomainError("redundancy bound needs b < k");
  RedundancyBound r;
  const double sigma = c.sigma;
  r.bound = std::pow(sigma, double(n)) * (1.0 - double(c.b - 1) * double(n) * std::pow(sigma, -double(c.k)));
  // ceil(log n + log(b-1)) is the least t with sigma^t >= n (b-1)
  const BigCount target = BigCount(n) * (c.b - 1);
  std::uint32_t t = 0;
  for (BigCount p = 1; p < target; p *= c.sigma) ++t;
  r.single_symbol_regime = c.k >= t + 1;
  return r;
}

std::vector<std::uint64_t> b3_recursion_coefficients(std::uint32_t k) {
  if (k < 2) throw InvalidInput("k must be >= 2");
  std::vector<std::uint64_t> coeff(2 * k, 0);  // index l = i + j
  for (std::uint32_t i = 1; i <= k - 1; ++i)
    for (std::uint32_t j = 1; j <= k; ++j) ++coeff[i + j];
  return coeff;
}

double b3_polynomial_root(std::uint32_t k) {
  const auto coeff = b3_recursion_coefficients(k);
  // g(x) = sum c_l x^-l is strictly decreasing on x > 0, so g(x) = 1 has one positive root
  auto g = [&](double x) {
    double s = 0;
    for (std::size_t l = 2; l < coeff.size(); ++l) s += double(coeff[l]) * std::pow(x, -double(l));
    return s - 1.0;
  };
  double lo = 1.0, hi = 2.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

B3Counts count_recursion_b3(std::size_t n, std::uint32_t k) {
  if (k < 2) throw InvalidInput("k must be >= 2");
  B3Counts out;
  if (n == 0) {
    out.total = 1;
    return out;
  }
  // a0[m]: length-m words starting with 0 (0-runs < k, 1-runs <= k); a1 likewise for 1
  std::vector<BigCount> a0(n + 1), a1(n + 1);
  for (std::size_t m = 1; m <= n; ++m) {
    for (std::size_t i = 1; i <= std::min<std::size_t>(k - 1, m - 1); ++i) a0[m] += a1[m - i];
    if (m <= k - 1) a0[m] += 1;
    for (std::size_t i = 1; i <= std::min<std::size_t>(k, m - 1); ++i) a1[m] += a0[m - i];
    if (m <= k) a1[m] += 1;
  }
  out.starting_with_zero = a0[n];
  out.starting_with_one = a1[n];
  out.total = a0[n] + a1[n];
  return out;
}

Enumerator::Enumerator(const ConstraintParams& c, std::size_t n, std::size_t state_budget) : params_(c), n_(n) {
  c.validate();
  automaton_ = build_automaton(c, AutomatonForm::Prefix, state_budget);
  const std::size_t states = automaton_.num_states();
  if ((n + 1) > state_budget / std::max<std::size_t>(states, 1))
    throw ResourceError("completion table exceeds the state budget", state_budget);
  table_.assign((n + 1) * states, BigCount(0));
  for (State s = 0; s < states; ++s) table_[s] = 1;
  for (std::size_t r = 1; r <= n; ++r) {
    for (State s = 0; s < states; ++s) {
      BigCount sum = 0;
      for (Symbol x = 0; x < c.sigma; ++x) {
        const State t = automaton_.next(s, x);
        if (t != ConstraintAutomaton::kNone) sum += table_[(r - 1) * states + t];
      }
      table_[r * states + s] = std::move(sum);
    }
  }
}

const BigCount& Enumerator::completions(std::size_t remaining, State s) const {
  return table_[remaining * automaton_.num_states() + s];
}

const BigCount& Enumerator::count() const { return completions(n_, automaton_.initial()); }

BigCount Enumerator::rank(WordView s) const {
  if (s.size() != n_) throw DomainError("word length differs from the enumerator length");
  check_symbols(s, params_.alphabet());
  BigCount r = 0;
  State st = automaton_.initial();
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t rest = n_ - i - 1;
    for (Symbol x = 0; x < s[i]; ++x) {
      const State t = automaton_.next(st, x);
      if (t != ConstraintAutomaton::kNone) r += completions(rest, t);
    }
    st = automaton_.next(st, s[i]);
    if (st == ConstraintAutomaton::kNone) throw DomainError("word is not constrained");
  }
  return r;
}

Word Enumerator::unrank(const BigCount& r) const {
  if (r < 0 || r >= count()) throw DomainError("rank out of range");
  BigCount left = r;
  Word w;
  w.reserve(n_);
  State st = automaton_.initial();
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t rest = n_ - i - 1;
    for (Symbol x = 0; x < params_.sigma; ++x) {
      const State t = automaton_.next(st, x);
      if (t == ConstraintAutomaton::kNone) continue;
      const BigCount& c = completions(rest, t);
      if (left < c) {
        w.push_back(x);
        st = t;
        break;
      }
      left -= c;
    }
  }
  return w;
}

bool has_published_rate(std::uint32_t b, std::uint32_t k, std::uint32_t sigma) noexcept {
  if (sigma != 2 || k < 2 || k > 10) return false;
  return (b >= 2 && b <= 5) || (b == 6 && k <= 7);
}

const CapacityCell& CapacityTable::cell(std::uint32_t b, std::uint32_t k) const {
  for (const auto& c : cells)
    if (c.b == b && c.k == k) return c;
  throw InvalidInput("no such table cell");
}

std::string CapacityTable::to_csv() const {
  std::ostringstream out;
  out << "b\\k";
  for (auto k : k_values) out << ',' << k;
  out << '\n';
  for (auto b : b_values) {
    out << b;
    for (auto k : k_values) {
      const auto& c = cell(b, k);
      char buf[32];
      if (c.ok)
        std::snprintf(buf, sizeof buf, "%.4f%s", c.result.capacity, c.published || b < 2 ? "" : "?");
      else
        std::snprintf(buf, sizeof buf, "ERR");
      out << ',' << buf;
    }
    out << '\n';
  }
  return out.str();
}

std::string CapacityTable::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["sigma"] = sigma;
  j["b_values"] = b_values;
  j["k_values"] = k_values;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : cells) {
    nlohmann::ordered_json e;
    e["b"] = c.b;
    e["k"] = c.k;
    e["ok"] = c.ok;
    if (c.ok) {
      e["capacity"] = c.result.capacity;
      e["lambda"] = c.result.lambda;
      e["residual"] = c.result.residual;
      e["iterations"] = c.result.iterations;
    } else {
      e["error"] = c.error;
    }
    e["published"] = c.published;
    arr.push_back(std::move(e));
  }
  j["cells"] = std::move(arr);
  return j.dump(2);
}

CapacityTable capacity_table(std::uint32_t b_min, std::uint32_t b_max, std::uint32_t k_min, std::uint32_t k_max,
                             std::uint32_t sigma, double tol, std::size_t state_budget) {
  if (b_min < 1 || k_min < 1 || b_min > b_max || k_min > k_max) throw InvalidInput("empty or invalid table range");
  Alphabet{sigma}.validate();
  CapacityTable t;
  t.sigma = sigma;
  for (auto b = b_min; b <= b_max; ++b) t.b_values.push_back(b);
  for (auto k = k_min; k <= k_max; ++k) t.k_values.push_back(k);
  t.cells.resize(t.b_values.size() * t.k_values.size());
  detail::parallel_for(t.cells.size(), [&](std::size_t i) {
    CapacityCell& cell = t.cells[i];
    cell.b = t.b_values[i / t.k_values.size()];
    cell.k = t.k_values[i % t.k_values.size()];
    cell.published = has_published_rate(cell.b, cell.k, sigma);
    try {
      cell.result = constraint_capacity(ConstraintParams{cell.b, cell.k, sigma}, tol, state_budget);
      cell.ok = true;
    } catch (const Error& e) {
      cell.error = e.what();
    }
  });
  return t;
}

std::string to_string(const BigCount& v) { return v.str(); }

BigCount parse_big_count(const std::string& decimal) {
  if (decimal.empty() || decimal.size() > 100000) throw InvalidInput("invalid integer");
  for (char ch : decimal)
    if (ch < '0' || ch > '9') throw InvalidInput("invalid integer: " + decimal);
  return BigCount(decimal);
}

}  // namespace cdb
