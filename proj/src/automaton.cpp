#include "cdb/automaton.hpp"

#include "cdb/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

namespace cdb {

ConstraintAutomaton::ConstraintAutomaton(std::uint32_t sigma, std::vector<Word> labels,
                                         std::vector<State> next, State initial)
    : sigma_(sigma), labels_(std::move(labels)), next_(std::move(next)), initial_(initial) {
  if (next_.size() != labels_.size() * sigma_)
    throw InvalidInput("transition table size does not match states * sigma");
}

std::size_t ConstraintAutomaton::num_transitions() const noexcept {
  return static_cast<std::size_t>(std::count_if(next_.begin(), next_.end(), [](State s) { return s != kNone; }));
}

bool ConstraintAutomaton::accepts(WordView w) const {
  if (initial_ == kNone) return false;
  State s = initial_;
  for (Symbol a : w) {
    if (a >= sigma_) return false;
    s = next(s, a);
    if (s == kNone) return false;
  }
  return true;
}

std::string ConstraintAutomaton::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["sigma"] = sigma_;
  j["initial"] = initial_ == kNone ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(initial_);
  auto& states = j["states"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < labels_.size(); ++i)
    states.push_back({{"index", i}, {"label", format_word(labels_[i])}});
  auto& edges = j["transitions"] = nlohmann::ordered_json::array();
  for (std::size_t s = 0; s < labels_.size(); ++s)
    for (std::uint32_t a = 0; a < sigma_; ++a)
      if (State t = next_[s * sigma_ + a]; t != kNone) edges.push_back({{"from", s}, {"symbol", a}, {"to", t}});
  return j.dump(2);
}

namespace {

ConstraintAutomaton single_state(std::uint32_t sigma) {
  return ConstraintAutomaton(sigma, {Word{}}, std::vector<ConstraintAutomaton::State>(sigma, 0), 0);
}

// true if appending the last symbol of t creates a repeated k-window among
// the last b windows of t
bool last_window_repeats(const Word& t, std::size_t b, std::size_t k) {
  if (t.size() < k) return false;
  const std::size_t last = t.size() - k;
  for (std::size_t d = 1; d < b && d <= last; ++d)
    if (std::equal(t.begin() + last, t.end(), t.begin() + (last - d))) return true;
  return false;
}

ConstraintAutomaton build_window(const ConstraintParams& c, std::size_t budget) {
  const std::size_t span = c.b + c.k - 2;
  const double full = std::pow(double(c.sigma), double(span));
  if (full > double(budget))
    throw ResourceError("window automaton needs sigma^(b+k-2) = " + std::to_string(full) +
                            " states, above the budget of " + std::to_string(budget),
                        budget);
  using State = ConstraintAutomaton::State;
  auto key = [&](const Word& w) {
    std::uint64_t v = 0;
    for (Symbol s : w) v = v * c.sigma + s;
    return (std::uint64_t(w.size()) << 40) | v;
  };
  std::vector<Word> labels{Word{}};
  std::unordered_map<std::uint64_t, State> index{{key(Word{}), 0}};
  std::vector<State> next;
  for (std::size_t s = 0; s < labels.size(); ++s) {
    next.resize(labels.size() * c.sigma, ConstraintAutomaton::kNone);
    for (std::uint32_t a = 0; a < c.sigma; ++a) {
      Word t = labels[s];
      t.push_back(static_cast<Symbol>(a));
      if (last_window_repeats(t, c.b, c.k)) continue;
      if (t.size() > span) t.erase(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(t.size() - span));
      auto [it, inserted] = index.try_emplace(key(t), static_cast<State>(labels.size()));
      if (inserted) {
        if (labels.size() >= budget) throw ResourceError("state budget exceeded", budget);
        labels.push_back(t);
        next.resize(labels.size() * c.sigma, ConstraintAutomaton::kNone);
      }
      next[s * c.sigma + a] = it->second;
    }
  }
  next.resize(labels.size() * c.sigma, ConstraintAutomaton::kNone);
  return ConstraintAutomaton(c.sigma, std::move(labels), std::move(next), 0);
}

}  // namespace

ConstraintAutomaton build_avoiding_automaton(const PatternSet& f, std::size_t budget) {
  using State = ConstraintAutomaton::State;
  constexpr State kNone = ConstraintAutomaton::kNone;
  const std::uint32_t sigma = f.sigma();
  for (const Word& p : f.patterns())
    if (p.empty()) return ConstraintAutomaton(sigma, {}, {}, kNone);

  // trie
  std::vector<State> child{};
  std::vector<bool> terminal;
  std::vector<Word> label;
  auto add_node = [&](Word w) {
    if (label.size() >= budget) throw ResourceError("state budget exceeded", budget);
    label.push_back(std::move(w));
    terminal.push_back(false);
    child.resize(label.size() * sigma, kNone);
    return static_cast<State>(label.size() - 1);
  };
  add_node(Word{});
  for (const Word& p : f.patterns()) {
    State v = 0;
    for (Symbol a : p) {
      State& c = child[std::size_t(v) * sigma + a];
      if (c == kNone) {
        Word w = label[v];
        w.push_back(a);
        const State fresh = add_node(std::move(w));
        child[std::size_t(v) * sigma + a] = fresh;
        v = fresh;
      } else {
        v = c;
      }
    }
    terminal[v] = true;
  }

  // failure links and the full goto function, breadth first
  const std::size_t nodes = label.size();
  std::vector<State> fail(nodes, 0), go(nodes * sigma, 0);
  std::vector<bool> bad(terminal);
  std::deque<State> queue;
  for (std::uint32_t a = 0; a < sigma; ++a) {
    const State c = child[a];
    if (c != kNone) {
      go[a] = c;
      fail[c] = 0;
      queue.push_back(c);
    } else {
      go[a] = 0;
    }
  }
  while (!queue.empty()) {
    const State v = queue.front();
    queue.pop_front();
    bad[v] = bad[v] || bad[fail[v]];
    for (std::uint32_t a = 0; a < sigma; ++a) {
      const State c = child[std::size_t(v) * sigma + a];
      if (c != kNone) {
        fail[c] = go[std::size_t(fail[v]) * sigma + a];
        go[std::size_t(v) * sigma + a] = c;
        queue.push_back(c);
      } else {
        go[std::size_t(v) * sigma + a] = go[std::size_t(fail[v]) * sigma + a];
      }
    }
  }

  // keep safe nodes, renumbered in creation order
  std::vector<State> renum(nodes, kNone);
  std::vector<Word> labels;
  for (std::size_t v = 0; v < nodes; ++v) {
    if (!bad[v]) {
      renum[v] = static_cast<State>(labels.size());
      labels.push_back(label[v]);
    }
  }
  std::vector<State> next(labels.size() * sigma, kNone);
  for (std::size_t v = 0; v < nodes; ++v) {
    if (bad[v]) continue;
    for (std::uint32_t a = 0; a < sigma; ++a) {
      const State t = go[v * sigma + a];
      if (!bad[t]) next[std::size_t(renum[v]) * sigma + a] = renum[t];
    }
  }
  const State init = renum[0];
  return ConstraintAutomaton(sigma, std::move(labels), std::move(next), init);
}

ConstraintAutomaton build_automaton(const ConstraintParams& c, AutomatonForm form, std::size_t budget) {
  c.validate();
  if (c.b < 2) return single_state(c.sigma);
  if (form == AutomatonForm::Window) return build_window(c, budget);
  return build_avoiding_automaton(reduce_forbidden(forbidden_family(c)), budget);
}

std::uint32_t TransferMatrix::at(std::size_t u, std::size_t v) const {
  for (auto [col, count] : rows.at(u))
    if (col == v) return count;
  return 0;
}

std::string TransferMatrix::to_csv() const {
  std::string out;
  const std::size_t d = dimension();
  for (std::size_t u = 0; u < d; ++u) {
    std::vector<std::uint32_t> dense(d, 0);
    for (auto [col, count] : rows[u]) dense[col] = count;
    for (std::size_t v = 0; v < d; ++v) {
      if (v) out += ',';
      out += std::to_string(dense[v]);
    }
    out += '\n';
  }
  return out;
}

TransferMatrix transfer_matrix(const ConstraintAutomaton& a) {
  TransferMatrix m;
  m.sigma = a.sigma();
  m.rows.resize(a.num_states());
  for (std::size_t s = 0; s < a.num_states(); ++s) {
    std::vector<std::uint32_t> targets;
    for (std::uint32_t x = 0; x < a.sigma(); ++x)
      if (auto t = a.next(static_cast<ConstraintAutomaton::State>(s), static_cast<Symbol>(x));
          t != ConstraintAutomaton::kNone)
        targets.push_back(t);
    std::sort(targets.begin(), targets.end());
    for (std::size_t i = 0; i < targets.size();) {
      std::size_t j = i;
      while (j < targets.size() && targets[j] == targets[i]) ++j;
      m.rows[s].emplace_back(targets[i], static_cast<std::uint32_t>(j - i));
      i = j;
    }
  }
  return m;
}

std::vector<std::vector<std::uint32_t>> strongly_connected_components(const TransferMatrix& m) {
  // iterative Tarjan
  const std::size_t n = m.dimension();
  constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> index(n, kUnset), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  std::vector<std::vector<std::uint32_t>> out;
  std::uint32_t counter = 0;
  struct Frame {
    std::uint32_t v;
    std::size_t edge;
  };
  std::vector<Frame> call;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto& row = m.rows[f.v];
      if (f.edge < row.size()) {
        const std::uint32_t w = row[f.edge++].first;
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const std::uint32_t v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<std::uint32_t> comp;
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
    }
  }
  return out;
}

namespace {

bool is_cyclic_component(const TransferMatrix& m, const std::vector<std::uint32_t>& comp) {
  if (comp.size() > 1) return true;
  for (auto [col, count] : m.rows[comp[0]])
    if (col == comp[0]) return true;
  return false;
}

}  // namespace

ConstraintAutomaton essential_component(const ConstraintAutomaton& a) {
  using State = ConstraintAutomaton::State;
  const TransferMatrix m = transfer_matrix(a);
  const std::size_t n = a.num_states();
  std::vector<bool> cyclic(n, false);
  for (const auto& comp : strongly_connected_components(m))
    if (is_cyclic_component(m, comp))
      for (auto v : comp) cyclic[v] = true;

  std::vector<std::vector<std::uint32_t>> reverse(n);
  for (std::size_t u = 0; u < n; ++u)
    for (auto [v, cnt] : m.rows[u]) reverse[v].push_back(static_cast<std::uint32_t>(u));

  auto closure = [&](const std::vector<std::vector<std::uint32_t>>& adj, bool forward) {
    std::vector<bool> seen(cyclic);
    std::vector<std::uint32_t> work;
    for (std::uint32_t v = 0; v < n; ++v)
      if (seen[v]) work.push_back(v);
    while (!work.empty()) {
      const auto v = work.back();
      work.pop_back();
      if (forward) {
        for (auto [w, cnt] : m.rows[v])
          if (!seen[w]) seen[w] = true, work.push_back(w);
      } else {
        for (auto w : adj[v])
          if (!seen[w]) seen[w] = true, work.push_back(w);
      }
    }
    return seen;
  };
  const std::vector<bool> from_cycle = closure(reverse, true);
  const std::vector<bool> to_cycle = closure(reverse, false);

  std::vector<State> renum(n, ConstraintAutomaton::kNone);
  std::vector<Word> labels;
  for (std::size_t v = 0; v < n; ++v) {
    if (from_cycle[v] && to_cycle[v]) {
      renum[v] = static_cast<State>(labels.size());
      labels.push_back(a.label(static_cast<State>(v)));
    }
  }
  std::vector<State> next(labels.size() * a.sigma(), ConstraintAutomaton::kNone);
  for (std::size_t v = 0; v < n; ++v) {
    if (renum[v] == ConstraintAutomaton::kNone) continue;
    for (std::uint32_t x = 0; x < a.sigma(); ++x) {
      const State t = a.next(static_cast<State>(v), static_cast<Symbol>(x));
      if (t != ConstraintAutomaton::kNone && renum[t] != ConstraintAutomaton::kNone)
        next[std::size_t(renum[v]) * a.sigma() + x] = renum[t];
    }
  }
  const State init = a.initial() == ConstraintAutomaton::kNone ? ConstraintAutomaton::kNone : renum[a.initial()];
  return ConstraintAutomaton(a.sigma(), std::move(labels), std::move(next), init);
}

namespace {

struct ComponentRoot {
  double lambda;
  double residual;
  std::size_t iterations;
};

ComponentRoot component_root(const TransferMatrix& m, const std::vector<std::uint32_t>& comp, double tol,
                             std::size_t cap) {
  const std::size_t d = comp.size();
  std::unordered_map<std::uint32_t, std::uint32_t> local;
  for (std::size_t i = 0; i < d; ++i) local[comp[i]] = static_cast<std::uint32_t>(i);
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(d);
  for (std::size_t i = 0; i < d; ++i)
    for (auto [col, count] : m.rows[comp[i]])
      if (auto it = local.find(col); it != local.end()) rows[i].emplace_back(it->second, double(count));

  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < d; ++i) {
      double acc = 0;
      for (auto [j, w] : rows[i]) acc += w * x[j];
      y[i] = acc;
    }
  };

  // (M + I) is primitive on an irreducible block, so plain power iteration
  // converges even when the block itself is periodic.
  std::vector<double> x(d, 1.0), y(d);
  double lo = 0, hi = 0;
  for (std::size_t it = 1; it <= cap; ++it) {
    apply(x, y);
    lo = std::numeric_limits<double>::infinity();
    hi = 0;
    double ymax = 0;
    for (std::size_t i = 0; i < d; ++i) {
      y[i] += x[i];
      const double r = y[i] / x[i];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      ymax = std::max(ymax, y[i]);
    }
    for (std::size_t i = 0; i < d; ++i) x[i] = y[i] / ymax;
    if ((hi - lo) * 0.5 <= tol) {
      const double lambda = 0.5 * (lo + hi) - 1.0;
      apply(x, y);
      double res = 0, xmax = 0;
      for (std::size_t i = 0; i < d; ++i) {
        res = std::max(res, std::abs(y[i] - lambda * x[i]));
        xmax = std::max(xmax, x[i]);
      }
      return {lambda, res / xmax, it};
    }
  }
  throw NumericError("power iteration did not converge within " + std::to_string(cap) + " iterations",
                     0.5 * (lo + hi) - 1.0);
}

}  // namespace

PerronResult largest_eigenvalue(const TransferMatrix& m, double tol, std::size_t max_iterations) {
  if (!(tol > 0)) throw InvalidInput("tolerance must be positive");
  PerronResult best;
  bool any = false;
  for (const auto& comp : strongly_connected_components(m)) {
    if (!is_cyclic_component(m, comp)) continue;
    const ComponentRoot r = component_root(m, comp, tol, max_iterations);
    if (!any || r.lambda > best.lambda) {
      best.lambda = r.lambda;
      best.residual = r.residual;
      best.iterations = r.iterations;
      any = true;
    }
  }
  if (!any) return best;
  best.capacity = best.lambda > 1.0 ? std::log(best.lambda) / std::log(double(m.sigma)) : 0.0;
  return best;
}

PerronResult constraint_capacity(const ConstraintParams& c, double tol, std::size_t state_budget) {
  const ConstraintAutomaton a = essential_component(build_automaton(c, AutomatonForm::Prefix, state_budget));
  return largest_eigenvalue(transfer_matrix(a), tol);
}

}  // namespace cdb
