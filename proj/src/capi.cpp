#include "cdb/cdb.h"

#include "cdb/automaton.hpp"
#include "cdb/channels.hpp"
#include "cdb/construction.hpp"
#include "cdb/core.hpp"
#include "cdb/enumeration.hpp"
#include "cdb/error.hpp"
#include "cdb/gf.hpp"
#include "cdb/patterns.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <map>
#include <new>
#include <string>

struct cdb_enumerator {
  cdb::Enumerator impl;
};

struct cdb_construction1 {
  cdb::Construction1Code impl;
};

namespace {

thread_local std::string last_error;

using Json = nlohmann::ordered_json;

template <class F>
cdb_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return CDB_OK;
  } catch (const cdb::Error& e) {
    last_error = e.what();
    return static_cast<cdb_status>(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CDB_ERR_RESOURCE;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CDB_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return CDB_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw cdb::InvalidInput(std::string(what) + " must not be null");
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void hand_out(char** dst, const std::string& s) {
  need(dst, "output pointer");
  *dst = duplicate(s);
}

cdb::ConstraintParams params(const cdb_params* p) {
  need(p, "params");
  cdb::ConstraintParams c{p->b, p->k, p->sigma};
  c.validate();
  return c;
}

cdb::ReadMode read_mode(cdb_mode m) {
  if (m == CDB_CYCLIC) return cdb::ReadMode::Cyclic;
  if (m == CDB_ACYCLIC) return cdb::ReadMode::Acyclic;
  throw cdb::InvalidInput("unknown mode");
}

cdb::Word word_from(const cdb_symbol* w, std::size_t n) {
  if (n) need(w, "word");
  return cdb::Word(w, w + n);
}

void copy_out(const cdb::Word& w, cdb_symbol* out, std::size_t capacity) {
  if (w.empty()) return;
  need(out, "output buffer");
  if (capacity < w.size())
    throw cdb::InvalidInput("output buffer holds " + std::to_string(capacity) + " symbols, " +
                            std::to_string(w.size()) + " needed");
  std::copy(w.begin(), w.end(), out);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

cdb::SimulationSpec simulation(const cdb_simulation* s) {
  need(s, "simulation");
  cdb::SimulationSpec spec;
  spec.seed = s->seed;
  spec.n = s->n;
  spec.c = params(&s->params);
  spec.mode = read_mode(s->mode);
  spec.t1 = s->t1;
  spec.trials = s->trials;
  spec.sticky_probability = s->sticky_probability;
  spec.m = s->m;
  if (!(spec.sticky_probability >= 0 && spec.sticky_probability < 1))
    throw cdb::InvalidInput("sticky probability must lie in [0, 1)");
  if (spec.n == 0) throw cdb::InvalidInput("n must be positive");
  return spec;
}

}  // namespace

extern "C" {

const char* cdb_version(void) { return "0.1.0"; }

const char* cdb_last_error(void) { return last_error.c_str(); }

void cdb_string_free(char* s) { std::free(s); }

cdb_status cdb_is_constrained(const cdb_params* p, const cdb_symbol* word, size_t n, cdb_mode mode, int* result) {
  return guarded([&] {
    need(result, "result");
    const auto c = params(p);
    const auto w = word_from(word, n);
    cdb::check_symbols(w, c.alphabet());
    *result = read_mode(mode) == cdb::ReadMode::Cyclic ? cdb::is_constrained_cyclic(cdb::CyclicWord(w), c)
                                                       : cdb::is_constrained_acyclic(w, c);
  });
}

cdb_status cdb_verify_text(const char* text, uint32_t b, uint32_t k, cdb_mode mode, char** report_json) {
  return guarded([&] {
    need(text, "text");
    auto file = cdb::parse_word_file(text);
    if (file.sigma == 0) {
      // no header: the alphabet is the symbols seen, binary at least
      file.sigma = 2;
      for (const auto& w : file.words)
        for (auto s : w) file.sigma = std::max<std::uint32_t>(file.sigma, s + 1u);
    }
    const cdb::ConstraintParams c{b, k, file.sigma};
    c.validate();
    const bool cyclic = read_mode(mode) == cdb::ReadMode::Cyclic;
    // word i sits on line i + 1, or i + 2 below a header
    const bool header = std::strncmp(text, "# sigma=", 8) == 0;
    Json results = Json::array();
    bool all = true;
    for (std::size_t i = 0; i < file.words.size(); ++i) {
      const auto& w = file.words[i];
      const bool pass = cyclic ? (w.empty() || cdb::is_constrained_cyclic(cdb::CyclicWord(w), c))
                               : cdb::is_constrained_acyclic(w, c);
      all = all && pass;
      results.push_back({{"line", i + (header ? 2 : 1)}, {"word", cdb::format_word(w)}, {"pass", pass}});
    }
    Json j;
    j["schema"] = 1;
    j["b"] = b;
    j["k"] = k;
    j["sigma"] = file.sigma;
    j["mode"] = cyclic ? "cyclic" : "acyclic";
    j["results"] = results;
    j["all_pass"] = all;
    hand_out(report_json, dump(j));
  });
}

cdb_status cdb_count(const cdb_params* p, size_t n, char** decimal) {
  return guarded([&] { hand_out(decimal, cdb::to_string(cdb::count_exact({n, params(p)}))); });
}

cdb_status cdb_count_brute(const cdb_params* p, size_t n, char** decimal) {
  return guarded([&] { hand_out(decimal, cdb::to_string(cdb::count_brute({n, params(p)}))); });
}

cdb_status cdb_capacity(const cdb_params* p, double tol, double* lambda, double* capacity, size_t* iterations) {
  return guarded([&] {
    need(lambda, "lambda");
    need(capacity, "capacity");
    if (!(tol > 0)) throw cdb::InvalidInput("tolerance must be positive");
    const auto r = cdb::constraint_capacity(params(p), tol);
    *lambda = r.lambda;
    *capacity = r.capacity;
    if (iterations) *iterations = r.iterations;
  });
}

cdb_status cdb_capacity_table(uint32_t sigma, uint32_t b_min, uint32_t b_max, uint32_t k_min, uint32_t k_max,
                              double tol, cdb_format format, char** out) {
  return guarded([&] {
    if (!(tol > 0)) throw cdb::InvalidInput("tolerance must be positive");
    const auto t = cdb::capacity_table(b_min, b_max, k_min, k_max, sigma, tol);
    hand_out(out, format == CDB_FORMAT_JSON ? t.to_json() : t.to_csv());
  });
}

cdb_status cdb_forbidden(const cdb_params* p, int reduced, char** json) {
  return guarded([&] {
    const auto c = params(p);
    auto f = cdb::forbidden_family(c);
    if (reduced) f = cdb::reduce_forbidden(f);
    Json pats = Json::array();
    for (const auto& w : f.patterns()) pats.push_back(cdb::format_word(w));
    Json j;
    j["schema"] = 1;
    j["b"] = c.b;
    j["k"] = c.k;
    j["sigma"] = c.sigma;
    j["reduced"] = bool(reduced);
    j["patterns"] = pats;
    hand_out(json, dump(j));
  });
}

cdb_status cdb_automaton_json(const cdb_params* p, size_t state_budget, char** json) {
  return guarded([&] {
    const auto a = cdb::build_automaton(params(p), cdb::AutomatonForm::Prefix,
                                        state_budget ? state_budget : cdb::kDefaultStateBudget);
    hand_out(json, a.to_json());
  });
}

cdb_status cdb_enumerator_new(const cdb_params* p, size_t n, cdb_enumerator** out) {
  return guarded([&] {
    need(out, "output handle");
    *out = new cdb_enumerator{cdb::Enumerator(params(p), n)};
  });
}

void cdb_enumerator_free(cdb_enumerator* e) { delete e; }

cdb_status cdb_enumerator_count(const cdb_enumerator* e, char** decimal) {
  return guarded([&] {
    need(e, "enumerator");
    hand_out(decimal, cdb::to_string(e->impl.count()));
  });
}

cdb_status cdb_enumerator_rank(const cdb_enumerator* e, const cdb_symbol* word, size_t n, char** decimal) {
  return guarded([&] {
    need(e, "enumerator");
    hand_out(decimal, cdb::to_string(e->impl.rank(word_from(word, n))));
  });
}

cdb_status cdb_enumerator_unrank(const cdb_enumerator* e, const char* decimal, cdb_symbol* out, size_t capacity) {
  return guarded([&] {
    need(e, "enumerator");
    need(decimal, "index");
    copy_out(e->impl.unrank(cdb::parse_big_count(decimal)), out, capacity);
  });
}

size_t cdb_enumerator_length(const cdb_enumerator* e) { return e ? e->impl.length() : 0; }

cdb_status cdb_primitive_count(uint32_t q, uint32_t k, uint64_t* count) {
  return guarded([&] {
    need(count, "count");
    *count = cdb::enumerate_primitive_polys(cdb::Field(q), k).size();
  });
}

cdb_status cdb_msequences(uint32_t q, uint32_t k, char** json) {
  return guarded([&] {
    const cdb::Field f(q);
    Json seqs = Json::array();
    for (const auto& m : cdb::all_msequences(f, k))
      seqs.push_back({{"generator", cdb::format_polynomial(m.generator)}, {"word", cdb::format_word(m.word)}});
    Json j;
    j["schema"] = 1;
    j["q"] = q;
    j["k"] = k;
    j["modulus"] = cdb::format_polynomial(cdb::Polynomial(f.spec().modulus));
    j["sequences"] = seqs;
    hand_out(json, dump(j));
  });
}

cdb_status cdb_lfsr_cycles(uint32_t q, const char* connection, char** json) {
  return guarded([&] {
    need(connection, "connection");
    const cdb::Field f(q);
    const auto poly = cdb::parse_polynomial(connection, f);
    std::map<std::size_t, std::size_t> lengths;
    for (const auto& c : cdb::lfsr_cycles(poly, f)) lengths[c.size()]++;
    Json cycles = Json::array();
    for (auto [len, n] : lengths) cycles.push_back({{"length", len}, {"count", n}});
    Json j;
    j["schema"] = 1;
    j["q"] = q;
    j["connection"] = cdb::format_polynomial(poly);
    j["cycles"] = cycles;
    hand_out(json, dump(j));
  });
}

cdb_status cdb_construction1_new(uint32_t q, uint32_t k, uint32_t ell, cdb_construction1** out) {
  return guarded([&] {
    need(out, "output handle");
    *out = new cdb_construction1{cdb::Construction1Code(q, k, ell)};
  });
}

void cdb_construction1_free(cdb_construction1* c) { delete c; }

cdb_status cdb_construction1_info(const cdb_construction1* c, char** json) {
  return guarded([&] {
    need(c, "construction");
    const auto& code = c->impl;
    const auto cons = code.constraint();
    Json j;
    j["schema"] = 1;
    j["q"] = code.q();
    j["k"] = code.k();
    j["ell"] = code.ell();
    j["size"] = cdb::to_string(code.size());
    j["block_choices"] = code.block_choices();
    j["period"] = code.period();
    j["min_length"] = code.min_length();
    j["max_length"] = code.max_length();
    j["fixed_length"] = code.fixed_length();
    j["constraint"] = {{"b", cons.b}, {"k", cons.k}, {"sigma", cons.sigma}};
    hand_out(json, dump(j));
  });
}

cdb_status cdb_construction1_encode(const cdb_construction1* c, const char* index, int fixed, cdb_symbol* out,
                                    size_t capacity, size_t* length) {
  return guarded([&] {
    need(c, "construction");
    need(index, "index");
    need(length, "length");
    const auto idx = cdb::parse_big_count(index);
    const cdb::Word w = fixed ? c->impl.encode_fixed_length(idx) : c->impl.encode(c->impl.choice_from_index(idx));
    *length = w.size();
    if (out) copy_out(w, out, capacity);
  });
}

cdb_status cdb_independent_set(uint32_t sigma, uint32_t k, uint32_t delta, uint64_t seed, uint64_t iterations,
                               char** json) {
  return guarded([&] {
    cdb::IndependentSetOptions opt;
    opt.seed = seed;
    if (iterations) opt.iterations = iterations;
    const auto r = cdb::db_independent_set(sigma, k, delta, opt);
    Json members = Json::array();
    for (const auto& w : r.members) members.push_back(cdb::format_word(w));
    Json j;
    j["schema"] = 1;
    j["sigma"] = r.sigma;
    j["k"] = r.k;
    j["delta"] = r.delta;
    j["seed"] = seed;
    j["cycles"] = r.cycles;
    j["conflicts"] = r.conflicts;
    j["size"] = r.members.size();
    j["members"] = members;
    hand_out(json, dump(j));
  });
}

void cdb_simulation_defaults(cdb_simulation* s) {
  if (!s) return;
  const cdb::SimulationSpec d;
  s->seed = d.seed;
  s->n = d.n;
  s->params = cdb_params{d.c.b, d.c.k, d.c.sigma};
  s->mode = CDB_CYCLIC;
  s->t1 = d.t1;
  s->trials = d.trials;
  s->sticky_probability = d.sticky_probability;
  s->m = d.m;
}

cdb_status cdb_simulate_lsymbol(const cdb_simulation* s, char** manifest_json) {
  return guarded([&] { hand_out(manifest_json, cdb::simulate_lsymbol(simulation(s)).to_json()); });
}

cdb_status cdb_simulate_racetrack(const cdb_simulation* s, char** manifest_json) {
  return guarded([&] { hand_out(manifest_json, cdb::simulate_racetrack(simulation(s)).to_json()); });
}

cdb_status cdb_decode_lsymbol(const cdb_params* p, const cdb_symbol* reads, size_t count, size_t n, cdb_mode mode,
                              int pad, cdb_symbol* out, size_t capacity) {
  return guarded([&] {
    const auto c = params(p);
    if (c.b < 2) throw cdb::InvalidInput("read decoding needs b >= 2");
    const std::size_t ell = c.k + c.b - 2;
    cdb::ReadVector r{ell, {}};
    if (count) need(reads, "reads");
    for (std::size_t i = 0; i < count; ++i) r.reads.emplace_back(reads + i * ell, reads + (i + 1) * ell);
    cdb::DecodeOptions opt;
    if (pad >= 0) opt.pad = cdb::Symbol(pad);
    copy_out(cdb::decode_lsymbol(r, n, c, read_mode(mode), opt).word, out, capacity);
  });
}

cdb_status cdb_rate_bound(cdb_rate_regime regime, double delta, double epsilon, uint32_t b, double q, size_t m,
                          double db_rate, double* rate) {
  return guarded([&] {
    need(rate, "rate");
    cdb::RateRegime r;
    switch (regime) {
      case CDB_RATE_DELETIONS: r = cdb::RateRegime::DeletionsOnly; break;
      case CDB_RATE_STICKY: r = cdb::RateRegime::StickyAndDeletions; break;
      case CDB_RATE_EXTRA_HEADS: r = cdb::RateRegime::ExtraHeads; break;
      default: throw cdb::InvalidInput("unknown rate regime");
    }
    *rate = cdb::rate_bound(r, cdb::BoundSpec{delta, epsilon}, b, q, m, db_rate);
  });
}

}  // extern "C"
