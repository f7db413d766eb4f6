// Command-line front end over the C interface in libcdb.

#include "cdb/cdb.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using Json = nlohmann::ordered_json;

enum Exit { kOk = 0, kValidation = 1, kFailure = 2, kResource = 3 };

struct Failure {
  int exit;
  std::string message;
};

int exit_for(cdb_status s) {
  switch (s) {
    case CDB_OK: return kOk;
    case CDB_ERR_DECODE: return kFailure;
    case CDB_ERR_RESOURCE: return kResource;
    default: return kValidation;
  }
}

void check(cdb_status s) {
  if (s != CDB_OK) throw Failure{exit_for(s), cdb_last_error()};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  cdb_string_free(s);
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string format_word(const std::vector<cdb_symbol>& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(w[i]);
  }
  return out;
}

std::vector<cdb_symbol> parse_word(const std::string& text) {
  std::vector<cdb_symbol> w;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || v > 0xFFFF) throw Failure{kValidation, "bad symbol '" + tok + "' in --word"};
    w.push_back(cdb_symbol(v));
  }
  return w;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kValidation, "cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Common {
  std::string format = "text";
  std::string out;
};

struct Params {
  std::uint32_t sigma = 2;
  std::uint32_t b = 3;
  std::uint32_t k = 3;
  std::size_t n = 8;
  std::string mode = "acyclic";

  cdb_params c() const { return cdb_params{b, k, sigma}; }
  cdb_mode m() const { return mode == "cyclic" ? CDB_CYCLIC : CDB_ACYCLIC; }
};

void add_common(CLI::App* sub, Common& c, std::vector<std::string> formats) {
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember(formats));
  sub->add_option("--out", c.out, "Write output to this file instead of stdout");
}

void add_constraint(CLI::App* sub, Params& p) {
  sub->add_option("--sigma", p.sigma, "Alphabet size")->capture_default_str();
  sub->add_option("--b", p.b, "Window span b")->capture_default_str();
  sub->add_option("--k", p.k, "Window length k")->capture_default_str();
}

void add_mode(CLI::App* sub, Params& p) {
  sub->add_option("--mode", p.mode, "Word mode")->check(CLI::IsMember({"acyclic", "cyclic"}))->capture_default_str();
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw Failure{kValidation, "cannot write " + c.out};
  f << text;
}

std::string text_or_json(const Common& c, const Json& j, const std::string& text) {
  return c.format == "json" ? dump(j) : text;
}

int cmd_verify(const Common& c, const Params& p, const std::string& path) {
  char* raw = nullptr;
  check(cdb_verify_text(read_file(path).c_str(), p.b, p.k, p.m(), &raw));
  const std::string report = take(raw);
  const auto j = Json::parse(report);
  std::string text;
  for (const auto& r : j["results"])
    text += "line " + std::to_string(int(r["line"])) + ": " + (r["pass"] ? "PASS" : "FAIL") + "\n";
  text += j["all_pass"] ? "all pass\n" : "some words fail\n";
  emit(c, c.format == "json" ? report : text);
  return j["all_pass"] ? kOk : kFailure;
}

int cmd_count(const Common& c, const Params& p, bool brute) {
  const auto cp = p.c();
  char* raw = nullptr;
  check(brute ? cdb_count_brute(&cp, p.n, &raw) : cdb_count(&cp, p.n, &raw));
  const std::string count = take(raw);
  Json j;
  j["schema"] = 1;
  j["sigma"] = p.sigma;
  j["n"] = p.n;
  j["b"] = p.b;
  j["k"] = p.k;
  j["method"] = brute ? "brute" : "automaton";
  j["count"] = count;
  emit(c, text_or_json(c, j, count + "\n"));
  return kOk;
}

int cmd_capacity(const Common& c, const Params& p, double tol) {
  const auto cp = p.c();
  double lambda = 0, cap = 0;
  std::size_t iters = 0;
  check(cdb_capacity(&cp, tol, &lambda, &cap, &iters));
  Json j;
  j["schema"] = 1;
  j["sigma"] = p.sigma;
  j["b"] = p.b;
  j["k"] = p.k;
  j["tol"] = tol;
  j["lambda"] = lambda;
  j["capacity"] = cap;
  j["iterations"] = iters;
  char buf[96];
  std::snprintf(buf, sizeof buf, "lambda %.10f\ncapacity %.10f\n", lambda, cap);
  emit(c, text_or_json(c, j, buf));
  return kOk;
}

int cmd_table(const Common& c, std::uint32_t sigma, std::uint32_t b_min, std::uint32_t b_max, std::uint32_t k_min,
              std::uint32_t k_max, double tol) {
  char* raw = nullptr;
  check(cdb_capacity_table(sigma, b_min, b_max, k_min, k_max, tol, c.format == "json" ? CDB_FORMAT_JSON : CDB_FORMAT_CSV,
                           &raw));
  emit(c, take(raw));
  return kOk;
}

int cmd_forbidden(const Common& c, const Params& p, bool reduced) {
  const auto cp = p.c();
  char* raw = nullptr;
  check(cdb_forbidden(&cp, reduced, &raw));
  const std::string report = take(raw);
  std::string text;
  const auto j = Json::parse(report);
  for (const auto& pat : j["patterns"]) text += pat.get<std::string>() + "\n";
  emit(c, c.format == "json" ? report : text);
  return kOk;
}

struct EnumHandle {
  cdb_enumerator* e = nullptr;
  ~EnumHandle() { cdb_enumerator_free(e); }
};

int cmd_rank(const Common& c, const Params& p, const std::string& word) {
  const auto cp = p.c();
  const auto w = parse_word(word);
  EnumHandle h;
  check(cdb_enumerator_new(&cp, w.size(), &h.e));
  char* raw = nullptr;
  check(cdb_enumerator_rank(h.e, w.data(), w.size(), &raw));
  const std::string rank = take(raw);
  Json j;
  j["schema"] = 1;
  j["sigma"] = p.sigma;
  j["n"] = w.size();
  j["b"] = p.b;
  j["k"] = p.k;
  j["word"] = format_word(w);
  j["rank"] = rank;
  emit(c, text_or_json(c, j, rank + "\n"));
  return kOk;
}

int cmd_unrank(const Common& c, const Params& p, const std::string& index) {
  const auto cp = p.c();
  EnumHandle h;
  check(cdb_enumerator_new(&cp, p.n, &h.e));
  std::vector<cdb_symbol> w(p.n);
  check(cdb_enumerator_unrank(h.e, index.c_str(), w.data(), w.size()));
  Json j;
  j["schema"] = 1;
  j["sigma"] = p.sigma;
  j["n"] = p.n;
  j["b"] = p.b;
  j["k"] = p.k;
  j["index"] = index;
  j["word"] = format_word(w);
  emit(c, text_or_json(c, j, format_word(w) + "\n"));
  return kOk;
}

int cmd_msequences(const Common& c, std::uint32_t q, std::uint32_t k, const std::string& lfsr) {
  char* raw = nullptr;
  if (!lfsr.empty()) {
    check(cdb_lfsr_cycles(q, lfsr.c_str(), &raw));
    const std::string report = take(raw);
    std::string text;
    const auto j = Json::parse(report);
    for (const auto& cyc : j["cycles"])
      text += std::to_string(int(cyc["count"])) + " x length " + std::to_string(int(cyc["length"])) + "\n";
    emit(c, c.format == "json" ? report : text);
    return kOk;
  }
  check(cdb_msequences(q, k, &raw));
  const std::string report = take(raw);
  std::string text = "# sigma=" + std::to_string(q) + "\n";
  const auto j = Json::parse(report);
  for (const auto& s : j["sequences"]) text += s["word"].get<std::string>() + "\n";
  emit(c, c.format == "json" ? report : text);
  return kOk;
}

struct C1Handle {
  cdb_construction1* c = nullptr;
  ~C1Handle() { cdb_construction1_free(c); }
};

int cmd_construct1(const Common& c, std::uint32_t q, std::uint32_t k, std::uint32_t ell,
                   std::vector<std::string> indices, std::uint64_t limit, bool fixed) {
  C1Handle h;
  check(cdb_construction1_new(q, k, ell, &h.c));
  char* raw = nullptr;
  check(cdb_construction1_info(h.c, &raw));
  const auto info = Json::parse(take(raw));
  if (indices.empty()) {
    const std::string size = info["size"];
    std::uint64_t n = limit;
    if (size.size() < 20) n = std::min<std::uint64_t>(n, std::stoull(size));
    for (std::uint64_t i = 0; i < n; ++i) indices.push_back(std::to_string(i));
  }
  Json words = Json::array();
  std::string text = "# sigma=" + std::to_string(q) + "\n";
  for (const auto& idx : indices) {
    std::size_t len = 0;
    check(cdb_construction1_encode(h.c, idx.c_str(), fixed, nullptr, 0, &len));
    std::vector<cdb_symbol> w(len);
    check(cdb_construction1_encode(h.c, idx.c_str(), fixed, w.data(), w.size(), &len));
    words.push_back({{"index", idx}, {"length", len}, {"word", format_word(w)}});
    text += format_word(w) + "\n";
  }
  Json j;
  j["schema"] = 1;
  j["code"] = info;
  j["fixed"] = fixed;
  j["codewords"] = words;
  emit(c, text_or_json(c, j, text));
  return kOk;
}

int cmd_independent_set(const Common& c, std::uint32_t sigma, std::uint32_t k, std::uint32_t delta,
                        std::uint64_t seed, std::uint64_t iterations) {
  char* raw = nullptr;
  check(cdb_independent_set(sigma, k, delta, seed, iterations, &raw));
  const std::string report = take(raw);
  const auto j = Json::parse(report);
  std::string text = "size " + std::to_string(std::size_t(j["size"])) + " of " +
                     std::to_string(std::size_t(j["cycles"])) + " cycles\n";
  for (const auto& m : j["members"]) text += m.get<std::string>() + "\n";
  emit(c, c.format == "json" ? report : text);
  return kOk;
}

int cmd_simulate(const Common& c, bool racetrack, const cdb_simulation& s) {
  const auto start = std::chrono::steady_clock::now();
  char* raw = nullptr;
  check(racetrack ? cdb_simulate_racetrack(&s, &raw) : cdb_simulate_lsymbol(&s, &raw));
  const std::string manifest = take(raw);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::fprintf(stderr, "elapsed %.3f s\n", secs);
  const auto j = Json::parse(manifest);
  const std::size_t failures = j["failures"];
  const std::string text = std::to_string(failures) + " failures in " + std::to_string(std::size_t(j["trials"])) +
                           " trials\n";
  emit(c, c.format == "json" ? manifest : text);
  return failures ? kFailure : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained de Bruijn codes: verification, counting, construction and channel simulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cdb_version()));

  Common common;
  Params params;
  std::function<int()> run;

  auto* verify = app.add_subcommand("verify", "Check every word of a word file against (b, k)");
  std::string path;
  verify->add_option("path", path, "Word file, one word per line")->required();
  verify->add_option("--b", params.b, "Window span b")->required();
  verify->add_option("--k", params.k, "Window length k")->required();
  verify->add_flag("--cyclic", [&](std::int64_t) { params.mode = "cyclic"; }, "Check the words cyclically");
  add_mode(verify, params);
  add_common(verify, common, {"text", "json"});
  verify->callback([&] { run = [&] { return cmd_verify(common, params, path); }; });

  auto* count = app.add_subcommand("count", "Number of constrained words of length n");
  bool brute = false;
  add_constraint(count, params);
  count->add_option("--n", params.n, "Word length")->required();
  count->add_flag("--brute", brute, "Enumerate all words instead of using the automaton");
  add_common(count, common, {"text", "json"});
  count->callback([&] { run = [&] { return cmd_count(common, params, brute); }; });

  double tol = 1e-10;
  auto* capacity = app.add_subcommand("capacity", "Largest eigenvalue and capacity of the constraint");
  add_constraint(capacity, params);
  capacity->add_option("--tol", tol, "Power iteration tolerance")->capture_default_str();
  add_common(capacity, common, {"text", "json"});
  capacity->callback([&] { run = [&] { return cmd_capacity(common, params, tol); }; });

  auto* table = app.add_subcommand("table", "Capacity grid over b and k");
  std::uint32_t b_min = 1, b_max = 6, k_min = 2, k_max = 10;
  table->add_option("--sigma", params.sigma, "Alphabet size")->capture_default_str();
  table->add_option("--b-min", b_min, "Smallest b")->capture_default_str();
  table->add_option("--b,--b-max", b_max, "Largest b")->capture_default_str();
  table->add_option("--k-min", k_min, "Smallest k")->capture_default_str();
  table->add_option("--k,--k-max", k_max, "Largest k")->capture_default_str();
  table->add_option("--tol", tol, "Power iteration tolerance")->capture_default_str();
  add_common(table, common, {"csv", "json"});
  table->callback([&] {
    if (common.format == "text") common.format = "csv";
    run = [&] { return cmd_table(common, params.sigma, b_min, b_max, k_min, k_max, tol); };
  });

  auto* forbidden = app.add_subcommand("forbidden", "Forbidden patterns of the constraint");
  bool reduced = false;
  add_constraint(forbidden, params);
  forbidden->add_flag("--reduced", reduced, "Apply the reduction rules");
  add_common(forbidden, common, {"text", "json"});
  forbidden->callback([&] { run = [&] { return cmd_forbidden(common, params, reduced); }; });

  auto* rank = app.add_subcommand("rank", "Lexicographic rank of a constrained word");
  std::string word;
  add_constraint(rank, params);
  rank->add_option("--word", word, "Word, symbols separated by spaces")->required();
  add_common(rank, common, {"text", "json"});
  rank->callback([&] { run = [&] { return cmd_rank(common, params, word); }; });

  auto* unrank = app.add_subcommand("unrank", "Constrained word of a given lexicographic rank");
  std::string index;
  add_constraint(unrank, params);
  unrank->add_option("--n", params.n, "Word length")->required();
  unrank->add_option("--index", index, "Decimal rank")->required();
  add_common(unrank, common, {"text", "json"});
  unrank->callback([&] { run = [&] { return cmd_unrank(common, params, index); }; });

  auto* msequences = app.add_subcommand("msequences", "All m-sequences of order k over F_q");
  std::uint32_t q = 2;
  std::string lfsr;
  msequences->add_option("--q", q, "Field size")->capture_default_str();
  msequences->add_option("--k", params.k, "Order")->capture_default_str();
  msequences->add_option("--lfsr", lfsr, "Cycle structure of a connection polynomial, coefficients low to high");
  add_common(msequences, common, {"text", "json"});
  msequences->callback([&] { run = [&] { return cmd_msequences(common, q, params.k, lfsr); }; });

  auto* construct1 = app.add_subcommand("construct1", "Codewords of the m-sequence block construction");
  std::uint32_t ell = 2;
  std::vector<std::string> indices;
  std::uint64_t limit = 1000;
  bool fixed = false;
  construct1->add_option("--q", q, "Field size")->capture_default_str();
  construct1->add_option("--k", params.k, "Order")->capture_default_str();
  construct1->add_option("--ell", ell, "Number of blocks")->capture_default_str();
  construct1->add_option("--index", indices, "Codeword indices (default: the first --limit)");
  construct1->add_option("--limit", limit, "Number of codewords when no index is given")->capture_default_str();
  construct1->add_flag("--fixed", fixed, "Pad every codeword to the fixed length");
  add_common(construct1, common, {"text", "json"});
  construct1->callback([&] { run = [&] { return cmd_construct1(common, q, params.k, ell, indices, limit, fixed); }; });

  auto* indep = app.add_subcommand("independent-set", "Large set of de Bruijn cycles far apart in window order");
  std::uint32_t delta = 5;
  std::uint64_t seed = 1;
  std::uint64_t iterations = 0;
  indep->add_option("--sigma", params.sigma, "Alphabet size")->capture_default_str();
  indep->add_option("--k", params.k, "Order")->capture_default_str();
  indep->add_option("--delta", delta, "Distance parameter")->capture_default_str();
  indep->add_option("--seed", seed, "Search seed")->capture_default_str();
  indep->add_option("--iterations", iterations, "Local search iterations (0: library default)");
  add_common(indep, common, {"text", "json"});
  indep->callback([&] {
    run = [&] { return cmd_independent_set(common, params.sigma, params.k, delta, seed, iterations); };
  });

  cdb_simulation sim;
  cdb_simulation_defaults(&sim);
  cdb_simulation track = sim;
  track.n = 32;
  track.params = cdb_params{3, 2, 2};
  track.mode = CDB_ACYCLIC;
  track.t1 = 2;
  auto add_sim = [&](CLI::App* sub, cdb_simulation& s) {
    sub->add_option("--seed", s.seed, "Master seed")->capture_default_str();
    sub->add_option("--n", s.n, "Word or segment length")->capture_default_str();
    sub->add_option("--sigma", s.params.sigma, "Alphabet size")->capture_default_str();
    sub->add_option("--b", s.params.b, "Window span b")->capture_default_str();
    sub->add_option("--k", s.params.k, "Window length k")->capture_default_str();
    sub->add_option("--t1", s.t1, "Maximum number of deletion bursts")->capture_default_str();
    sub->add_option("--trials", s.trials, "Number of trials")->capture_default_str();
    sub->add_option("--sticky", s.sticky_probability, "Per-read sticky probability")->capture_default_str();
    add_common(sub, common, {"text", "json"});
  };

  auto* sim_l = app.add_subcommand("simulate-lsymbol", "Seeded round-trips through the l-symbol read channel");
  std::string sim_mode = "cyclic";
  add_sim(sim_l, sim);
  sim_l->add_option("--mode", sim_mode, "Read mode")->check(CLI::IsMember({"acyclic", "cyclic"}))->capture_default_str();
  sim_l->callback([&] {
    sim.mode = sim_mode == "cyclic" ? CDB_CYCLIC : CDB_ACYCLIC;
    run = [&] { return cmd_simulate(common, false, sim); };
  });

  auto* sim_r = app.add_subcommand("simulate-racetrack", "Seeded round-trips through the racetrack code");
  add_sim(sim_r, track);
  sim_r->add_option("--m", track.m, "Number of segments")->capture_default_str();
  sim_r->callback([&] { run = [&] { return cmd_simulate(common, true, track); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }
  try {
    return run();
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.exit;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
}
