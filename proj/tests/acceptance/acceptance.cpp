// Acceptance run: one PASS/FAIL line per criterion. Pass --update-golden to rewrite
// the CLI golden files; set ADJBRAID_ACCEPT_N6=1 to include the n = 6 chamber count.
#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "adjbraid/arrangement.hpp"
#include "adjbraid/audit.hpp"
#include "adjbraid/forests.hpp"
#include "adjbraid/steinmann.hpp"
#include "json.hpp"

namespace {

using namespace adjbraid;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

struct Run {
  int exit = -1;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

// Runs the CLI inside the golden directory so relative input paths resolve.
Run cli(const std::vector<std::string>& args) {
  std::string cmd = "cd " + quote(ADJBRAID_GOLDEN_DIR) + " && " + quote(ADJBRAID_CLI);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int status = pclose(pipe);
  r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const AuditEntry* entry(const AuditReport& r, const std::string& claim) {
  for (const auto& e : r.entries) {
    if (e.claim == claim) return &e;
  }
  return nullptr;
}

// `nonvacuous`: the claim has instances at this n (Jacobi needs three leaves, say).
void require_claim(Outcome& o, const AuditReport& r, const std::string& claim, int n, bool exhaustive,
                   bool nonvacuous = true) {
  const AuditEntry* e = entry(r, claim);
  const std::string tag = claim + " n=" + std::to_string(n);
  if (!e) {
    o.require(false, tag + " missing");
    return;
  }
  o.require(e->pass, tag + " failed: " + (e->counterexample ? e->counterexample->detail : std::string()));
  if (nonvacuous) o.require(e->instances > 0, tag + " has no instances");
  if (exhaustive) o.require(!e->sampled, tag + " was sampled");
}

// --- criteria ---------------------------------------------------------------

Outcome chamber_counts() {
  Outcome o;
  const std::size_t expected[] = {0, 1, 2, 6, 32, 370, 11292};
  auto t0 = std::chrono::steady_clock::now();
  for (int n = 2; n <= 5; ++n) {
    Run r = cli({"enumerate", "--n", std::to_string(n)});
    o.require(r.exit == 0, "enumerate n=" + std::to_string(n) + " exit " + std::to_string(r.exit));
    auto got = lines(r.out);
    o.require(got.size() == expected[n], "n=" + std::to_string(n) + " gave " + std::to_string(got.size()));
    if (n <= 4) {
      Run naive = cli({"enumerate", "--n", std::to_string(n), "--naive"});
      std::set<std::string> a(got.begin(), got.end());
      auto b_lines = lines(naive.out);
      std::set<std::string> b(b_lines.begin(), b_lines.end());
      o.require(a == b, "n=" + std::to_string(n) + " differs from the exhaustive sign-pattern oracle");
      const std::size_t patterns = std::size_t{1} << ((std::size_t{1} << (n - 1)) - 1);
      o.require(patterns == (std::size_t{1} << keys_of(Partition::one_block(GroundSet::numbered(n)))->size()),
                "oracle pattern count");
    }
  }
  const double t = seconds_since(t0);
  o.require(t < 60.0, "n <= 5 took " + std::to_string(t) + " s");
  if (const char* env = std::getenv("ADJBRAID_ACCEPT_N6"); env && std::string(env) == "1") {
    Run r = cli({"enumerate", "--n", "6", "--large"});
    o.require(lines(r.out).size() == expected[6], "n=6 gave " + std::to_string(lines(r.out).size()));
  }
  o.detail = o.pass ? "2, 6, 32, 370 in " + std::to_string(t).substr(0, 5) + " s; oracle agrees for n <= 4" : o.detail;
  return o;
}

Outcome quotient_dimensions() {
  Outcome o;
  // Independent check: n! [x^n] -log(2 - e^x) = 2 * (ordered Bell number of n - 1) for n >= 2.
  const unsigned long fubini[] = {1, 1, 3, 13, 75};
  const unsigned long expected[] = {0, 1, 2, 6, 26, 150};
  auto t0 = std::chrono::steady_clock::now();
  for (int n = 2; n <= 5; ++n) {
    Run r = cli({"stein-rank", "--n", std::to_string(n)});
    const std::string tag = "n=" + std::to_string(n);
    o.require(r.exit == 0, tag + " exit " + std::to_string(r.exit));
    if (r.exit != 0) continue;
    auto j = nlohmann::json::parse(r.out);
    o.require(j.at("quotient_dim").get<unsigned long>() == expected[n], tag + " quotient_dim " + j.at("quotient_dim").dump());
    o.require(j.at("oracle_dim").get<unsigned long>() == expected[n], tag + " oracle_dim " + j.at("oracle_dim").dump());
    o.require(j.at("agree").get<bool>(), tag + " does not agree");
    o.require(2 * fubini[n - 1] == expected[n], tag + " ordered Bell cross-check");
    o.require(j.at("shards").get<unsigned long>() - j.at("relation_rank").get<unsigned long>() == expected[n],
              tag + " shards minus rank");
  }
  const double t = seconds_since(t0);
  o.require(t < 300.0, "n <= 5 took " + std::to_string(t) + " s");
  if (o.pass) o.detail = "2, 6, 26, 150 equal the series oracle in " + std::to_string(t).substr(0, 5) + " s";
  return o;
}

Outcome lie_axioms() {
  Outcome o;
  std::size_t total = 0;
  for (int n = 2; n <= 5; ++n) {
    AuditReport r = verify_lie_axioms(n, kDefaultSeed, 1000);
    require_claim(o, r, "lie.antisymmetry", n, n <= 4);
    require_claim(o, r, "lie.jacobi", n, n <= 4, n >= 3);
    for (const auto& e : r.entries) total += e.instances;
    if (n == 5) {
      for (const char* c : {"lie.antisymmetry", "lie.jacobi"}) {
        const AuditEntry* e = entry(r, c);
        o.require(e && (!e->sampled || e->instances == 1000), std::string(c) + " n=5 sample size");
      }
    }
  }
  if (o.pass) o.detail = std::to_string(total) + " instances, exhaustive for n <= 4, 1000 sampled at n = 5";
  return o;
}

Outcome kernel_theorem() {
  Outcome o;
  std::size_t pairs_total = 0;
  for (int n = 2; n <= 5; ++n) {
    AuditReport r = verify_kernel(n);
    require_claim(o, r, "kernel.generates", n, true);
    // One instance per pair P finer than R.
    auto parts = all_partitions(GroundSet::numbered(n));
    std::size_t pairs = 0;
    for (const auto& p : parts) {
      for (const auto& q : parts) pairs += is_finer(p, q) ? 1 : 0;
    }
    const AuditEntry* e = entry(r, "kernel.generates");
    o.require(e && e->instances == pairs, "n=" + std::to_string(n) + " covers " +
                                              std::to_string(e ? e->instances : 0) + " of " + std::to_string(pairs) +
                                              " pairs");
    pairs_total += pairs;
  }
  if (o.pass) o.detail = "rank of class differences equals dim ker for all " + std::to_string(pairs_total) + " pairs";
  return o;
}

Outcome surjectivity() {
  Outcome o;
  for (int n = 2; n <= 4; ++n) require_claim(o, verify_kernel(n), "kernel.surjective", n, true);
  if (o.pass) o.detail = "every tensor basis element has a preimage, all pairs at n <= 4";
  return o;
}

Outcome factorization_diagram() {
  Outcome o;
  std::size_t total = 0;
  for (int n = 2; n <= 4; ++n) {
    AuditReport r = verify_factorization(n, kDefaultSeed, 1000000);
    require_claim(o, r, "factorization.diagram", n, true);
    if (const AuditEntry* e = entry(r, "factorization.diagram")) total += e->instances;
  }
  if (o.pass) o.detail = std::to_string(total) + " (P, forest) instances with <= 3 cuts";
  return o;
}

Outcome main_theorem() {
  Outcome o;
  for (int n = 4; n <= 5; ++n) {
    AuditReport r = verify_steinmann(n, kDefaultSeed, n == 4 ? 1000000 : 1000);
    require_claim(o, r, "steinmann.main_theorem", n, n == 4);
    require_claim(o, r, "steinmann.converse", n, true);
  }
  if (o.pass) o.detail = "annihilator basis derivatives semisimple (exhaustive n = 4, sampled n = 5); converse holds";
  return o;
}

Outcome layering() {
  Outcome o;
  auto g = GroundSet::numbered(4);
  auto l = parse_forest("[[1,2],[3,4]]@L", g);
  auto r = parse_forest("[[1,2],[3,4]]@R", g);
  auto x = ShardVector::basis(ShardSpace::of(l.target()), 0);
  ShardVector dl = dual_forest_derivative(l, x);
  ShardVector dr = dual_forest_derivative(r, x);
  o.require(!(dl == dr), "the two layerings give the same image");
  auto q = quotient_of(g);
  ShardVector diff = dl - dr;
  // Rank test: appending the difference does not raise the relation rank.
  RationalMatrix m = q->relations().matrix();
  const std::size_t before = rank(m);
  m.add_row(diff.coeffs());
  o.require(rank(m) == before, "difference is outside Stein[4]");
  for (const auto& f : q->annihilator()) o.require(f(dl) == f(dr), "an annihilator functional separates them");
  AuditReport audit = verify_steinmann(4);
  require_claim(o, audit, "steinmann.layering_sensitivity", 4, true);
  require_claim(o, audit, "steinmann.delayering", 4, true);
  if (o.pass) o.detail = "images differ; difference has rank 0 modulo the " + std::to_string(before) + " relations";
  return o;
}

Outcome module_axioms() {
  Outcome o;
  for (int n = 2; n <= 4; ++n) {
    AuditReport r = verify_module_axioms(n, kDefaultSeed, 1000000);
    for (const char* c : {"module.unit", "module.functoriality", "module.steinmann_classes"}) {
      require_claim(o, r, c, n, true);
    }
    // Layerings and block relations first occur at four elements.
    require_claim(o, r, "module.layering", n, true, n >= 4);
    require_claim(o, r, "module.block_relations", n, true, n >= 4);
  }
  if (o.pass) o.detail = "unit, functoriality and Stein-compatibility hold for n <= 4";
  return o;
}

struct Golden {
  std::string file;
  std::vector<std::string> args;
  int exit = 0;
};

const std::vector<Golden>& goldens() {
  static const std::vector<Golden> list = {
      {"enumerate_n2.jsonl", {"enumerate", "--n", "2"}},
      {"enumerate_n3.jsonl", {"enumerate", "--n", "3"}},
      {"enumerate_n4.jsonl", {"enumerate", "--n", "4"}},
      {"enumerate_12_34.jsonl", {"enumerate", "--partition", "(12|34)"}},
      {"enumerate_n3.txt", {"--format", "text", "enumerate", "--n", "3"}},
      {"stein_rank_n2.json", {"stein-rank", "--n", "2"}},
      {"stein_rank_n3.json", {"stein-rank", "--n", "3"}},
      {"stein_rank_n4.json", {"stein-rank", "--n", "4"}},
      {"stein_rank_abcd.json", {"stein-rank", "--labels", "a,b,c,d"}},
      {"oracle_n8.json", {"oracle", "--n", "8"}},
      {"derive_n3.json", {"derive", "--forest", "[1,23]", "--input", "inputs/functional_n3.json"}},
      {"derive_dual_n3.json", {"derive", "--dual", "--forest", "[[1,2],3]", "--input", "inputs/zero_dim_n3.json"}},
      {"derive_dual_n4_L.json",
       {"derive", "--dual", "--forest", "[[1,2],[3,4]]@L", "--input", "inputs/zero_dim_n4.json"}},
      {"derive_dual_n4_R.json",
       {"derive", "--dual", "--forest", "[[1,2],[3,4]]@R", "--input", "inputs/zero_dim_n4.json"}},
      {"verify_n3_lie.json", {"verify", "--n", "3", "--suite", "lie"}},
      {"verify_n4_all.txt", {"--format", "text", "verify", "--n", "4", "--suite", "all"}},
      {"render_n3.svg", {"render", "--n", "3"}},
      {"render_n3_12_3.svg", {"render", "--n", "3", "--forest", "[[1,2],3]"}},
      {"render_n4.svg", {"render", "--n", "4"}},
      {"render_n4_L.svg", {"render", "--n", "4", "--forest", "[[1,2],[3,4]]@L"}},
      {"render_n4_R.svg", {"render", "--n", "4", "--forest", "[[1,2],[3,4]]@R"}},
      {"replay_failing.json", {"replay", "--input", "inputs/failing_antisymmetry.json"}, 1},
  };
  return list;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(bool update) {
  Outcome o;
  const fs::path dir(ADJBRAID_GOLDEN_DIR);
  for (const auto& g : goldens()) {
    Run a = cli(g.args);
    Run b = cli(g.args);
    o.require(a.exit == g.exit, g.file + " exit " + std::to_string(a.exit));
    o.require(a.out == b.out, g.file + " differs between runs");
    if (update) {
      std::ofstream(dir / g.file, std::ios::binary) << a.out;
      continue;
    }
    o.require(fs::exists(dir / g.file), g.file + " golden missing");
    o.require(slurp(dir / g.file) == a.out, g.file + " differs from golden");
  }
  // Seeds: the same seed gives the same report, so the seed is the only source of variation.
  Run s1 = cli({"--seed", "5", "verify", "--n", "3", "--suite", "calculus"});
  Run s2 = cli({"--seed", "5", "verify", "--n", "3", "--suite", "calculus"});
  o.require(s1.out == s2.out && !s1.out.empty(), "seeded verify differs between runs");
  if (o.pass) o.detail = std::to_string(goldens().size()) + " commands byte-identical across runs and to golden files";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const bool update = argc > 1 && std::string(argv[1]) == "--update-golden";
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "chamber counts", chamber_counts},
      {2, "Steinmann quotient dimensions", quotient_dimensions},
      {3, "Lie axioms", lie_axioms},
      {4, "kernel theorem", kernel_theorem},
      {5, "projection surjectivity", surjectivity},
      {6, "factorization diagram", factorization_diagram},
      {7, "main theorem", main_theorem},
      {8, "layering sensitivity and delayering", layering},
      {9, "module axioms", module_axioms},
      {10, "determinism", [update] { return determinism(update); }},
  };
  bool all = true;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    char time[32];
    std::snprintf(time, sizeof time, "%.1fs", seconds_since(t0));
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.id << " " << c.name << " [" << time << "] " << o.detail << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
