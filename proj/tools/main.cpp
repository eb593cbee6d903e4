#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adjbraid/arrangement.hpp"
#include "adjbraid/audit.hpp"
#include "adjbraid/calculus.hpp"
#include "adjbraid/errors.hpp"
#include "adjbraid/forests.hpp"
#include "adjbraid/io.hpp"
#include "adjbraid/steinmann.hpp"
#include "json.hpp"
#include "render.hpp"

namespace {

using namespace adjbraid;
using ojson = nlohmann::ordered_json;

// Exit codes.
constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;
constexpr int kInternal = 3;

// Shard spaces with more keys than this need --large (one block at n = 6 has 31).
constexpr std::size_t kLargeKeys = 15;

struct Options {
  std::string format = "json";
  std::uint64_t seed = kDefaultSeed;

  std::string partition;
  int n = 0;
  std::string labels;
  bool naive = false;
  bool large = false;

  std::string forest;
  std::string input;
  std::string output;
  bool dual = false;

  std::string suite = "all";
  std::string json_out;
  std::size_t samples = 1000;

  std::string highlight;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

std::filesystem::path output_dir() {
  const char* env = std::getenv("ADJBRAID_OUTPUT_DIR");
  return env && *env ? std::filesystem::path(env) : std::filesystem::current_path();
}

GroundPtr ground_from(const Options& o) {
  if (!o.labels.empty()) {
    std::vector<std::string> labels;
    std::stringstream ss(o.labels);
    for (std::string item; std::getline(ss, item, ',');) labels.push_back(item);
    return GroundSet::make(std::move(labels));
  }
  if (o.n <= 0) throw Error("one of --n or --labels is required");
  return GroundSet::numbered(o.n);
}

void require_size(const Partition& p, bool large) {
  auto keys = keys_of(p);
  if (keys->size() > kLargeKeys && !large) {
    throw OutOfRange("more than " + std::to_string(kLargeKeys) + " hyperplanes; pass --large to proceed");
  }
}

int cmd_enumerate(const Options& o) {
  Partition p = !o.partition.empty() ? Partition::parse(o.partition) : Partition::one_block(ground_from(o));
  require_size(p, o.large);
  std::vector<Shard> shards;
  if (o.naive) {
    shards = enumerate_shards_naive(p);
  } else {
    auto space = ShardSpace::of(p);
    for (std::size_t i = 0; i < space->size(); ++i) shards.push_back(space->shard(i));
  }
  std::string out;
  for (const Shard& x : shards) {
    out += o.format == "text" ? x.support().to_string() + " " + x.sign_string() : shard_to_json(x);
    out += '\n';
  }
  write_output(o.output, out);
  return kOk;
}

std::string vector_text(const ShardVector& v) {
  std::string out;
  for (const auto& [i, c] : v.coeffs().entries()) out += v.space()->shard(i).sign_string() + " " + to_string(c) + "\n";
  return out;
}

std::string functional_text(const Functional& f) {
  std::string out;
  for (std::size_t i = 0; i < f.space()->size(); ++i) {
    out += f.space()->shard(i).sign_string() + " " + to_string(f[i]) + "\n";
  }
  return out;
}

int cmd_derive(const Options& o) {
  const std::string doc = read_file(o.input);
  const Partition doc_support = Partition::parse(document_support(doc));
  GroundPtr ground = doc_support.ground_ptr();
  if (!o.partition.empty()) {
    Partition p = Partition::parse(o.partition);
    if (!(p == doc_support)) {
      throw SupportMismatch("input is over " + doc_support.to_string() + ", not " + p.to_string());
    }
    ground = p.ground_ptr();
  }
  const LayeredForest f = parse_forest(o.forest, ground);
  if (o.dual) {
    ShardVector v = shard_vector_from_json(doc, ground);
    if (!(v.support() == f.target())) {
      throw SupportMismatch("the dual derivative takes vectors over " + f.target().to_string());
    }
    ShardVector r = dual_forest_derivative(f, v);
    write_output(o.output, o.format == "text" ? vector_text(r) : shard_vector_to_json(r) + "\n");
  } else {
    Functional g = functional_from_json(doc, ground);
    if (!(g.support() == f.source())) {
      throw SupportMismatch("the derivative takes functionals over " + f.source().to_string());
    }
    Functional r = forest_derivative(f, g);
    write_output(o.output, o.format == "text" ? functional_text(r) : functional_to_json(r) + "\n");
  }
  return kOk;
}

int cmd_stein_rank(const Options& o) {
  GroundPtr ground = ground_from(o);
  const int n = ground->size();
  if (n > 6) throw OutOfRange("stein-rank supports n <= 6");
  Partition one = Partition::one_block(ground);
  require_size(one, o.large);
  auto q = quotient_of(ground);
  const std::size_t shards = ShardSpace::of(one)->size();
  const Integer oracle = zie_dimension(n);
  const bool agree = oracle == Integer(static_cast<unsigned long>(q->dim()));
  ojson j;
  j["schema"] = kSchemaVersion;
  j["n"] = n;
  j["shards"] = shards;
  j["relation_rank"] = q->relation_rank();
  j["quotient_dim"] = q->dim();
  j["oracle_dim"] = oracle.get_ui();
  j["agree"] = agree;
  if (o.format == "text") {
    std::string out;
    for (const auto& [k, v] : j.items()) out += k + " " + v.dump() + "\n";
    write_output(o.output, out);
  } else {
    write_output(o.output, j.dump() + "\n");
  }
  return kOk;
}

int cmd_verify(const Options& o) {
  if (o.n < 1 || o.n > 6) throw OutOfRange("verify supports 1 <= n <= 6");
  AuditReport report = run_suite(o.suite, o.n, o.seed, o.samples);
  if (!o.json_out.empty()) write_output(o.json_out, report_to_json(report) + "\n");
  write_output(o.output, o.format == "text" ? report_to_text(report) : report_to_json(report) + "\n");
  return report.pass() ? kOk : kFailed;
}

int cmd_oracle(const Options& o) {
  if (o.n < 1 || o.n > 12) throw OutOfRange("oracle supports 1 <= n <= 12");
  const Integer d = zie_dimension(o.n);
  if (o.format == "text") {
    write_output(o.output, d.get_str() + "\n");
    return kOk;
  }
  ojson j;
  j["schema"] = kSchemaVersion;
  j["n"] = o.n;
  j["oracle_dim"] = d.get_ui();
  write_output(o.output, j.dump() + "\n");
  return kOk;
}

int cmd_render(const Options& o) {
  std::optional<ShardVector> highlight;
  if (!o.forest.empty() && !o.highlight.empty()) throw Error("--forest and --highlight are exclusive");
  if (!o.forest.empty()) {
    const LayeredForest f = parse_forest(o.forest, GroundSet::numbered(o.n));
    auto target = ShardSpace::of(f.target());
    if (target->size() != 1) throw Error("--forest must be a complete forest (cuts down to singletons)");
    highlight = dual_forest_derivative(f, ShardVector::basis(target, 0));
  } else if (!o.highlight.empty()) {
    highlight = shard_vector_from_json(read_file(o.highlight), GroundSet::numbered(o.n));
  }
  write_output(o.output, render_svg(o.n, highlight));
  return kOk;
}

int cmd_replay(const Options& o) {
  const Instance in = instance_from_json(read_file(o.input));
  const bool reproduced = replay(in);
  if (o.format == "text") {
    write_output(o.output, std::string(reproduced ? "REPRODUCED " : "NOT REPRODUCED ") + in.claim + "\n");
  } else {
    ojson j;
    j["schema"] = kSchemaVersion;
    j["claim"] = in.claim;
    j["reproduced"] = reproduced;
    write_output(o.output, j.dump() + "\n");
  }
  return reproduced ? kFailed : kOk;
}

// Written when an internal invariant breaks: enough to rerun the exact command.
std::string write_bundle(const std::vector<std::string>& argv, const std::string& what) {
  ojson j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "invariant-violation";
  j["error"] = what;
  j["argv"] = argv;
  const auto path = output_dir() / "adjbraid-replay.json";
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << "\n";
  return path.string();
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Exact computations on the adjoint braid arrangement"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--seed", o.seed, "Seed for randomized steps");

  auto* enumerate = app.add_subcommand("enumerate", "List the shards over a partition as JSON lines");
  auto* enum_group = enumerate->add_option_group("support");
  enum_group->add_option("--partition", o.partition, "Support partition, e.g. \"(12|34)\"");
  enum_group->add_option("--n", o.n, "One block on 1..n");
  enum_group->add_option("--labels", o.labels, "One block on comma-separated labels");
  enum_group->require_option(1);
  enumerate->add_flag("--naive", o.naive, "Test every sign pattern instead of wall crossing");
  enumerate->add_flag("--large", o.large, "Allow more than 15 hyperplanes (slow)");
  enumerate->add_option("--output", o.output, "Output file (default stdout)");

  auto* derive = app.add_subcommand("derive", "Apply a forest derivative to a functional or shard vector");
  derive->add_option("--forest", o.forest, "Layered forest, e.g. \"[[1,2],[3,4]]@L\"")->required();
  derive->add_option("--input", o.input, "Functional (or, with --dual, shard vector) JSON file")->required();
  derive->add_option("--partition", o.partition, "Expected support of the input");
  derive->add_flag("--dual", o.dual, "Apply the dual derivative to a shard vector");
  derive->add_option("--output", o.output, "Output file (default stdout)");

  auto* stein = app.add_subcommand("stein-rank", "Rank of the Steinmann relations and the quotient dimension");
  auto* stein_group = stein->add_option_group("ground");
  stein_group->add_option("--n", o.n, "Ground set 1..n");
  stein_group->add_option("--labels", o.labels, "Comma-separated labels");
  stein_group->require_option(1);
  stein->add_flag("--large", o.large, "Allow n = 6 (slow)");
  stein->add_option("--output", o.output, "Output file (default stdout)");

  auto* verify = app.add_subcommand("verify", "Run an audit suite");
  verify->add_option("--n", o.n, "Ground set size")->required();
  verify->add_option("--suite", o.suite, "Suite to run")
      ->check(CLI::IsMember({"lie", "calculus", "module", "kernel", "factorization", "steinmann", "all"}));
  verify->add_option("--json", o.json_out, "Also write the JSON report here");
  verify->add_option("--samples", o.samples, "Sample size for large instance lists");
  verify->add_option("--seed", o.seed, "Seed for sampling and random functionals");
  verify->add_option("--output", o.output, "Output file (default stdout)");

  auto* oracle = app.add_subcommand("oracle", "Quotient dimension from the exponential generating function");
  oracle->add_option("--n", o.n, "Ground set size")->required();
  oracle->add_option("--output", o.output, "Output file (default stdout)");

  auto* render = app.add_subcommand("render", "SVG picture of the arrangement for n = 3 or 4");
  render->add_option("--n", o.n, "3 or 4")->required()->check(CLI::IsMember({3, 4}));
  render->add_option("--forest", o.forest, "Shade the dual derivative of the zero-dimensional shard");
  render->add_option("--highlight", o.highlight, "Shade a shard vector JSON file");
  render->add_option("--out,--output", o.output, "Output file (default stdout)");

  auto* replay_cmd = app.add_subcommand("replay", "Re-run a stored audit counterexample");
  replay_cmd->add_option("--input", o.input, "Counterexample JSON")->required();
  replay_cmd->add_option("--output", o.output, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const std::vector<std::string> args(argv, argv + argc);
  try {
    if (*enumerate) return cmd_enumerate(o);
    if (*derive) return cmd_derive(o);
    if (*stein) return cmd_stein_rank(o);
    if (*verify) return cmd_verify(o);
    if (*oracle) return cmd_oracle(o);
    if (*render) return cmd_render(o);
    if (*replay_cmd) return cmd_replay(o);
  } catch (const InvariantViolation& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    std::cerr << "replay bundle: " << write_bundle(args, e.what()) << "\n";
    return kInternal;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    std::cerr << "replay bundle: " << write_bundle(args, e.what()) << "\n";
    return kInternal;
  }
  return kUsage;
}
