#include "adjbraid/audit.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <set>

#include "adjbraid/errors.hpp"
#include "adjbraid/steinmann.hpp"

namespace adjbraid {

// ---------------------------------------------------------------------------
// Dimension oracle

Integer zie_dimension(int n) {
  if (n < 1 || n > 12) throw OutOfRange("zie_dimension needs 1 <= n <= 12");
  const std::size_t len = static_cast<std::size_t>(n) + 1;
  // a = e^x - 1, then -log(2 - e^x) = -log(1 - a) = sum_k a^k / k.
  std::vector<Rational> a(len, 0);
  Rational fact = 1;
  for (std::size_t i = 1; i < len; ++i) {
    fact *= static_cast<long>(i);
    a[i] = 1 / fact;
  }
  std::vector<Rational> power = a;  // a^k
  std::vector<Rational> series(len, 0);
  for (std::size_t k = 1; k < len; ++k) {
    for (std::size_t i = 0; i < len; ++i) series[i] += power[i] / static_cast<long>(k);
    std::vector<Rational> next(len, 0);
    for (std::size_t i = 0; i < len; ++i) {
      if (sgn(power[i]) == 0) continue;
      for (std::size_t j = 1; i + j < len; ++j) next[i + j] += power[i] * a[j];
    }
    power = std::move(next);
  }
  Rational d = series[static_cast<std::size_t>(n)] * fact;
  if (d.get_den() != 1) throw InvariantViolation("series coefficient is not integral");
  return d.get_num();
}

// ---------------------------------------------------------------------------
// Instance plumbing

namespace {

GroundPtr ground_of(int n) {
  static std::mutex mu;
  static std::map<int, GroundPtr> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, GroundSet::numbered(n)).first;
  return it->second;
}

Partition part(const Instance& in, const std::string& text) { return Partition::parse(text, ground_of(in.n)); }
LayeredForest forest(const Instance& in, const std::string& text) { return parse_forest(text, ground_of(in.n)); }

Rational random_rational(std::mt19937_64& rng) {
  long num = static_cast<long>(rng() % 19) - 9;
  long den = 1 + static_cast<long>(rng() % 4);
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Functional random_functional(const SpacePtr& space, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Rational> values(space->size());
  for (auto& v : values) v = random_rational(rng);
  return Functional(space, std::move(values));
}

std::vector<ShardVector> test_vectors(const Instance& in, const SpacePtr& space) {
  std::vector<ShardVector> out;
  if (in.shards.empty()) {
    for (std::size_t i = 0; i < space->size(); ++i) out.push_back(ShardVector::basis(space, i));
    return out;
  }
  ShardVector v(space);
  for (const auto& [c, s] : in.shards) {
    v.add(space->index_of(shard_from_sign_string(space->support(), s)), c);
  }
  out.push_back(std::move(v));
  return out;
}

std::vector<std::pair<int, std::string>> as_shards(const ShardVector& v) {
  std::vector<std::pair<int, std::string>> out;
  for (const auto& [i, c] : v.coeffs().entries()) {
    if (c.get_den() != 1 || !c.get_num().fits_slong_p()) throw InvariantViolation("non-integral test vector");
    out.emplace_back(static_cast<int>(c.get_num().get_si()), v.space()->shard(i).sign_string());
  }
  return out;
}

Instance fail(const Instance& in, std::string detail) {
  Instance out = in;
  out.detail = std::move(detail);
  return out;
}

Instance fail_at(const Instance& in, const ShardVector& v, std::string detail) {
  Instance out = fail(in, std::move(detail));
  out.shards = as_shards(v);
  return out;
}

std::string show(const ShardVector& v) {
  std::string out;
  for (const auto& [i, c] : v.coeffs().entries()) {
    if (!out.empty()) out += ' ';
    out += to_string(c) + "*" + v.space()->shard(i).sign_string();
  }
  return out.empty() ? "0" : out;
}

std::vector<LayeredForest> forests_of(const Instance& in) {
  std::vector<LayeredForest> out;
  for (const auto& [s, text] : in.forests) out.push_back(forest(in, text));
  return out;
}

// Sum of signed dual derivatives applied to v; all forests share one target.
ShardVector signed_dual_sum(const Instance& in, const std::vector<LayeredForest>& fs, const ShardVector& v) {
  std::optional<ShardVector> total;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    ShardVector d = dual_forest_derivative(fs[i], v);
    d *= Rational(in.forests[i].first);
    if (total) {
      *total += d;
    } else {
      total = std::move(d);
    }
  }
  return *total;
}

// --- claims over dual derivatives -------------------------------------------

std::optional<Instance> check_signed_sum(const Instance& in, bool modulo_stein) {
  auto fs = forests_of(in);
  if (fs.empty()) throw Error("claim needs at least one forest");
  auto target = ShardSpace::of(fs.front().target());
  for (const auto& v : test_vectors(in, target)) {
    ShardVector sum = signed_dual_sum(in, fs, v);
    bool ok = modulo_stein ? quotient_of(sum.support())->contains(sum) : sum.is_zero();
    if (!ok) return fail_at(in, v, "signed sum of dual derivatives is " + show(sum));
  }
  return std::nullopt;
}

std::optional<Instance> check_prelie(const Instance& in) {
  auto fs = forests_of(in);
  if (fs.size() != 2) throw Error("pre-Lie claim compares two forests");
  auto target = ShardSpace::of(fs[0].target());
  for (std::size_t i = 0; i < target->size(); ++i) {
    Shard x = target->shard(i);
    if (!in.shards.empty() && x.sign_string() != in.shards.front().second) continue;
    Shard a = arrow(x, fs[0]);
    Shard b = arrow(x, fs[1]);
    if (!(a == b)) {
      return fail_at(in, ShardVector::basis(target, i), "arrows differ: " + a.sign_string() + " vs " + b.sign_string());
    }
  }
  return std::nullopt;
}

std::optional<Instance> check_two_path(const Instance& in) {
  auto f = forest(in, in.forests.at(0).second);
  auto target = ShardSpace::of(f.target());
  for (const auto& v : test_vectors(in, target)) {
    auto a = dual_forest_derivative(f, v);
    auto b = dual_forest_derivative_antisymmetrized(f, v);
    if (!(a == b)) return fail_at(in, v, "cut-by-cut " + show(a) + " vs antisymmetrized " + show(b));
  }
  return std::nullopt;
}

std::optional<Instance> check_duality(const Instance& in) {
  auto f = forest(in, in.forests.at(0).second);
  auto g = random_functional(ShardSpace::of(f.source()), in.seed);
  if (!(forest_derivative(f, g) == forest_derivative_by_duality(f, g))) {
    return fail(in, "finite differences disagree with the pairing against dual derivatives");
  }
  return std::nullopt;
}

std::optional<Instance> check_unit(const Instance& in) {
  Partition p = part(in, in.support);
  auto id = LayeredForest::identity(p);
  auto space = ShardSpace::of(p);
  for (const auto& v : test_vectors(in, space)) {
    if (!(dual_forest_derivative(id, v) == v)) return fail_at(in, v, "stick forest moved a shard");
  }
  auto g = random_functional(space, in.seed);
  if (!(forest_derivative(id, g) == g)) return fail(in, "stick forest changed a functional");
  return std::nullopt;
}

std::optional<Instance> check_functoriality(const Instance& in) {
  auto fs = forests_of(in);
  if (fs.size() != 2) throw Error("functoriality compares a composable pair");
  auto whole = compose(fs[0], fs[1]);
  auto target = ShardSpace::of(whole.target());
  for (const auto& v : test_vectors(in, target)) {
    auto a = dual_forest_derivative(whole, v);
    auto b = dual_forest_derivative(fs[0], dual_forest_derivative(fs[1], v));
    if (!(a == b)) return fail_at(in, v, "composite " + show(a) + " vs iterated " + show(b));
  }
  auto g = random_functional(ShardSpace::of(whole.source()), in.seed);
  if (!(forest_derivative(whole, g) == forest_derivative(fs[1], forest_derivative(fs[0], g)))) {
    return fail(in, "forest derivative of the composite differs from the iterated derivative");
  }
  return std::nullopt;
}

// Steinmann-adjacent pairs (a < b) of the space, threshold R = support.
std::vector<std::pair<std::size_t, std::size_t>> adjacent_pairs(const ShardSpace& space) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const Partition& q = space.support();
  const KeySet& keys = space.keys();
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (is_r_semisimple(q, q, keys.key(i))) continue;
    for (std::size_t a = 0; a < space.size(); ++a) {
      auto b = space.find(space.signs(a) ^ keys.bit(i));
      if (b && a < *b) out.emplace_back(a, *b);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Instance> check_class_differences(const Instance& in) {
  auto f = forest(in, in.forests.at(0).second);
  auto target = ShardSpace::of(f.target());
  auto quotient = quotient_of(f.source());
  std::vector<ShardVector> vectors;
  if (in.shards.empty()) {
    for (auto [a, b] : adjacent_pairs(*target)) {
      vectors.push_back(ShardVector::basis(target, a) - ShardVector::basis(target, b));
    }
  } else {
    vectors = test_vectors(in, target);
  }
  for (const auto& v : vectors) {
    auto d = dual_forest_derivative(f, v);
    if (!quotient->contains(d)) return fail_at(in, v, "image " + show(d) + " is not in the relation span");
  }
  return std::nullopt;
}

std::optional<Instance> check_block_relations(const Instance& in) {
  auto f = forest(in, in.forests.at(0).second);
  const Partition& p = f.target();
  auto target = ShardSpace::of(p);
  auto quotient = quotient_of(f.source());
  std::vector<ShardVector> vectors;
  if (!in.shards.empty()) {
    vectors = test_vectors(in, target);
  } else {
    auto table = projection_table(p, p);
    std::map<std::vector<std::size_t>, std::size_t> preimage;
    for (std::size_t x = 0; x < table.size(); ++x) preimage.emplace(table[x], x);
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p.block(j).count() < 4) continue;
      auto rels = quotient_of(simple_support(p, p.block(j)))->relations().relations;
      // Lift every relation along every choice of the other components.
      std::set<std::vector<std::size_t>> others;
      for (const auto& t : table) {
        auto o = t;
        o[j] = 0;
        others.insert(o);
      }
      for (const auto& rel : rels) {
        for (const auto& o : others) {
          ShardVector lift(target);
          for (const auto& [y, c] : rel.entries()) {
            auto tuple = o;
            tuple[j] = y;
            auto it = preimage.find(tuple);
            if (it == preimage.end()) return fail(in, "projection has no preimage for a block tuple");
            lift.add(it->second, c);
          }
          vectors.push_back(std::move(lift));
        }
      }
    }
  }
  for (const auto& v : vectors) {
    auto d = dual_forest_derivative(f, v);
    if (!quotient->contains(d)) return fail_at(in, v, "image " + show(d) + " is not in the relation span");
  }
  return std::nullopt;
}

// --- kernel and surjectivity ------------------------------------------------

std::optional<Instance> check_kernel(const Instance& in) {
  Partition p = part(in, in.support);
  Partition r = part(in, in.partition);
  auto space = ShardSpace::of(p);
  auto ids = steinmann_class_ids(*space, r);
  auto table = projection_table(p, r);

  std::map<std::size_t, std::size_t> first;
  RationalMatrix diffs(space->size());
  for (std::size_t x = 0; x < space->size(); ++x) {
    auto [it, inserted] = first.emplace(ids[x], x);
    if (inserted) continue;
    if (table[x] != table[it->second]) {
      return fail(in, "shards " + space->shard(it->second).sign_string() + " and " + space->shard(x).sign_string() +
                          " share a Steinmann class but project differently");
    }
    SparseVector d;
    d.set(x, 1);
    d.set(it->second, -1);
    diffs.add_row(std::move(d));
  }
  // Delta_R as a 0/1 matrix: one row per shard, one column per block tuple.
  std::map<std::vector<std::size_t>, std::size_t> tuple_index;
  for (const auto& t : table) tuple_index.emplace(t, tuple_index.size());
  RationalMatrix delta_t(tuple_index.size());
  for (const auto& t : table) {
    SparseVector row;
    row.set(tuple_index.at(t), 1);
    delta_t.add_row(std::move(row));
  }
  std::size_t kernel_dim = space->size() - rank(delta_t);
  std::size_t span = rank(diffs);
  if (span != kernel_dim) {
    return fail(in, "difference span has rank " + std::to_string(span) + " but ker has dimension " +
                        std::to_string(kernel_dim));
  }
  return std::nullopt;
}

std::optional<Instance> check_surjective(const Instance& in) {
  Partition p = part(in, in.support);
  Partition r = part(in, in.partition);
  auto table = projection_table(p, r);
  std::set<std::vector<std::size_t>> hit(table.begin(), table.end());
  std::size_t total = 1;
  for (Subset t : r.blocks()) total *= ShardSpace::of(restrict_complete(p, t))->size();
  if (hit.size() != total) {
    return fail(in, "image has " + std::to_string(hit.size()) + " of " + std::to_string(total) + " tensor basis elements");
  }
  return std::nullopt;
}

// --- factorization ----------------------------------------------------------

std::vector<SpacePtr> block_spaces(const Partition& support, const Partition& r) {
  std::vector<SpacePtr> out;
  for (Subset t : r.blocks()) out.push_back(ShardSpace::of(restrict_complete(support, t)));
  return out;
}

// Cuts of f lying inside block t, as a forest out of the block's simple support.
LayeredForest block_forest(const LayeredForest& f, Subset t) {
  std::vector<Cut> cuts;
  for (const Cut& c : f.cuts()) {
    if (c.parent.subset_of(t)) cuts.push_back(c);
  }
  return LayeredForest(restrict_complete(f.source(), t), std::move(cuts));
}

std::optional<Instance> check_diagram(const Instance& in) {
  Partition p = part(in, in.support);
  auto f = forest(in, in.forests.at(0).second);
  if (!(f.source() == p)) throw Error("diagram forest must start at the support");
  auto spaces = block_spaces(p, p);
  std::size_t total = 1;
  for (const auto& s : spaces) total *= s->size();

  auto run = [&](const std::vector<Functional>& factors) {
    Functional lhs = forest_derivative(f, product(p, factors));
    std::vector<Functional> derived;
    for (std::size_t j = 0; j < p.size(); ++j) derived.push_back(forest_derivative(block_forest(f, p.block(j)), factors[j]));
    Functional rhs = product(p, f.target(), derived);
    return lhs == rhs;
  };
  auto indicator_tuple = [&](std::size_t flat) {
    std::vector<Functional> factors;
    std::vector<std::size_t> digits(spaces.size());
    for (std::size_t j = spaces.size(); j-- > 0;) {
      digits[j] = flat % spaces[j]->size();
      flat /= spaces[j]->size();
    }
    for (std::size_t j = 0; j < spaces.size(); ++j) factors.push_back(Functional::indicator(spaces[j], digits[j]));
    return factors;
  };

  if (in.index >= 0) {
    if (!run(indicator_tuple(static_cast<std::size_t>(in.index)))) return fail(in, "diagram fails on an indicator tuple");
    return std::nullopt;
  }
  if (in.index == -1 && total <= 64) {
    for (std::size_t flat = 0; flat < total; ++flat) {
      if (!run(indicator_tuple(flat))) {
        Instance out = fail(in, "diagram fails on an indicator tuple");
        out.index = static_cast<long>(flat);
        return out;
      }
    }
  }
  std::vector<Functional> factors;
  for (std::size_t j = 0; j < spaces.size(); ++j) factors.push_back(random_functional(spaces[j], in.seed + j));
  if (!run(factors)) {
    Instance out = fail(in, "diagram fails on random factors");
    out.index = -2;
    return out;
  }
  return std::nullopt;
}

std::vector<Functional> random_differentiable_factors(const Partition& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Functional> out;
  for (Subset t : p.blocks()) {
    auto q = quotient_of(restrict_complete(p, t));
    Functional g(q->space());
    for (const auto& b : q->annihilator()) {
      Rational c = random_rational(rng);
      if (sgn(c) == 0) c = 1;
      for (std::size_t x = 0; x < g.values().size(); ++x) g[x] += c * b[x];
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::optional<Instance> check_roundtrip(const Instance& in) {
  Partition p = part(in, in.support);
  auto factors = random_differentiable_factors(p, in.seed);
  Functional f = product(p, factors);
  Factorization fz = factorize(p, f);
  std::size_t dims = 1;
  for (Subset t : p.blocks()) dims *= quotient_of(restrict_complete(p, t))->dim();
  if (fz.coefficients.size() != dims) return fail(in, "tensor basis has the wrong size");
  if (!fz.factors) return fail(in, "pure product not detected");
  if (!(product(p, *fz.factors) == f)) return fail(in, "recovered factors do not multiply back to f");
  // A sum of two products still expands exactly (factorize verifies the expansion).
  auto more = random_differentiable_factors(p, in.seed + 1);
  Functional g = product(p, more);
  std::vector<Rational> sum(f.values().size());
  for (std::size_t x = 0; x < sum.size(); ++x) sum[x] = f[x] + g[x];
  Functional h(f.space(), std::move(sum));
  Factorization fh = factorize(p, h);
  if (fh.factors && !(product(p, *fh.factors) == h)) return fail(in, "rank-one factors of a sum do not multiply back");
  return std::nullopt;
}

std::optional<Instance> check_rejects(const Instance& in) {
  Partition p = part(in, in.support);
  auto space = ShardSpace::of(p);
  auto ids = steinmann_class_ids(*space, p);
  std::set<std::size_t> seen;
  for (std::size_t x = 0; x < space->size(); ++x) {
    if (seen.insert(ids[x]).second) continue;
    try {
      factorize(p, Functional::indicator(space, x));
    } catch (const NotSemisimple&) {
      return std::nullopt;
    }
    return fail_at(in, ShardVector::basis(space, x), "indicator of a non-singleton class was accepted");
  }
  return std::nullopt;
}

// --- Steinmann quotient -----------------------------------------------------

std::optional<Instance> check_quotient_dim(const Instance& in) {
  std::size_t dim = quotient_dim(ground_of(in.n));
  Integer oracle = zie_dimension(in.n);
  if (Integer(static_cast<unsigned long>(dim)) != oracle) {
    return fail(in, "quotient dimension " + std::to_string(dim) + " vs series " + oracle.get_str());
  }
  return std::nullopt;
}

std::optional<Instance> check_small_egf(const Instance& in) {
  auto space = ShardSpace::of(Partition::one_block(ground_of(in.n)));
  if (Integer(static_cast<unsigned long>(space->size())) != zie_dimension(in.n)) {
    return fail(in, "chamber count differs from the series coefficient");
  }
  return std::nullopt;
}

std::optional<Instance> check_duality_annihilator(const Instance& in) {
  auto q = quotient_of(ground_of(in.n));
  const auto& basis = q->annihilator();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (in.index >= 0 && static_cast<long>(i) != in.index) continue;
    if (!is_semisimply_differentiable(basis[i]) || !q->annihilates(basis[i])) {
      Instance out = fail(in, "annihilator basis functional has a non-semisimple first derivative");
      out.index = static_cast<long>(i);
      return out;
    }
  }
  auto g = random_functional(q->space(), in.seed);
  if (is_semisimply_differentiable(g) != q->annihilates(g)) {
    return fail(in, "random functional: first-derivative test and relation test disagree");
  }
  return std::nullopt;
}

std::optional<Instance> check_main_theorem(const Instance& in) {
  auto f = forest(in, in.forests.at(0).second);
  auto q = quotient_of(f.source());
  const auto& basis = q->annihilator();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (in.index >= 0 && static_cast<long>(i) != in.index) continue;
    if (!is_semisimple(forest_derivative(f, basis[i]))) {
      Instance out = fail(in, "derivative of an annihilator functional is not semisimple");
      out.index = static_cast<long>(i);
      return out;
    }
  }
  return std::nullopt;
}

std::optional<Instance> check_converse(const Instance& in) {
  auto q = quotient_of(ground_of(in.n));
  auto g = random_functional(q->space(), in.seed);
  if (q->annihilates(g)) return fail(in, "random functional happens to satisfy the relations; pick another seed");
  if (is_semisimply_differentiable(g)) return fail(in, "functional outside the annihilator has semisimple first derivatives");
  return std::nullopt;
}

std::optional<Instance> check_delayering(const Instance& in) {
  auto fs = forests_of(in);
  if (fs.size() != 2) throw Error("delayering compares two layerings");
  auto q = quotient_of(fs[0].source());
  const auto& basis = q->annihilator();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (in.index >= 0 && static_cast<long>(i) != in.index) continue;
    if (!(forest_derivative(fs[0], basis[i]) == forest_derivative(fs[1], basis[i]))) {
      Instance out = fail(in, "layerings give different derivatives of an annihilator functional");
      out.index = static_cast<long>(i);
      return out;
    }
  }
  return std::nullopt;
}

std::optional<Instance> check_layering_sensitivity(const Instance& in) {
  auto fs = forests_of(in);
  if (fs.size() != 2) throw Error("layering sensitivity compares two layerings");
  auto target = ShardSpace::of(fs[0].target());
  for (const auto& v : test_vectors(in, target)) {
    auto a = dual_forest_derivative(fs[0], v);
    auto b = dual_forest_derivative(fs[1], v);
    if (a == b) return fail_at(in, v, "layerings give equal dual derivatives");
    if (!quotient_of(a.support())->contains(a - b)) return fail_at(in, v, "difference is not in the relation span");
  }
  auto g = random_functional(ShardSpace::of(fs[0].source()), in.seed);
  if (forest_derivative(fs[0], g) == forest_derivative(fs[1], g)) {
    return fail(in, "random functional does not separate the layerings");
  }
  return std::nullopt;
}

using Checker = std::function<std::optional<Instance>(const Instance&)>;

const std::map<std::string, Checker>& checkers() {
  static const std::map<std::string, Checker> table = {
      {"lie.antisymmetry", [](const Instance& i) { return check_signed_sum(i, false); }},
      {"lie.jacobi", [](const Instance& i) { return check_signed_sum(i, false); }},
      {"lie.prelie", check_prelie},
      {"calculus.two_path", check_two_path},
      {"calculus.duality", check_duality},
      {"module.unit", check_unit},
      {"module.functoriality", check_functoriality},
      {"module.layering", [](const Instance& i) { return check_signed_sum(i, true); }},
      {"module.steinmann_classes", check_class_differences},
      {"module.block_relations", check_block_relations},
      {"kernel.generates", check_kernel},
      {"kernel.surjective", check_surjective},
      {"factorization.diagram", check_diagram},
      {"factorization.roundtrip", check_roundtrip},
      {"factorization.rejects", check_rejects},
      {"steinmann.quotient_dim", check_quotient_dim},
      {"steinmann.small_series", check_small_egf},
      {"steinmann.duality", check_duality_annihilator},
      {"steinmann.main_theorem", check_main_theorem},
      {"steinmann.converse", check_converse},
      {"steinmann.delayering", check_delayering},
      {"steinmann.layering_sensitivity", check_layering_sensitivity},
  };
  return table;
}

}  // namespace

std::optional<Instance> check(const Instance& instance) {
  auto it = checkers().find(instance.claim);
  if (it == checkers().end()) throw Error("unknown claim '" + instance.claim + "'");
  return it->second(instance);
}

bool replay(const Instance& counterexample) { return check(counterexample).has_value(); }

bool AuditReport::pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const AuditEntry& e) { return e.pass; });
}

void AuditReport::merge(AuditReport other) {
  for (auto& e : other.entries) entries.push_back(std::move(e));
}

// ---------------------------------------------------------------------------
// Instance generators

namespace {

std::vector<Cut> concat(std::initializer_list<const std::vector<Cut>*> parts) {
  std::vector<Cut> out;
  for (const auto* p : parts) out.insert(out.end(), p->begin(), p->end());
  return out;
}

// Every cut sequence inside the block s, starting from s itself (identity included).
std::vector<std::vector<Cut>> subtree_cuts(Subset s) {
  std::vector<std::vector<Cut>> out;
  std::vector<Cut> cuts;
  std::function<void(std::vector<Subset>)> grow = [&](std::vector<Subset> blocks) {
    out.push_back(cuts);
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
      Subset b = blocks[bi];
      if (b.count() < 2) continue;
      std::vector<Subset> lefts;
      for (Mask m = (b.bits - 1) & b.bits; m != 0; m = (m - 1) & b.bits) lefts.emplace_back(m);
      std::sort(lefts.begin(), lefts.end());
      for (Subset l : lefts) {
        auto next = blocks;
        next[bi] = l;
        next.push_back(b - l);
        cuts.push_back(Cut{b, l});
        grow(next);
        cuts.pop_back();
      }
    }
  };
  grow({s});
  return out;
}

std::vector<Subset> proper_submasks(Subset b) {
  std::vector<Subset> out;
  for (Mask m = (b.bits - 1) & b.bits; m != 0; m = (m - 1) & b.bits) out.emplace_back(m);
  std::sort(out.begin(), out.end());
  return out;
}

Instance make(const std::string& claim, int n) {
  Instance in;
  in.claim = claim;
  in.n = n;
  return in;
}

std::string fmt(const Partition& p, const std::vector<Cut>& cuts) { return format_forest(LayeredForest(p, cuts)); }

std::vector<Instance> antisymmetry_instances(int n) {
  std::vector<Instance> out;
  for (const Partition& p : all_partitions(ground_of(n))) {
    for (Subset b : p.blocks()) {
      if (b.count() < 2) continue;
      for (Subset s : proper_submasks(b)) {
        for (const auto& t1 : subtree_cuts(s)) {
          for (const auto& t2 : subtree_cuts(b - s)) {
            std::vector<Cut> root{Cut{b, s}};
            std::vector<Cut> flipped{Cut{b, b - s}};
            Instance in = make("lie.antisymmetry", n);
            in.forests = {{1, fmt(p, concat({&root, &t1, &t2}))}, {1, fmt(p, concat({&flipped, &t1, &t2}))}};
            out.push_back(std::move(in));
          }
        }
      }
    }
  }
  return out;
}

// Ordered triples (S,T,U) of disjoint nonempty sets covering b.
std::vector<std::array<Subset, 3>> ordered_triples(Subset b) {
  std::vector<std::array<Subset, 3>> out;
  for (Subset s : proper_submasks(b)) {
    Subset rest = b - s;
    if (rest.count() < 2) continue;
    for (Subset t : proper_submasks(rest)) out.push_back({s, t, rest - t});
  }
  return out;
}

std::vector<Instance> jacobi_instances(int n) {
  std::vector<Instance> out;
  for (const Partition& p : all_partitions(ground_of(n))) {
    for (Subset b : p.blocks()) {
      if (b.count() < 3) continue;
      for (const auto& [s, t, u] : ordered_triples(b)) {
        for (const auto& t1 : subtree_cuts(s)) {
          for (const auto& t2 : subtree_cuts(t)) {
            for (const auto& t3 : subtree_cuts(u)) {
              // [[x,y],rest] with the subtrees' cuts after the two outer layers.
              auto term = [&](Subset x, Subset y) {
                std::vector<Cut> head{Cut{b, x | y}, Cut{x | y, x}};
                return fmt(p, concat({&head, &t1, &t2, &t3}));
              };
              Instance in = make("lie.jacobi", n);
              in.forests = {{1, term(s, t)}, {1, term(u, s)}, {1, term(t, u)}};
              out.push_back(std::move(in));
            }
          }
        }
      }
    }
  }
  return out;
}

std::vector<Instance> prelie_instances(int n) {
  std::vector<Instance> out;
  for (const Partition& p : all_partitions(ground_of(n))) {
    for (Subset b : p.blocks()) {
      if (b.count() < 3) continue;
      for (const auto& [a, bb, c] : ordered_triples(b)) {
        Instance left = make("lie.prelie", n);
        left.forests = {{1, fmt(p, {Cut{b, a | bb}, Cut{a | bb, a}})}, {1, fmt(p, {Cut{b, a | c}, Cut{a | c, a}})}};
        out.push_back(std::move(left));
        Instance right = make("lie.prelie", n);
        right.forests = {{1, fmt(p, {Cut{b, bb}, Cut{a | c, a}})}, {1, fmt(p, {Cut{b, a}, Cut{bb | c, bb}})}};
        out.push_back(std::move(right));
      }
    }
  }
  return out;
}

std::vector<Instance> forest_instances(const std::string& claim, int n, std::size_t max_cuts, std::uint64_t seed) {
  std::vector<Instance> out;
  for (const Partition& p : all_partitions(ground_of(n))) {
    for (const auto& f : all_forests(p, max_cuts)) {
      Instance in = make(claim, n);
      in.forests = {{1, format_forest(f)}};
      in.support = p.to_string();
      in.seed = seed;
      out.push_back(std::move(in));
    }
  }
  return out;
}

std::vector<Instance> one_block_forest_instances(const std::string& claim, int n, std::size_t max_cuts) {
  std::vector<Instance> out;
  for (const auto& f : all_forests(Partition::one_block(ground_of(n)), max_cuts)) {
    Instance in = make(claim, n);
    in.forests = {{1, format_forest(f)}};
    in.support = f.target().to_string();
    out.push_back(std::move(in));
  }
  return out;
}

std::vector<Instance> functoriality_instances(int n, std::size_t max_cuts, std::uint64_t seed) {
  std::vector<Instance> out;
  for (const Partition& p : all_partitions(ground_of(n))) {
    for (const auto& f : all_forests(p, max_cuts)) {
      for (std::size_t k = 0; k <= f.size(); ++k) {
        std::vector<Cut> head(f.cuts().begin(), f.cuts().begin() + static_cast<long>(k));
        std::vector<Cut> tail(f.cuts().begin() + static_cast<long>(k), f.cuts().end());
        LayeredForest f1(p, head);
        LayeredForest f2(f1.target(), tail);
        Instance in = make("module.functoriality", n);
        in.forests = {{1, format_forest(f1)}, {1, format_forest(f2)}};
        in.seed = seed;
        out.push_back(std::move(in));
      }
    }
  }
  return out;
}

// Pairs (F, F') of distinct layerings of one forest out of (I); F is the first layering.
std::vector<std::pair<LayeredForest, LayeredForest>> layering_pairs(int n, std::size_t max_cuts) {
  std::vector<std::pair<LayeredForest, LayeredForest>> out;
  for (const auto& f : all_forests(Partition::one_block(ground_of(n)), max_cuts)) {
    auto ls = layerings(f);
    if (ls.size() < 2 || !(ls.front() == f)) continue;
    for (std::size_t i = 1; i < ls.size(); ++i) out.emplace_back(f, ls[i]);
  }
  return out;
}

std::vector<Instance> sample(std::vector<Instance> all, int n, std::size_t k, std::uint64_t seed, bool& sampled) {
  sampled = false;
  if (n < 5 || all.size() <= k) return all;
  std::vector<std::size_t> idx(all.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng() % (idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  std::vector<Instance> out;
  for (std::size_t i : idx) out.push_back(std::move(all[i]));
  sampled = true;
  return out;
}

AuditEntry run(const std::string& claim, const std::string& statement, int n, const std::vector<Instance>& instances,
               bool sampled) {
  AuditEntry e;
  e.claim = claim;
  e.statement = statement;
  e.n = n;
  e.sampled = sampled;
  for (const auto& in : instances) {
    ++e.instances;
    if (auto cx = check(in)) {
      e.pass = false;
      e.counterexample = std::move(cx);
      break;
    }
  }
  return e;
}

AuditEntry run_sampled(const std::string& claim, const std::string& statement, int n, std::vector<Instance> all,
                       std::size_t samples, std::uint64_t seed) {
  bool sampled = false;
  auto chosen = sample(std::move(all), n, samples, seed, sampled);
  return run(claim, statement, n, chosen, sampled);
}

void require_n(int n, int lo, int hi) {
  if (n < lo || n > hi) {
    throw OutOfRange("suite supports " + std::to_string(lo) + " <= n <= " + std::to_string(hi));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Suites

AuditReport verify_lie_axioms(int n, std::uint64_t seed, std::size_t samples) {
  require_n(n, 1, 5);
  AuditReport r;
  r.entries.push_back(run_sampled("lie.antisymmetry", "dual derivatives of [T1,T2] and [T2,T1] sum to zero", n,
                                  antisymmetry_instances(n), samples, seed));
  r.entries.push_back(run_sampled("lie.jacobi", "cyclic sum of dual derivatives of [[T1,T2],T3] vanishes", n,
                                  jacobi_instances(n), samples, seed + 1));
  r.entries.push_back(run_sampled("lie.prelie", "X^[[A,B],C] = X^[[A,C],B] and X^[B,[A,C]] = X^[A,[B,C]]", n,
                                  prelie_instances(n), samples, seed + 2));
  return r;
}

AuditReport verify_calculus(int n, std::uint64_t seed, std::size_t samples) {
  require_n(n, 1, 5);
  AuditReport r;
  r.entries.push_back(run_sampled("calculus.two_path",
                                  "cut-by-cut dual derivative equals the signed sum over the antisymmetrization", n,
                                  forest_instances("calculus.two_path", n, 3, seed), samples, seed));
  r.entries.push_back(run_sampled("calculus.duality", "forest derivative equals the pairing with dual derivatives", n,
                                  forest_instances("calculus.duality", n, 3, seed), samples, seed + 1));
  return r;
}

AuditReport verify_module_axioms(int n, std::uint64_t seed, std::size_t samples) {
  require_n(n, 1, 5);
  AuditReport r;
  std::vector<Instance> units;
  for (const Partition& p : all_partitions(ground_of(n))) {
    Instance in = make("module.unit", n);
    in.support = p.to_string();
    in.seed = seed;
    units.push_back(std::move(in));
  }
  r.entries.push_back(run("module.unit", "stick forests act as the identity", n, units, false));
  r.entries.push_back(run_sampled("module.functoriality", "dual derivative of a composite is the composite of dual derivatives",
                                  n, functoriality_instances(n, 3, seed), samples, seed));

  std::vector<Instance> lay;
  for (const auto& [f, g] : layering_pairs(n, static_cast<std::size_t>(n - 1))) {
    Instance in = make("module.layering", n);
    in.forests = {{1, format_forest(f)}, {-1, format_forest(g)}};
    lay.push_back(std::move(in));
  }
  r.entries.push_back(run_sampled("module.layering", "layerings of one forest differ by Steinmann relations", n, lay,
                                  samples, seed + 1));
  r.entries.push_back(run_sampled("module.steinmann_classes",
                                  "dual derivatives map Steinmann-adjacent differences into the relation span", n,
                                  one_block_forest_instances("module.steinmann_classes", n, 3), samples, seed + 2));
  std::vector<Instance> blocks;
  for (auto& in : one_block_forest_instances("module.block_relations", n, 3)) {
    Partition q = Partition::parse(in.support, ground_of(n));
    bool big = std::any_of(q.blocks().begin(), q.blocks().end(), [](Subset b) { return b.count() >= 4; });
    if (big) blocks.push_back(std::move(in));
  }
  r.entries.push_back(run_sampled("module.block_relations",
                                  "dual derivatives map lifted block relations into the relation span", n, blocks,
                                  samples, seed + 3));
  return r;
}

AuditReport verify_kernel(int n) {
  require_n(n, 1, 5);
  std::vector<Instance> gen, surj;
  auto parts = all_partitions(ground_of(n));
  for (const Partition& p : parts) {
    for (const Partition& q : parts) {
      if (!is_finer(p, q)) continue;
      Instance in = make("kernel.generates", n);
      in.support = p.to_string();
      in.partition = q.to_string();
      gen.push_back(in);
      in.claim = "kernel.surjective";
      surj.push_back(std::move(in));
    }
  }
  AuditReport r;
  r.entries.push_back(run("kernel.generates", "Steinmann R-adjacency differences span ker Delta_R", n, gen, false));
  r.entries.push_back(run("kernel.surjective", "Delta_R hits every tensor basis element", n, surj, false));
  return r;
}

AuditReport verify_factorization(int n, std::uint64_t seed, std::size_t samples) {
  require_n(n, 1, 5);
  AuditReport r;
  r.entries.push_back(run_sampled("factorization.diagram", "derivative of a product is the product of block derivatives",
                                  n, forest_instances("factorization.diagram", n, 3, seed), samples, seed));
  std::vector<Instance> round, rej;
  for (const Partition& p : all_partitions(ground_of(n))) {
    Instance in = make("factorization.roundtrip", n);
    in.support = p.to_string();
    in.seed = seed;
    round.push_back(in);
    in.claim = "factorization.rejects";
    rej.push_back(std::move(in));
  }
  r.entries.push_back(run("factorization.roundtrip", "factorize inverts product on semisimply differentiable factors", n,
                          round, false));
  r.entries.push_back(run("factorization.rejects", "factorize rejects functionals that split a Steinmann class", n, rej,
                          false));
  return r;
}

AuditReport verify_steinmann(int n, std::uint64_t seed, std::size_t samples) {
  require_n(n, 1, 6);
  AuditReport r;
  Instance base = make("", n);
  base.seed = seed;
  auto single = [&](const std::string& claim) {
    Instance in = base;
    in.claim = claim;
    return std::vector<Instance>{in};
  };
  r.entries.push_back(run("steinmann.quotient_dim", "chambers minus relation rank equals n! [x^n] -log(2-e^x)", n,
                          single("steinmann.quotient_dim"), false));
  if (n <= 3) {
    r.entries.push_back(run("steinmann.small_series", "below four elements the series counts chambers", n,
                            single("steinmann.small_series"), false));
  }
  if (n > 5) return r;
  r.entries.push_back(run("steinmann.duality",
                          "first derivatives are semisimple exactly when the relations are annihilated", n,
                          single("steinmann.duality"), false));
  std::size_t cuts = std::min<std::size_t>(3, static_cast<std::size_t>(n - 1));
  r.entries.push_back(run_sampled("steinmann.main_theorem",
                                  "every forest derivative of an annihilator functional is semisimple", n,
                                  one_block_forest_instances("steinmann.main_theorem", n, cuts), samples, seed));
  if (n >= 4) {
    r.entries.push_back(run("steinmann.converse", "a functional outside the annihilator has a non-semisimple first derivative",
                            n, single("steinmann.converse"), false));
  }
  std::vector<Instance> delay;
  for (const auto& [f, g] : layering_pairs(n, cuts)) {
    Instance in = make("steinmann.delayering", n);
    in.forests = {{1, format_forest(f)}, {1, format_forest(g)}};
    delay.push_back(std::move(in));
  }
  r.entries.push_back(run_sampled("steinmann.delayering",
                                  "annihilator functionals have layering-independent derivatives", n, delay, samples,
                                  seed + 1));
  if (n == 4) {
    Instance in = make("steinmann.layering_sensitivity", n);
    in.forests = {{1, "[[1,2],[3,4]]@L"}, {1, "[[1,2],[3,4]]@R"}};
    in.seed = seed;
    r.entries.push_back(run("steinmann.layering_sensitivity",
                            "the two layerings of [[1,2],[3,4]] differ, by an element of the relation span", n, {in},
                            false));
  }
  return r;
}

AuditReport full_audit(int n, std::uint64_t seed, std::size_t samples) {
  AuditReport r = verify_steinmann(n, seed, samples);
  r.merge(verify_lie_axioms(n, seed, samples));
  r.merge(verify_calculus(n, seed, samples));
  r.merge(verify_module_axioms(n, seed, samples));
  r.merge(verify_kernel(n));
  r.merge(verify_factorization(n, seed, samples));
  std::stable_sort(r.entries.begin(), r.entries.end(),
                   [](const AuditEntry& a, const AuditEntry& b) { return a.claim < b.claim; });
  return r;
}

AuditReport run_suite(const std::string& name, int n, std::uint64_t seed, std::size_t samples) {
  if (name == "lie") return verify_lie_axioms(n, seed, samples);
  if (name == "calculus") return verify_calculus(n, seed, samples);
  if (name == "module") return verify_module_axioms(n, seed, samples);
  if (name == "kernel") return verify_kernel(n);
  if (name == "factorization") return verify_factorization(n, seed, samples);
  if (name == "steinmann") return verify_steinmann(n, seed, samples);
  if (name == "all") return full_audit(n, seed, samples);
  throw Error("unknown suite '" + name + "'");
}

}  // namespace adjbraid
