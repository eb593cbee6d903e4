#include "adjbraid/steinmann.hpp"

#include <map>
#include <mutex>
#include <set>
#include <tuple>

#include "adjbraid/errors.hpp"

namespace adjbraid {

RationalMatrix RelationSet::matrix() const { return RationalMatrix(space->size(), relations); }

namespace {

// The non-singleton block of a simple support, or empty when there is none.
Subset simple_block(const Partition& simple) {
  Subset found;
  for (Subset b : simple.blocks()) {
    if (b.count() < 2) continue;
    if (!found.empty()) throw Error("support " + simple.to_string() + " is not simple");
    found = b;
  }
  return found;
}

}  // namespace

RelationSet steinmann_relations(const GroundPtr& ground) {
  return steinmann_relations(Partition::one_block(ground));
}

RelationSet steinmann_relations(const Partition& simple) {
  const Subset t = simple_block(simple);
  RelationSet out;
  out.space = ShardSpace::of(simple);
  const ShardSpace& top = *out.space;
  std::set<std::map<std::size_t, Rational>> seen;
  if (t.count() < 4) return out;

  std::vector<Subset> lefts;
  for (Mask s = (t.bits - 1) & t.bits; s != 0; s = (s - 1) & t.bits) lefts.emplace_back(s);
  std::sort(lefts.begin(), lefts.end());
  for (Subset left : lefts) {
    if (left.count() < 2 || (t - left).count() < 2) continue;
    const Cut v{t, left};
    const Cut vbar = v.reversed();
    const Partition q = simple.split(t, left);
    auto fine = ShardSpace::of(q);
    const KeySet& keys = fine->keys();
    std::vector<std::size_t> walls;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (!is_r_semisimple(q, q, keys.key(i))) walls.push_back(i);
    }
    for (std::size_t a = 0; a < fine->size(); ++a) {
      for (std::size_t i : walls) {
        auto b = fine->find(fine->signs(a) ^ keys.bit(i));
        if (!b || *b < a) continue;
        SparseVector rel;
        rel.add(arrow_index(*fine, top, v, a), 1);
        rel.add(arrow_index(*fine, top, vbar, a), -1);
        rel.add(arrow_index(*fine, top, vbar, *b), 1);
        rel.add(arrow_index(*fine, top, v, *b), -1);
        if (rel.empty()) continue;
        if (sgn(rel.entries().begin()->second) < 0) rel *= Rational(-1);
        if (!seen.insert(rel.entries()).second) continue;
        out.relations.push_back(std::move(rel));
        out.sources.push_back(RelationSource{v, fine->signs(a), fine->signs(*b), keys.key(i)});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// QuotientSpace

QuotientSpace::QuotientSpace(RelationSet relations)
    : relations_(std::move(relations)), echelon_(row_echelon(relations_.matrix())) {}

ShardVector QuotientSpace::normal_form(const ShardVector& v) const {
  if (!(v.support() == space()->support())) throw SupportMismatch("vector is not over the quotient's support");
  return ShardVector(space(), echelon_.reduce(v.coeffs()));
}

bool QuotientSpace::contains(const ShardVector& v) const { return normal_form(v).is_zero(); }

const std::vector<Functional>& QuotientSpace::annihilator() const {
  std::call_once(annihilator_once_, [this] {
    for (const SparseVector& k : kernel_basis(relations_.matrix())) {
      std::vector<Rational> values(space()->size(), 0);
      for (const auto& [i, c] : k.entries()) values[i] = c;
      annihilator_.emplace_back(space(), std::move(values));
    }
  });
  return annihilator_;
}

bool QuotientSpace::annihilates(const Functional& f) const {
  if (!(f.support() == space()->support())) throw SupportMismatch("functional is not over the quotient's support");
  for (const SparseVector& r : relations_.relations) {
    if (sgn(r.dot(f.values())) != 0) return false;
  }
  return true;
}

std::shared_ptr<const QuotientSpace> quotient_of(const Partition& simple) {
  using Key = std::pair<std::vector<std::string>, std::vector<Mask>>;
  static std::mutex mu;
  static std::map<Key, std::shared_ptr<const QuotientSpace>> cache;
  std::vector<Mask> blocks;
  for (Subset b : simple.blocks()) blocks.push_back(b.bits);
  Key key{simple.ground().labels(), std::move(blocks)};
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto q = std::make_shared<const QuotientSpace>(steinmann_relations(simple));
  std::lock_guard lock(mu);
  return cache.emplace(std::move(key), q).first->second;
}

std::shared_ptr<const QuotientSpace> quotient_of(const GroundPtr& ground) {
  return quotient_of(Partition::one_block(ground));
}

std::size_t quotient_dim(const GroundPtr& ground) { return quotient_of(ground)->dim(); }

// ---------------------------------------------------------------------------
// Semisimplicity

namespace {

std::shared_ptr<const std::vector<std::size_t>> cached_class_ids(const SpacePtr& space, const Partition& r) {
  using Key = std::tuple<std::vector<std::string>, std::vector<Mask>, std::vector<Mask>>;
  static std::mutex mu;
  static std::map<Key, std::shared_ptr<const std::vector<std::size_t>>> cache;
  std::vector<Mask> pb, rb;
  for (Subset b : space->support().blocks()) pb.push_back(b.bits);
  for (Subset b : r.blocks()) rb.push_back(b.bits);
  Key key{space->support().ground().labels(), std::move(pb), std::move(rb)};
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto ids = std::make_shared<const std::vector<std::size_t>>(steinmann_class_ids(*space, r));
  std::lock_guard lock(mu);
  return cache.emplace(std::move(key), ids).first->second;
}

}  // namespace

std::optional<std::pair<std::size_t, std::size_t>> semisimplicity_witness(const Functional& f, const Partition& r) {
  const ShardSpace& space = *f.space();
  const auto& ids = *cached_class_ids(f.space(), r);
  std::map<std::size_t, std::size_t> first;
  for (std::size_t a = 0; a < space.size(); ++a) {
    auto [it, inserted] = first.emplace(ids[a], a);
    if (!inserted && f[it->second] != f[a]) return std::make_pair(it->second, a);
  }
  return std::nullopt;
}

bool is_semisimple(const Functional& f, const Partition& r) { return !semisimplicity_witness(f, r); }

bool is_semisimple(const Functional& f) { return is_semisimple(f, f.support()); }

bool is_semisimply_differentiable(const Functional& f) {
  const Partition& p = f.support();
  const Subset t = simple_block(p);
  for (Mask s = (t.bits - 1) & t.bits; s != 0; s = (s - 1) & t.bits) {
    LayeredForest v(p, {Cut{t, Subset(s)}});
    if (!is_semisimple(forest_derivative(v, f))) return false;
  }
  return true;
}

bool is_semisimply_differentiable_exhaustive(const Functional& f, std::size_t max_cuts) {
  for (const LayeredForest& forest : all_forests(f.support(), max_cuts)) {
    if (!is_semisimple(forest_derivative(forest, f))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Products

Partition simple_support(const Partition& p, Subset block) {
  if (!p.has_block(block)) throw BoundaryMismatch("not a block of " + p.to_string());
  return restrict_complete(p, block);
}

std::vector<std::vector<std::size_t>> projection_table(const Partition& p, const Partition& r) {
  auto space = ShardSpace::of(p);
  std::vector<SpacePtr> blocks;
  for (Subset t : r.blocks()) blocks.push_back(ShardSpace::of(restrict_complete(p, t)));
  std::vector<std::vector<std::size_t>> out(space->size());
  for (std::size_t x = 0; x < space->size(); ++x) {
    auto parts = project(r, space->shard(x));
    out[x].reserve(parts.size());
    for (std::size_t j = 0; j < parts.size(); ++j) out[x].push_back(blocks[j]->index_of(parts[j]));
  }
  return out;
}

Functional product(const Partition& r, const Partition& support, const std::vector<Functional>& factors) {
  if (factors.size() != r.size()) throw ArityMismatch("one factor per block required");
  if (!is_finer(support, r)) throw NotFiner("support is not finer than R");
  for (std::size_t j = 0; j < r.size(); ++j) {
    if (!(factors[j].support() == restrict_complete(support, r.block(j)))) {
      throw SupportMismatch("factor " + std::to_string(j) + " is over " + factors[j].support().to_string());
    }
  }
  auto table = projection_table(support, r);
  auto space = ShardSpace::of(support);
  std::vector<Rational> values(space->size());
  for (std::size_t x = 0; x < space->size(); ++x) {
    Rational v = 1;
    for (std::size_t j = 0; j < factors.size(); ++j) v *= factors[j][table[x][j]];
    values[x] = v;
  }
  return Functional(space, std::move(values));
}

Functional product(const Partition& p, const std::vector<Functional>& factors) { return product(p, p, factors); }

// ---------------------------------------------------------------------------
// Factorization

Factorization factorize(const Partition& p, const Functional& f) {
  if (!(f.support() == p)) throw SupportMismatch("functional is not over " + p.to_string());
  if (auto w = semisimplicity_witness(f, p)) {
    throw NotSemisimple("differs on Steinmann-equivalent shards " + f.space()->shard(w->first).sign_string() +
                        " and " + f.space()->shard(w->second).sign_string());
  }
  const std::size_t k = p.size();
  Factorization out;
  std::vector<std::vector<std::size_t>> frees;
  for (Subset t : p.blocks()) {
    auto q = quotient_of(restrict_complete(p, t));
    out.bases.push_back(q->annihilator());
    frees.push_back(q->free_columns());
  }

  auto table = projection_table(p, p);
  std::map<std::vector<std::size_t>, std::size_t> preimage;
  for (std::size_t x = 0; x < table.size(); ++x) preimage.emplace(table[x], x);

  // Row-major walk over the tensor basis.
  std::size_t total = 1;
  for (const auto& fr : frees) total *= fr.size();
  out.coefficients.assign(total, 0);
  std::vector<std::size_t> digits(k, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::vector<std::size_t> tuple(k);
    for (std::size_t j = 0; j < k; ++j) tuple[j] = frees[j][digits[j]];
    auto it = preimage.find(tuple);
    if (it == preimage.end()) throw InvariantViolation("projection is not surjective onto a basis tuple");
    out.coefficients[flat] = f[it->second];
    for (std::size_t j = k; j-- > 0;) {
      if (++digits[j] < frees[j].size()) break;
      digits[j] = 0;
    }
  }

  // The expansion must reproduce f on every shard.
  for (std::size_t x = 0; x < table.size(); ++x) {
    Rational sum = 0;
    std::fill(digits.begin(), digits.end(), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
      if (sgn(out.coefficients[flat]) != 0) {
        Rational term = out.coefficients[flat];
        for (std::size_t j = 0; j < k && sgn(term) != 0; ++j) term *= out.bases[j][digits[j]][table[x][j]];
        sum += term;
      }
      for (std::size_t j = k; j-- > 0;) {
        if (++digits[j] < frees[j].size()) break;
        digits[j] = 0;
      }
    }
    if (sum != f[x]) {
      throw NotSemisimple("not semisimply differentiable: expansion fails at " + f.space()->shard(x).sign_string());
    }
  }

  // Rank-one test anchored at the first nonzero coefficient.
  auto nz = std::find_if(out.coefficients.begin(), out.coefficients.end(), [](const Rational& c) { return sgn(c) != 0; });
  if (nz == out.coefficients.end()) return out;
  std::vector<std::size_t> anchor(k);
  {
    std::size_t flat = static_cast<std::size_t>(nz - out.coefficients.begin());
    for (std::size_t j = k; j-- > 0;) {
      anchor[j] = flat % frees[j].size();
      flat /= frees[j].size();
    }
  }
  auto index = [&](const std::vector<std::size_t>& d) {
    std::size_t flat = 0;
    for (std::size_t j = 0; j < k; ++j) flat = flat * frees[j].size() + d[j];
    return flat;
  };
  const Rational pivot = *nz;
  std::vector<std::vector<Rational>> u(k);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t c = 0; c < frees[j].size(); ++c) {
      auto d = anchor;
      d[j] = c;
      Rational v = out.coefficients[index(d)];
      u[j].push_back(j == 0 ? v : Rational(v / pivot));
    }
  }
  std::fill(digits.begin(), digits.end(), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    Rational expect = 1;
    for (std::size_t j = 0; j < k; ++j) expect *= u[j][digits[j]];
    if (expect != out.coefficients[flat]) return out;
    for (std::size_t j = k; j-- > 0;) {
      if (++digits[j] < frees[j].size()) break;
      digits[j] = 0;
    }
  }
  std::vector<Functional> factors;
  for (std::size_t j = 0; j < k; ++j) {
    Functional g(out.bases[j].front().space());
    for (std::size_t c = 0; c < u[j].size(); ++c) {
      if (sgn(u[j][c]) == 0) continue;
      for (std::size_t x = 0; x < g.values().size(); ++x) g[x] += u[j][c] * out.bases[j][c][x];
    }
    factors.push_back(std::move(g));
  }
  out.factors = std::move(factors);
  return out;
}

}  // namespace adjbraid
