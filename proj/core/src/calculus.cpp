#include "adjbraid/calculus.hpp"

#include <map>
#include <mutex>
#include <tuple>

#include "adjbraid/errors.hpp"

namespace adjbraid {

// ---------------------------------------------------------------------------
// ShardVector / Functional

ShardVector::ShardVector(SpacePtr space, SparseVector coeffs) : space_(std::move(space)), coeffs_(std::move(coeffs)) {
  if (!coeffs_.empty() && coeffs_.entries().rbegin()->first >= space_->size()) {
    throw OutOfRange("shard vector index outside its space");
  }
}

ShardVector ShardVector::basis(SpacePtr space, std::size_t i) {
  if (i >= space->size()) throw OutOfRange("shard index outside its space");
  SparseVector c;
  c.set(i, 1);
  return ShardVector(std::move(space), std::move(c));
}

ShardVector ShardVector::of(const Shard& x) {
  auto space = ShardSpace::of(x.support());
  std::size_t i = space->index_of(x);
  return basis(std::move(space), i);
}

namespace {
void require_same(const SpacePtr& a, const SpacePtr& b) {
  if (a != b && !(a->support() == b->support())) throw SupportMismatch("vectors over different supports");
}
}  // namespace

ShardVector& ShardVector::operator+=(const ShardVector& o) {
  require_same(space_, o.space_);
  coeffs_ += o.coeffs_;
  return *this;
}

ShardVector& ShardVector::operator-=(const ShardVector& o) {
  require_same(space_, o.space_);
  coeffs_ -= o.coeffs_;
  return *this;
}

ShardVector& ShardVector::operator*=(const Rational& s) {
  coeffs_ *= s;
  return *this;
}

bool operator==(const ShardVector& a, const ShardVector& b) {
  return a.support() == b.support() && a.coeffs_ == b.coeffs_;
}

Functional::Functional(SpacePtr space) : space_(std::move(space)), values_(space_->size(), 0) {}

Functional::Functional(SpacePtr space, std::vector<Rational> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (values_.size() != space_->size()) throw ArityMismatch("functional needs one value per shard");
}

Functional Functional::indicator(SpacePtr space, std::size_t i) {
  Functional f(std::move(space));
  if (i >= f.values_.size()) throw OutOfRange("shard index outside its space");
  f.values_[i] = 1;
  return f;
}

Functional Functional::constant(SpacePtr space, const Rational& c) {
  std::vector<Rational> v(space->size(), c);
  return Functional(std::move(space), std::move(v));
}

Rational Functional::operator()(const ShardVector& v) const {
  require_same(space_, v.space());
  Rational sum = 0;
  for (const auto& [i, c] : v.coeffs().entries()) sum += c * values_[i];
  return sum;
}

bool operator==(const Functional& a, const Functional& b) {
  return a.support() == b.support() && a.values_ == b.values_;
}

// ---------------------------------------------------------------------------
// Arrows

namespace {

// How each key of the coarse support is signed in X^V.
struct ArrowPlan {
  struct Entry {
    int fixed = 0;          // +1 / -1 for the class of C / D, 0 when inherited
    std::size_t source = 0;  // key index in the fine support
    bool negated = false;
  };
  std::vector<Entry> entries;
  std::shared_ptr<const KeySet> coarse;
  std::shared_ptr<const KeySet> fine;

  SignBits apply(SignBits x) const {
    SignBits out = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const Entry& e = entries[i];
      bool neg = e.fixed != 0 ? e.fixed < 0 : (fine->negative(x, e.source) != e.negated);
      if (neg) out |= coarse->bit(i);
    }
    return out;
  }
};

std::shared_ptr<const ArrowPlan> build_plan(const Partition& coarse, const Partition& fine, const Cut& v) {
  auto plan = std::make_shared<ArrowPlan>();
  plan->coarse = keys_of(coarse);
  plan->fine = keys_of(fine);
  for (Subset k : plan->coarse->keys()) {
    ArrowPlan::Entry e;
    if (k == v.left) {
      e.fixed = 1;
    } else if (k == v.right()) {
      e.fixed = -1;
    } else {
      auto loc = plan->fine->locate(k);
      if (!loc) throw InvariantViolation("arrow: key vanishes on the finer support");
      e.source = loc->first;
      e.negated = loc->second;
    }
    plan->entries.push_back(e);
  }
  return plan;
}

std::shared_ptr<const ArrowPlan> plan_for(const Partition& coarse, const Cut& v) {
  using Key = std::tuple<std::vector<std::string>, std::vector<Mask>, Mask, Mask>;
  static std::mutex mu;
  static std::map<Key, std::shared_ptr<const ArrowPlan>> cache;

  if (!coarse.has_block(v.parent) || v.left.empty() || !v.left.subset_of(v.parent) || v.left == v.parent) {
    throw BoundaryMismatch("cut does not split a block of " + coarse.to_string());
  }
  std::vector<Mask> blocks;
  for (Subset b : coarse.blocks()) blocks.push_back(b.bits);
  Key key{coarse.ground().labels(), std::move(blocks), v.parent.bits, v.left.bits};
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto plan = build_plan(coarse, coarse.split(v.parent, v.left), v);
  std::lock_guard lock(mu);
  return cache.emplace(std::move(key), plan).first->second;
}

}  // namespace

Shard arrow(const Shard& x, const Partition& source, const Cut& v) {
  auto plan = plan_for(source, v);
  if (!(source.split(v.parent, v.left) == x.support())) {
    throw BoundaryMismatch("shard support " + x.support().to_string() + " is not the target of the cut");
  }
  return Shard(source, plan->apply(x.signs()));
}

std::size_t arrow_index(const ShardSpace& from, const ShardSpace& to, const Cut& v, std::size_t x) {
  auto plan = plan_for(to.support(), v);
  SignBits s = plan->apply(from.signs(x));
  auto i = to.find(s);
  if (!i) throw InvariantViolation("arrow produced an unrealizable sign vector over " + to.support().to_string());
  return *i;
}

Shard arrow(const Shard& x, const LayeredForest& f) {
  if (!(x.support() == f.target())) throw BoundaryMismatch("shard support is not the forest target");
  Shard cur = x;
  for (std::size_t k = f.size(); k-- > 0;) cur = arrow(cur, f.stage(k), f.cuts()[k]);
  return cur;
}

// ---------------------------------------------------------------------------
// Derivatives

namespace {

std::vector<SpacePtr> stage_spaces(const LayeredForest& f) {
  std::vector<SpacePtr> out;
  Partition p = f.source();
  out.push_back(ShardSpace::of(p));
  for (const Cut& c : f.cuts()) {
    p = p.split(c.parent, c.left);
    out.push_back(ShardSpace::of(p));
  }
  return out;
}

}  // namespace

ShardVector dual_forest_derivative(const LayeredForest& f, const ShardVector& v) {
  if (!(v.support() == f.target())) throw BoundaryMismatch("vector support is not the forest target");
  auto spaces = stage_spaces(f);
  SparseVector cur = v.coeffs();
  for (std::size_t k = f.size(); k-- > 0;) {
    const Cut& c = f.cuts()[k];
    const Cut r = c.reversed();
    SparseVector next;
    for (const auto& [i, coeff] : cur.entries()) {
      next.add(arrow_index(*spaces[k + 1], *spaces[k], c, i), coeff);
      next.add(arrow_index(*spaces[k + 1], *spaces[k], r, i), -coeff);
    }
    cur = std::move(next);
  }
  return ShardVector(spaces.front(), std::move(cur));
}

ShardVector dual_forest_derivative_antisymmetrized(const LayeredForest& f, const ShardVector& v) {
  if (!(v.support() == f.target())) throw BoundaryMismatch("vector support is not the forest target");
  auto spaces = stage_spaces(f);
  SparseVector out;
  for (const auto& term : antisymmetrize(f)) {
    for (const auto& [i, coeff] : v.coeffs().entries()) {
      std::size_t idx = i;
      for (std::size_t k = f.size(); k-- > 0;) idx = arrow_index(*spaces[k + 1], *spaces[k], term.forest.cuts()[k], idx);
      out.add(idx, term.sign > 0 ? coeff : Rational(-coeff));
    }
  }
  return ShardVector(spaces.front(), std::move(out));
}

Functional forest_derivative(const LayeredForest& f, const Functional& g) {
  if (!(g.support() == f.source())) throw BoundaryMismatch("functional support is not the forest source");
  auto spaces = stage_spaces(f);
  std::vector<Rational> cur = g.values();
  for (std::size_t k = 0; k < f.size(); ++k) {
    const Cut& c = f.cuts()[k];
    const Cut r = c.reversed();
    const ShardSpace& fine = *spaces[k + 1];
    std::vector<Rational> next(fine.size());
    for (std::size_t x = 0; x < fine.size(); ++x) {
      next[x] = cur[arrow_index(fine, *spaces[k], c, x)] - cur[arrow_index(fine, *spaces[k], r, x)];
    }
    cur = std::move(next);
  }
  return Functional(spaces.back(), std::move(cur));
}

Functional forest_derivative_by_duality(const LayeredForest& f, const Functional& g) {
  if (!(g.support() == f.source())) throw BoundaryMismatch("functional support is not the forest source");
  auto target = ShardSpace::of(f.target());
  std::vector<Rational> values(target->size());
  for (std::size_t x = 0; x < target->size(); ++x) {
    values[x] = g(dual_forest_derivative(f, ShardVector::basis(target, x)));
  }
  return Functional(target, std::move(values));
}

}  // namespace adjbraid
