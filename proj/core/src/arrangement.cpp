#include "adjbraid/arrangement.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <mutex>
#include <random>
#include <set>

#include "adjbraid/errors.hpp"

namespace adjbraid {

namespace {

void require_shard_size(const Partition& p) {
  if (p.n() > kMaxShardN) {
    throw OutOfRange("shard computations support at most " + std::to_string(kMaxShardN) + " elements");
  }
}

using CacheKey = std::pair<std::vector<std::string>, std::vector<Mask>>;

CacheKey cache_key(const Partition& p) {
  std::vector<Mask> blocks;
  for (Subset b : p.blocks()) blocks.push_back(b.bits);
  return {p.ground().labels(), std::move(blocks)};
}

// Sign bits of a full sign assignment given per key.
SignBits pack(const KeySet& keys, const std::vector<Sign>& per_key) {
  SignBits s = 0;
  for (std::size_t i = 0; i < per_key.size(); ++i) {
    if (per_key[i] == Sign::Negative) s |= keys.bit(i);
  }
  return s;
}

std::vector<Sign> unpack(const KeySet& keys, SignBits s) {
  std::vector<Sign> out(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    out[i] = keys.negative(s, i) ? Sign::Negative : Sign::Positive;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// KeySet

KeySet::KeySet(const Partition& p) : support_(p) {
  require_shard_size(p);
  const Mask full = p.ground().full_mask();
  std::set<Mask> found;
  for (Mask e = 1; e < full; ++e) {
    Subset r = reduction(p, Subset(e));
    if (r.empty()) continue;
    Subset c = complement_reduction(p, Subset(e));
    found.insert(std::min(r.bits, c.bits));
  }
  for (Mask k : found) {
    index_.emplace(k, keys_.size());
    keys_.emplace_back(k);
  }
}

std::optional<std::size_t> KeySet::index_of(Subset key) const {
  auto it = index_.find(key.bits);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::pair<std::size_t, bool>> KeySet::locate(Subset e) const {
  Subset r = reduction(support_, e);
  if (r.empty()) return std::nullopt;
  Subset c = complement_reduction(support_, e);
  Subset k = std::min(r, c);
  auto idx = index_of(k);
  if (!idx) throw InvariantViolation("reduced subset without a canonical key");
  return std::make_pair(*idx, k != r);
}

std::shared_ptr<const KeySet> keys_of(const Partition& p) {
  static std::mutex mu;
  static std::map<CacheKey, std::shared_ptr<const KeySet>> cache;
  auto key = cache_key(p);
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto ks = std::make_shared<const KeySet>(p);
  std::lock_guard lock(mu);
  return cache.emplace(std::move(key), ks).first->second;
}

// ---------------------------------------------------------------------------
// Shard

Shard::Shard(Partition support, SignBits signs)
    : support_(std::move(support)), keys_(keys_of(support_)), signs_(signs) {
  if (keys_->size() < 64 && (signs_ >> keys_->size()) != 0) {
    throw Error("sign bits outside the key range");
  }
}

Sign Shard::key_sign(std::size_t i) const {
  return keys_->negative(signs_, i) ? Sign::Negative : Sign::Positive;
}

Sign Shard::sign(Subset e) const {
  auto loc = keys_->locate(e);
  if (!loc) return Sign::Zero;
  bool neg = keys_->negative(signs_, loc->first) != loc->second;
  return neg ? Sign::Negative : Sign::Positive;
}

std::string Shard::sign_string() const {
  std::string out;
  for (std::size_t i = 0; i < keys_->size(); ++i) out += keys_->negative(signs_, i) ? '-' : '+';
  return out;
}

bool operator<(const Shard& a, const Shard& b) {
  if (!(a.support_ == b.support_)) return a.support_ < b.support_;
  return a.signs_ < b.signs_;
}

Shard shard_from_sign_string(const Partition& support, std::string_view signs) {
  auto keys = keys_of(support);
  if (signs.size() != keys->size()) throw ParseError("sign string has the wrong length", signs.size());
  SignBits s = 0;
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (signs[i] == '-') {
      s |= keys->bit(i);
    } else if (signs[i] != '+') {
      throw ParseError("sign must be '+' or '-'", i);
    }
  }
  return Shard(support, s);
}

// ---------------------------------------------------------------------------
// Geometry

namespace {

// Reduced coordinates: every element except the largest one of its block.
std::vector<int> free_elements(const Partition& p) {
  std::vector<int> out;
  for (int i = 0; i < p.n(); ++i) {
    Subset b = p.block(p.block_index_of(i));
    if (i != 63 - std::countl_zero(b.bits)) out.push_back(i);
  }
  return out;
}

int block_max(const Partition& p, int i) {
  Subset b = p.block(p.block_index_of(i));
  return 63 - std::countl_zero(b.bits);
}

std::vector<Sign> signs_vector(const KeySet& keys, SignBits s) { return unpack(keys, s); }

Witness normalized(Witness h) {
  Rational biggest = 0;
  for (const auto& x : h) biggest = std::max(biggest, Rational(abs(x)));
  if (sgn(biggest) != 0) {
    for (auto& x : h) x /= biggest;
  }
  return h;
}

}  // namespace

RationalMatrix flat_constraints(const Partition& p, const KeySet& keys) {
  auto vars = free_elements(p);
  RationalMatrix m(vars.size());
  for (Subset k : keys.keys()) {
    SparseVector row;
    for (std::size_t j = 0; j < vars.size(); ++j) {
      int i = vars[j];
      int coeff = (k.contains(i) ? 1 : 0) - (k.contains(block_max(p, i)) ? 1 : 0);
      if (coeff != 0) row.set(j, coeff);
    }
    m.add_row(std::move(row));
  }
  return m;
}

Witness lift_to_ambient(const Partition& p, const Witness& y) {
  auto vars = free_elements(p);
  if (y.size() != vars.size()) throw ArityMismatch("reduced coordinate count mismatch");
  Witness h(static_cast<std::size_t>(p.n()), 0);
  for (std::size_t j = 0; j < vars.size(); ++j) {
    h[static_cast<std::size_t>(vars[j])] += y[j];
    h[static_cast<std::size_t>(block_max(p, vars[j]))] -= y[j];
  }
  return h;
}

Shard shard_from_point(const Partition& p, std::span<const Rational> h) {
  if (h.size() != static_cast<std::size_t>(p.n())) throw ArityMismatch("point has the wrong dimension");
  for (Subset b : p.blocks()) {
    Rational sum = 0;
    for (int i : elements(b)) sum += h[static_cast<std::size_t>(i)];
    if (sgn(sum) != 0) throw NotInFlat("block " + format_subset(p.ground(), b) + " does not sum to zero");
  }
  auto keys = keys_of(p);
  std::vector<Sign> per_key;
  for (Subset k : keys->keys()) {
    Rational sum = 0;
    for (int i : elements(k)) sum += h[static_cast<std::size_t>(i)];
    if (sgn(sum) == 0) throw OnHyperplane(format_subset(p.ground(), k));
    per_key.push_back(sign_of(sum));
  }
  return Shard(p, pack(*keys, per_key));
}

namespace {

std::optional<Witness> certify_bits(const Partition& p, const KeySet& keys, const RationalMatrix& rows,
                                    SignBits s) {
  auto signs = signs_vector(keys, s);
  auto y = strictly_feasible(rows, signs);
  if (!y) return std::nullopt;
  return normalized(lift_to_ambient(p, *y));
}

}  // namespace

std::optional<Witness> certify(const Shard& x) {
  auto rows = flat_constraints(x.support(), x.keys());
  return certify_bits(x.support(), x.keys(), rows, x.signs());
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

constexpr std::uint64_t kSeedPointSeed = 0x5eed'ad70'b4a1'd000ULL;

Witness generic_point(const Partition& p, const KeySet& keys) {
  std::mt19937_64 rng(kSeedPointSeed);
  std::uniform_int_distribution<int> coord(-64, 64);
  auto vars = free_elements(p);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Witness y(vars.size());
    for (auto& v : y) v = coord(rng);
    Witness h = lift_to_ambient(p, y);
    bool generic = true;
    for (Subset k : keys.keys()) {
      Rational sum = 0;
      for (int i : elements(k)) sum += h[static_cast<std::size_t>(i)];
      if (sgn(sum) == 0) {
        generic = false;
        break;
      }
    }
    if (generic) return h;
  }
  throw InvariantViolation("no generic seed point found");
}

std::shared_ptr<const ShardSpace> build_space(const Partition& p) {
  auto keys = keys_of(p);
  auto rows = flat_constraints(p, *keys);
  Witness seed = generic_point(p, *keys);
  Shard start = shard_from_point(p, seed);

  std::unordered_map<SignBits, Witness> found;
  std::unordered_map<SignBits, bool> rejected;
  std::deque<SignBits> frontier;
  found.emplace(start.signs(), normalized(seed));
  frontier.push_back(start.signs());
  while (!frontier.empty()) {
    SignBits s = frontier.front();
    frontier.pop_front();
    for (std::size_t i = 0; i < keys->size(); ++i) {
      SignBits t = s ^ keys->bit(i);
      if (found.count(t) || rejected.count(t)) continue;
      if (auto w = certify_bits(p, *keys, rows, t)) {
        found.emplace(t, std::move(*w));
        frontier.push_back(t);
      } else {
        rejected.emplace(t, true);
      }
    }
  }
  std::vector<SignBits> signs;
  for (const auto& [s, w] : found) signs.push_back(s);
  std::sort(signs.begin(), signs.end());
  std::vector<Witness> witnesses;
  for (SignBits s : signs) witnesses.push_back(found.at(s));
  return std::make_shared<const ShardSpace>(p, std::move(signs), std::move(witnesses));
}

}  // namespace

ShardSpace::ShardSpace(Partition p, std::vector<SignBits> signs, std::vector<Witness> witnesses)
    : support_(std::move(p)), keys_(keys_of(support_)), signs_(std::move(signs)),
      witnesses_(std::move(witnesses)) {
  for (std::size_t i = 0; i < signs_.size(); ++i) index_.emplace(signs_[i], i);
}

std::shared_ptr<const ShardSpace> ShardSpace::of(const Partition& p) {
  static std::mutex mu;
  static std::map<CacheKey, std::shared_ptr<const ShardSpace>> cache;
  auto key = cache_key(p);
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto space = build_space(p);
  std::lock_guard lock(mu);
  return cache.emplace(std::move(key), space).first->second;
}

std::optional<std::size_t> ShardSpace::find(SignBits s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t ShardSpace::index_of(const Shard& x) const {
  if (!(x.support() == support_)) throw SupportMismatch("shard support differs from the space");
  auto i = find(x.signs());
  if (!i) throw InvariantViolation("sign vector " + x.sign_string() + " is not a shard of " + support_.to_string());
  return *i;
}

std::vector<Shard> enumerate_shards(const Partition& p) {
  // Fresh search every call; ShardSpace::of keeps the interned copy.
  auto space = build_space(p);
  std::vector<Shard> out;
  out.reserve(space->size());
  for (std::size_t i = 0; i < space->size(); ++i) out.push_back(space->shard(i));
  return out;
}

std::vector<Shard> enumerate_shards_naive(const Partition& p) {
  auto keys = keys_of(p);
  if (keys->size() > 20) throw OutOfRange("exhaustive enumeration limited to 20 keys");
  auto rows = flat_constraints(p, *keys);
  std::vector<Shard> out;
  const SignBits limit = SignBits{1} << keys->size();
  for (SignBits s = 0; s < limit; ++s) {
    if (certify_bits(p, *keys, rows, s)) out.emplace_back(p, s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Projections and Steinmann adjacency

std::vector<Shard> project(const Partition& r, const Shard& x) {
  const Partition& p = x.support();
  if (!is_finer(p, r)) throw NotFiner("shard support is not finer than R");
  std::vector<Shard> out;
  for (Subset t : r.blocks()) {
    Partition pj = restrict_complete(p, t);
    auto keys = keys_of(pj);
    std::vector<Sign> per_key;
    for (Subset k : keys->keys()) {
      Sign s = x.sign(k);
      if (s == Sign::Zero) throw InvariantViolation("projection hit a symmetric subset");
      per_key.push_back(s);
    }
    out.emplace_back(pj, pack(*keys, per_key));
  }
  return out;
}

std::optional<Subset> steinmann_adjacent(const Partition& r, const Shard& x1, const Shard& x2) {
  if (!(x1.support() == x2.support())) throw SupportMismatch("Steinmann adjacency needs equal supports");
  const Partition& p = x1.support();
  if (!is_finer(p, r)) throw NotFiner("shard support is not finer than R");
  SignBits diff = x1.signs() ^ x2.signs();
  if (std::popcount(diff) != 1) return std::nullopt;
  const KeySet& keys = x1.keys();
  std::size_t i = keys.size() - 1 - static_cast<std::size_t>(std::countr_zero(diff));
  Subset e = keys.key(i);
  if (is_r_semisimple(p, r, e)) return std::nullopt;
  return e;
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
  }
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

 private:
  std::vector<std::size_t> parent_, size_;
};

}  // namespace

std::vector<std::size_t> steinmann_class_ids(const ShardSpace& space, const Partition& r) {
  const Partition& p = space.support();
  if (!is_finer(p, r)) throw NotFiner("support is not finer than R");
  const KeySet& keys = space.keys();
  std::vector<std::size_t> walls;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (!is_r_semisimple(p, r, keys.key(i))) walls.push_back(i);
  }
  UnionFind uf(space.size());
  for (std::size_t a = 0; a < space.size(); ++a) {
    for (std::size_t i : walls) {
      if (auto b = space.find(space.signs(a) ^ keys.bit(i))) uf.unite(a, *b);
    }
  }
  std::vector<std::size_t> ids(space.size());
  std::unordered_map<std::size_t, std::size_t> label;
  for (std::size_t a = 0; a < space.size(); ++a) {
    auto [it, inserted] = label.emplace(uf.find(a), label.size());
    ids[a] = it->second;
  }
  return ids;
}

std::vector<std::vector<Shard>> steinmann_classes(const Partition& p, const Partition& r) {
  auto space = ShardSpace::of(p);
  auto ids = steinmann_class_ids(*space, r);
  std::size_t count = ids.empty() ? 0 : *std::max_element(ids.begin(), ids.end()) + 1;
  std::vector<std::vector<Shard>> classes(count);
  for (std::size_t a = 0; a < space->size(); ++a) classes[ids[a]].push_back(space->shard(a));
  return classes;
}

}  // namespace adjbraid
