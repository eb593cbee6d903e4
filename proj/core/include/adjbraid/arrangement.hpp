#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "adjbraid/exactla.hpp"
#include "adjbraid/ground.hpp"

namespace adjbraid {

/// Largest ground set on which shards can be built (sign vectors live in 64 bits).
inline constexpr int kMaxShardN = 7;

/// Sign vector over canonical keys. Key i lives at bit (K-1-i) and is set when the
/// sign there is '-', so numeric order is lexicographic order with '+' < '-'.
using SignBits = std::uint64_t;

/// Canonical representatives of the hyperplanes of the arrangement under T_P:
/// for each class {E, I-E} mod P the smaller of the two reduced masks.
class KeySet {
 public:
  explicit KeySet(const Partition& p);

  std::size_t size() const { return keys_.size(); }
  Subset key(std::size_t i) const { return keys_[i]; }
  const std::vector<Subset>& keys() const { return keys_; }
  std::optional<std::size_t> index_of(Subset key) const;

  /// Key class of an arbitrary subset: (index, negated). nullopt when E = 0 mod P.
  std::optional<std::pair<std::size_t, bool>> locate(Subset e) const;

  SignBits bit(std::size_t i) const { return SignBits{1} << (keys_.size() - 1 - i); }
  bool negative(SignBits s, std::size_t i) const { return (s & bit(i)) != 0; }

 private:
  Partition support_;
  std::vector<Subset> keys_;
  std::unordered_map<Mask, std::size_t> index_;
};

/// Shared, cached key set for a partition.
std::shared_ptr<const KeySet> keys_of(const Partition& p);

/// A face of the adjoint braid arrangement: support partition plus signs.
class Shard {
 public:
  Shard(Partition support, SignBits signs);

  const Partition& support() const { return support_; }
  SignBits signs() const { return signs_; }
  const KeySet& keys() const { return *keys_; }

  /// Sign of lambda_E on the face; Zero exactly when E = 0 mod support.
  Sign sign(Subset e) const;
  /// Sign at the i-th canonical key.
  Sign key_sign(std::size_t i) const;
  /// "+-+" over canonical keys in ascending key order.
  std::string sign_string() const;

  friend bool operator==(const Shard& a, const Shard& b) {
    return a.signs_ == b.signs_ && a.support_ == b.support_;
  }
  friend bool operator<(const Shard& a, const Shard& b);

 private:
  Partition support_;
  std::shared_ptr<const KeySet> keys_;
  SignBits signs_;
};

/// Parses a sign string produced by Shard::sign_string.
Shard shard_from_sign_string(const Partition& support, std::string_view signs);

/// Constraint rows lambda_key over the reduced coordinates of T_P (one variable per
/// element that is not the largest in its block).
RationalMatrix flat_constraints(const Partition& p, const KeySet& keys);
/// Maps reduced coordinates back to a point of R^I.
Witness lift_to_ambient(const Partition& p, const Witness& y);

/// Shard of P containing the point h. Throws NotInFlat or OnHyperplane.
Shard shard_from_point(const Partition& p, std::span<const Rational> h);

/// LP certificate that the shard is a nonempty face: a point h of T_P, scaled to
/// largest entry 1, with the shard's signs. nullopt if the sign vector is not realized.
std::optional<Witness> certify(const Shard& x);

/// All shards with support T_P, interned per partition. Sorted lexicographically.
class ShardSpace {
 public:
  static std::shared_ptr<const ShardSpace> of(const Partition& p);

  const Partition& support() const { return support_; }
  const KeySet& keys() const { return *keys_; }
  const std::shared_ptr<const KeySet>& keys_ptr() const { return keys_; }
  std::size_t size() const { return signs_.size(); }
  SignBits signs(std::size_t i) const { return signs_[i]; }
  const std::vector<SignBits>& all_signs() const { return signs_; }
  Shard shard(std::size_t i) const { return Shard(support_, signs_[i]); }
  std::optional<std::size_t> find(SignBits s) const;
  std::size_t index_of(const Shard& x) const;
  /// Witness point found during enumeration.
  const Witness& witness(std::size_t i) const { return witnesses_[i]; }

  ShardSpace(Partition p, std::vector<SignBits> signs, std::vector<Witness> witnesses);

 private:
  Partition support_;
  std::shared_ptr<const KeySet> keys_;
  std::vector<SignBits> signs_;
  std::vector<Witness> witnesses_;
  std::unordered_map<SignBits, std::size_t> index_;
};

using SpacePtr = std::shared_ptr<const ShardSpace>;

/// Wall-crossing search from a seeded generic point, certified by LP at every step.
std::vector<Shard> enumerate_shards(const Partition& p);
/// Independent oracle: tests every sign pattern with the LP (small key sets only).
std::vector<Shard> enumerate_shards_naive(const Partition& p);

/// One shard per block of R, in block order. Throws NotFiner.
std::vector<Shard> project(const Partition& r, const Shard& x);

/// Witness key E on which the two shards differ, if they differ on exactly one
/// hyperplane and that hyperplane is not R-semisimple.
std::optional<Subset> steinmann_adjacent(const Partition& r, const Shard& x1, const Shard& x2);

/// Steinmann R-equivalence class id of every shard of the space, numbered by
/// first appearance (so class 0 holds shard 0).
std::vector<std::size_t> steinmann_class_ids(const ShardSpace& space, const Partition& r);
/// Classes as shard lists, sorted by least member.
std::vector<std::vector<Shard>> steinmann_classes(const Partition& p, const Partition& r);

}  // namespace adjbraid
