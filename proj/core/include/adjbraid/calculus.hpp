#pragma once

#include <vector>

#include "adjbraid/arrangement.hpp"
#include "adjbraid/forests.hpp"

namespace adjbraid {

/// Exact linear combination of shards sharing one support.
class ShardVector {
 public:
  explicit ShardVector(SpacePtr space) : space_(std::move(space)) {}
  ShardVector(SpacePtr space, SparseVector coeffs);
  static ShardVector basis(SpacePtr space, std::size_t i);
  static ShardVector of(const Shard& x);

  const SpacePtr& space() const { return space_; }
  const Partition& support() const { return space_->support(); }
  const SparseVector& coeffs() const { return coeffs_; }
  Rational coeff(std::size_t i) const { return coeffs_.get(i); }
  void add(std::size_t i, const Rational& c) { coeffs_.add(i, c); }
  bool is_zero() const { return coeffs_.empty(); }

  ShardVector& operator+=(const ShardVector& o);
  ShardVector& operator-=(const ShardVector& o);
  ShardVector& operator*=(const Rational& s);
  friend ShardVector operator+(ShardVector a, const ShardVector& b) { return a += b; }
  friend ShardVector operator-(ShardVector a, const ShardVector& b) { return a -= b; }
  friend bool operator==(const ShardVector& a, const ShardVector& b);

 private:
  SpacePtr space_;
  SparseVector coeffs_;
};

/// Rational-valued function on the shards of one support, stored densely in
/// shard-space order.
class Functional {
 public:
  explicit Functional(SpacePtr space);
  Functional(SpacePtr space, std::vector<Rational> values);
  static Functional indicator(SpacePtr space, std::size_t i);
  static Functional constant(SpacePtr space, const Rational& c);

  const SpacePtr& space() const { return space_; }
  const Partition& support() const { return space_->support(); }
  const std::vector<Rational>& values() const { return values_; }
  const Rational& operator[](std::size_t i) const { return values_[i]; }
  Rational& operator[](std::size_t i) { return values_[i]; }
  Rational operator()(const Shard& x) const { return values_[space_->index_of(x)]; }
  /// Pairing with a shard vector of the same support.
  Rational operator()(const ShardVector& v) const;

  friend bool operator==(const Functional& a, const Functional& b);

 private:
  SpacePtr space_;
  std::vector<Rational> values_;
};

/// X^V: the shard over source(V) pushed off the wall of X toward the side
/// favored by V. X must have support parent-split by V.
Shard arrow(const Shard& x, const Partition& source, const Cut& v);
/// Index form over interned spaces; `from` has support source.split(v).
std::size_t arrow_index(const ShardSpace& from, const ShardSpace& to, const Cut& v, std::size_t x);

/// X^F for every cut of F, innermost first.
Shard arrow(const Shard& x, const LayeredForest& f);

/// Cut-by-cut dual derivative, innermost cut first.
ShardVector dual_forest_derivative(const LayeredForest& f, const ShardVector& v);
/// Same value computed as the signed sum of X^G over the antisymmetrization of F.
ShardVector dual_forest_derivative_antisymmetrized(const LayeredForest& f, const ShardVector& v);

/// Iterated finite difference, outermost cut first.
Functional forest_derivative(const LayeredForest& f, const Functional& g);
/// Same value computed through the pairing g(dual derivative of X).
Functional forest_derivative_by_duality(const LayeredForest& f, const Functional& g);

}  // namespace adjbraid
