#pragma once

#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "adjbraid/calculus.hpp"

namespace adjbraid {

/// Where a Steinmann relation came from: the cut V and the adjacent pair over its
/// target, plus the wall E they share.
struct RelationSource {
  Cut cut;
  SignBits x1;
  SignBits x2;
  Subset wall;
};

/// Four-term relations X1^V - X1^Vbar + X2^Vbar - X2^V over one simple support.
struct RelationSet {
  SpacePtr space;
  std::vector<SparseVector> relations;
  std::vector<RelationSource> sources;

  RationalMatrix matrix() const;
};

/// Relations over the one-block partition of `ground`.
RelationSet steinmann_relations(const GroundPtr& ground);
/// Relations over a simple support: one block T plus singletons. Cuts range over
/// [S,T-S] with both parts of size at least two.
RelationSet steinmann_relations(const Partition& simple);

/// Quotient of the chamber space by the span of the relations.
class QuotientSpace {
 public:
  explicit QuotientSpace(RelationSet relations);

  const SpacePtr& space() const { return relations_.space; }
  const RelationSet& relations() const { return relations_; }
  std::size_t relation_rank() const { return echelon_.rank(); }
  std::size_t dim() const { return space()->size() - relation_rank(); }

  /// Coset representative supported on non-pivot shards.
  ShardVector normal_form(const ShardVector& v) const;
  bool contains(const ShardVector& v) const;
  /// Basis of the functionals vanishing on every relation, one per non-pivot shard,
  /// each equal to 1 there and 0 on the other non-pivot shards.
  const std::vector<Functional>& annihilator() const;
  bool annihilates(const Functional& f) const;
  /// Shards indexing the annihilator basis, ascending.
  std::vector<std::size_t> free_columns() const { return echelon_.free_columns(); }

 private:
  RelationSet relations_;
  EchelonForm echelon_;
  mutable std::once_flag annihilator_once_;
  mutable std::vector<Functional> annihilator_;
};

/// Interned quotient for a simple support (one block plus singletons).
std::shared_ptr<const QuotientSpace> quotient_of(const Partition& simple);
std::shared_ptr<const QuotientSpace> quotient_of(const GroundPtr& ground);

std::size_t quotient_dim(const GroundPtr& ground);

/// Pair of shard indices in one Steinmann R-class on which f differs, if any.
std::optional<std::pair<std::size_t, std::size_t>> semisimplicity_witness(const Functional& f, const Partition& r);
bool is_semisimple(const Functional& f, const Partition& r);
bool is_semisimple(const Functional& f);

/// Cheap test: every first derivative of f is semisimple. f must live on a simple support.
bool is_semisimply_differentiable(const Functional& f);
/// Checks every layered forest with at most `max_cuts` cuts out of the support of f.
bool is_semisimply_differentiable_exhaustive(const Functional& f, std::size_t max_cuts);

/// mu_R: (mu f)(X) = prod_j f_j(X restricted to the j-th block of R), for X over the
/// common support of the projections. One factor per block of R, factor j over
/// restrict_complete(support, T_j).
Functional product(const Partition& r, const Partition& support, const std::vector<Functional>& factors);
/// mu_P on P itself: factors over the simple supports of the blocks of P.
Functional product(const Partition& p, const std::vector<Functional>& factors);

/// Indices into the block shard spaces of the projection of every shard of P onto R.
std::vector<std::vector<std::size_t>> projection_table(const Partition& p, const Partition& r);

/// Simple support of the block of `p` containing `block` (the block plus singletons).
Partition simple_support(const Partition& p, Subset block);

struct Factorization {
  /// Per block: annihilator basis of that block's quotient.
  std::vector<std::vector<Functional>> bases;
  /// Coefficients of f on the tensor basis, row-major over block basis indices.
  std::vector<Rational> coefficients;
  /// Present when the coefficient tensor has rank one.
  std::optional<std::vector<Functional>> factors;
};

/// Inverts product on semisimply differentiable functionals. Throws NotSemisimple
/// when f is not constant on Steinmann classes or its lift leaves the tensor product
/// of the block quotients' duals.
Factorization factorize(const Partition& p, const Functional& f);

}  // namespace adjbraid
