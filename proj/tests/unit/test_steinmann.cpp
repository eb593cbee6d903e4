#include <random>

#include "adjbraid/audit.hpp"
#include "adjbraid/errors.hpp"
#include "adjbraid/forests.hpp"
#include "adjbraid/steinmann.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace adjbraid;
using testing::P;
using testing::S;

namespace {

Functional random_annihilator_element(const QuotientSpace& q, std::mt19937_64& rng) {
  Functional f(q.space());
  for (const auto& b : q.annihilator()) {
    Rational c = testing::small_rational(rng);
    for (std::size_t i = 0; i < f.values().size(); ++i) f[i] += c * b[i];
  }
  return f;
}

// Chambers that occur with a nonzero coefficient in some relation.
std::vector<bool> in_some_relation(const RelationSet& rs) {
  std::vector<bool> out(rs.space->size(), false);
  for (const auto& r : rs.relations) {
    for (const auto& [i, c] : r.entries()) out[i] = true;
  }
  return out;
}

}  // namespace

TEST_CASE("no relations below n = 4") {
  CHECK(steinmann_relations(GroundSet::numbered(2)).relations.empty());
  CHECK(steinmann_relations(GroundSet::numbered(3)).relations.empty());
  CHECK(quotient_dim(GroundSet::numbered(1)) == 1);
  CHECK(quotient_dim(GroundSet::numbered(2)) == 2);
  CHECK(quotient_dim(GroundSet::numbered(3)) == 6);
}

TEST_CASE("relation rank and quotient dimension at n = 4 and 5") {
  auto q4 = quotient_of(GroundSet::numbered(4));
  CHECK(q4->relation_rank() == 6);
  CHECK(q4->dim() == 26);
  CHECK(rank(q4->relations().matrix()) == 6);
  auto q5 = quotient_of(GroundSet::numbered(5));
  CHECK(q5->relation_rank() == 220);
  CHECK(q5->dim() == 150);
  for (int n = 1; n <= 5; ++n) CHECK(Integer(static_cast<unsigned long>(quotient_dim(GroundSet::numbered(n)))) == zie_dimension(n));
}

TEST_CASE("relations are four-term with cuts into blocks of size at least two") {
  auto rs = steinmann_relations(GroundSet::numbered(5));
  REQUIRE(rs.relations.size() == rs.sources.size());
  for (std::size_t k = 0; k < rs.relations.size(); ++k) {
    const auto& r = rs.relations[k];
    CHECK(r.nnz() >= 2);
    CHECK(r.nnz() <= 4);
    Rational total = 0;
    for (const auto& [i, c] : r.entries()) total += c;
    CHECK(total == 0);
    // First nonzero coefficient is positive.
    CHECK(sgn(r.entries().begin()->second) > 0);
    const Cut& v = rs.sources[k].cut;
    CHECK(v.left.count() >= 2);
    CHECK(v.right().count() >= 2);
  }
}

TEST_CASE("quotient normal forms") {
  std::mt19937_64 rng(9);
  auto q = quotient_of(GroundSet::numbered(4));
  for (const auto& r : q->relations().relations) CHECK(q->contains(ShardVector(q->space(), r)));
  for (int trial = 0; trial < 50; ++trial) {
    ShardVector v = testing::random_vector(q->space(), rng);
    ShardVector nf = q->normal_form(v);
    CHECK(q->normal_form(nf) == nf);
    CHECK(q->contains(v - nf));
    for (const auto& [i, c] : nf.coeffs().entries()) {
      auto free = q->free_columns();
      CHECK(std::binary_search(free.begin(), free.end(), i));
    }
  }
}

TEST_CASE("annihilator basis") {
  for (int n = 2; n <= 5; ++n) {
    auto q = quotient_of(GroundSet::numbered(n));
    CHECK(q->annihilator().size() == q->dim());
    for (const auto& f : q->annihilator()) {
      CHECK(q->annihilates(f));
      for (const auto& r : q->relations().relations) CHECK(f(ShardVector(q->space(), r)) == 0);
    }
  }
}

TEST_CASE("semisimplicity") {
  std::mt19937_64 rng(10);
  Partition one = P("(123)", 3);
  CHECK(is_semisimple(testing::random_functional(ShardSpace::of(one), rng), one));

  Partition p = P("(12|34)", 4);
  auto space = ShardSpace::of(p);
  auto classes = steinmann_classes(p, p);
  REQUIRE(classes.front().size() == 2);
  Functional single = Functional::indicator(space, space->index_of(classes.front().front()));
  CHECK_FALSE(is_semisimple(single, p));
  CHECK(semisimplicity_witness(single, p).has_value());
  Functional both = single;
  both[space->index_of(classes.front().back())] = 1;
  CHECK(is_semisimple(both, p));
  CHECK_FALSE(semisimplicity_witness(both, p).has_value());
}

TEST_CASE("semisimple differentiability") {
  std::mt19937_64 rng(13);
  for (int n = 2; n <= 3; ++n) {
    auto space = ShardSpace::of(Partition::one_block(GroundSet::numbered(n)));
    Functional f = testing::random_functional(space, rng);
    CHECK(is_semisimply_differentiable(f));
    CHECK(is_semisimply_differentiable_exhaustive(f, 2));
  }

  auto q = quotient_of(GroundSet::numbered(4));
  for (int trial = 0; trial < 5; ++trial) {
    Functional f = random_annihilator_element(*q, rng);
    CHECK(is_semisimply_differentiable(f));
    CHECK(is_semisimply_differentiable_exhaustive(f, 3));
  }

  // A chamber indicator breaks differentiability exactly when the chamber occurs in a relation.
  auto used = in_some_relation(q->relations());
  std::size_t unused = 0;
  for (std::size_t i = 0; i < q->space()->size(); ++i) {
    Functional e = Functional::indicator(q->space(), i);
    CHECK(is_semisimply_differentiable(e) == !used[i]);
    CHECK(q->annihilates(e) == !used[i]);
    if (!used[i]) ++unused;
  }
  CHECK(unused == 8);
}

TEST_CASE("products") {
  std::mt19937_64 rng(14);
  Partition one = P("(123)", 3);
  Functional f = testing::random_functional(ShardSpace::of(one), rng);
  CHECK(product(one, {f}) == f);

  Partition p = P("(12|34)", 4);
  Partition s1 = simple_support(p, S("12"));
  Partition s2 = simple_support(p, S("34"));
  CHECK(s1 == P("(12|3|4)", 4));
  CHECK(s2 == P("(1|2|34)", 4));
  auto ones = product(p, {Functional::constant(ShardSpace::of(s1), 1), Functional::constant(ShardSpace::of(s2), 1)});
  CHECK(ones == Functional::constant(ShardSpace::of(p), 1));

  Functional g1 = testing::random_functional(ShardSpace::of(s1), rng);
  Functional g2 = testing::random_functional(ShardSpace::of(s2), rng);
  CHECK(is_semisimple(product(p, {g1, g2}), p));
  CHECK_THROWS_AS(product(p, {g1}), ArityMismatch);
}

TEST_CASE("factorization") {
  std::mt19937_64 rng(15);
  Partition p = P("(12|34)", 4);
  Partition s1 = simple_support(p, S("12"));
  Partition s2 = simple_support(p, S("34"));
  CHECK(quotient_of(s1)->dim() * quotient_of(s2)->dim() == steinmann_classes(p, p).size());

  Functional g1 = testing::random_functional(ShardSpace::of(s1), rng);
  Functional g2 = testing::random_functional(ShardSpace::of(s2), rng);
  Functional f = product(p, {g1, g2});
  Factorization fz = factorize(p, f);
  REQUIRE(fz.bases.size() == 2);
  CHECK(fz.coefficients.size() == 4);
  REQUIRE(fz.factors);
  CHECK(product(p, *fz.factors) == f);

  // Sums of two pure tensors are factorized but not pure in general.
  Functional h = f;
  Functional other = product(p, {testing::random_functional(ShardSpace::of(s1), rng),
                                  testing::random_functional(ShardSpace::of(s2), rng)});
  for (std::size_t i = 0; i < h.values().size(); ++i) h[i] += other[i];
  Factorization fh = factorize(p, h);
  Functional rebuilt(ShardSpace::of(p));
  for (std::size_t a = 0; a < fh.bases[0].size(); ++a) {
    for (std::size_t b = 0; b < fh.bases[1].size(); ++b) {
      Functional t = product(p, {fh.bases[0][a], fh.bases[1][b]});
      const Rational& c = fh.coefficients[a * fh.bases[1].size() + b];
      for (std::size_t i = 0; i < t.values().size(); ++i) rebuilt[i] += c * t[i];
    }
  }
  CHECK(rebuilt == h);

  auto classes = steinmann_classes(p, p);
  Functional bad = Functional::indicator(ShardSpace::of(p), ShardSpace::of(p)->index_of(classes.front().front()));
  CHECK_THROWS_AS(factorize(p, bad), NotSemisimple);
}

TEST_CASE("factorization over one block is the identity on annihilator elements") {
  std::mt19937_64 rng(16);
  Partition one = P("(1234)", 4);
  Functional f = random_annihilator_element(*quotient_of(one), rng);
  Factorization fz = factorize(one, f);
  REQUIRE(fz.factors);
  CHECK(product(one, *fz.factors) == f);
}
