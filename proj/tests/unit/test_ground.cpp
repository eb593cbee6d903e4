#include <algorithm>
#include <random>

#include "adjbraid/errors.hpp"
#include "adjbraid/ground.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace adjbraid;
using testing::P;
using testing::S;

TEST_CASE("refinement") {
  CHECK(is_finer(P("(1|2|3)", 3), P("(12|3)", 3)));
  CHECK(is_finer(P("(12|34)", 4), P("(12|34)", 4)));
  CHECK_FALSE(is_finer(P("(12|34)", 4), P("(13|24)", 4)));
  CHECK_THROWS_AS(is_finer(P("(12)", 2), P("(123)", 3)), GroundMismatch);
}

TEST_CASE("reduction removes whole blocks") {
  Partition p = P("(12|34|56|78|9)", 9);
  CHECK(reduction(p, S("3578")) == S("35"));
  CHECK(reduction(p, S("135")) == S("135"));
  CHECK(reduction(p, S("1234")).empty());
  CHECK(complement_reduction(p, S("3578")) == reduction(p, S("1246") | S("9")));
}

TEST_CASE("R-semisimplicity") {
  Partition p = P("(12|34|56|78|9)", 9);
  Partition r = P("(12|3456|789)", 9);
  CHECK(is_r_semisimple(p, r, S("3578")));
  CHECK_FALSE(is_r_semisimple(p, r, S("135")));
  CHECK_THROWS_AS(is_r_semisimple(p, r, S("12")), EmptyModP);
  CHECK_THROWS_AS(is_r_semisimple(r, p, S("3")), NotFiner);
}

TEST_CASE("partition parsing and printing") {
  Partition p = Partition::parse("(34|12|5)");
  CHECK(p.to_string() == "(12|34|5)");
  CHECK(p.n() == 5);
  CHECK(Partition::parse("(a1,a2|b)").to_string() == "(a1,a2|b)");
  CHECK_THROWS_AS(Partition::parse("(12|2)"), ParseError);
  CHECK_THROWS_AS(Partition::parse("(12"), ParseError);
  CHECK_THROWS_AS(P("(12)", 3), Error);
}

TEST_CASE("split, merge and restriction") {
  Partition p = P("(1234)", 4);
  CHECK(p.split(S("1234"), S("13")) == P("(13|24)", 4));
  CHECK(P("(13|24)", 4).merge(S("13"), S("24")) == p);
  CHECK(restrict_complete(P("(12|34)", 4), S("12")) == P("(12|3|4)", 4));
  CHECK_THROWS_AS(restrict_complete(P("(12|34)", 4), S("123")), Error);
}

TEST_CASE("set partitions are counted by the Bell numbers") {
  // Oracle: Bell triangle.
  std::vector<std::size_t> bell{1};
  std::vector<std::size_t> row{1};
  for (int n = 1; n <= 6; ++n) {
    std::vector<std::size_t> next{row.back()};
    for (std::size_t x : row) next.push_back(next.back() + x);
    bell.push_back(next.front());
    row = next;
  }
  for (int n = 1; n <= 6; ++n) {
    auto parts = all_partitions(GroundSet::numbered(n));
    CHECK(parts.size() == bell[static_cast<std::size_t>(n)]);
    std::sort(parts.begin(), parts.end());
    CHECK(std::adjacent_find(parts.begin(), parts.end()) == parts.end());
  }
}

TEST_CASE("property: reduction laws on random partitions") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    Partition p = testing::random_partition(n, rng);
    Subset e(rng() & p.ground().full_mask());
    Subset red = reduction(p, e);
    CHECK(red.subset_of(e));
    CHECK(reduction(p, red) == red);
    CHECK(complement_reduction(p, e) == reduction(p, Subset(p.ground().full_mask()) - e));
    for (Subset b : p.blocks()) {
      CHECK(reduction(p, e | b) == reduction(p, e - b));
    }
    // Semisimplicity over the one-block partition always holds.
    if (!red.empty()) CHECK(is_r_semisimple(p, Partition::one_block(p.ground_ptr()), e));
    CHECK(Partition::parse(p.to_string(), p.ground_ptr()) == p);
  }
}
