#include <random>

#include "adjbraid/errors.hpp"
#include "adjbraid/io.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace adjbraid;
using testing::P;

TEST_CASE("shard JSON format") {
  auto space = ShardSpace::of(P("(123)", 3));
  const std::string text = shard_to_json(space->shard(0));
  CHECK(text == R"j({"support":"(123)","signs":{"1":"+","2":"+","12":"+"}})j");
  CHECK(shard_from_json(text) == space->shard(0));
  Shard z = ShardSpace::of(P("(1|2)", 2))->shard(0);
  CHECK(shard_to_json(z) == R"j({"support":"(1|2)","signs":{}})j");
  CHECK_THROWS_AS(shard_from_json(R"j({"support":"(123)","signs":{"1":"+"}})j"), Error);
  CHECK_THROWS_AS(shard_from_json("{"), ParseError);
}

TEST_CASE("property: shards, functionals and vectors round trip") {
  std::mt19937_64 rng(21);
  for (int n = 1; n <= 4; ++n) {
    for (const Partition& p : all_partitions(GroundSet::numbered(n))) {
      auto space = ShardSpace::of(p);
      for (std::size_t i = 0; i < space->size(); ++i) {
        CHECK(shard_from_json(shard_to_json(space->shard(i)), p.ground_ptr()) == space->shard(i));
      }
      Functional f = testing::random_functional(space, rng);
      CHECK(functional_from_json(functional_to_json(f), p.ground_ptr()) == f);
      ShardVector v = testing::random_vector(space, rng);
      CHECK(shard_vector_from_json(shard_vector_to_json(v), p.ground_ptr()) == v);
      CHECK(document_support(functional_to_json(f)) == p.to_string());
    }
  }
}

TEST_CASE("functionals must list every shard") {
  std::string partial = R"j({"schema":1,"support":"(12)","values":{"+":"1"}})j";
  CHECK_THROWS_AS(functional_from_json(partial), ArityMismatch);
  CHECK_THROWS_AS(functional_from_json(R"j({"schema":2,"support":"(12)","values":{"+":"1","-":"1"}})j"), Error);
}

TEST_CASE("reports") {
  AuditReport r = verify_lie_axioms(2);
  const std::string json = report_to_json(r);
  CHECK(json.find("\"schema\": 1") != std::string::npos);
  CHECK(json.find("\"pass\": true") != std::string::npos);
  const std::string text = report_to_text(r);
  CHECK(text.find("PASS lie.antisymmetry n=2") == 0);
  CHECK(text.find("verdict: pass") != std::string::npos);
}
