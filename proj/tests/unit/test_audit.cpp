#include "adjbraid/audit.hpp"
#include "adjbraid/errors.hpp"
#include "adjbraid/io.hpp"
#include "doctest.h"

using namespace adjbraid;

namespace {

// Ordered Bell numbers: a(0) = 1, a(n) = sum_k C(n,k) a(n-k).
std::vector<Integer> fubini(int upto) {
  std::vector<Integer> a{1};
  for (int n = 1; n <= upto; ++n) {
    Integer s = 0;
    Integer binom = 1;
    for (int k = 1; k <= n; ++k) {
      binom = binom * (n - k + 1) / k;
      s += binom * a[static_cast<std::size_t>(n - k)];
    }
    a.push_back(s);
  }
  return a;
}

}  // namespace

TEST_CASE("series oracle against ordered Bell numbers") {
  // -log(2 - e^x) differentiates to the ordered Bell EGF (1/(2 - e^x)) times e^x.
  auto a = fubini(12);
  CHECK(zie_dimension(1) == 1);
  for (int n = 2; n <= 12; ++n) CHECK(zie_dimension(n) == 2 * a[static_cast<std::size_t>(n - 1)]);
  CHECK(zie_dimension(4) == 26);
  CHECK(zie_dimension(5) == 150);
  CHECK_THROWS_AS(zie_dimension(0), OutOfRange);
  CHECK_THROWS_AS(zie_dimension(13), OutOfRange);
}

TEST_CASE("every suite passes for n <= 4") {
  for (int n = 2; n <= 4; ++n) {
    AuditReport r = full_audit(n);
    for (const auto& e : r.entries) {
      INFO(e.claim << " n=" << n);
      CHECK(e.pass);
      CHECK_FALSE(e.sampled);
    }
    CHECK(r.pass());
  }
}

TEST_CASE("small cases carry instances") {
  AuditReport two = verify_lie_axioms(2);
  bool antisymmetry = false;
  for (const auto& e : two.entries) antisymmetry = antisymmetry || (e.claim == "lie.antisymmetry" && e.instances >= 1);
  CHECK(antisymmetry);
  AuditReport three = verify_lie_axioms(3);
  bool jacobi = false;
  for (const auto& e : three.entries) jacobi = jacobi || (e.claim == "lie.jacobi" && e.instances >= 1);
  CHECK(jacobi);
}

TEST_CASE("sampling at n = 5 is bounded and reproducible") {
  AuditReport a = verify_lie_axioms(5, 77, 25);
  AuditReport b = verify_lie_axioms(5, 77, 25);
  CHECK(report_to_json(a) == report_to_json(b));
  for (const auto& e : a.entries) {
    CHECK(e.pass);
    if (e.sampled) CHECK(e.instances == 25);
  }
}

TEST_CASE("failing instances are narrowed and replayable") {
  Instance in;
  in.claim = "lie.antisymmetry";
  in.n = 2;
  // The same tree twice: the sum doubles instead of cancelling.
  in.forests = {{1, "[1,2]"}, {1, "[1,2]"}};
  auto ce = check(in);
  REQUIRE(ce);
  CHECK_FALSE(ce->detail.empty());
  CHECK(ce->shards.size() == 1);
  CHECK(replay(*ce));
  // Round trip through JSON keeps it replayable.
  CHECK(replay(instance_from_json(instance_to_json(*ce))));

  Instance good = in;
  good.forests = {{1, "[1,2]"}, {1, "[2,1]"}};
  CHECK_FALSE(check(good));
  CHECK_FALSE(replay(good));
}

TEST_CASE("unknown claims and suites are errors") {
  Instance in;
  in.claim = "lie.nonsense";
  in.n = 2;
  CHECK_THROWS_AS(check(in), Error);
  CHECK_THROWS_AS(run_suite("nonsense", 3), Error);
}
