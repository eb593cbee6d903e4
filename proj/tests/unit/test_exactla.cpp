#include <random>

#include "adjbraid/errors.hpp"
#include "adjbraid/exactla.hpp"
#include "doctest.h"

using namespace adjbraid;

namespace {

RationalMatrix dense(const std::vector<std::vector<long>>& rows) {
  std::vector<std::vector<Rational>> r;
  for (const auto& row : rows) {
    r.emplace_back();
    for (long x : row) r.back().emplace_back(x);
  }
  return RationalMatrix::from_dense(r);
}

// Oracle: textbook dense elimination, independent of the sparse implementation.
std::size_t dense_rank(std::vector<std::vector<Rational>> a) {
  std::size_t rank = 0;
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t c = 0; c < cols && rank < a.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < a.size() && a[pivot][c] == 0) ++pivot;
    if (pivot == a.size()) continue;
    std::swap(a[pivot], a[rank]);
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == rank || a[r][c] == 0) continue;
      Rational f = a[r][c] / a[rank][c];
      for (std::size_t k = 0; k < cols; ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return rank;
}

std::vector<std::vector<Rational>> random_dense(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(cols));
  for (auto& row : a) {
    for (auto& x : row) {
      if (rng() % 2 == 0) {
        x = Rational(static_cast<long>(rng() % 7) - 3, 1 + rng() % 3);
        x.canonicalize();
      }
    }
  }
  // Plant dependent rows now and then.
  if (rows >= 3 && rng() % 2 == 0) {
    for (std::size_t k = 0; k < cols; ++k) a[2][k] = a[0][k] * 2 - a[1][k];
  }
  return a;
}

}  // namespace

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3") == Rational(3));
  CHECK(parse_rational("-6/4") == Rational(-3, 2));
  CHECK(to_string(parse_rational("-6/4")) == "-3/2");
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("x"), ParseError);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
}

TEST_CASE("rank of small matrices") {
  CHECK(rank(dense({{0, 0}, {0, 0}})) == 0);
  CHECK(rank(dense({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})) == 3);
  CHECK(rank(dense({{1, 1}, {2, 2}})) == 1);
}

TEST_CASE("kernel bases") {
  CHECK(kernel_basis(dense({{1, 0}, {0, 1}})).empty());
  auto k = kernel_basis(dense({{1, -1}}));
  REQUIRE(k.size() == 1);
  CHECK(k[0].get(0) == 1);
  CHECK(k[0].get(1) == 1);
}

TEST_CASE("strict feasibility") {
  auto w = strictly_feasible(dense({{1}}), std::vector<Sign>{Sign::Positive});
  REQUIRE(w);
  CHECK((*w)[0] == 1);
  CHECK_FALSE(strictly_feasible(dense({{1}, {-1}}), std::vector<Sign>{Sign::Positive, Sign::Positive}));
  // x = y with x > 0.
  auto eq = strictly_feasible(dense({{1, -1}, {1, 0}}), std::vector<Sign>{Sign::Zero, Sign::Positive});
  REQUIRE(eq);
  CHECK((*eq)[0] == (*eq)[1]);
  CHECK(sgn((*eq)[0]) > 0);
}

TEST_CASE("property: rank, kernel and echelon agree with a dense oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + rng() % 6;
    const std::size_t cols = 1 + rng() % 6;
    auto a = random_dense(rng, rows, cols);
    RationalMatrix m = RationalMatrix::from_dense(a);
    const std::size_t r = rank(m);
    CHECK(r == dense_rank(a));
    CHECK(r == rank(m.transpose()));
    auto ker = kernel_basis(m);
    CHECK(ker.size() + r == cols);
    for (const auto& v : ker) CHECK(m.apply(v).empty());
    EchelonForm e = row_echelon(m);
    CHECK(e.rank() == r);
    CHECK(e.free_columns().size() == cols - r);
    for (const auto& row : m.row_list()) CHECK(e.reduce(row).empty());
  }
}

TEST_CASE("property: feasibility witnesses realize the requested signs") {
  std::mt19937_64 rng(12);
  int feasible = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + rng() % 5;
    const std::size_t cols = 1 + rng() % 4;
    RationalMatrix m = RationalMatrix::from_dense(random_dense(rng, rows, cols));
    std::vector<Sign> signs;
    for (std::size_t i = 0; i < rows; ++i) signs.push_back(static_cast<Sign>(static_cast<int>(rng() % 3) - 1));
    auto w = strictly_feasible(m, signs);
    if (!w) continue;
    ++feasible;
    for (std::size_t i = 0; i < rows; ++i) CHECK(sign_of(m.row(i).dot(*w)) == signs[i]);
  }
  CHECK(feasible > 10);
}
