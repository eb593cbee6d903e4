#include <regex>
#include <set>

#include "adjbraid/errors.hpp"
#include "adjbraid/forests.hpp"
#include "doctest.h"
#include "render.hpp"

using namespace adjbraid;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t k = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++k;
  return k;
}

ShardVector derivative_of_zero_dim(const std::string& forest, int n) {
  auto f = parse_forest(forest, GroundSet::numbered(n));
  return dual_forest_derivative(f, ShardVector::basis(ShardSpace::of(f.target()), 0));
}

}  // namespace

TEST_CASE("plane picture at n = 3") {
  const std::string svg = render_svg(3, std::nullopt);
  CHECK(count(svg, "class=\"chamber\"") == 6);
  CHECK(count(svg, "<line class=\"wall\"") == 3);
  CHECK(count(svg, "class=\"label\"") == 6);
  CHECK(svg == render_svg(3, std::nullopt));

  const std::string hl = render_svg(3, derivative_of_zero_dim("[[1,2],3]", 3));
  CHECK(count(hl, "data-coefficient=") == 4);
  CHECK(count(hl, "fill=\"#e41a1c\"") == 2);
  CHECK(count(hl, "fill=\"#377eb8\"") == 2);
}

TEST_CASE("stereographic picture at n = 4") {
  const std::string svg = render_svg(4, std::nullopt);
  CHECK(count(svg, "<circle class=\"wall\"") == 7);
  CHECK(count(svg, "class=\"chamber\"") == 32);
  // Every chamber appears once.
  std::regex signs("data-signs=\"([+-]{7})\"");
  std::set<std::string> seen;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), signs); it != std::sregex_iterator(); ++it) {
    seen.insert((*it)[1]);
  }
  CHECK(seen.size() == 32);
  CHECK(svg.find("-0.000") == std::string::npos);

  const std::string l = render_svg(4, derivative_of_zero_dim("[[1,2],[3,4]]@L", 4));
  const std::string r = render_svg(4, derivative_of_zero_dim("[[1,2],[3,4]]@R", 4));
  CHECK(l != r);
  CHECK(count(l, "data-coefficient=") == 8);
  CHECK(l == render_svg(4, derivative_of_zero_dim("[[1,2],[3,4]]@L", 4)));
}

TEST_CASE("unsupported renders") {
  CHECK_THROWS_AS(render_svg(5, std::nullopt), OutOfRange);
  auto wrong = ShardVector::basis(ShardSpace::of(Partition::parse("(12|3)")), 0);
  CHECK_THROWS_AS(render_svg(3, wrong), SupportMismatch);
}
