#pragma once

#include <random>
#include <string_view>

#include "adjbraid/calculus.hpp"
#include "adjbraid/ground.hpp"

namespace testing {

using namespace adjbraid;

// Subset of 1..9 from its digits, e.g. S("358").
inline Subset S(std::string_view digits) {
  Subset s;
  for (char c : digits) s = s | Subset::singleton(c - '1');
  return s;
}

inline Partition P(std::string_view text, int n) { return Partition::parse(text, GroundSet::numbered(n)); }

inline Rational small_rational(std::mt19937_64& rng) {
  Rational q(static_cast<long>(rng() % 21) - 10, static_cast<unsigned long>(1 + rng() % 5));
  q.canonicalize();
  return q;
}

inline Functional random_functional(const SpacePtr& space, std::mt19937_64& rng) {
  Functional f(space);
  for (std::size_t i = 0; i < space->size(); ++i) f[i] = small_rational(rng);
  return f;
}

inline ShardVector random_vector(const SpacePtr& space, std::mt19937_64& rng) {
  ShardVector v(space);
  for (std::size_t i = 0; i < space->size(); ++i) {
    if (rng() % 3 == 0) v.add(i, small_rational(rng));
  }
  return v;
}

// Random set partition of 1..n: each element joins an existing block or opens one.
inline Partition random_partition(int n, std::mt19937_64& rng) {
  std::vector<Subset> blocks;
  for (int i = 0; i < n; ++i) {
    std::size_t k = rng() % (blocks.size() + 1);
    if (k == blocks.size()) {
      blocks.push_back(Subset::singleton(i));
    } else {
      blocks[k] = blocks[k] | Subset::singleton(i);
    }
  }
  return Partition(GroundSet::numbered(n), blocks);
}

}  // namespace testing
