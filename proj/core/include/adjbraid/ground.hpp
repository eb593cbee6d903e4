#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace adjbraid {

using Mask = std::uint64_t;

/// Ordered list of distinct symbolic labels; all math runs on indices 0..n-1.
class GroundSet {
 public:
  explicit GroundSet(std::vector<std::string> labels);

  /// Labels "1".."n".
  static std::shared_ptr<const GroundSet> numbered(int n);
  static std::shared_ptr<const GroundSet> make(std::vector<std::string> labels);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int i) const { return labels_[static_cast<std::size_t>(i)]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<int> index_of(std::string_view label) const;
  Mask full_mask() const;
  /// True when every label is a single character, so subsets print without commas.
  bool compact() const { return compact_; }

  friend bool operator==(const GroundSet& a, const GroundSet& b) { return a.labels_ == b.labels_; }

 private:
  std::vector<std::string> labels_;
  bool compact_ = true;
};

using GroundPtr = std::shared_ptr<const GroundSet>;

/// Subset of a ground set as a bitmask over element indices.
struct Subset {
  Mask bits = 0;

  constexpr Subset() = default;
  constexpr explicit Subset(Mask m) : bits(m) {}
  static constexpr Subset singleton(int i) { return Subset(Mask{1} << i); }

  constexpr bool empty() const { return bits == 0; }
  constexpr int count() const { return std::popcount(bits); }
  constexpr bool contains(int i) const { return (bits >> i) & 1U; }
  constexpr bool subset_of(Subset o) const { return (bits & ~o.bits) == 0; }
  constexpr bool meets(Subset o) const { return (bits & o.bits) != 0; }
  constexpr int min_element() const { return std::countr_zero(bits); }

  constexpr Subset operator|(Subset o) const { return Subset(bits | o.bits); }
  constexpr Subset operator&(Subset o) const { return Subset(bits & o.bits); }
  constexpr Subset operator-(Subset o) const { return Subset(bits & ~o.bits); }

  friend constexpr bool operator==(Subset, Subset) = default;
  friend constexpr auto operator<=>(Subset, Subset) = default;
};

/// Elements of `s` in increasing index order.
std::vector<int> elements(Subset s);

/// Sorted label string, e.g. "13" or "a1,b" for multi-character labels.
std::string format_subset(const GroundSet& g, Subset s);

/// Set partition of a ground set; blocks sorted by smallest element.
class Partition {
 public:
  Partition(GroundPtr ground, std::vector<Subset> blocks);

  static Partition one_block(GroundPtr ground);
  static Partition singletons(GroundPtr ground);
  /// Parses "(12|34|5)" or "(a1,a2|b)" against a known ground set.
  static Partition parse(std::string_view text, GroundPtr ground);
  /// Parses and infers the ground set from the labels that appear.
  static Partition parse(std::string_view text);

  const GroundSet& ground() const { return *ground_; }
  const GroundPtr& ground_ptr() const { return ground_; }
  int n() const { return ground_->size(); }
  std::span<const Subset> blocks() const { return blocks_; }
  std::size_t size() const { return blocks_.size(); }
  Subset block(std::size_t i) const { return blocks_[i]; }
  /// Index of the block containing element `i`.
  std::size_t block_index_of(int i) const;
  bool has_block(Subset s) const;

  /// Replaces block `parent` by `left` and `parent - left`.
  Partition split(Subset parent, Subset left) const;
  /// Replaces blocks `a` and `b` by their union.
  Partition merge(Subset a, Subset b) const;

  std::string to_string() const;

  friend bool operator==(const Partition& a, const Partition& b);
  friend bool operator<(const Partition& a, const Partition& b);

 private:
  Partition(GroundPtr ground, std::vector<Subset> blocks, bool trusted);
  GroundPtr ground_;
  std::vector<Subset> blocks_;
};

bool same_ground(const Partition& a, const Partition& b);

/// True iff every block of `q` lies inside a block of `p`. Throws GroundMismatch.
bool is_finer(const Partition& q, const Partition& p);

/// E minus the union of the blocks of P contained in E.
Subset reduction(const Partition& p, Subset e);

/// Reduction of the complement I - E; pairs with reduction(p, e) as one hyperplane.
Subset complement_reduction(const Partition& p, Subset e);

/// Whether Redn_P(E) lies inside a single block of R. Throws NotFiner if P is not
/// finer than R and EmptyModP if E reduces to the empty set.
bool is_r_semisimple(const Partition& p, const Partition& r, Subset e);

/// Completion with singletons of the restriction of P to `t`.
Partition restrict_complete(const Partition& p, Subset t);

/// All set partitions of the ground set, in a fixed order.
std::vector<Partition> all_partitions(const GroundPtr& ground);

}  // namespace adjbraid
