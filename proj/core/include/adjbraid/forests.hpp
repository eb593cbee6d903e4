#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "adjbraid/ground.hpp"

namespace adjbraid {

/// One-step refinement [C,D]: block `parent` splits into the favored part `left`
/// and `right() = parent - left`.
struct Cut {
  Subset parent;
  Subset left;

  Subset right() const { return parent - left; }
  Cut reversed() const { return Cut{parent, right()}; }

  friend bool operator==(const Cut&, const Cut&) = default;
  friend auto operator<=>(const Cut&, const Cut&) = default;
};

/// Layered forest P <- Q as its ordered cut list, outermost layer first.
class LayeredForest {
 public:
  /// Replays `cuts` from `source`; throws BoundaryMismatch if a cut does not split
  /// a block present at that point.
  LayeredForest(Partition source, std::vector<Cut> cuts);
  static LayeredForest identity(Partition p);

  const Partition& source() const { return source_; }
  const Partition& target() const { return target_; }
  const std::vector<Cut>& cuts() const { return cuts_; }
  std::size_t size() const { return cuts_.size(); }
  /// Partition reached after the first `k` cuts (0 = source, size() = target).
  Partition stage(std::size_t k) const;

  friend bool operator==(const LayeredForest& a, const LayeredForest& b) {
    return a.cuts_ == b.cuts_ && a.source_ == b.source_;
  }

 private:
  Partition source_;
  Partition target_;
  std::vector<Cut> cuts_;
};

struct SignedForest {
  int sign;
  LayeredForest forest;
};
using SignedForestSum = std::vector<SignedForest>;

/// Grammar: forest := tree ("|" tree)* layering? ; tree := leaf | "[" tree "," tree "]" ;
/// leaf := label+ | "{" label ("," label)* "}" ; layering := "@" index ("," index)* | "@L" | "@R".
/// Internal nodes are numbered 0,1,... in pre-order, left branch first, trees in order;
/// the layering lists them outermost layer first. "@L"/"@R" are the pre-order layerings
/// visiting left/right branches first. A layering is required when the nodes admit
/// more than one.
LayeredForest parse_forest(std::string_view text, GroundPtr ground);
/// As above, inferring the ground from the labels (numeric order for integer labels).
LayeredForest parse_forest(std::string_view text);

/// Inverse of parse_forest; appends a numeric layering only when it is not unique.
std::string format_forest(const LayeredForest& f);

/// Throws BoundaryMismatch unless target(f1) == source(f2).
LayeredForest compose(const LayeredForest& f1, const LayeredForest& f2);

/// All 2^k orientation flips, sign = (-1)^(flips); the input comes first with sign +1.
SignedForestSum antisymmetrize(const LayeredForest& f);

/// Layered trees on `block` of `p` whose leaves are exactly `leaves`, completed with
/// sticks, ordered lexicographically by cut list.
std::vector<LayeredForest> all_trees(const Partition& p, Subset block, const std::vector<Subset>& leaves);

/// Every layered forest out of `p` with at most `max_cuts` cuts (identity included).
std::vector<LayeredForest> all_forests(const Partition& p, std::size_t max_cuts);

/// All layered forests with the same underlying (delayered) forest as `f`.
std::vector<LayeredForest> layerings(const LayeredForest& f);

}  // namespace adjbraid
