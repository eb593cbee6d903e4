#include "adjbraid/forests.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "adjbraid/errors.hpp"

namespace adjbraid {

LayeredForest::LayeredForest(Partition source, std::vector<Cut> cuts)
    : source_(std::move(source)), target_(source_), cuts_(std::move(cuts)) {
  for (const Cut& c : cuts_) {
    if (!target_.has_block(c.parent)) {
      throw BoundaryMismatch("cut parent " + format_subset(target_.ground(), c.parent) +
                             " is not a block of " + target_.to_string());
    }
    if (c.left.empty() || !c.left.subset_of(c.parent) || c.left == c.parent) {
      throw BoundaryMismatch("cut must split its block into two nonempty parts");
    }
    target_ = target_.split(c.parent, c.left);
  }
}

LayeredForest LayeredForest::identity(Partition p) { return LayeredForest(std::move(p), {}); }

Partition LayeredForest::stage(std::size_t k) const {
  if (k > cuts_.size()) throw OutOfRange("forest stage beyond its last cut");
  Partition p = source_;
  for (std::size_t i = 0; i < k; ++i) p = p.split(cuts_[i].parent, cuts_[i].left);
  return p;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct SyntaxNode {
  bool leaf = true;
  std::vector<std::string> labels;  // leaf only
  bool bare = false;                // leaf written without braces
  std::size_t pos = 0;
  int left = -1;
  int right = -1;
};

bool is_label_char(char c) {
  return !(c == '|' || c == ',' || c == '(' || c == ')' || c == '[' || c == ']' || c == '{' ||
           c == '}' || c == '@' || std::isspace(static_cast<unsigned char>(c)));
}

class ForestParser {
 public:
  explicit ForestParser(std::string_view text) : text_(text) {}

  void parse() {
    skip_ws();
    roots_.push_back(tree());
    skip_ws();
    while (peek() == '|') {
      ++pos_;
      skip_ws();
      roots_.push_back(tree());
      skip_ws();
    }
    if (peek() == '@') {
      ++pos_;
      layering_pos_ = pos_;
      std::size_t start = pos_;
      while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      layering_ = std::string(text_.substr(start, pos_ - start));
      if (layering_->empty()) throw ParseError("empty layering annotation", start);
      skip_ws();
    }
    if (pos_ != text_.size()) throw ParseError("unexpected character in forest", pos_);
  }

  std::vector<SyntaxNode> nodes_;
  std::vector<int> roots_;
  std::optional<std::string> layering_;
  std::size_t layering_pos_ = 0;

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  void expect(char c) {
    skip_ws();
    if (peek() != c) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
    skip_ws();
  }

  int tree() {
    skip_ws();
    SyntaxNode node;
    node.pos = pos_;
    if (peek() == '[') {
      ++pos_;
      int l = tree();
      expect(',');
      int r = tree();
      expect(']');
      node.leaf = false;
      node.left = l;
      node.right = r;
    } else if (peek() == '{') {
      ++pos_;
      while (true) {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && is_label_char(text_[pos_])) ++pos_;
        if (start == pos_) throw ParseError("expected a label", pos_);
        node.labels.emplace_back(text_.substr(start, pos_ - start));
        skip_ws();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        if (peek() != '}') throw ParseError("expected ',' or '}'", pos_);
        ++pos_;
        break;
      }
    } else {
      std::size_t start = pos_;
      while (pos_ < text_.size() && is_label_char(text_[pos_])) ++pos_;
      if (start == pos_) throw ParseError("expected a leaf or '['", pos_);
      node.labels.emplace_back(text_.substr(start, pos_ - start));
      node.bare = true;
    }
    nodes_.push_back(std::move(node));
    return static_cast<int>(nodes_.size()) - 1;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

struct ResolvedNode {
  Subset set;
  int left = -1;
  int right = -1;
  bool leaf() const { return left < 0; }
};

// Internal nodes in pre-order, left branch first (or right first when `right_first`).
void preorder(const std::vector<ResolvedNode>& nodes, int v, bool right_first, std::vector<int>& out) {
  if (nodes[static_cast<std::size_t>(v)].leaf()) return;
  out.push_back(v);
  const auto& n = nodes[static_cast<std::size_t>(v)];
  preorder(nodes, right_first ? n.right : n.left, right_first, out);
  preorder(nodes, right_first ? n.left : n.right, right_first, out);
}

LayeredForest resolve(const ForestParser& parsed, GroundPtr ground) {
  std::vector<ResolvedNode> nodes(parsed.nodes_.size());
  // Children are parsed before their parents, so a forward pass resolves bottom-up.
  for (std::size_t i = 0; i < parsed.nodes_.size(); ++i) {
    const SyntaxNode& s = parsed.nodes_[i];
    if (s.leaf) {
      std::vector<std::string> labels;
      if (s.bare && ground->compact()) {
        for (char c : s.labels.front()) labels.emplace_back(1, c);
      } else {
        labels = s.labels;
      }
      Subset set;
      for (const auto& l : labels) {
        auto idx = ground->index_of(l);
        if (!idx) throw ParseError("unknown label '" + l + "'", s.pos);
        if (set.contains(*idx)) throw ParseError("repeated label '" + l + "'", s.pos);
        set = set | Subset::singleton(*idx);
      }
      nodes[i].set = set;
    } else {
      const auto& l = nodes[static_cast<std::size_t>(s.left)];
      const auto& r = nodes[static_cast<std::size_t>(s.right)];
      if (l.set.meets(r.set)) throw ParseError("branches share a label", s.pos);
      nodes[i] = ResolvedNode{l.set | r.set, s.left, s.right};
    }
  }

  std::vector<Subset> roots;
  std::vector<int> order;
  Mask seen = 0;
  for (int r : parsed.roots_) {
    Subset b = nodes[static_cast<std::size_t>(r)].set;
    if ((seen & b.bits) != 0) throw ParseError("trees share a label", parsed.nodes_[static_cast<std::size_t>(r)].pos);
    seen |= b.bits;
    roots.push_back(b);
    preorder(nodes, r, false, order);
  }
  if (seen != ground->full_mask()) throw ParseError("forest does not cover the ground set", 0);

  // parent[v] among internal nodes, for the layering check.
  std::vector<int> parent(nodes.size(), -1);
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    if (nodes[v].leaf()) continue;
    parent[static_cast<std::size_t>(nodes[v].left)] = static_cast<int>(v);
    parent[static_cast<std::size_t>(nodes[v].right)] = static_cast<int>(v);
  }

  std::vector<int> layered;
  if (!parsed.layering_) {
    int tops = 0;
    bool chain = true;
    for (int v : order) {
      const auto& n = nodes[static_cast<std::size_t>(v)];
      if (parent[static_cast<std::size_t>(v)] < 0) ++tops;
      if (!nodes[static_cast<std::size_t>(n.left)].leaf() && !nodes[static_cast<std::size_t>(n.right)].leaf()) chain = false;
    }
    if (tops > 1 || !chain) throw AmbiguousLayering("forest admits several layerings; add an '@' annotation");
    layered = order;
  } else if (*parsed.layering_ == "L") {
    layered = order;
  } else if (*parsed.layering_ == "R") {
    for (int r : parsed.roots_) preorder(nodes, r, true, layered);
  } else {
    std::string_view text = *parsed.layering_;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
      if (i < text.size() && text[i] != ',') continue;
      std::string_view tok = text.substr(start, i - start);
      if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        throw ParseError("layering must list node indices", parsed.layering_pos_ + start);
      }
      std::size_t k = std::stoul(std::string(tok));
      if (k >= order.size()) throw ParseError("layering index out of range", parsed.layering_pos_ + start);
      layered.push_back(order[k]);
      start = i + 1;
    }
    std::set<int> distinct(layered.begin(), layered.end());
    if (layered.size() != order.size() || distinct.size() != order.size()) {
      throw ParseError("layering must be a permutation of the node indices", parsed.layering_pos_);
    }
  }
  std::set<int> placed;
  std::vector<Cut> cuts;
  for (int v : layered) {
    int p = parent[static_cast<std::size_t>(v)];
    if (p >= 0 && !placed.count(p)) throw ParseError("layering places a node before its parent", parsed.layering_pos_);
    placed.insert(v);
    const auto& n = nodes[static_cast<std::size_t>(v)];
    cuts.push_back(Cut{n.set, nodes[static_cast<std::size_t>(n.left)].set});
  }
  return LayeredForest(Partition(ground, roots), std::move(cuts));
}

bool all_integers(const std::vector<std::string>& labels) {
  return std::all_of(labels.begin(), labels.end(), [](const std::string& s) {
    return !s.empty() && s.size() < 18 &&
           std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  });
}

}  // namespace

LayeredForest parse_forest(std::string_view text, GroundPtr ground) {
  ForestParser parser(text);
  parser.parse();
  return resolve(parser, std::move(ground));
}

LayeredForest parse_forest(std::string_view text) {
  ForestParser parser(text);
  parser.parse();
  bool compact = true;
  for (const auto& n : parser.nodes_) {
    if (!n.leaf || n.bare) continue;
    for (const auto& l : n.labels) compact = compact && l.size() == 1;
  }
  std::vector<std::string> labels;
  for (const auto& n : parser.nodes_) {
    if (!n.leaf) continue;
    if (n.bare && compact) {
      for (char c : n.labels.front()) labels.emplace_back(1, c);
    } else {
      labels.insert(labels.end(), n.labels.begin(), n.labels.end());
    }
  }
  if (all_integers(labels)) {
    std::sort(labels.begin(), labels.end(),
              [](const std::string& a, const std::string& b) { return std::stoll(a) < std::stoll(b); });
  } else {
    std::sort(labels.begin(), labels.end());
  }
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
    throw ParseError("repeated label in forest", 0);
  }
  return resolve(parser, GroundSet::make(std::move(labels)));
}

// ---------------------------------------------------------------------------
// Formatting

namespace {

std::string format_leaf(const GroundSet& g, Subset s) {
  if (g.compact()) return format_subset(g, s);
  auto el = elements(s);
  if (el.size() == 1) return g.label(el.front());
  std::string out = "{";
  for (std::size_t i = 0; i < el.size(); ++i) {
    if (i) out += ',';
    out += g.label(el[i]);
  }
  return out + "}";
}

}  // namespace

std::string format_forest(const LayeredForest& f) {
  const GroundSet& g = f.source().ground();
  std::map<Mask, std::size_t> cut_of;  // parent block -> position in the cut list
  for (std::size_t i = 0; i < f.cuts().size(); ++i) cut_of.emplace(f.cuts()[i].parent.bits, i);

  std::vector<std::size_t> preorder_cuts;
  std::function<std::string(Subset)> emit = [&](Subset b) -> std::string {
    auto it = cut_of.find(b.bits);
    if (it == cut_of.end()) return format_leaf(g, b);
    const Cut& c = f.cuts()[it->second];
    preorder_cuts.push_back(it->second);
    std::string l = emit(c.left);
    std::string r = emit(c.right());
    return "[" + l + "," + r + "]";
  };
  std::string out;
  for (std::size_t i = 0; i < f.source().size(); ++i) {
    if (i) out += '|';
    out += emit(f.source().block(i));
  }
  // Pre-order index of every cut; the layering lists them in cut order.
  std::vector<std::size_t> index(f.size());
  for (std::size_t k = 0; k < preorder_cuts.size(); ++k) index[preorder_cuts[k]] = k;
  if (layerings(f).size() > 1) {
    out += '@';
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(index[i]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Algebra

LayeredForest compose(const LayeredForest& f1, const LayeredForest& f2) {
  if (!(f1.target() == f2.source())) {
    throw BoundaryMismatch("cannot compose: " + f1.target().to_string() + " vs " + f2.source().to_string());
  }
  std::vector<Cut> cuts = f1.cuts();
  cuts.insert(cuts.end(), f2.cuts().begin(), f2.cuts().end());
  return LayeredForest(f1.source(), std::move(cuts));
}

SignedForestSum antisymmetrize(const LayeredForest& f) {
  const std::size_t k = f.size();
  if (k >= 31) throw OutOfRange("too many cuts to antisymmetrize");
  SignedForestSum out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    std::vector<Cut> cuts = f.cuts();
    int sign = 1;
    for (std::size_t i = 0; i < k; ++i) {
      if ((mask >> i) & 1U) {
        cuts[i] = cuts[i].reversed();
        sign = -sign;
      }
    }
    out.push_back(SignedForest{sign, LayeredForest(f.source(), std::move(cuts))});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

// Nonempty proper sub-unions of the leaves inside `block`, ascending by mask.
std::vector<Subset> leaf_unions(Subset block, const std::vector<Subset>& leaves) {
  std::vector<Subset> inside;
  for (Subset l : leaves) {
    if (l.subset_of(block)) inside.push_back(l);
  }
  std::vector<Subset> out;
  const std::size_t m = inside.size();
  for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << m); ++mask) {
    Subset u;
    for (std::size_t i = 0; i < m; ++i) {
      if ((mask >> i) & 1U) u = u | inside[i];
    }
    out.push_back(u);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool forest_less(const LayeredForest& a, const LayeredForest& b) { return a.cuts() < b.cuts(); }

}  // namespace

std::vector<LayeredForest> all_trees(const Partition& p, Subset block, const std::vector<Subset>& leaves) {
  if (!p.has_block(block)) throw BoundaryMismatch("tree root is not a block of the partition");
  Mask seen = 0;
  for (Subset l : leaves) {
    if (l.empty() || !l.subset_of(block) || (seen & l.bits) != 0) throw Error("leaves do not partition the block");
    seen |= l.bits;
  }
  if (seen != block.bits) throw Error("leaves do not partition the block");

  std::vector<LayeredForest> out;
  std::vector<Cut> cuts;
  std::function<void(const Partition&)> grow = [&](const Partition& cur) {
    std::vector<Subset> open;
    for (Subset b : cur.blocks()) {
      if (!b.subset_of(block)) continue;
      if (std::find(leaves.begin(), leaves.end(), b) == leaves.end()) open.push_back(b);
    }
    if (open.empty()) {
      out.emplace_back(p, cuts);
      return;
    }
    std::sort(open.begin(), open.end());
    for (Subset b : open) {
      for (Subset left : leaf_unions(b, leaves)) {
        cuts.push_back(Cut{b, left});
        grow(cur.split(b, left));
        cuts.pop_back();
      }
    }
  };
  grow(p);
  std::sort(out.begin(), out.end(), forest_less);
  return out;
}

std::vector<LayeredForest> all_forests(const Partition& p, std::size_t max_cuts) {
  std::vector<LayeredForest> out;
  std::vector<Cut> cuts;
  std::function<void(const Partition&)> grow = [&](const Partition& cur) {
    out.emplace_back(p, cuts);
    if (cuts.size() == max_cuts) return;
    std::vector<Subset> blocks(cur.blocks().begin(), cur.blocks().end());
    std::sort(blocks.begin(), blocks.end());
    for (Subset b : blocks) {
      if (b.count() < 2) continue;
      // Proper nonempty submasks of b in ascending order.
      std::vector<Subset> lefts;
      for (Mask s = (b.bits - 1) & b.bits; s != 0; s = (s - 1) & b.bits) lefts.emplace_back(s);
      std::sort(lefts.begin(), lefts.end());
      for (Subset left : lefts) {
        cuts.push_back(Cut{b, left});
        grow(cur.split(b, left));
        cuts.pop_back();
      }
    }
  };
  grow(p);
  return out;
}

std::vector<LayeredForest> layerings(const LayeredForest& f) {
  const auto& cuts = f.cuts();
  const std::size_t k = cuts.size();
  // parent[i]: the cut whose output block cut i splits.
  std::vector<int> parent(k, -1);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (cuts[j].left == cuts[i].parent || cuts[j].right() == cuts[i].parent) parent[i] = static_cast<int>(j);
    }
  }
  std::vector<LayeredForest> out;
  std::vector<Cut> order;
  std::vector<bool> used(k, false);
  std::function<void()> extend = [&]() {
    if (order.size() == k) {
      out.emplace_back(f.source(), order);
      return;
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (used[i] || (parent[i] >= 0 && !used[static_cast<std::size_t>(parent[i])])) continue;
      used[i] = true;
      order.push_back(cuts[i]);
      extend();
      order.pop_back();
      used[i] = false;
    }
  };
  extend();
  std::sort(out.begin(), out.end(), forest_less);
  return out;
}

}  // namespace adjbraid
