#include "adjbraid/ground.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "adjbraid/errors.hpp"

namespace adjbraid {

GroundSet::GroundSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw Error("ground set must be nonempty");
  if (labels_.size() > 64) throw OutOfRange("ground set larger than 64 elements");
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (l.empty()) throw Error("empty label");
    for (char c : l) {
      if (c == '|' || c == ',' || c == '(' || c == ')' || c == '[' || c == ']' ||
          c == '{' || c == '}' || c == '@' || std::isspace(static_cast<unsigned char>(c))) {
        throw Error("label contains a reserved character: " + l);
      }
    }
    if (!seen.insert(l).second) throw Error("duplicate label: " + l);
    if (l.size() != 1) compact_ = false;
  }
}

GroundPtr GroundSet::numbered(int n) {
  if (n < 1 || n > 64) throw OutOfRange("ground set size must be in 1..64");
  std::vector<std::string> labels;
  for (int i = 1; i <= n; ++i) labels.push_back(std::to_string(i));
  return make(std::move(labels));
}

GroundPtr GroundSet::make(std::vector<std::string> labels) {
  return std::make_shared<const GroundSet>(std::move(labels));
}

std::optional<int> GroundSet::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return static_cast<int>(i);
  }
  return std::nullopt;
}

Mask GroundSet::full_mask() const {
  return labels_.size() == 64 ? ~Mask{0} : (Mask{1} << labels_.size()) - 1;
}

std::vector<int> elements(Subset s) {
  std::vector<int> out;
  for (Mask m = s.bits; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

std::string format_subset(const GroundSet& g, Subset s) {
  std::string out;
  bool first = true;
  for (int i : elements(s)) {
    if (!first && !g.compact()) out += ',';
    out += g.label(i);
    first = false;
  }
  return out;
}

namespace {

void canonicalize(std::vector<Subset>& blocks) {
  std::sort(blocks.begin(), blocks.end(),
            [](Subset a, Subset b) { return a.min_element() < b.min_element(); });
}

// Labels of a partition or leaf body: compact grounds read one char per label,
// otherwise labels are comma separated.
std::vector<std::string> split_labels(std::string_view body, bool compact) {
  std::vector<std::string> out;
  if (compact) {
    for (char c : body) out.emplace_back(1, c);
    return out;
  }
  std::string cur;
  for (char c : body) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string_view> split_blocks(std::string_view text) {
  std::size_t b = text.find_first_not_of(" \t");
  std::size_t e = text.find_last_not_of(" \t");
  if (b == std::string_view::npos || text[b] != '(' || text[e] != ')') {
    throw ParseError("partition must be enclosed in parentheses", b == std::string_view::npos ? 0 : b);
  }
  std::string_view inner = text.substr(b + 1, e - b - 1);
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= inner.size(); ++i) {
    if (i == inner.size() || inner[i] == '|') {
      std::string_view part = inner.substr(start, i - start);
      if (part.empty()) throw ParseError("empty block", b + 1 + start);
      parts.push_back(part);
      start = i + 1;
    }
  }
  return parts;
}

bool all_integers(const std::vector<std::string>& labels) {
  return std::all_of(labels.begin(), labels.end(), [](const std::string& s) {
    return !s.empty() && s.size() < 18 &&
           std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  });
}

}  // namespace

Partition::Partition(GroundPtr ground, std::vector<Subset> blocks, bool)
    : ground_(std::move(ground)), blocks_(std::move(blocks)) {}

Partition::Partition(GroundPtr ground, std::vector<Subset> blocks)
    : ground_(std::move(ground)), blocks_(std::move(blocks)) {
  if (!ground_) throw Error("partition without ground set");
  Mask seen = 0;
  for (Subset b : blocks_) {
    if (b.empty()) throw Error("partition has an empty block");
    if ((b.bits & ~ground_->full_mask()) != 0) throw Error("block outside the ground set");
    if ((seen & b.bits) != 0) throw Error("partition blocks overlap");
    seen |= b.bits;
  }
  if (seen != ground_->full_mask()) throw Error("partition blocks do not cover the ground set");
  canonicalize(blocks_);
}

Partition Partition::one_block(GroundPtr ground) {
  Subset all(ground->full_mask());
  return Partition(std::move(ground), {all}, true);
}

Partition Partition::singletons(GroundPtr ground) {
  std::vector<Subset> blocks;
  for (int i = 0; i < ground->size(); ++i) blocks.push_back(Subset::singleton(i));
  return Partition(std::move(ground), std::move(blocks), true);
}

Partition Partition::parse(std::string_view text, GroundPtr ground) {
  std::vector<Subset> blocks;
  for (std::string_view part : split_blocks(text)) {
    Subset s;
    for (const auto& l : split_labels(part, ground->compact())) {
      auto idx = ground->index_of(l);
      if (!idx) throw ParseError("unknown label '" + l + "'", 0);
      if (s.contains(*idx)) throw ParseError("repeated label '" + l + "'", 0);
      s = s | Subset::singleton(*idx);
    }
    blocks.push_back(s);
  }
  return Partition(std::move(ground), std::move(blocks));
}

Partition Partition::parse(std::string_view text) {
  auto parts = split_blocks(text);
  bool multi = text.find(',') != std::string_view::npos;
  std::vector<std::string> labels;
  for (std::string_view part : parts) {
    for (auto& l : split_labels(part, !multi)) labels.push_back(l);
  }
  std::vector<std::string> sorted = labels;
  if (all_integers(sorted)) {
    std::sort(sorted.begin(), sorted.end(), [](const std::string& a, const std::string& b) {
      return std::stoll(a) < std::stoll(b);
    });
  } else {
    std::sort(sorted.begin(), sorted.end());
  }
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ParseError("repeated label in partition", 0);
  }
  return parse(text, GroundSet::make(std::move(sorted)));
}

std::size_t Partition::block_index_of(int i) const {
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    if (blocks_[j].contains(i)) return j;
  }
  throw Error("element outside the ground set");
}

bool Partition::has_block(Subset s) const {
  return std::find(blocks_.begin(), blocks_.end(), s) != blocks_.end();
}

Partition Partition::split(Subset parent, Subset left) const {
  if (!has_block(parent)) throw BoundaryMismatch("cut parent is not a block of the partition");
  if (left.empty() || left == parent || !left.subset_of(parent)) {
    throw BoundaryMismatch("cut side must be a proper nonempty subset of its block");
  }
  std::vector<Subset> blocks;
  for (Subset b : blocks_) {
    if (b == parent) {
      blocks.push_back(left);
      blocks.push_back(parent - left);
    } else {
      blocks.push_back(b);
    }
  }
  canonicalize(blocks);
  return Partition(ground_, std::move(blocks), true);
}

Partition Partition::merge(Subset a, Subset b) const {
  if (!has_block(a) || !has_block(b) || a == b) throw BoundaryMismatch("merge needs two distinct blocks");
  std::vector<Subset> blocks;
  for (Subset s : blocks_) {
    if (s == b) continue;
    blocks.push_back(s == a ? (a | b) : s);
  }
  canonicalize(blocks);
  return Partition(ground_, std::move(blocks), true);
}

std::string Partition::to_string() const {
  std::string out = "(";
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    if (j) out += '|';
    out += format_subset(*ground_, blocks_[j]);
  }
  return out + ")";
}

bool same_ground(const Partition& a, const Partition& b) {
  return a.ground_ptr() == b.ground_ptr() || a.ground() == b.ground();
}

bool operator==(const Partition& a, const Partition& b) {
  return a.blocks_ == b.blocks_ && same_ground(a, b);
}

bool operator<(const Partition& a, const Partition& b) {
  if (a.blocks_.size() != b.blocks_.size()) return a.blocks_.size() < b.blocks_.size();
  return a.blocks_ < b.blocks_;
}

bool is_finer(const Partition& q, const Partition& p) {
  if (!same_ground(q, p)) throw GroundMismatch("partitions over different ground sets");
  for (Subset b : q.blocks()) {
    bool inside = false;
    for (Subset c : p.blocks()) {
      if (b.subset_of(c)) {
        inside = true;
        break;
      }
    }
    if (!inside) return false;
  }
  return true;
}

Subset reduction(const Partition& p, Subset e) {
  Mask removed = 0;
  for (Subset b : p.blocks()) {
    if (b.subset_of(e)) removed |= b.bits;
  }
  return e - Subset(removed);
}

Subset complement_reduction(const Partition& p, Subset e) {
  Mask out = 0;
  for (Subset b : p.blocks()) {
    Subset inter = b & e;
    if (!inter.empty() && inter != b) out |= (b - e).bits;
  }
  return Subset(out);
}

bool is_r_semisimple(const Partition& p, const Partition& r, Subset e) {
  if (!is_finer(p, r)) throw NotFiner("P is not finer than R");
  Subset red = reduction(p, e);
  if (red.empty()) throw EmptyModP("subset is empty modulo P");
  for (Subset b : r.blocks()) {
    if (red.subset_of(b)) return true;
  }
  return false;
}

Partition restrict_complete(const Partition& p, Subset t) {
  std::vector<Subset> blocks;
  for (Subset b : p.blocks()) {
    if (b.subset_of(t)) {
      blocks.push_back(b);
    } else if (b.meets(t)) {
      throw NotFiner("block straddles the restriction set");
    }
  }
  for (int i : elements(Subset(p.ground().full_mask()) - t)) blocks.push_back(Subset::singleton(i));
  return Partition(p.ground_ptr(), std::move(blocks));
}

namespace {

void partitions_rec(int i, int n, std::vector<Subset>& cur, const GroundPtr& g, std::vector<Partition>& out) {
  if (i == n) {
    out.emplace_back(g, cur);
    return;
  }
  for (std::size_t j = 0; j < cur.size(); ++j) {
    cur[j] = cur[j] | Subset::singleton(i);
    partitions_rec(i + 1, n, cur, g, out);
    cur[j] = cur[j] - Subset::singleton(i);
  }
  cur.push_back(Subset::singleton(i));
  partitions_rec(i + 1, n, cur, g, out);
  cur.pop_back();
}

}  // namespace

std::vector<Partition> all_partitions(const GroundPtr& ground) {
  if (ground->size() > 12) throw OutOfRange("too many partitions to list");
  std::vector<Partition> out;
  std::vector<Subset> cur;
  partitions_rec(0, ground->size(), cur, ground, out);
  return out;
}

}  // namespace adjbraid
