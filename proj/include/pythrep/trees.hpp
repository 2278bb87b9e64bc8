#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pythrep/rational.hpp"

namespace pythrep {

// Planar rooted n-ary tree. Immutable; copies share structure.
// Leaves are indexed 1..L left to right. Every internal node has exactly
// `arity` children, so L = m*(arity-1) + 1 with m internal nodes.
class Tree {
 public:
  explicit Tree(int arity = 2) : arity_(arity) { check_arity(arity); }

  static Tree leaf(int arity = 2) { return Tree(arity); }

  static Tree node(std::vector<Tree> children) {
    if (children.empty()) throw std::invalid_argument("node needs children");
    int ar = children[0].arity();
    if (static_cast<int>(children.size()) != ar)
      throw std::invalid_argument("node must have exactly arity children");
    Tree t(ar);
    int leaves = 0;
    for (const Tree& c : children) {
      if (c.arity() != ar) throw std::invalid_argument("mixed arity");
      leaves += c.leaf_count();
    }
    t.children_ = std::make_shared<const std::vector<Tree>>(std::move(children));
    t.leaf_count_ = leaves;
    return t;
  }

  static Tree caret(int arity = 2) {
    return node(std::vector<Tree>(arity, leaf(arity)));
  }

  bool is_leaf() const { return children_ == nullptr; }
  int arity() const { return arity_; }
  int leaf_count() const { return leaf_count_; }
  const std::vector<Tree>& children() const {
    if (is_leaf()) throw std::logic_error("leaf has no children");
    return *children_;
  }

  friend bool operator==(const Tree& a, const Tree& b) {
    if (a.children_ == b.children_) return a.arity_ == b.arity_;
    if (a.is_leaf() != b.is_leaf() || a.arity_ != b.arity_ ||
        a.leaf_count_ != b.leaf_count_)
      return false;
    if (a.is_leaf()) return true;
    for (int i = 0; i < a.arity_; ++i)
      if (!((*a.children_)[i] == (*b.children_)[i])) return false;
    return true;
  }
  friend bool operator!=(const Tree& a, const Tree& b) { return !(a == b); }

 private:
  static void check_arity(int ar) {
    if (ar < 2) throw std::invalid_argument("arity must be >= 2");
  }
  int arity_;
  int leaf_count_ = 1;
  std::shared_ptr<const std::vector<Tree>> children_;  // null => leaf
};

// Ordered list of trees; a morphism from its root count to its leaf count.
struct Forest {
  int arity = 2;
  std::vector<Tree> trees;

  Forest() = default;
  Forest(int ar, std::vector<Tree> ts) : arity(ar), trees(std::move(ts)) {
    for (const Tree& t : trees)
      if (t.arity() != arity) throw std::invalid_argument("mixed arity forest");
  }
  explicit Forest(Tree t) : arity(t.arity()), trees{std::move(t)} {}

  int roots() const { return static_cast<int>(trees.size()); }
  int leaves() const {
    int n = 0;
    for (const Tree& t : trees) n += t.leaf_count();
    return n;
  }
  friend bool operator==(const Forest& a, const Forest& b) {
    return a.arity == b.arity && a.trees == b.trees;
  }
};

// [num/arity^level, (num+1)/arity^level]
struct DyadicInterval {
  long long num = 0;
  int level = 0;
  int arity = 2;

  Rat lo() const { return Rat(num, ipow(arity, level)); }
  Rat hi() const { return Rat(num + 1, ipow(arity, level)); }
  Rat length() const { return Rat(1, ipow(arity, level)); }
  friend bool operator==(const DyadicInterval& a, const DyadicInterval& b) {
    return a.lo() == b.lo() && a.hi() == b.hi();
  }
  friend bool operator<(const DyadicInterval& a, const DyadicInterval& b) {
    return a.lo() < b.lo() || (a.lo() == b.lo() && a.hi() < b.hi());
  }
  std::string str() const {
    return "[" + to_string(lo()) + "," + to_string(hi()) + "]";
  }
};

inline std::string serialize(const Tree& t) {
  if (t.is_leaf()) return ".";
  std::string s = "(";
  for (const Tree& c : t.children()) s += serialize(c);
  return s + ")";
}

inline std::string serialize(const Forest& f) {
  std::string s = "[";
  for (int i = 0; i < f.roots(); ++i) {
    if (i) s += ",";
    s += serialize(f.trees[i]);
  }
  return s + "]";
}

namespace detail {
inline Tree parse_tree_at(const std::string& text, int arity, size_t& pos) {
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_ws();
  if (pos >= text.size())
    throw std::invalid_argument("tree syntax error at offset " + std::to_string(pos) +
                                ": unexpected end of input");
  if (text[pos] == '.') {
    ++pos;
    return Tree::leaf(arity);
  }
  if (text[pos] == '(') {
    size_t open = pos++;
    std::vector<Tree> children;
    for (int i = 0; i < arity; ++i) children.push_back(parse_tree_at(text, arity, pos));
    skip_ws();
    if (pos >= text.size() || text[pos] != ')')
      throw std::invalid_argument("tree syntax error at offset " + std::to_string(pos) +
                                  ": expected ')' for '(' at offset " + std::to_string(open) +
                                  " (arity " + std::to_string(arity) + ")");
    ++pos;
    return Tree::node(std::move(children));
  }
  throw std::invalid_argument("tree syntax error at offset " + std::to_string(pos) +
                              ": expected '.' or '('");
}
}  // namespace detail

inline Tree parse_tree(const std::string& text, int arity = 2) {
  size_t pos = 0;
  Tree t = detail::parse_tree_at(text, arity, pos);
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos != text.size())
    throw std::invalid_argument("tree syntax error at offset " + std::to_string(pos) +
                                ": trailing input");
  return t;
}

inline Forest identity_forest(int roots, int arity = 2) {
  return Forest(arity, std::vector<Tree>(roots, Tree::leaf(arity)));
}

// Forest with n roots whose i-th tree (1-based) is a caret; n + arity - 1 leaves.
inline Forest generator_forest(int i, int n, int arity = 2) {
  if (i < 1 || i > n) throw std::out_of_range("generator index out of range");
  Forest f = identity_forest(n, arity);
  f.trees[i - 1] = Tree::caret(arity);
  return f;
}

namespace detail {
inline Tree substitute(const Tree& t, const std::vector<Tree>& subs, int& cursor) {
  if (t.is_leaf()) return subs[cursor++];
  std::vector<Tree> ch;
  ch.reserve(t.arity());
  for (const Tree& c : t.children()) ch.push_back(substitute(c, subs, cursor));
  return Tree::node(std::move(ch));
}
}  // namespace detail

// Stacks `upper` on top of `lower`: root j of upper attaches to leaf j of lower.
inline Forest compose(const Forest& upper, const Forest& lower) {
  if (upper.arity != lower.arity) throw std::invalid_argument("compose: arity mismatch");
  if (upper.roots() != lower.leaves())
    throw std::invalid_argument("compose: roots(upper) != leaves(lower)");
  Forest out;
  out.arity = lower.arity;
  int cursor = 0;
  for (const Tree& t : lower.trees)
    out.trees.push_back(detail::substitute(t, upper.trees, cursor));
  return out;
}

inline Tree compose_tree(const Forest& upper, const Tree& lower) {
  Forest r = compose(upper, Forest(lower));
  return r.trees[0];
}

// Horizontal concatenation, p to the left of q.
inline Forest concat(const Forest& p, const Forest& q) {
  if (p.arity != q.arity) throw std::invalid_argument("concat: arity mismatch");
  Forest out = p;
  out.trees.insert(out.trees.end(), q.trees.begin(), q.trees.end());
  return out;
}

// Grows a single leaf (1-based, forest-global) by `sub`.
inline Forest grow_leaf(const Forest& f, int leaf_index, const Tree& sub) {
  std::vector<Tree> subs(f.leaves(), Tree::leaf(f.arity));
  subs.at(leaf_index - 1) = sub;
  return compose(Forest(f.arity, std::move(subs)), f);
}

using LeafAddress = std::vector<int>;  // digits 0..arity-1, root first

namespace detail {
inline bool find_leaf(const Tree& t, int target, int& seen, LeafAddress& addr) {
  if (t.is_leaf()) return ++seen == target;
  for (int i = 0; i < t.arity(); ++i) {
    addr.push_back(i);
    if (find_leaf(t.children()[i], target, seen, addr)) return true;
    addr.pop_back();
  }
  return false;
}
}  // namespace detail

inline LeafAddress leaf_address(const Tree& t, int leaf_index) {
  if (leaf_index < 1 || leaf_index > t.leaf_count())
    throw std::out_of_range("leaf index out of range");
  LeafAddress addr;
  int seen = 0;
  detail::find_leaf(t, leaf_index, seen, addr);
  return addr;
}

// All leaf addresses, in leaf order; one traversal.
inline std::vector<LeafAddress> leaf_addresses(const Tree& t) {
  std::vector<LeafAddress> out;
  out.reserve(t.leaf_count());
  LeafAddress cur;
  auto walk = [&](auto&& self, const Tree& node) -> void {
    if (node.is_leaf()) {
      out.push_back(cur);
      return;
    }
    for (int i = 0; i < node.arity(); ++i) {
      cur.push_back(i);
      self(self, node.children()[i]);
      cur.pop_back();
    }
  };
  walk(walk, t);
  return out;
}

inline int leaf_depth(const Tree& t, int leaf_index) {
  return static_cast<int>(leaf_address(t, leaf_index).size());
}

inline DyadicInterval interval_of_address(const LeafAddress& addr, int arity) {
  DyadicInterval iv;
  iv.arity = arity;
  iv.level = static_cast<int>(addr.size());
  long long num = 0;
  for (int d : addr) num = num * arity + d;
  iv.num = num;
  return iv;
}

inline DyadicInterval leaf_interval(const Tree& t, int leaf_index) {
  return interval_of_address(leaf_address(t, leaf_index), t.arity());
}

// Occurrences of each digit value along the root-to-leaf path.
inline std::vector<int> turn_counts(const Tree& t, int leaf_index) {
  std::vector<int> counts(t.arity(), 0);
  for (int d : leaf_address(t, leaf_index)) ++counts[d];
  return counts;
}

struct CommonRefinement {
  Tree w;
  Forest p;  // compose(p, s) == w
  Forest q;  // compose(q, t) == w
};

namespace detail {
inline Tree cr_descend(const Tree& s, const Tree& t, std::vector<Tree>& p_trees,
                       std::vector<Tree>& q_trees) {
  if (s.is_leaf()) {
    p_trees.push_back(t);
    for (int i = 0; i < t.leaf_count(); ++i) q_trees.push_back(Tree::leaf(t.arity()));
    return t;
  }
  if (t.is_leaf()) {
    q_trees.push_back(s);
    for (int i = 0; i < s.leaf_count(); ++i) p_trees.push_back(Tree::leaf(s.arity()));
    return s;
  }
  std::vector<Tree> ch;
  ch.reserve(s.arity());
  for (int i = 0; i < s.arity(); ++i)
    ch.push_back(cr_descend(s.children()[i], t.children()[i], p_trees, q_trees));
  return Tree::node(std::move(ch));
}
}  // namespace detail

// Minimal w with compose(p,s) = compose(q,t) = w, by simultaneous descent.
inline CommonRefinement common_refinement(const Tree& s, const Tree& t) {
  if (s.arity() != t.arity()) throw std::invalid_argument("arity mismatch");
  std::vector<Tree> p_trees, q_trees;
  Tree w = detail::cr_descend(s, t, p_trees, q_trees);
  return {w, Forest(s.arity(), std::move(p_trees)), Forest(t.arity(), std::move(q_trees))};
}

inline Tree full_tree(int level, int arity = 2) {
  if (level < 0) throw std::invalid_argument("negative level");
  if (level * (arity - 1) > 22) throw std::length_error("full_tree level cap exceeded");
  Tree t = Tree::leaf(arity);
  for (int i = 0; i < level; ++i) t = Tree::node(std::vector<Tree>(arity, t));
  return t;
}

inline int enumeration_cap(int arity) { return arity == 2 ? 10 : arity == 3 ? 7 : 6; }

namespace detail {
inline void compositions(int total, int parts, std::vector<int>& cur,
                         std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    if (total >= 1) {
      cur.push_back(total);
      out.push_back(cur);
      cur.pop_back();
    }
    return;
  }
  for (int first = 1; first + (parts - 1) <= total; ++first) {
    cur.push_back(first);
    compositions(total - first, parts - 1, cur, out);
    cur.pop_back();
  }
}
}  // namespace detail

// All trees with exactly `leaves` leaves, duplicate-free, sorted by serialization.
inline std::vector<Tree> enumerate_trees(int leaves, int arity = 2,
                                         int cap = -1) {
  if (cap < 0) cap = enumeration_cap(arity);
  if (leaves < 1) throw std::invalid_argument("need at least one leaf");
  if (leaves > cap) throw std::length_error("enumeration cap exceeded (leaves " +
                                            std::to_string(leaves) + " > cap " +
                                            std::to_string(cap) + ")");
  if (leaves == 1) return {Tree::leaf(arity)};
  std::vector<Tree> out;
  std::vector<std::vector<int>> splits;
  std::vector<int> cur;
  detail::compositions(leaves, arity, cur, splits);
  for (const auto& split : splits) {
    // cartesian product of child enumerations
    std::vector<std::vector<Tree>> choices;
    bool feasible = true;
    for (int part : split) {
      choices.push_back(enumerate_trees(part, arity, cap));
      feasible &= !choices.back().empty();
    }
    if (!feasible) continue;
    std::vector<int> idx(arity, 0);
    while (true) {
      std::vector<Tree> ch;
      for (int i = 0; i < arity; ++i) ch.push_back(choices[i][idx[i]]);
      out.push_back(Tree::node(std::move(ch)));
      int i = arity - 1;
      while (i >= 0 && ++idx[i] == static_cast<int>(choices[i].size())) idx[i--] = 0;
      if (i < 0) break;
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Tree& a, const Tree& b) { return serialize(a) < serialize(b); });
  return out;
}

// Cyclic rotation of a forest's tree list: result_m = f_{m+k} (1-based, mod roots).
inline Forest rotate_forest(const Forest& f, int k) {
  int n = f.roots();
  Forest out;
  out.arity = f.arity;
  out.trees.reserve(n);
  for (int m = 0; m < n; ++m) out.trees.push_back(f.trees[((m + k) % n + n) % n]);
  return out;
}

// Leaf offset of tree j (0-based): leaves of trees before j.
inline std::vector<int> forest_leaf_offsets(const Forest& f) {
  std::vector<int> off(f.roots() + 1, 0);
  for (int j = 0; j < f.roots(); ++j) off[j + 1] = off[j] + f.trees[j].leaf_count();
  return off;
}

}  // namespace pythrep
