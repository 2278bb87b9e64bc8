#pragma once

#include <algorithm>
#include <cassert>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pythrep/trees.hpp"

namespace pythrep {

enum class Flavor { F, T, V };

inline std::string flavor_name(Flavor f) {
  switch (f) {
    case Flavor::F: return "F";
    case Flavor::T: return "T";
    default: return "V";
  }
}

// Monotone increasing piecewise-linear lift of a map of [0,1] (interval case,
// v(0)=0) or of the circle (v(0) in [0,1), v(1) = v(0)+1). Exact rationals.
struct PLMap {
  std::vector<Rat> xs;  // 0 = xs[0] < ... < xs[m] = 1
  std::vector<Rat> vs;  // strictly increasing, vs[m] = vs[0] + 1
  bool circle = false;

  int pieces() const { return static_cast<int>(xs.size()) - 1; }

  static PLMap identity(bool circle = false) {
    return {{Rat(0), Rat(1)}, {Rat(0), Rat(1)}, circle};
  }

  Rat slope_of_piece(int i) const { return (vs[i + 1] - vs[i]) / (xs[i + 1] - xs[i]); }

  // Merges collinear adjacent pieces; canonical form for equality tests.
  void normalize() {
    std::vector<Rat> nxs{xs[0]}, nvs{vs[0]};
    for (int i = 0; i + 1 < static_cast<int>(xs.size()); ++i) {
      bool last = (i + 2 == static_cast<int>(xs.size()));
      if (!last) {
        Rat s1 = slope_of_piece(i), s2 = slope_of_piece(i + 1);
        if (s1 == s2) continue;  // drop interior breakpoint xs[i+1]
      }
      nxs.push_back(xs[i + 1]);
      nvs.push_back(vs[i + 1]);
    }
    // the loop above drops at most one point per iteration but must re-run on
    // chains of collinear pieces
    if (nxs.size() < xs.size()) {
      xs = std::move(nxs);
      vs = std::move(nvs);
      normalize();
    }
  }

  // Lift value at x in [0,1].
  Rat eval_lift(const Rat& x) const {
    if (x < Rat(0) || x > Rat(1)) throw std::domain_error("pl eval outside [0,1]");
    int lo = 0, hi = pieces();
    while (lo + 1 < hi) {
      int mid = (lo + hi) / 2;
      if (xs[mid] <= x) lo = mid; else hi = mid;
    }
    return vs[lo] + (x - xs[lo]) * slope_of_piece(lo);
  }

  // Circle maps return the representative in [0,1); interval maps the plain value.
  Rat eval(const Rat& x) const {
    Rat v = eval_lift(circle ? mod1(x) : x);
    return circle ? mod1(v) : v;
  }

  Rat slope_at(const Rat& x_in) const {
    Rat x = circle ? mod1(x_in) : x_in;
    for (int i = 0; i < pieces(); ++i) {
      if (xs[i] < x && x < xs[i + 1]) return slope_of_piece(i);
      if (x == xs[i] || x == xs[i + 1]) {
        // interior breakpoints after normalize() are genuine slope changes
        if (!circle && x == Rat(0)) return slope_of_piece(0);
        if (!circle && x == Rat(1)) return slope_of_piece(pieces() - 1);
        Rat left = slope_of_piece(x == xs[i] ? (i + pieces() - 1) % pieces() : i);
        Rat right = slope_of_piece(x == xs[i] ? i : (i + 1) % pieces());
        if (left == right) return right;
        throw std::domain_error("slope queried at a breakpoint");
      }
    }
    throw std::domain_error("slope query out of range");
  }

  friend bool operator==(const PLMap& a, const PLMap& b) {
    PLMap an = a, bn = b;
    an.normalize();
    bn.normalize();
    return an.circle == bn.circle && an.xs == bn.xs && an.vs == bn.vs;
  }
};

// Lift of g∘h (apply h first).
inline PLMap pl_compose(const PLMap& g, const PLMap& h) {
  // extended lift of g: g(x + j) = g(x) + j
  auto g_ext = [&](const Rat& y) {
    Rat f = floor_rat(y);
    return g.eval_lift(y - f) + f;
  };
  // breakpoints: h's own, plus h-preimages of g's (extended) breakpoints
  std::set<Rat> breaks(h.xs.begin(), h.xs.end());
  Rat v0 = h.vs.front(), v1 = h.vs.back();
  for (size_t i = 0; i + 1 < g.xs.size(); ++i) {
    for (long long j = v0.numerator() / v0.denominator() - 1; Rat(j) + g.xs[i] <= v1; ++j) {
      Rat b = g.xs[i] + Rat(j);
      if (b < v0 || b > v1) continue;
      // invert h at b
      for (int p = 0; p < h.pieces(); ++p) {
        if (h.vs[p] <= b && b <= h.vs[p + 1]) {
          Rat x = h.xs[p] + (b - h.vs[p]) / h.slope_of_piece(p);
          breaks.insert(x);
          break;
        }
      }
    }
  }
  PLMap out;
  out.circle = g.circle || h.circle;
  for (const Rat& x : breaks) {
    out.xs.push_back(x);
    out.vs.push_back(g_ext(h.eval_lift(x)));
  }
  Rat shift = floor_rat(out.vs.front());
  for (Rat& v : out.vs) v -= shift;
  out.normalize();
  return out;
}

inline PLMap pl_inverse(const PLMap& m) {
  // pieces of the inverse in (value, point) coordinates, re-anchored to [0,1]
  PLMap out;
  out.circle = m.circle;
  std::vector<std::pair<Rat, Rat>> pts;  // (y, psi(y)) samples at breakpoints
  Rat v0 = m.vs.front();
  // part A: y in [0, v0] comes from values in [1, v0+1]: psi(y) = m^{-1}(y+1)
  // part B: y in [v0, 1] comes from values in [v0, 1]:   psi(y) = m^{-1}(y) + 1
  for (int pass = 0; pass < 2; ++pass) {
    Rat off = pass == 0 ? Rat(1) : Rat(0);
    Rat add = pass == 0 ? Rat(0) : Rat(1);
    for (int i = 0; i <= m.pieces(); ++i) {
      Rat y = m.vs[i] - off;
      if (y < Rat(0) || y > Rat(1)) continue;
      pts.emplace_back(y, m.xs[i] + add);
    }
    // boundary values 0 / v0 / 1 may fall inside a piece
    for (Rat y : {Rat(0), v0, Rat(1)}) {
      Rat target = y + off;
      if (target < m.vs.front() || target > m.vs.back()) continue;
      for (int p = 0; p < m.pieces(); ++p)
        if (m.vs[p] <= target && target <= m.vs[p + 1]) {
          pts.emplace_back(y, m.xs[p] + (target - m.vs[p]) / m.slope_of_piece(p) + add);
          break;
        }
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  for (auto& [y, x] : pts) {
    if (!out.xs.empty() && y == out.xs.back()) continue;
    if (y < Rat(0) || y > Rat(1)) continue;
    out.xs.push_back(y);
    out.vs.push_back(x);
  }
  Rat shift = floor_rat(out.vs.front());
  for (Rat& v : out.vs) v -= shift;
  out.normalize();
  return out;
}

// Lebesgue measure of {x : m(x) = x (mod 1 on the circle)}.
inline Rat pl_fixed_measure(const PLMap& m) {
  Rat total(0);
  for (int i = 0; i < m.pieces(); ++i) {
    Rat offset = m.vs[i] - m.xs[i];
    if (m.slope_of_piece(i) == Rat(1) && offset.denominator() == 1)
      total += m.xs[i + 1] - m.xs[i];
  }
  return total;
}

// Lebesgue measure of {x : a(x) != b(x)}.
inline Rat pl_distance(const PLMap& a, const PLMap& b) {
  std::set<Rat> breaks(a.xs.begin(), a.xs.end());
  breaks.insert(b.xs.begin(), b.xs.end());
  std::vector<Rat> xs(breaks.begin(), breaks.end());
  Rat total(0);
  for (size_t i = 0; i + 1 < xs.size(); ++i) {
    Rat mid = (xs[i] + xs[i + 1]) / Rat(2);
    Rat sa = a.slope_at(mid), sb = b.slope_at(mid);
    Rat va = a.eval_lift(mid), vb = b.eval_lift(mid);
    bool same = sa == sb && (va - vb).denominator() == 1 &&
                (a.circle || b.circle || va == vb);
    if (!same) total += xs[i + 1] - xs[i];
  }
  return total;
}

// Group element of F_n / T_n / V_n: reduced pair of trees plus the cyclic shift
// (T) or leaf bijection (V) of the matching between bottom and top leaves.
// The single stored matching is bottom leaf m <-> top leaf match_top(m);
// the PL map sends the bottom leaf's interval affinely onto the matched top
// leaf's interval, and act() transports leaf vectors the same way.
class FracElement {
 public:
  Flavor flavor = Flavor::F;
  int arity = 2;
  Tree top{2}, bottom{2};
  int shift = 0;          // T only; 0 <= shift < leaf count
  std::vector<int> perm;  // V only; perm[m-1] = top leaf matched to bottom leaf m

  int leaves() const { return top.leaf_count(); }

  int match_top(int m) const {  // bottom leaf m -> top leaf
    int L = leaves();
    switch (flavor) {
      case Flavor::F: return m;
      case Flavor::T: return (m - 1 + shift) % L + 1;
      default: return perm[m - 1];
    }
  }
  int match_bottom(int j) const {  // top leaf j -> bottom leaf
    int L = leaves();
    switch (flavor) {
      case Flavor::F: return j;
      case Flavor::T: return ((j - 1 - shift) % L + L) % L + 1;
      default:
        for (int m = 1; m <= L; ++m)
          if (perm[m - 1] == j) return m;
        throw std::logic_error("invalid permutation");
    }
  }

  bool is_identity() const {
    if (top != bottom) return false;
    for (int m = 1; m <= leaves(); ++m)
      if (match_top(m) != m) return false;
    return true;
  }

  friend bool operator==(const FracElement& a, const FracElement& b) {
    return a.flavor == b.flavor && a.arity == b.arity && a.top == b.top &&
           a.bottom == b.bottom && a.shift == b.shift && a.perm == b.perm;
  }
  friend bool operator<(const FracElement& a, const FracElement& b);
};

namespace detail {

// Matching as an explicit bottom->top leaf bijection (1-based values).
inline std::vector<int> matching_of(const FracElement& e) {
  std::vector<int> q(e.leaves());
  for (int m = 1; m <= e.leaves(); ++m) q[m - 1] = e.match_top(m);
  return q;
}

inline bool is_cyclic_shift(const std::vector<int>& q, int* k_out) {
  int L = static_cast<int>(q.size());
  int k = (q[0] - 1) % L;
  for (int m = 1; m <= L; ++m)
    if (q[m - 1] != (m - 1 + k) % L + 1) return false;
  *k_out = k;
  return true;
}

// Leftmost-leaf indices of internal nodes whose children are all leaves.
inline void caret_positions(const Tree& t, int base, std::vector<int>& out) {
  if (t.is_leaf()) return;
  bool all_leaves = true;
  for (const Tree& c : t.children()) all_leaves &= c.is_leaf();
  if (all_leaves) {
    out.push_back(base + 1);
    return;
  }
  int off = base;
  for (const Tree& c : t.children()) {
    caret_positions(c, off, out);
    off += c.leaf_count();
  }
}

// Contracts the caret whose children are leaves i..i+arity-1 into a single leaf.
inline Tree contract_caret(const Tree& t, int i) {
  int n = t.arity();
  std::function<Tree(const Tree&, int)> go = [&](const Tree& node, int base) -> Tree {
    bool all_leaves = true;
    for (const Tree& c : node.children()) all_leaves &= c.is_leaf();
    if (all_leaves) return base + 1 == i ? Tree::leaf(n) : node;
    std::vector<Tree> ch;
    int off = base;
    for (const Tree& c : node.children()) {
      ch.push_back(c.is_leaf() ? c : go(c, off));
      off += c.leaf_count();
    }
    return Tree::node(std::move(ch));
  };
  if (t.is_leaf()) throw std::logic_error("contract on leaf");
  return go(t, 0);
}

inline FracElement pack(Flavor flavor, int arity, Tree top, Tree bottom,
                        const std::vector<int>& q) {
  FracElement e;
  e.flavor = flavor;
  e.arity = arity;
  e.top = std::move(top);
  e.bottom = std::move(bottom);
  int L = e.top.leaf_count();
  switch (flavor) {
    case Flavor::F:
      for (int m = 1; m <= L; ++m)
        if (q[m - 1] != m) throw std::invalid_argument("F element needs trivial matching");
      break;
    case Flavor::T: {
      int k = 0;
      if (!is_cyclic_shift(q, &k))
        throw std::invalid_argument("T element needs a cyclic-shift matching");
      e.shift = k;
      break;
    }
    default:
      e.perm = q;
  }
  return e;
}

}  // namespace detail

// Cancels simultaneous carets (matched, order-preserving) until none remain.
inline FracElement reduce(Tree top, Tree bottom, Flavor flavor,
                          std::vector<int> q = {}) {
  if (top.arity() != bottom.arity()) throw std::invalid_argument("arity mismatch");
  if (top.leaf_count() != bottom.leaf_count())
    throw std::invalid_argument("leaf count mismatch");
  int arity = top.arity();
  int L = top.leaf_count();
  if (q.empty()) {
    q.resize(L);
    std::iota(q.begin(), q.end(), 1);
  }
  if (static_cast<int>(q.size()) != L) throw std::invalid_argument("bad matching size");
  bool changed = true;
  while (changed && L > 1) {
    changed = false;
    std::vector<int> bot_carets, top_carets;
    detail::caret_positions(bottom, 0, bot_carets);
    detail::caret_positions(top, 0, top_carets);
    std::set<int> top_set(top_carets.begin(), top_carets.end());
    for (int i : bot_carets) {
      int j = q[i - 1];
      if (j + arity - 1 > L || !top_set.count(j)) continue;
      bool consecutive = true;
      for (int d = 1; d < arity; ++d) consecutive &= (q[i - 1 + d] == j + d);
      if (!consecutive) continue;
      bottom = detail::contract_caret(bottom, i);
      top = detail::contract_caret(top, j);
      std::vector<int> q2;
      q2.reserve(L - arity + 1);
      for (int m = 1; m <= L; ++m) {
        if (m > i && m < i + arity) continue;  // merged away
        int image = q[m - 1];
        q2.push_back(image > j ? image - arity + 1 : image);
      }
      q = std::move(q2);
      L = L - arity + 1;
      changed = true;
      break;
    }
  }
  return detail::pack(flavor, arity, std::move(top), std::move(bottom), q);
}

inline FracElement identity_element(Flavor flavor = Flavor::F, int arity = 2) {
  return reduce(Tree::leaf(arity), Tree::leaf(arity), flavor);
}

// Refines the representative: attaches u_m under bottom leaf m and the same
// tree under the matched top leaf. The group element is unchanged.
inline FracElement refine_bottom(const FracElement& e, const Forest& u) {
  if (u.roots() != e.leaves()) throw std::invalid_argument("refine: root count");
  std::vector<int> q = detail::matching_of(e);
  int L = e.leaves();
  Forest f = identity_forest(L, e.arity);
  for (int m = 1; m <= L; ++m) f.trees[q[m - 1] - 1] = u.trees[m - 1];
  Tree top2 = compose_tree(f, e.top);
  Tree bottom2 = compose_tree(u, e.bottom);
  std::vector<int> bot_off = forest_leaf_offsets(u);
  std::vector<int> top_off = forest_leaf_offsets(f);
  std::vector<int> q2(bottom2.leaf_count());
  for (int m = 1; m <= L; ++m)
    for (int i = 0; i < u.trees[m - 1].leaf_count(); ++i)
      q2[bot_off[m - 1] + i] = top_off[q[m - 1] - 1] + i + 1;
  return detail::pack(e.flavor, e.arity, std::move(top2), std::move(bottom2), q2);
}

inline FracElement refine_top(const FracElement& e, const Forest& f) {
  if (f.roots() != e.leaves()) throw std::invalid_argument("refine: root count");
  Forest u = identity_forest(e.leaves(), e.arity);
  for (int m = 1; m <= e.leaves(); ++m) u.trees[m - 1] = f.trees[e.match_top(m) - 1];
  return refine_bottom(e, u);
}

inline FracElement inverse(const FracElement& g) {
  std::vector<int> q = detail::matching_of(g);
  std::vector<int> qinv(q.size());
  for (int m = 1; m <= static_cast<int>(q.size()); ++m) qinv[q[m - 1] - 1] = m;
  return detail::pack(g.flavor, g.arity, g.bottom, g.top, qinv);
}

// Group law: (g*h) acts like g after h (PL maps compose, act composes).
inline FracElement multiply(const FracElement& g, const FracElement& h) {
  if (g.flavor != h.flavor || g.arity != h.arity)
    throw std::invalid_argument("multiply: flavor/arity mismatch");
  CommonRefinement cr = common_refinement(h.top, g.bottom);
  FracElement h2 = refine_top(h, cr.p);
  FracElement g2 = refine_bottom(g, cr.q);
  assert(h2.top == g2.bottom);
  std::vector<int> qh = detail::matching_of(h2);
  std::vector<int> qg = detail::matching_of(g2);
  std::vector<int> q(qh.size());
  for (size_t m = 0; m < q.size(); ++m) q[m] = qg[qh[m] - 1];
  return reduce(g2.top, h2.bottom, g.flavor, q);
}

inline FracElement power(const FracElement& g, int n) {
  if (n < 0) return power(inverse(g), -n);
  FracElement acc = identity_element(g.flavor, g.arity);
  for (int i = 0; i < n; ++i) acc = multiply(acc, g);
  return acc;
}

// The T element rotating the circle by an angle 2^{-n}: its PL map is
// x -> x - 2^{-n} (mod 1), so transporting leaf vectors along it shifts them
// cyclically to the left: (xi_1,...,xi_L) -> (xi_2,...,xi_L,xi_1).
inline FracElement rotation(int n) {
  if (n < 0 || n > 20) throw std::out_of_range("rotation level cap");
  if (n == 0) return identity_element(Flavor::T);
  FracElement e;
  e.flavor = Flavor::T;
  e.arity = 2;
  e.top = full_tree(n);
  e.bottom = e.top;
  e.shift = (1 << n) - 1;  // bottom leaf m matches top leaf m-1 (cyclically)
  return e;
}

inline PLMap pl_map(const FracElement& e) {
  if (e.flavor == Flavor::V)
    throw std::domain_error("V elements do not induce interval/circle PL maps");
  PLMap m;
  m.circle = e.flavor == Flavor::T;
  int L = e.leaves();
  int j0 = e.match_top(1);
  for (int i = 1; i <= L; ++i) {
    DyadicInterval src = leaf_interval(e.bottom, i);
    DyadicInterval dst = leaf_interval(e.top, e.match_top(i));
    m.xs.push_back(src.lo());
    m.vs.push_back(dst.lo() + (e.match_top(i) < j0 ? Rat(1) : Rat(0)));
  }
  m.xs.push_back(Rat(1));
  DyadicInterval last = leaf_interval(e.top, e.match_top(L));
  m.vs.push_back(last.hi() + (e.match_top(L) < j0 ? Rat(1) : Rat(0)));
  m.normalize();
  return m;
}

inline Rat pl_eval(const FracElement& e, const Rat& x) { return pl_map(e).eval(x); }
inline Rat slope(const FracElement& e, const Rat& x) { return pl_map(e).slope_at(x); }

// Lebesgue measure of the fixed-point set of the induced PL map.
inline Rat fixed_point_measure(const FracElement& g) {
  return pl_fixed_measure(pl_map(g));
}

// Lebesgue measure of {x : g(x) != h(x)}; d(g, identity) complements the
// fixed-point measure.
inline Rat pl_metric(const FracElement& g, const FracElement& h) {
  return pl_distance(pl_map(g), pl_map(h));
}

inline bool is_reduced(const FracElement& e) {
  FracElement r = reduce(e.top, e.bottom, e.flavor, detail::matching_of(e));
  return r == e;
}

inline std::vector<FracElement> enumerate_ball(int max_leaves, Flavor flavor,
                                               int arity = 2) {
  if (max_leaves > enumeration_cap(arity))
    throw std::length_error("ball cap exceeded");
  std::vector<FracElement> out;
  for (int L = 1; L <= max_leaves; ++L) {
    std::vector<Tree> trees;
    try {
      trees = enumerate_trees(L, arity);
    } catch (const std::length_error&) {
      break;
    }
    if (trees.empty()) continue;
    std::vector<std::vector<int>> matchings;
    std::vector<int> base(L);
    std::iota(base.begin(), base.end(), 1);
    if (flavor == Flavor::F) {
      matchings.push_back(base);
    } else if (flavor == Flavor::T) {
      for (int k = 0; k < L; ++k) {
        std::vector<int> q(L);
        for (int m = 1; m <= L; ++m) q[m - 1] = (m - 1 + k) % L + 1;
        matchings.push_back(q);
        if (L == 1) break;
      }
    } else {
      std::vector<int> p = base;
      do matchings.push_back(p);
      while (std::next_permutation(p.begin(), p.end()));
    }
    for (const Tree& t : trees)
      for (const Tree& s : trees)
        for (const auto& q : matchings) {
          FracElement e = detail::pack(flavor, arity, t, s, q);
          if (is_reduced(e)) out.push_back(e);
        }
  }
  return out;
}

// Re-flavors an element when the matching allows it (F -> T -> V widens
// always; narrowing requires the matching to be cyclic / trivial).
inline FracElement as_flavor(const FracElement& e, Flavor target) {
  if (e.flavor == target) return e;
  std::vector<int> q = detail::matching_of(e);
  return detail::pack(target, e.arity, e.top, e.bottom, q);
}

// Image of a digit word under the prefix substitution the element induces:
// bottom leaf address a_m followed by w maps to matched top leaf address
// followed by w. The word must be deep enough to select a bottom leaf.
inline std::vector<int> word_image(const FracElement& e, const std::vector<int>& word) {
  std::vector<LeafAddress> bot = leaf_addresses(e.bottom);
  std::vector<LeafAddress> top = leaf_addresses(e.top);
  for (int m = 1; m <= e.leaves(); ++m) {
    const LeafAddress& a = bot[m - 1];
    if (a.size() > word.size()) continue;
    if (std::equal(a.begin(), a.end(), word.begin())) {
      std::vector<int> out = top[e.match_top(m) - 1];
      out.insert(out.end(), word.begin() + a.size(), word.end());
      return out;
    }
  }
  throw std::invalid_argument("word too short to select a leaf");
}

// ---- element text form: top "/" bottom [ "@" k | "@perm:" cycles ] ----

inline std::string to_text(const FracElement& e) {
  std::string s = serialize(e.top) + "/" + serialize(e.bottom);
  if (e.flavor == Flavor::T && e.shift != 0) s += "@" + std::to_string(e.shift);
  if (e.flavor == Flavor::V) {
    s += "@perm:";
    std::vector<bool> seen(e.leaves(), false);
    std::string cyc;
    for (int m = 1; m <= e.leaves(); ++m) {
      if (seen[m - 1] || e.perm[m - 1] == m) continue;
      cyc += "(";
      int c = m;
      bool first = true;
      while (!seen[c - 1]) {
        seen[c - 1] = true;
        if (!first) cyc += " ";
        cyc += std::to_string(c);
        first = false;
        c = e.perm[c - 1];
      }
      cyc += ")";
    }
    s += cyc.empty() ? "()" : cyc;
  }
  return s;
}

inline FracElement element_from_text(const std::string& text, int arity = 2) {
  auto slash = text.find('/');
  if (slash == std::string::npos)
    throw std::invalid_argument("element text needs 'top/bottom' (no '/' found)");
  std::string top_s = text.substr(0, slash);
  std::string rest = text.substr(slash + 1);
  std::string bottom_s = rest;
  std::string decor;
  auto at = rest.find('@');
  if (at != std::string::npos) {
    bottom_s = rest.substr(0, at);
    decor = rest.substr(at + 1);
  }
  Tree top = parse_tree(top_s, arity);
  Tree bottom = parse_tree(bottom_s, arity);
  if (top.leaf_count() != bottom.leaf_count())
    throw std::invalid_argument("element text: leaf count mismatch");
  int L = top.leaf_count();
  if (decor.empty()) return reduce(top, bottom, Flavor::F);
  if (decor.rfind("perm:", 0) == 0) {
    std::vector<int> q(L);
    std::iota(q.begin(), q.end(), 1);
    std::string cyc = decor.substr(5);
    size_t pos = 0;
    while (pos < cyc.size()) {
      if (cyc[pos] != '(')
        throw std::invalid_argument("perm cycles: expected '(' at offset " +
                                    std::to_string(pos));
      size_t close = cyc.find(')', pos);
      if (close == std::string::npos)
        throw std::invalid_argument("perm cycles: missing ')'");
      std::istringstream iss(cyc.substr(pos + 1, close - pos - 1));
      std::vector<int> cycle;
      int v;
      while (iss >> v) cycle.push_back(v);
      for (int x : cycle)
        if (x < 1 || x > L) throw std::invalid_argument("perm cycles: leaf out of range");
      for (size_t i = 0; i < cycle.size(); ++i)
        q[cycle[i] - 1] = cycle[(i + 1) % cycle.size()];
      pos = close + 1;
    }
    return reduce(top, bottom, Flavor::V, q);
  }
  int k;
  try {
    k = std::stoi(decor);
  } catch (const std::exception&) {
    throw std::invalid_argument("element text: bad decoration '" + decor + "'");
  }
  std::vector<int> q(L);
  for (int m = 1; m <= L; ++m) q[m - 1] = ((m - 1 + k) % L + L) % L + 1;
  return reduce(top, bottom, Flavor::T, q);
}

inline bool operator<(const FracElement& a, const FracElement& b) {
  return to_text(a) < to_text(b);
}

}  // namespace pythrep
