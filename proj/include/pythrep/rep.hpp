// Direct-limit Hilbert space attached to a Pythagorean module, and the unitary
// action of the fraction groups on it.
//
// A state is stored as a finite tree together with one module vector per leaf.
// Growing a caret at a leaf replaces that leaf's vector v by its images
// (A_1 v, ..., A_n v) under the module members; the partition-of-unity relation
// sum A_i^* A_i = id makes this refinement isometric, so every vector has a
// well-defined meaning independent of the tree chosen to carry it.  A group
// element acts by rewriting a state carried on its bottom tree onto its top
// tree, transporting each leaf vector along the element's leaf matching.
#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "pythrep/opalg.hpp"
#include "pythrep/thompson.hpp"
#include "pythrep/trees.hpp"

namespace pythrep {

// Vector in the direct limit, carried on a concrete tree.
struct LimitVec {
  const PythModule* mod = nullptr;
  Tree tree{2};
  std::vector<Vec> parts;  // one per leaf of `tree`

  int leaves() const { return tree.leaf_count(); }
};

// Applies the word of members read off a leaf address, digit nearest the root
// first: address (a_1, ..., a_d) sends v to A_{a_d}(... A_{a_1}(v)).
inline Vec apply_leaf_word(const PythModule& m, const LeafAddress& addr, Vec v) {
  for (int digit : addr) v = m.members[digit].apply(std::move(v));
  return v;
}

// Adjoint of the same word: adjoints compose in the reverse order.
inline Vec apply_leaf_word_adjoint(const PythModule& m, const LeafAddress& addr,
                                   Vec v) {
  for (auto it = addr.rbegin(); it != addr.rend(); ++it)
    v = m.members[*it].apply_adjoint(std::move(v));
  return v;
}

namespace detail {
inline void check_state(const LimitVec& x) {
  if (x.mod == nullptr) throw std::invalid_argument("state has no module");
  if (x.tree.arity() != x.mod->arity)
    throw std::invalid_argument("state tree arity != module arity");
  if (static_cast<int>(x.parts.size()) != x.tree.leaf_count())
    throw std::invalid_argument("state needs one part per leaf");
}
inline void check_same_module(const LimitVec& x, const LimitVec& y) {
  if (x.mod != y.mod)
    throw std::invalid_argument("states live over different modules");
}
}  // namespace detail

// State carried on the trivial tree: a single module vector at the root.
inline LimitVec root_vector(const PythModule& m, Vec v) {
  LimitVec x;
  x.mod = &m;
  x.tree = Tree::leaf(m.arity);
  x.parts = {std::move(v)};
  detail::check_state(x);
  return x;
}

inline LimitVec vacuum_vector(const PythModule& m) {
  return root_vector(m, m.vacuum);
}

// Rewrites x on the finer tree compose(u, x.tree); leaf vectors are pushed
// down with the member words of their new addresses.
inline LimitVec refine(const LimitVec& x, const Forest& u) {
  detail::check_state(x);
  if (u.roots() != x.leaves())
    throw std::invalid_argument("refine: need one forest tree per leaf");
  LimitVec out;
  out.mod = x.mod;
  out.tree = compose_tree(u, x.tree);
  for (int m = 0; m < u.roots(); ++m)
    for (const LeafAddress& addr : leaf_addresses(u.trees[m]))
      out.parts.push_back(apply_leaf_word(*x.mod, addr, x.parts[m]));
  return out;
}

// Rewrites x on the tree t, which must refine x.tree.
inline LimitVec stabilize(const LimitVec& x, const Tree& t) {
  detail::check_state(x);
  CommonRefinement cr = common_refinement(x.tree, t);
  if (!(cr.w == t))
    throw std::invalid_argument("stabilize: target does not refine the tree");
  return refine(x, cr.p);
}

// Root state xi rewritten on the tree t (leaf l carries the word of its
// address applied to xi).
inline LimitVec phi(const PythModule& m, const Tree& t, Vec xi) {
  return stabilize(root_vector(m, std::move(xi)), t);
}

// Rewrites both states on the minimal common refinement of their trees.
inline std::pair<LimitVec, LimitVec> at_common_tree(const LimitVec& x,
                                                    const LimitVec& y) {
  detail::check_state(x);
  detail::check_state(y);
  detail::check_same_module(x, y);
  CommonRefinement cr = common_refinement(x.tree, y.tree);
  return {refine(x, cr.p), refine(y, cr.q)};
}

// Inner product of the limit vectors (linear in the first argument), computed
// after rewriting both on a common tree.
inline Complex inner(const LimitVec& x, const LimitVec& y) {
  auto [a, b] = at_common_tree(x, y);
  Complex acc = 0;
  for (size_t l = 0; l < a.parts.size(); ++l) acc += inner(a.parts[l], b.parts[l]);
  return acc;
}

// a*x + b*y, carried on the common refinement of the two trees.
inline LimitVec combine(Complex a, const LimitVec& x, Complex b,
                        const LimitVec& y) {
  auto [xa, yb] = at_common_tree(x, y);
  for (size_t l = 0; l < xa.parts.size(); ++l)
    xa.parts[l] = a * xa.parts[l] + b * yb.parts[l];
  return xa;
}

inline double norm(const LimitVec& x) {
  return std::sqrt(std::abs(inner(x, x).real()));
}

inline bool approx_equal(const LimitVec& x, const LimitVec& y,
                         double tol = kDefaultTol) {
  return norm(combine(1.0, x, -1.0, y)) <= tol;
}

// Unitary action of a fraction-group element: rewrite x on g's bottom tree
// (refining both as needed), then transport each bottom-leaf vector to the
// matched top leaf.  The result is carried on (the refined) g's top tree.
inline LimitVec act(const FracElement& g, const LimitVec& x) {
  detail::check_state(x);
  if (g.arity != x.mod->arity)
    throw std::invalid_argument("act: element arity != module arity");
  CommonRefinement cr = common_refinement(g.bottom, x.tree);
  FracElement g2 = refine_bottom(g, cr.p);
  LimitVec x2 = refine(x, cr.q);
  LimitVec y;
  y.mod = x.mod;
  y.tree = g2.top;
  y.parts.reserve(x2.parts.size());
  for (int j = 1; j <= g2.leaves(); ++j)
    y.parts.push_back(x2.parts[g2.match_bottom(j) - 1]);
  return y;
}

// Matrix coefficient <act(g) x, y> via the action itself.
inline Complex coefficient(const FracElement& g, const LimitVec& x,
                           const LimitVec& y) {
  return inner(act(g, x), y);
}

// The same coefficient for root states xi, eta by an independent algorithm:
// summing one operator word per top leaf,
//   <act(g) xi, eta> = sum_j < (W_j)^* V_j xi, eta >
// where V_j is the member word of the bottom leaf matched to top leaf j and
// W_j is the member word of top leaf j.  Exercises only word application and
// adjoints, no tree refinement.
inline Complex coefficient_pathsum(const PythModule& m, const FracElement& g,
                                   const Vec& xi, const Vec& eta) {
  if (g.arity != m.arity)
    throw std::invalid_argument("coefficient: element arity != module arity");
  std::vector<LeafAddress> bottom_addrs = leaf_addresses(g.bottom);
  std::vector<LeafAddress> top_addrs = leaf_addresses(g.top);
  Complex acc = 0;
  for (int j = 1; j <= g.leaves(); ++j) {
    Vec v = apply_leaf_word(m, bottom_addrs[g.match_bottom(j) - 1], xi);
    acc += inner(apply_leaf_word_adjoint(m, top_addrs[j - 1], std::move(v)), eta);
  }
  return acc;
}

// <act(g) Omega, Omega> against the module's vacuum.
inline Complex vacuum_coefficient(const PythModule& m, const FracElement& g) {
  LimitVec omega = vacuum_vector(m);
  return coefficient(g, omega, omega);
}

}  // namespace pythrep
