// L^2 model of the representation: direct-limit vectors become module-valued
// step functions on [0,1], the group acts by a slope-corrected cocycle twist
// of the point action, and the two pictures are exactly intertwined when the
// module members are unitaries scaled by 1/sqrt(2).
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pythrep/opalg.hpp"
#include "pythrep/rep.hpp"
#include "pythrep/thompson.hpp"
#include "pythrep/trees.hpp"

namespace pythrep {

// Piecewise-constant module-valued function on [0,1): the pieces are the leaf
// intervals of a binary tree, values[l] is the constant value on leaf l+1.
struct StepFn {
  const PythModule* mod = nullptr;
  Tree tree{2};
  std::vector<Vec> values;

  int pieces() const { return tree.leaf_count(); }
};

namespace detail {
inline void check_step(const StepFn& f) {
  if (f.mod == nullptr) throw std::invalid_argument("step function has no module");
  if (f.tree.arity() != 2)
    throw std::invalid_argument("step functions live on binary partitions");
  if (static_cast<int>(f.values.size()) != f.tree.leaf_count())
    throw std::invalid_argument("value count does not match the partition");
}
}  // namespace detail

inline StepFn make_step(const PythModule& m, Tree partition, std::vector<Vec> values) {
  StepFn f;
  f.mod = &m;
  f.tree = std::move(partition);
  f.values = std::move(values);
  detail::check_step(f);
  return f;
}

// Refines the partition; the function itself is unchanged (values copy down).
inline StepFn step_refine(const StepFn& f, const Forest& u) {
  detail::check_step(f);
  if (u.roots() != f.tree.leaf_count())
    throw std::invalid_argument("refinement forest does not match the partition");
  StepFn out;
  out.mod = f.mod;
  out.tree = compose_tree(u, f.tree);
  for (int m = 1; m <= u.roots(); ++m) {
    int copies = u.trees[m - 1].leaf_count();
    for (int i = 0; i < copies; ++i) out.values.push_back(f.values[m - 1]);
  }
  return out;
}

inline std::pair<StepFn, StepFn> at_common_partition(const StepFn& f, const StepFn& g) {
  if (f.mod != g.mod)
    throw std::invalid_argument("step functions over different modules");
  CommonRefinement cr = common_refinement(f.tree, g.tree);
  return {step_refine(f, cr.p), step_refine(g, cr.q)};
}

inline Complex step_inner(const StepFn& f, const StepFn& g) {
  auto [f2, g2] = at_common_partition(f, g);
  Complex acc = 0;
  for (int l = 1; l <= f2.pieces(); ++l) {
    double len = boost::rational_cast<double>(leaf_interval(f2.tree, l).length());
    acc += inner(f2.values[l - 1], g2.values[l - 1]) * len;
  }
  return acc;
}

inline double step_norm(const StepFn& f) {
  return std::sqrt(std::max(0.0, step_inner(f, f).real()));
}

inline StepFn step_combine(Complex a, const StepFn& f, Complex b, const StepFn& g) {
  auto [f2, g2] = at_common_partition(f, g);
  for (int l = 0; l < f2.pieces(); ++l)
    f2.values[l] = a * f2.values[l] + b * g2.values[l];
  return f2;
}

inline bool approx_equal(const StepFn& f, const StepFn& g, double tol = kDefaultTol) {
  return step_norm(step_combine(1.0, f, -1.0, g)) <= tol;
}

// Value at a point (intervals are closed on the left).
inline Vec step_eval(const StepFn& f, const Rat& x) {
  detail::check_step(f);
  if (x < Rat(0) || x >= Rat(1)) throw std::out_of_range("point outside [0,1)");
  const Tree* t = &f.tree;
  Rat lo(0), len(1);
  int leaf = 1;
  while (!t->is_leaf()) {
    len /= 2;
    const Tree& left = t->children()[0];
    if (x < lo + len) {
      t = &left;
    } else {
      leaf += left.leaf_count();
      lo += len;
      t = &t->children()[1];
    }
  }
  return f.values[leaf - 1];
}

// Largest residual of 2 A_i* A_i = id = 2 A_i A_i* over sample vectors: zero
// exactly when every member is a unitary scaled by 1/sqrt(2).
inline double scaled_unitary_residual(const PythModule& m) {
  double worst = 0;
  for (const Vec& v : pythagorean_samples(m)) {
    double nv = std::max(1.0, norm(v));
    for (const Op& op : m.members) {
      worst = std::max(worst, norm(2.0 * op.apply_adjoint(op.apply(v)) - v) / nv);
      worst = std::max(worst, norm(2.0 * op.apply(op.apply_adjoint(v)) - v) / nv);
    }
  }
  return worst;
}

// The isometry onto step functions: a state (t, (xi_l)_l) becomes the function
// whose value on leaf interval I_l is (leaf word adjoint)(xi_l) / Leb(I_l).
inline StepFn to_l2(const LimitVec& x, double unitary_tol = kDefaultTol) {
  if (x.mod == nullptr || x.tree.arity() != 2)
    throw std::invalid_argument("need a state over a binary module");
  if (scaled_unitary_residual(*x.mod) > unitary_tol)
    throw std::invalid_argument(
        "module members must be unitaries scaled by 1/sqrt(2)");
  StepFn f;
  f.mod = x.mod;
  f.tree = x.tree;
  std::vector<LeafAddress> addrs = leaf_addresses(x.tree);
  for (size_t l = 0; l < addrs.size(); ++l) {
    double scale = std::ldexp(1.0, static_cast<int>(addrs[l].size()));
    f.values.push_back(scale *
                       apply_leaf_word_adjoint(*x.mod, addrs[l], x.parts[l]));
  }
  return f;
}

// The local cocycle datum of g at a standard dyadic interval J contained in
// a bottom leaf interval: the matched target interval gJ, the two leaf words,
// and the normalisation 1/sqrt(Leb(J) Leb(gJ)).
struct LocalCocycle {
  DyadicInterval source;  // J
  DyadicInterval target;  // gJ
  LeafAddress source_addr;
  LeafAddress target_addr;
  double scale = 1;       // 1/sqrt(Leb(J) Leb(gJ))
};

inline LeafAddress address_of_interval(const DyadicInterval& iv) {
  LeafAddress addr(iv.level);
  for (int i = 0; i < iv.level; ++i)
    addr[i] = static_cast<int>((iv.num >> (iv.level - 1 - i)) & 1);
  return addr;
}

inline DyadicInterval dyadic_interval(const Rat& lo, const Rat& hi) {
  DyadicInterval iv;
  Rat len = hi - lo;
  if (len <= Rat(0) || lo < Rat(0) || hi > Rat(1))
    throw std::invalid_argument("need [lo,hi] inside [0,1] with lo < hi");
  Rat p(1);
  while (p > len) {
    p /= 2;
    ++iv.level;
    if (iv.level > 62) throw std::invalid_argument("interval too fine");
  }
  Rat num = lo / p;
  if (p != len || num.denominator() != 1)
    throw std::invalid_argument("not a standard dyadic interval");
  iv.num = boost::rational_cast<long long>(num);
  return iv;
}

inline LocalCocycle cocycle_local(const FracElement& g, const DyadicInterval& J) {
  if (g.arity != 2 || J.arity != 2)
    throw std::invalid_argument("local cocycle needs binary data");
  LeafAddress want = address_of_interval(J);
  std::vector<LeafAddress> bottom = leaf_addresses(g.bottom);
  for (size_t l = 0; l < bottom.size(); ++l) {
    const LeafAddress& b = bottom[l];
    if (b.size() > want.size() || !std::equal(b.begin(), b.end(), want.begin()))
      continue;
    LocalCocycle lc;
    lc.source = J;
    lc.source_addr = want;
    lc.target_addr = leaf_addresses(g.top)[g.match_top(static_cast<int>(l) + 1) - 1];
    lc.target_addr.insert(lc.target_addr.end(), want.begin() + b.size(), want.end());
    lc.target = interval_of_address(lc.target_addr, 2);
    lc.scale = std::sqrt(std::ldexp(1.0, J.level + static_cast<int>(lc.target_addr.size())));
    return lc;
  }
  throw std::invalid_argument("interval does not refine the bottom leaf partition");
}

// U(g,J) applied to a module vector.
inline Vec cocycle_apply(const PythModule& m, const LocalCocycle& lc, const Vec& v) {
  Vec w = apply_leaf_word(m, lc.source_addr, v);
  w = apply_leaf_word_adjoint(m, lc.target_addr, w);
  return lc.scale * w;
}

// Dense matrix of U(g,J), assembled column by column.
inline Eigen::MatrixXcd cocycle_matrix(const PythModule& m, const LocalCocycle& lc) {
  if (!m.is_dense) throw std::invalid_argument("matrix form needs a dense module");
  int d = m.vacuum.dim();
  Eigen::MatrixXcd u(d, d);
  for (int j = 0; j < d; ++j) {
    Vec col = cocycle_apply(m, lc, Vec::dense(Eigen::VectorXcd::Unit(d, j)));
    u.col(j) = col.d;
  }
  return u;
}

// The twisted point action on step functions:
//   (sigma_g f)(x) = g'(x)^{-1/2} U(g, J) f(g^{-1} x)   for x in gJ,
// where J runs over the bottom leaf intervals of g.  On the leaf J the
// combined factor collapses to (value on gJ) = (target word adjoint applied
// to the source word image of f's value on J) / Leb(gJ).
inline StepFn sigma_act(const FracElement& g, const StepFn& f) {
  detail::check_step(f);
  if (g.arity != 2) throw std::invalid_argument("step model is binary");
  CommonRefinement cr = common_refinement(f.tree, g.bottom);
  StepFn f2 = step_refine(f, cr.p);
  FracElement g2 = refine_bottom(g, cr.q);

  StepFn out;
  out.mod = f.mod;
  out.tree = g2.top;
  out.values.assign(g2.leaves(), Vec{});
  std::vector<LeafAddress> bottom = leaf_addresses(g2.bottom);
  std::vector<LeafAddress> top = leaf_addresses(g2.top);
  for (int l = 1; l <= g2.leaves(); ++l) {
    int k = g2.match_top(l);
    Vec w = apply_leaf_word(*f.mod, bottom[l - 1], f2.values[l - 1]);
    w = apply_leaf_word_adjoint(*f.mod, top[k - 1], w);
    double scale = std::ldexp(1.0, static_cast<int>(top[k - 1].size()));
    out.values[k - 1] = scale * w;
  }
  return out;
}

}  // namespace pythrep
