// Rotation-limit engine: decay diagnostics for (B*)^n A^n, empirical weak
// limits of the rotation sequence act(r_n^j), the closed-form scalar limits
// x_j (computed independently by a recursion and by a decorated-tree leaf
// sum), and a Neumann-series solver for the limit operator when A*B is
// central enough.
#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "pythrep/opalg.hpp"
#include "pythrep/rep.hpp"
#include "pythrep/thompson.hpp"

namespace pythrep {

// omega parameter of a one-dimensional module with members (a, b).
inline Complex omega_of_scalars(Complex a, Complex b) { return a * std::conj(b); }

inline Complex omega_of(const PythModule& m) {
  if (!m.is_dense || m.arity != 2 || m.vacuum.dim() != 1)
    throw std::invalid_argument("omega: need a one-dimensional binary module");
  return omega_of_scalars(m.members[0].mat(0, 0), m.members[1].mat(0, 0));
}

// Samples <(B*)^n A^n xi, eta> for n = 1..n_max, with A and B the first and
// last members.  The sequence tends to zero for every Pythagorean pair.
inline std::vector<Complex> weak_decay(const PythModule& m, const Vec& xi,
                                       const Vec& eta, int n_max) {
  if (n_max < 1) throw std::invalid_argument("weak_decay: need n_max >= 1");
  const Op& a = m.members.front();
  const Op& b = m.members.back();
  std::vector<Complex> out;
  Vec av = xi, bv = eta;
  for (int n = 1; n <= n_max; ++n) {
    av = a.apply(av);
    bv = b.apply(bv);
    out.push_back(inner(av, bv));  // <A^n xi, B^n eta> = <(B^n)* A^n xi, eta>
  }
  return out;
}

struct RotationSequence {
  std::vector<Complex> values;  // values[n-1] = <act(r_n^j) x, y>, n = 1..
  bool converged = false;       // successive difference reached stop_tol
  Complex limit = 0;            // last value (the empirical limit if converged)
};

// Empirical weak limit of the rotation powers: probes <act(r_n^j) x, y> for
// n = 1..n_max, applying the rotation j times (the action is a homomorphism,
// so this equals acting by the j-th power).
inline RotationSequence empirical_rotation_limit(const LimitVec& x,
                                                 const LimitVec& y, int j,
                                                 int n_max,
                                                 double stop_tol = 1e-10) {
  if (j < 1) throw std::invalid_argument("rotation power must be >= 1");
  if (n_max < 1 || n_max > 16)
    throw std::out_of_range("rotation level cap: need 1 <= n_max <= 16");
  RotationSequence seq;
  for (int n = 1; n <= n_max; ++n) {
    FracElement r = rotation(n);
    LimitVec w = x;
    for (int rep = 0; rep < j; ++rep) w = act(r, w);
    seq.values.push_back(inner(w, y));
    size_t k = seq.values.size();
    if (k >= 2 && std::abs(seq.values[k - 1] - seq.values[k - 2]) <= stop_tol) {
      seq.converged = true;
      seq.limit = seq.values[k - 1];
      return seq;
    }
  }
  seq.limit = seq.values.back();
  return seq;
}

// Limits of the rotation coefficients for a one-dimensional module with
// parameter omega = a*conj(b):  x_1 = conj(omega)/(1-omega), doubling keeps
// the value, and odd indices satisfy
//   x_{2k+1} = conj(omega)*x_k + omega*x_{k+1}.
inline Complex x1(Complex omega) {
  if (omega == Complex(0, 0)) return 0;  // degenerate module: a or b is zero
  if (std::abs(omega) > 0.5 + 1e-12)
    throw std::invalid_argument("omega must satisfy |omega| <= 1/2");
  return std::conj(omega) / (1.0 - omega);
}

namespace detail {
inline Complex xj_ratio(long long j, Complex omega,
                        std::map<long long, Complex>& memo) {
  while (j % 2 == 0) j /= 2;  // x_{2k} = x_k
  if (j == 1) return 1.0;
  auto it = memo.find(j);
  if (it != memo.end()) return it->second;
  long long k = (j - 1) / 2;
  Complex val = std::conj(omega) * xj_ratio(k, omega, memo) +
                omega * xj_ratio(k + 1, omega, memo);
  memo.emplace(j, val);
  return val;
}
}  // namespace detail

inline Complex xj(long long j, Complex omega) {
  if (j < 1 || j > (1LL << 20)) throw std::out_of_range("index cap: 1 <= j <= 2^20");
  if (omega == Complex(0, 0)) return 0;
  std::map<long long, Complex> memo;
  return detail::xj_ratio(j, omega, memo) * x1(omega);
}

// Decorated binary tree computing x_j: the root holds j; a node holding an
// odd multiple of a power of two, j = 2^n (2k+1) with k >= 1, has children
// holding k (left) and k+1 (right); labels that are powers of two are leaves.
struct IndexTree {
  long long label = 1;
  std::vector<IndexTree> children;  // empty or exactly two

  bool is_leaf() const { return children.empty(); }
  int leaf_count() const {
    if (is_leaf()) return 1;
    return children[0].leaf_count() + children[1].leaf_count();
  }
};

inline IndexTree tj_tree(long long j) {
  if (j < 1 || j > (1LL << 20)) throw std::out_of_range("index cap: 1 <= j <= 2^20");
  IndexTree t;
  t.label = j;
  long long odd = j;
  while (odd % 2 == 0) odd /= 2;
  if (odd == 1) return t;  // power of two: x_j = x_1
  long long k = (odd - 1) / 2;
  t.children.push_back(tj_tree(k));
  t.children.push_back(tj_tree(k + 1));
  return t;
}

namespace detail {
inline Complex tj_leaf_sum(const IndexTree& t, Complex omega, Complex weight) {
  if (t.is_leaf()) return weight;
  return tj_leaf_sum(t.children[0], omega, weight * std::conj(omega)) +
         tj_leaf_sum(t.children[1], omega, weight * omega);
}
}  // namespace detail

// Independent evaluation of x_j: each leaf of the decorated tree contributes
// conj(omega)^l * omega^r, with l and r its left- and right-turn counts.
inline Complex xj_via_tree(long long j, Complex omega) {
  if (omega == Complex(0, 0)) return 0;
  return detail::tj_leaf_sum(tj_tree(j), omega, 1.0) * x1(omega);
}

struct CommutingLimitReport {
  bool hypothesis_ok = false;     // A*B commutes with A, B, A*, B* on samples
  double commutator_residual = 0;
  bool converged = false;         // Neumann series terms fell below 1e-14
  double equation_residual = 0;   // max ||x(id - B*A)v - A*B v|| on samples
  Complex vacuum_value = 0;       // <x Omega, Omega>
  std::function<Vec(const Vec&)> x;
};

// Solves x(id - B*A) = A*B by the Neumann series x = A*B * sum_m (B*A)^m,
// valid when A*B commutes with A, B, A*, B* (hypothesis checked on samples).
inline CommutingLimitReport solve_commuting_limit(
    const PythModule& m, const std::vector<Vec>& samples,
    double hypothesis_tol = kDefaultTol) {
  if (m.arity != 2) throw std::invalid_argument("need a binary module");
  if (samples.empty()) throw std::invalid_argument("need sample vectors");
  const Op& a = m.members.front();
  const Op& b = m.members.back();
  auto astar_b = [&](const Vec& v) { return a.apply_adjoint(b.apply(v)); };
  auto bstar_a = [&](const Vec& v) { return b.apply_adjoint(a.apply(v)); };

  CommutingLimitReport rep;
  for (const Vec& v : samples) {
    double nv = std::max(1.0, norm(v));
    auto commutator = [&](auto&& op) {
      return norm(astar_b(op(v)) - op(astar_b(v))) / nv;
    };
    rep.commutator_residual = std::max(
        {rep.commutator_residual,
         commutator([&](const Vec& w) { return a.apply(w); }),
         commutator([&](const Vec& w) { return b.apply(w); }),
         commutator([&](const Vec& w) { return a.apply_adjoint(w); }),
         commutator([&](const Vec& w) { return b.apply_adjoint(w); })});
  }
  rep.hypothesis_ok = rep.commutator_residual <= hypothesis_tol;
  if (!rep.hypothesis_ok) return rep;

  auto apply_x = [astar_b, bstar_a](const Vec& v) {
    Vec term = v;
    Vec acc = zero_like(v);
    bool ok = false;
    for (int iter = 0; iter < 4000; ++iter) {
      acc += term;
      term = bstar_a(term);
      if (norm(term) <= 1e-14) {
        ok = true;
        break;
      }
    }
    if (!ok) throw std::runtime_error("Neumann series did not converge");
    return astar_b(acc);
  };

  rep.converged = true;
  try {
    for (const Vec& v : samples) {
      Vec lhs = apply_x(v) - apply_x(bstar_a(v));
      rep.equation_residual =
          std::max(rep.equation_residual, norm(lhs - astar_b(v)));
    }
    Vec xo = apply_x(m.vacuum);
    rep.vacuum_value = inner(xo, m.vacuum);
  } catch (const std::runtime_error&) {
    rep.converged = false;
    return rep;
  }
  rep.x = apply_x;
  return rep;
}

inline CommutingLimitReport solve_commuting_limit(const PythModule& m) {
  return solve_commuting_limit(m, pythagorean_samples(m, 8, 200));
}

}  // namespace pythrep
