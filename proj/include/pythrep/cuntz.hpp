// Dilation to the Cuntz algebra: isometries C_i that split a state along a
// root caret, the root compression that inverts them, and the translation of
// group elements into finite sums of words in the generators S_i.
#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "pythrep/opalg.hpp"
#include "pythrep/rep.hpp"
#include "pythrep/thompson.hpp"
#include "pythrep/trees.hpp"

namespace pythrep {

// C_i picks out the i-th block (0-based) of a state split at a root caret:
// C_i(s_1 + ... + s_n, xi_1 (+) ... (+) xi_n) = (s_{i+1}, xi_{i+1}).
// On root states this is exactly the module member: C_i(root xi) = root(A_i xi).
inline LimitVec dilation_c(int i, const LimitVec& x) {
  if (x.mod == nullptr) throw std::invalid_argument("state has no module");
  int ar = x.mod->arity;
  if (i < 0 || i >= ar) throw std::out_of_range("dilation index out of range");
  LimitVec x2 = x;
  if (x2.tree.is_leaf()) x2 = refine(x2, Forest(Tree::caret(ar)));
  const std::vector<Tree>& ch = x2.tree.children();
  int offset = 0;
  for (int c = 0; c < i; ++c) offset += ch[c].leaf_count();
  LimitVec out;
  out.mod = x.mod;
  out.tree = ch[i];
  out.parts.assign(x2.parts.begin() + offset,
                   x2.parts.begin() + offset + ch[i].leaf_count());
  return out;
}

// C_i* grafts the state into the i-th slot of a root caret and fills the
// remaining slots with zero leaves.
inline LimitVec dilation_c_star(int i, const LimitVec& x) {
  if (x.mod == nullptr) throw std::invalid_argument("state has no module");
  int ar = x.mod->arity;
  if (i < 0 || i >= ar) throw std::out_of_range("dilation index out of range");
  std::vector<Tree> ch(ar, Tree::leaf(ar));
  ch[i] = x.tree;
  LimitVec out;
  out.mod = x.mod;
  out.tree = Tree::node(std::move(ch));
  Vec zero = zero_like(x.parts.front());
  for (int c = 0; c < i; ++c) out.parts.push_back(zero);
  out.parts.insert(out.parts.end(), x.parts.begin(), x.parts.end());
  for (int c = i + 1; c < ar; ++c) out.parts.push_back(zero);
  return out;
}

// Compression to the root: (t, (xi_l)_l) |-> sum_l (leaf word adjoint)(xi_l).
// Refinement-invariant for every Pythagorean module; unitary as a map onto
// the module space exactly when the member adjoints satisfy the Cuntz
// relations.
inline Vec compress_to_root(const LimitVec& x) {
  if (x.mod == nullptr) throw std::invalid_argument("state has no module");
  std::vector<LeafAddress> addrs = leaf_addresses(x.tree);
  Vec acc = zero_like(x.parts.front());
  for (size_t l = 0; l < addrs.size(); ++l)
    acc += apply_leaf_word_adjoint(*x.mod, addrs[l], x.parts[l]);
  return acc;
}

// Largest residual of A_i A_j* = delta_ij id over sample vectors.
inline double cuntz_relation_residual(const PythModule& m) {
  double worst = 0;
  for (const Vec& v : pythagorean_samples(m)) {
    double nv = std::max(1.0, norm(v));
    for (int i = 0; i < m.arity; ++i)
      for (int j = 0; j < m.arity; ++j) {
        Vec w = m.members[i].apply(m.members[j].apply_adjoint(v));
        if (i == j) w -= v;
        worst = std::max(worst, norm(w) / nv);
      }
  }
  return worst;
}

// compress_to_root with the unitarity precondition checked.
inline Vec u_beta(const LimitVec& x, double relation_tol = kDefaultTol) {
  if (x.mod == nullptr) throw std::invalid_argument("state has no module");
  if (cuntz_relation_residual(*x.mod) > relation_tol)
    throw std::invalid_argument(
        "member adjoints do not satisfy the Cuntz relations");
  return compress_to_root(x);
}

// Finite sum of words in the Cuntz generators.  A letter +i stands for S_i
// and -i for S_i* (i is 1-based); within a term the leftmost letter acts
// last.  In a module whose member adjoints satisfy the Cuntz relations,
// S_i acts as members[i-1].apply_adjoint and S_i* as members[i-1].apply.
struct CuntzWordSum {
  struct Term {
    Complex coeff = 1.0;
    std::vector<int> letters;
  };
  int arity = 2;
  std::vector<Term> terms;

  std::string str() const {
    if (terms.empty()) return "0";
    std::string out;
    for (size_t t = 0; t < terms.size(); ++t) {
      if (t) out += " + ";
      const Term& term = terms[t];
      if (term.coeff != Complex(1.0)) {
        out += "(" + std::to_string(term.coeff.real()) + (term.coeff.imag() < 0 ? "-" : "+") +
               std::to_string(std::abs(term.coeff.imag())) + "i)";
        if (!term.letters.empty()) out += " ";
      }
      if (term.letters.empty() && term.coeff == Complex(1.0)) {
        out += "1";
        continue;
      }
      for (size_t k = 0; k < term.letters.size(); ++k) {
        if (k) out += " ";
        int l = term.letters[k];
        out += "S" + std::to_string(std::abs(l)) + (l < 0 ? "*" : "");
      }
    }
    return out;
  }
};

inline CuntzWordSum adjoint(const CuntzWordSum& s) {
  CuntzWordSum out;
  out.arity = s.arity;
  for (const auto& term : s.terms) {
    CuntzWordSum::Term t;
    t.coeff = std::conj(term.coeff);
    for (auto it = term.letters.rbegin(); it != term.letters.rend(); ++it)
      t.letters.push_back(-*it);
    out.terms.push_back(std::move(t));
  }
  return out;
}

// The word sum of a group element: one term per top leaf j, reading the top
// leaf word in the S_i and the matched bottom leaf word in the S_i*.  The sum
// is a unitary in the Cuntz algebra, and conjugating the compression by it
// reproduces the direct-limit action.
inline CuntzWordSum nekrashevych(const FracElement& g) {
  CuntzWordSum out;
  out.arity = g.arity;
  std::vector<LeafAddress> top = leaf_addresses(g.top);
  std::vector<LeafAddress> bottom = leaf_addresses(g.bottom);
  for (int j = 1; j <= g.leaves(); ++j) {
    CuntzWordSum::Term term;
    for (int digit : top[j - 1]) term.letters.push_back(digit + 1);
    const LeafAddress& src = bottom[g.match_bottom(j) - 1];
    for (auto it = src.rbegin(); it != src.rend(); ++it)
      term.letters.push_back(-(*it + 1));
    out.terms.push_back(std::move(term));
  }
  return out;
}

inline Vec evaluate(const CuntzWordSum& s, const PythModule& m, const Vec& v) {
  if (s.arity != m.arity)
    throw std::invalid_argument("word sum and module arity differ");
  Vec acc = zero_like(v);
  for (const auto& term : s.terms) {
    Vec w = v;
    for (auto it = term.letters.rbegin(); it != term.letters.rend(); ++it) {
      int i = std::abs(*it) - 1;
      if (i >= m.arity) throw std::invalid_argument("letter index out of range");
      w = *it > 0 ? m.members[i].apply_adjoint(w) : m.members[i].apply(w);
    }
    acc += term.coeff * w;
  }
  return acc;
}

// l^2(N) with S_1, S_2 the even/odd interleaving isometries: the standard
// example of a module whose member adjoints satisfy the Cuntz relations.
inline PythModule interleave_cuntz_module() {
  auto lab = [](const Label& l) { return std::get<long long>(l); };
  LabelRule a1 = [=](const Label& l) {
    long long k = lab(l);
    return k % 2 == 0 ? Vec::basis(k / 2) : Vec::sparse();
  };
  LabelRule a2 = [=](const Label& l) {
    long long k = lab(l);
    return k % 2 == 1 ? Vec::basis((k - 1) / 2) : Vec::sparse();
  };
  LabelRule s1 = [=](const Label& l) { return Vec::basis(2 * lab(l)); };
  LabelRule s2 = [=](const Label& l) { return Vec::basis(2 * lab(l) + 1); };
  return sparse_module("interleave", {a1, a2}, {s1, s2},
                       Vec::basis(static_cast<long long>(0)));
}

}  // namespace pythrep
