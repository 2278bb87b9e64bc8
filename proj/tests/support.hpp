// Shared helpers for the test binaries: deterministic random trees, module
// vectors, and limit-space states.
#pragma once

#include <random>
#include <vector>

#include "pythrep/opalg.hpp"
#include "pythrep/rep.hpp"
#include "pythrep/trees.hpp"

namespace pythrep::testing {

inline Tree random_tree(std::mt19937& rng, int arity, int grows) {
  Tree t = Tree::leaf(arity);
  for (int step = 0; step < grows; ++step) {
    std::uniform_int_distribution<int> pick(1, t.leaf_count());
    t = compose_tree(grow_leaf(identity_forest(t.leaf_count(), arity),
                               pick(rng), Tree::caret(arity)),
                     t);
  }
  return t;
}

inline Eigen::MatrixXcd random_unitary(std::mt19937& rng, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  return Eigen::MatrixXcd(qr.householderQ());
}

inline Complex random_complex(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {u(rng), u(rng)};
}

// Random module vector: dense uses a random complex vector; sparse draws
// amplitudes on the given label pool.
inline Vec random_module_vec(const PythModule& m, std::mt19937& rng,
                             const std::vector<Label>& pool = {}) {
  if (m.is_dense) {
    int d = m.vacuum.dim();
    Eigen::VectorXcd v(d);
    for (int i = 0; i < d; ++i) v[i] = random_complex(rng);
    return Vec::dense(std::move(v));
  }
  std::vector<Label> labels = pool;
  if (labels.empty())
    for (const auto& [l, c] : m.vacuum.s) labels.push_back(l);
  Vec v = Vec::sparse();
  for (const Label& l : labels) v += random_complex(rng) * Vec::basis(l);
  return v;
}

inline LimitVec random_state(const PythModule& m, std::mt19937& rng, int grows,
                             const std::vector<Label>& pool = {}) {
  LimitVec x;
  x.mod = &m;
  x.tree = random_tree(rng, m.arity, grows);
  for (int l = 0; l < x.tree.leaf_count(); ++l)
    x.parts.push_back(random_module_vec(m, rng, pool));
  return x;
}

}  // namespace pythrep::testing
