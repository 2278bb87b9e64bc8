#pragma once

#include <Eigen/Dense>
#include <complex>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "pythrep/rational.hpp"

namespace pythrep {

using Complex = std::complex<double>;

// Basis labels for sparse coefficient spaces (integers for shift/interleave
// models, strings for group words and digit rays).
using Label = std::variant<long long, std::string>;

inline std::string label_str(const Label& l) {
  if (std::holds_alternative<long long>(l)) return std::to_string(std::get<long long>(l));
  return std::get<std::string>(l);
}

constexpr double kDropTol = 1e-15;   // sparse amplitude drop threshold
constexpr double kDefaultTol = 1e-9; // default pass/fail tolerance

// A coefficient-space vector: dense complex amplitudes or a finite
// label -> amplitude map. The two backends never mix in one expression.
struct Vec {
  bool is_dense = true;
  Eigen::VectorXcd d;
  std::map<Label, Complex> s;

  static Vec dense(Eigen::VectorXcd v) {
    Vec out;
    out.is_dense = true;
    out.d = std::move(v);
    return out;
  }
  static Vec dense_zero(int dim) { return dense(Eigen::VectorXcd::Zero(dim)); }
  static Vec sparse() {
    Vec out;
    out.is_dense = false;
    return out;
  }
  static Vec basis(Label l, Complex amp = 1.0) {
    Vec out = sparse();
    out.s.emplace(std::move(l), amp);
    return out;
  }

  int dim() const { return is_dense ? static_cast<int>(d.size()) : -1; }

  Vec& chop() {
    if (!is_dense)
      for (auto it = s.begin(); it != s.end();)
        it = std::abs(it->second) <= kDropTol ? s.erase(it) : std::next(it);
    return *this;
  }

  Vec& operator+=(const Vec& o) {
    if (is_dense != o.is_dense) throw std::invalid_argument("mixed vector backends");
    if (is_dense) {
      if (d.size() != o.d.size()) throw std::invalid_argument("dimension mismatch");
      d += o.d;
    } else {
      for (const auto& [l, c] : o.s) s[l] += c;
      chop();
    }
    return *this;
  }
  Vec& operator-=(const Vec& o) { return *this += (-1.0) * o; }
  Vec& operator*=(Complex c) {
    if (is_dense) d *= c;
    else {
      for (auto& [l, a] : s) a *= c;
      chop();
    }
    return *this;
  }
  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(Complex c, Vec v) { return v *= c; }
};

// Linear in the first argument, conjugate-linear in the second.
inline Complex inner(const Vec& x, const Vec& y) {
  if (x.is_dense != y.is_dense) throw std::invalid_argument("mixed vector backends");
  if (x.is_dense) {
    if (x.d.size() != y.d.size()) throw std::invalid_argument("dimension mismatch");
    return y.d.dot(x.d);  // Eigen conjugates the callee
  }
  Complex acc = 0;
  for (const auto& [l, c] : x.s) {
    auto it = y.s.find(l);
    if (it != y.s.end()) acc += c * std::conj(it->second);
  }
  return acc;
}

inline double norm(const Vec& v) { return std::sqrt(std::abs(inner(v, v).real())); }

inline Vec zero_like(const Vec& v) {
  return v.is_dense ? Vec::dense_zero(static_cast<int>(v.d.size())) : Vec::sparse();
}

// Rule sending one basis label to a finite vector; extended linearly.
using LabelRule = std::function<Vec(const Label&)>;

struct Op {
  std::function<Vec(const Vec&)> apply;
  std::function<Vec(const Vec&)> apply_adjoint;
  bool has_matrix = false;
  Eigen::MatrixXcd mat;  // dense backend only
};

inline Op dense_op(Eigen::MatrixXcd m) {
  Op op;
  op.has_matrix = true;
  op.mat = std::move(m);
  op.apply = [mat = op.mat](const Vec& v) {
    if (!v.is_dense || v.d.size() != mat.cols())
      throw std::invalid_argument("dense op: dimension mismatch");
    return Vec::dense(mat * v.d);
  };
  op.apply_adjoint = [madj = Eigen::MatrixXcd(op.mat.adjoint())](const Vec& v) {
    if (!v.is_dense || v.d.size() != madj.cols())
      throw std::invalid_argument("dense op: dimension mismatch");
    return Vec::dense(madj * v.d);
  };
  return op;
}

inline Op sparse_op(LabelRule rule, LabelRule adjoint_rule) {
  auto extend = [](LabelRule r) {
    return [r = std::move(r)](const Vec& v) {
      if (v.is_dense) throw std::invalid_argument("sparse op applied to dense vector");
      Vec out = Vec::sparse();
      for (const auto& [l, c] : v.s) out += c * r(l);
      return out.chop();
    };
  };
  Op op;
  op.apply = extend(std::move(rule));
  op.apply_adjoint = extend(std::move(adjoint_rule));
  return op;
}

// n operators A_1..A_n with sum A_i* A_i = id, plus a unit vacuum vector.
struct PythModule {
  std::string id = "module";
  int arity = 2;
  bool is_dense = true;
  std::vector<Op> members;
  Vec vacuum;
};

inline PythModule dense_module(std::string id, std::vector<Eigen::MatrixXcd> mats,
                               Eigen::VectorXcd omega) {
  if (mats.empty()) throw std::invalid_argument("need at least two members");
  PythModule m;
  m.id = std::move(id);
  m.arity = static_cast<int>(mats.size());
  if (m.arity < 2) throw std::invalid_argument("need at least two members");
  m.is_dense = true;
  for (auto& mat : mats) {
    if (mat.rows() != omega.size() || mat.cols() != omega.size())
      throw std::invalid_argument("member dimension mismatch");
    m.members.push_back(dense_op(std::move(mat)));
  }
  m.vacuum = Vec::dense(std::move(omega));
  if (std::abs(norm(m.vacuum) - 1.0) > 1e-12)
    throw std::invalid_argument("vacuum must be a unit vector");
  return m;
}

inline PythModule sparse_module(std::string id, std::vector<LabelRule> rules,
                                std::vector<LabelRule> adjoint_rules, Vec omega) {
  if (rules.size() != adjoint_rules.size() || rules.size() < 2)
    throw std::invalid_argument("need matching rule/adjoint lists, length >= 2");
  PythModule m;
  m.id = std::move(id);
  m.arity = static_cast<int>(rules.size());
  m.is_dense = false;
  for (size_t i = 0; i < rules.size(); ++i)
    m.members.push_back(sparse_op(rules[i], adjoint_rules[i]));
  m.vacuum = std::move(omega);
  if (m.vacuum.is_dense) throw std::invalid_argument("sparse module needs sparse vacuum");
  if (std::abs(norm(m.vacuum) - 1.0) > 1e-12)
    throw std::invalid_argument("vacuum must be a unit vector");
  return m;
}

// Member i is A_i (+) A_i'; vacuum (omega1 (+) omega2)/sqrt(2). Dense only.
inline PythModule direct_sum(const PythModule& m1, const PythModule& m2) {
  if (m1.arity != m2.arity) throw std::invalid_argument("direct_sum: arity mismatch");
  if (!m1.is_dense || !m2.is_dense)
    throw std::invalid_argument("direct_sum: dense modules only");
  int d1 = m1.vacuum.dim(), d2 = m2.vacuum.dim();
  std::vector<Eigen::MatrixXcd> mats;
  for (int i = 0; i < m1.arity; ++i) {
    Eigen::MatrixXcd blk = Eigen::MatrixXcd::Zero(d1 + d2, d1 + d2);
    blk.topLeftCorner(d1, d1) = m1.members[i].mat;
    blk.bottomRightCorner(d2, d2) = m2.members[i].mat;
    mats.push_back(std::move(blk));
  }
  Eigen::VectorXcd omega(d1 + d2);
  omega << m1.vacuum.d / std::sqrt(2.0), m2.vacuum.d / std::sqrt(2.0);
  return dense_module(m1.id + "(+)" + m2.id, std::move(mats), std::move(omega));
}

struct ResidualReport {
  double max_residual = 0;
  int samples = 0;
  bool pass(double tol = kDefaultTol) const { return max_residual <= tol; }
};

// Sample vectors for relation checks: the full basis (dense) or basis vectors
// of every label reachable from the vacuum by at most `depth` member/adjoint
// applications (sparse), capped at `max_labels` by breadth-first order.
inline std::vector<Vec> pythagorean_samples(const PythModule& m, int depth = 12,
                                            int max_labels = 4000) {
  std::vector<Vec> out;
  if (m.is_dense) {
    int d = m.vacuum.dim();
    for (int i = 0; i < d; ++i) {
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(d);
      e[i] = 1.0;
      out.push_back(Vec::dense(std::move(e)));
    }
    return out;
  }
  std::set<Label> seen;
  std::deque<std::pair<Label, int>> frontier;
  for (const auto& [l, c] : m.vacuum.s) {
    seen.insert(l);
    frontier.emplace_back(l, 0);
  }
  while (!frontier.empty() && static_cast<int>(seen.size()) < max_labels) {
    auto [l, dpt] = frontier.front();
    frontier.pop_front();
    if (dpt >= depth) continue;
    Vec b = Vec::basis(l);
    for (const Op& op : m.members)
      for (const Vec& img : {op.apply(b), op.apply_adjoint(b)})
        for (const auto& [l2, c2] : img.s)
          if (seen.insert(l2).second) frontier.emplace_back(l2, dpt + 1);
  }
  for (const Label& l : seen) out.push_back(Vec::basis(l));
  return out;
}

// Max over samples v of || sum_i A_i* A_i v - v ||.
inline ResidualReport check_pythagorean(const PythModule& m,
                                        const std::vector<Vec>& samples) {
  if (samples.empty()) throw std::invalid_argument("need at least one sample");
  ResidualReport rep;
  rep.samples = static_cast<int>(samples.size());
  for (const Vec& v : samples) {
    Vec acc = zero_like(v);
    for (const Op& op : m.members) acc += op.apply_adjoint(op.apply(v));
    rep.max_residual = std::max(rep.max_residual, norm(acc - v));
  }
  return rep;
}

inline ResidualReport check_pythagorean(const PythModule& m) {
  return check_pythagorean(m, pythagorean_samples(m));
}

// Max over sampled pairs of |<A v, w> - <v, A* w>|.
inline ResidualReport check_adjoint_pairing(const PythModule& m,
                                            const std::vector<Vec>& samples) {
  ResidualReport rep;
  size_t cap = std::min<size_t>(samples.size(), 30);
  for (size_t i = 0; i < cap; ++i)
    for (size_t j = 0; j < cap; ++j)
      for (const Op& op : m.members) {
        Complex lhs = inner(op.apply(samples[i]), samples[j]);
        Complex rhs = inner(samples[i], op.apply_adjoint(samples[j]));
        rep.max_residual = std::max(rep.max_residual, std::abs(lhs - rhs));
        ++rep.samples;
      }
  return rep;
}

}  // namespace pythrep
