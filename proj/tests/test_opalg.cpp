#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pythrep/opalg.hpp"

using namespace pythrep;
using Catch::Matchers::WithinAbs;

namespace {

Eigen::VectorXcd evec(std::initializer_list<Complex> xs) {
  Eigen::VectorXcd v(static_cast<long>(xs.size()));
  long i = 0;
  for (Complex x : xs) v[i++] = x;
  return v;
}

// One-dimensional module: members are the scalars a, b with |a|^2 + |b|^2 = 1.
PythModule scalar_module(Complex a, Complex b) {
  Eigen::MatrixXcd ma(1, 1), mb(1, 1);
  ma << a;
  mb << b;
  return dense_module("scalar", {ma, mb}, evec({1.0}));
}

// Two-dimensional module with A = e1 e2^*, B = e1 e1^*; A^*A + B^*B = I.
PythModule qubit_module() {
  Eigen::MatrixXcd a(2, 2), b(2, 2);
  a << 0, 1, 0, 0;
  b << 1, 0, 0, 0;
  return dense_module("qubit", {a, b}, evec({1.0, 0.0}));
}

// The same module on sparse vectors with integer labels 0, 1.
PythModule qubit_module_sparse() {
  LabelRule a = [](const Label& l) {
    return std::get<long long>(l) == 1 ? Vec::basis(0LL) : Vec::sparse();
  };
  LabelRule a_adj = [](const Label& l) {
    return std::get<long long>(l) == 0 ? Vec::basis(1LL) : Vec::sparse();
  };
  LabelRule b = [](const Label& l) {
    return std::get<long long>(l) == 0 ? Vec::basis(0LL) : Vec::sparse();
  };
  LabelRule b_adj = b;
  return sparse_module("qubit-sparse", {a, b}, {a_adj, b_adj}, Vec::basis(0LL));
}

// Members are the adjoints of the interleaving shifts on l^2(Z):
// S1 d_k = d_{2k}, S2 d_k = d_{2k+1}, A_i = S_i^*.
PythModule interleave_module() {
  LabelRule a1 = [](const Label& l) {
    long long k = std::get<long long>(l);
    return k % 2 == 0 ? Vec::basis(k / 2) : Vec::sparse();
  };
  LabelRule a1_adj = [](const Label& l) {
    return Vec::basis(2 * std::get<long long>(l));
  };
  LabelRule a2 = [](const Label& l) {
    long long k = std::get<long long>(l);
    return (k % 2 + 2) % 2 == 1 ? Vec::basis((k - 1) / 2) : Vec::sparse();
  };
  LabelRule a2_adj = [](const Label& l) {
    return Vec::basis(2 * std::get<long long>(l) + 1);
  };
  return sparse_module("interleave", {a1, a2}, {a1_adj, a2_adj}, Vec::basis(0LL));
}

}  // namespace

TEST_CASE("vector arithmetic, both backends") {
  Vec x = Vec::dense(evec({1.0, 2.0}));
  Vec y = Vec::dense(evec({Complex(0, 1), 1.0}));
  Vec z = x + Complex(2, 0) * y;
  CHECK_THAT(std::abs(z.d[0] - Complex(1, 2)), WithinAbs(0, 1e-15));
  CHECK_THAT(std::abs(z.d[1] - Complex(4, 0)), WithinAbs(0, 1e-15));
  CHECK(z.dim() == 2);

  Vec u = Vec::basis(std::string("w")) + Complex(0, 3) * Vec::basis(5LL);
  CHECK(u.dim() == -1);
  CHECK(u.s.size() == 2);
  u -= Complex(0, 3) * Vec::basis(5LL);
  CHECK(u.s.size() == 1);  // exact cancellation chopped away
  CHECK(label_str(u.s.begin()->first) == "w");

  CHECK_THROWS_AS(x + u, std::invalid_argument);
  CHECK_THROWS_AS(inner(x, u), std::invalid_argument);
  CHECK_THROWS_AS(x + Vec::dense(evec({1.0})), std::invalid_argument);
}

TEST_CASE("inner product is linear in the first slot") {
  Complex c(0.3, -0.8);
  Vec x = Vec::dense(evec({1.0, Complex(0, 1)}));
  Vec y = Vec::dense(evec({Complex(2, 1), -1.0}));
  CHECK_THAT(std::abs(inner(c * x, y) - c * inner(x, y)), WithinAbs(0, 1e-14));
  CHECK_THAT(std::abs(inner(x, c * y) - std::conj(c) * inner(x, y)),
             WithinAbs(0, 1e-14));
  CHECK_THAT(std::abs(inner(x, y) - std::conj(inner(y, x))), WithinAbs(0, 1e-14));

  Vec p = Vec::basis(1LL, Complex(0, 2));
  Vec q = Vec::basis(1LL, Complex(1, 1)) + Vec::basis(2LL);
  // <p, q> = 2i * conj(1+i) = 2i(1-i) = 2 + 2i
  CHECK_THAT(std::abs(inner(p, q) - Complex(2, 2)), WithinAbs(0, 1e-14));
  CHECK_THAT(norm(p), WithinAbs(2.0, 1e-14));
}

TEST_CASE("dense operators and adjoints") {
  Eigen::MatrixXcd m(2, 2);
  m << 0, Complex(0, 1), 0, 0;
  Op op = dense_op(m);
  Vec e1 = Vec::dense(evec({1.0, 0.0})), e2 = Vec::dense(evec({0.0, 1.0}));
  CHECK_THAT(std::abs(op.apply(e2).d[0] - Complex(0, 1)), WithinAbs(0, 1e-15));
  CHECK_THAT(std::abs(op.apply_adjoint(e1).d[1] - Complex(0, -1)),
             WithinAbs(0, 1e-15));
  CHECK_THROWS_AS(op.apply(Vec::dense(evec({1.0}))), std::invalid_argument);
  CHECK_THROWS_AS(op.apply(Vec::basis(0LL)), std::invalid_argument);
}

TEST_CASE("partition-of-unity residual vanishes on honest modules") {
  for (const PythModule& m :
       {scalar_module(0.6, 0.8), scalar_module(Complex(0.6, 0), Complex(0, 0.8)),
        qubit_module()}) {
    ResidualReport rep = check_pythagorean(m);
    INFO(m.id);
    CHECK(rep.samples > 0);
    CHECK_THAT(rep.max_residual, WithinAbs(0, 1e-14));
    CHECK(rep.pass());
    ResidualReport adj = check_adjoint_pairing(m, pythagorean_samples(m));
    CHECK_THAT(adj.max_residual, WithinAbs(0, 1e-14));
  }
}

TEST_CASE("partition-of-unity residual catches a corrupted module") {
  PythModule bad = scalar_module(0.6, 0.7);  // 0.36 + 0.49 = 0.85
  ResidualReport rep = check_pythagorean(bad);
  CHECK_THAT(rep.max_residual, WithinAbs(0.15, 1e-12));
  CHECK_FALSE(rep.pass());
  CHECK_FALSE(rep.pass(0.1));
  CHECK(rep.pass(0.2));
}

TEST_CASE("sparse module over integer labels: interleaving shifts") {
  PythModule m = interleave_module();
  std::vector<Vec> samples = pythagorean_samples(m, 6, 100);
  CHECK(!samples.empty());
  CHECK(samples.size() <= 100);
  ResidualReport rep = check_pythagorean(m, samples);
  CHECK_THAT(rep.max_residual, WithinAbs(0, 1e-14));
  ResidualReport adj = check_adjoint_pairing(m, samples);
  CHECK_THAT(adj.max_residual, WithinAbs(0, 1e-14));

  // S2^* S1 d_3 = S2^* d_6 = 0, S1^* S1 d_3 = d_3.
  const Op& a1 = m.members[0];
  const Op& a2 = m.members[1];
  Vec d3 = Vec::basis(3LL);
  CHECK(a2.apply(a1.apply_adjoint(d3)).s.empty());
  Vec back = a1.apply(a1.apply_adjoint(d3));
  CHECK_THAT(norm(back - d3), WithinAbs(0, 1e-15));
}

TEST_CASE("dense and sparse realizations of the same module agree") {
  PythModule md = qubit_module();
  PythModule ms = qubit_module_sparse();
  // Compare <W omega, omega> for all words W of length <= 3 in {A, B, A*, B*}.
  struct Move {
    int member;
    bool adjoint;
  };
  std::vector<std::vector<Move>> words{{}};
  for (int len = 1; len <= 3; ++len) {
    size_t start = words.size();
    (void)start;
    std::vector<std::vector<Move>> next;
    for (const auto& w : words)
      if (static_cast<int>(w.size()) == len - 1)
        for (int mem = 0; mem < 2; ++mem)
          for (bool adj : {false, true}) {
            auto w2 = w;
            w2.push_back({mem, adj});
            next.push_back(std::move(w2));
          }
    words.insert(words.end(), next.begin(), next.end());
  }
  auto eval = [](const PythModule& m, const std::vector<Move>& w) {
    Vec v = m.vacuum;
    for (auto it = w.rbegin(); it != w.rend(); ++it)
      v = it->adjoint ? m.members[it->member].apply_adjoint(v)
                      : m.members[it->member].apply(v);
    return inner(v, m.vacuum);
  };
  for (const auto& w : words)
    CHECK_THAT(std::abs(eval(md, w) - eval(ms, w)), WithinAbs(0, 1e-13));
}

TEST_CASE("direct sum stacks blocks and splits the vacuum") {
  PythModule m = direct_sum(scalar_module(0.6, 0.8), scalar_module(1.0, 0.0));
  CHECK(m.id == "scalar(+)scalar");
  CHECK(m.arity == 2);
  CHECK(m.vacuum.dim() == 2);
  CHECK_THAT(std::abs(m.vacuum.d[0] - 1.0 / std::sqrt(2.0)), WithinAbs(0, 1e-15));
  CHECK_THAT(std::abs(m.members[0].mat(0, 0) - 0.6), WithinAbs(0, 1e-15));
  CHECK_THAT(std::abs(m.members[0].mat(1, 1) - 1.0), WithinAbs(0, 1e-15));
  CHECK_THAT(std::abs(m.members[0].mat(0, 1)), WithinAbs(0, 1e-15));
  CHECK_THAT(check_pythagorean(m).max_residual, WithinAbs(0, 1e-14));

  PythModule tri = direct_sum(m, scalar_module(0.0, 1.0));
  CHECK(tri.vacuum.dim() == 3);
  CHECK_THAT(check_pythagorean(tri).max_residual, WithinAbs(0, 1e-14));
}

TEST_CASE("module constructors validate their input") {
  Eigen::MatrixXcd one(1, 1);
  one << 1.0;
  CHECK_THROWS_AS(dense_module("m", {one}, evec({1.0})), std::invalid_argument);
  CHECK_THROWS_AS(dense_module("m", {one, one}, evec({2.0})), std::invalid_argument);
  Eigen::MatrixXcd wide(1, 2);
  wide << 1.0, 0.0;
  CHECK_THROWS_AS(dense_module("m", {wide, wide}, evec({1.0})),
                  std::invalid_argument);
  LabelRule zero = [](const Label&) { return Vec::sparse(); };
  CHECK_THROWS_AS(sparse_module("m", {zero}, {zero}, Vec::basis(0LL)),
                  std::invalid_argument);
  CHECK_THROWS_AS(sparse_module("m", {zero, zero}, {zero, zero},
                                Vec::dense(evec({1.0}))),
                  std::invalid_argument);
  CHECK_THROWS_AS(sparse_module("m", {zero, zero}, {zero, zero},
                                Vec::basis(0LL, 2.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(direct_sum(scalar_module(1, 0), interleave_module()),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_pythagorean(qubit_module(), {}), std::invalid_argument);
}
