// Certified example modules: a dozen preset coefficient systems, each bundled
// with the checks that pin its special structure (closed-form coefficients,
// stabilizer characterisations, relations, rotation limits).  Every check
// compares an independently computed oracle against the generic machinery.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pythrep/cocycle.hpp"
#include "pythrep/cuntz.hpp"
#include "pythrep/opalg.hpp"
#include "pythrep/rep.hpp"
#include "pythrep/rotation.hpp"
#include "pythrep/thompson.hpp"

namespace pythrep {

struct CheckResult {
  std::string name;
  bool pass = false;
  double residual = 0;  // measured deviation from the oracle
  double tol = 0;
  std::string detail;
};

struct ExampleReport {
  std::string id;
  std::string param;
  std::string blurb;
  std::vector<CheckResult> checks;

  bool pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
  }
};

namespace detail {

inline CheckResult residual_check(std::string name, double residual, double tol,
                                  std::string detail = "") {
  CheckResult c;
  c.name = std::move(name);
  c.residual = residual;
  c.tol = tol;
  c.pass = residual <= tol;
  c.detail = std::move(detail);
  return c;
}

inline CheckResult flag_check(std::string name, bool ok, std::string detail = "") {
  CheckResult c;
  c.name = std::move(name);
  c.pass = ok;
  c.residual = ok ? 0.0 : 1.0;
  c.tol = 0.0;
  c.detail = std::move(detail);
  return c;
}

inline FracElement from_trees(Tree top, Tree bottom, int arity = 2) {
  FracElement e;
  e.flavor = Flavor::F;
  e.arity = arity;
  e.top = std::move(top);
  e.bottom = std::move(bottom);
  if (e.top.leaf_count() != e.bottom.leaf_count())
    throw std::invalid_argument("leaf counts differ");
  return e;
}

inline CheckResult partition_of_unity(const PythModule& m, double tol = 1e-12) {
  ResidualReport r = check_pythagorean(m);
  return residual_check("partition-of-unity", r.max_residual, tol,
                        std::to_string(r.samples) + " sample vectors");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Module factories
// ---------------------------------------------------------------------------

inline PythModule scalar_pair_module(std::string id, Complex a, Complex b) {
  Eigen::MatrixXcd ma(1, 1), mb(1, 1);
  ma << a;
  mb << b;
  Eigen::VectorXcd om(1);
  om << 1.0;
  return dense_module(std::move(id), {ma, mb}, om);
}

inline PythModule trivial_module() { return scalar_pair_module("trivial", 1.0, 0.0); }

inline PythModule lebesgue_module() {
  double s = 1.0 / std::sqrt(2.0);
  return scalar_pair_module("lebesgue", s, s);
}

// One-dimensional unitary pair (omega/sqrt2, omega/sqrt2), |omega| = 1.
inline PythModule twisted_module(Complex omega) {
  if (std::abs(std::abs(omega) - 1.0) > 1e-3)
    throw std::invalid_argument("twist parameter must have modulus one");
  omega /= std::abs(omega);
  double s = 1.0 / std::sqrt(2.0);
  return scalar_pair_module("twisted", s * omega, s * omega);
}

inline PythModule real_scalar_module(double theta) {
  return scalar_pair_module("scalar", std::cos(theta), std::sin(theta));
}

inline PythModule complex_scalar_module(Complex a) {
  if (std::abs(a) >= 1.0)
    throw std::invalid_argument("need |a| < 1 so that |a|^2 + |b|^2 = 1");
  return scalar_pair_module("scalar-complex", a, std::sqrt(1.0 - std::norm(a)));
}

// l^2 of the free group on two generators; A and B move the reduced word by
// a and b, scaled by 1/sqrt(2).  Labels are reduced words, capitals inverse.
inline PythModule free_group_module() {
  auto shift = [](char gen, const std::string& w) {
    char inv = std::isupper(static_cast<unsigned char>(gen))
                   ? static_cast<char>(std::tolower(static_cast<unsigned char>(gen)))
                   : static_cast<char>(std::toupper(static_cast<unsigned char>(gen)));
    if (!w.empty() && w.front() == inv) return w.substr(1);
    return std::string(1, gen) + w;
  };
  auto mover = [shift](char gen) {
    return LabelRule([shift, gen](const Label& l) {
      const double s = 1.0 / std::sqrt(2.0);
      return s * Vec::basis(shift(gen, std::get<std::string>(l)));
    });
  };
  return sparse_module("free-group", {mover('a'), mover('b')},
                       {mover('A'), mover('B')}, Vec::basis(std::string()));
}

// Fermion mode: A is the annihilator [[0,1],[0,0]], B its adjoint, vacuum e2.
inline PythModule car_module() {
  Eigen::MatrixXcd a(2, 2);
  a << 0, 1, 0, 0;
  Eigen::VectorXcd om(2);
  om << 0, 1;
  return dense_module("car", {a, a.adjoint()}, om);
}

inline PythModule car_module_sparse() {
  auto lab = [](const Label& l) { return std::get<long long>(l); };
  LabelRule a = [=](const Label& l) {
    return lab(l) == 1 ? Vec::basis(static_cast<long long>(0)) : Vec::sparse();
  };
  LabelRule astar = [=](const Label& l) {
    return lab(l) == 0 ? Vec::basis(static_cast<long long>(1)) : Vec::sparse();
  };
  return sparse_module("car-sparse", {a, astar}, {astar, a},
                       Vec::basis(static_cast<long long>(1)));
}

// Digit-stream module on l^2(N): the stream is prefix followed by the period
// repeated forever; A advances the position when the current digit is 0, B
// when it is 1.  The vacuum sits at position 0.
inline PythModule ray_module(std::string prefix, std::string period) {
  auto digits_ok = [](const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
  };
  if (period.empty() || !digits_ok(prefix) || !digits_ok(period))
    throw std::invalid_argument("need binary digit strings with nonempty period");
  if (period.find('0') == std::string::npos || period.find('1') == std::string::npos)
    throw std::invalid_argument("period must contain both digits");
  auto digit = [prefix, period](long long k) {
    if (k < static_cast<long long>(prefix.size())) return prefix[k] - '0';
    size_t off = static_cast<size_t>(k) - prefix.size();
    return period[off % period.size()] - '0';
  };
  auto step = [digit](int want, bool forward) {
    return LabelRule([digit, want, forward](const Label& l) {
      long long k = std::get<long long>(l);
      if (!forward) {
        if (k == 0 || digit(k - 1) != want) return Vec::sparse();
        return Vec::basis(k - 1);
      }
      return digit(k) == want ? Vec::basis(k + 1) : Vec::sparse();
    });
  };
  return sparse_module("ray", {step(0, true), step(1, true)},
                       {step(0, false), step(1, false)},
                       Vec::basis(static_cast<long long>(0)));
}

// The point of [0,1] whose binary digits the ray module walks along.
inline Rat ray_point(const std::string& prefix, const std::string& period) {
  Rat val(0), scale(1, 2);
  for (char c : prefix) {
    if (c == '1') val += scale;
    scale /= 2;
  }
  long long pnum = 0;
  for (char c : period) pnum = 2 * pnum + (c - '0');
  long long pden = (1LL << period.size()) - 1;
  // scale is 2^{-(|prefix|+1)} here, so 2*scale restores 2^{-|prefix|}
  return val + 2 * scale * Rat(pnum, pden);
}

// Two commuting projections summing to the identity, vacuum balanced.
inline PythModule projections_module() {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2), b = Eigen::MatrixXcd::Zero(2, 2);
  a(0, 0) = 1;
  b(1, 1) = 1;
  Eigen::VectorXcd om(2);
  om << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return dense_module("projections", {a, b}, om);
}

// Ternary scalar module supported on the middle-thirds Cantor set.
inline PythModule cantor_module() {
  double s = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd m1(1, 1), m2(1, 1), m3(1, 1);
  m1 << s;
  m2 << 0.0;
  m3 << s;
  Eigen::VectorXcd om(1);
  om << 1.0;
  return dense_module("cantor", {m1, m2, m3}, om);
}

inline std::vector<Eigen::MatrixXcd> triple_projection_matrices() {
  Eigen::Vector2cd x1(1.0, 0.0), x2(0.5, -std::sqrt(3.0) / 2), x3(0.5, std::sqrt(3.0) / 2);
  return {x1 * x1.adjoint(), x2 * x2.adjoint(), x3 * x3.adjoint()};
}

// Three rank-one projections onto lines at mutual angle 60 degrees, scaled by
// sqrt(2/3): a ternary module whose vacuum has trivial stabilizer.
inline PythModule triple_projections_module() {
  std::vector<Eigen::MatrixXcd> p = triple_projection_matrices();
  double s = std::sqrt(2.0 / 3.0);
  Eigen::VectorXcd om(2);
  om << 1.0, 0.0;
  return dense_module("triple-projections", {s * p[0], s * p[1], s * p[2]}, om);
}

// l^2(Z) with A the shift and B multiplication by lambda^n (|lambda| = 1),
// both scaled by 1/sqrt(2).
inline PythModule connes_landi_module(Complex lambda) {
  if (std::abs(std::abs(lambda) - 1.0) > 1e-3)
    throw std::invalid_argument("multiplier must have modulus one");
  lambda /= std::abs(lambda);
  auto pw = [lambda](long long k) {
    Complex v = 1.0;
    for (long long i = 0; i < std::llabs(k); ++i) v *= lambda;
    return k >= 0 ? v : 1.0 / v;
  };
  const double s = 1.0 / std::sqrt(2.0);
  auto lab = [](const Label& l) { return std::get<long long>(l); };
  LabelRule a = [=](const Label& l) { return s * Vec::basis(lab(l) + 1); };
  LabelRule astar = [=](const Label& l) { return s * Vec::basis(lab(l) - 1); };
  LabelRule b = [=](const Label& l) { return (s * pw(lab(l))) * Vec::basis(lab(l)); };
  LabelRule bstar = [=](const Label& l) {
    return (s * std::conj(pw(lab(l)))) * Vec::basis(lab(l));
  };
  return sparse_module("connes-landi", {a, b}, {astar, bstar},
                       Vec::basis(static_cast<long long>(0)));
}

// A deliberately broken module (first member scaled by 1.01): the partition
// of unity check must fail on it with residual about 0.02.
inline ResidualReport corrupted_module_report() {
  PythModule bad = scalar_pair_module("corrupted", 1.01, 0.0);
  return check_pythagorean(bad);
}

// ---------------------------------------------------------------------------
// Preset check suites
// ---------------------------------------------------------------------------

namespace detail {

// max |coefficient(g) - oracle(g)| over a ball.
template <typename Oracle>
double coefficient_deviation(const PythModule& m, const std::vector<FracElement>& ball,
                             Oracle&& oracle) {
  double worst = 0;
  for (const FracElement& g : ball)
    worst = std::max(
        worst, std::abs(coefficient_pathsum(m, g, m.vacuum, m.vacuum) - oracle(g)));
  return worst;
}

// max over the ball of |pathsum - transport| vacuum coefficients.
inline double algorithm_agreement(const PythModule& m,
                                  const std::vector<FracElement>& ball) {
  double worst = 0;
  for (const FracElement& g : ball)
    worst = std::max(worst, std::abs(vacuum_coefficient(m, g) -
                                     coefficient_pathsum(m, g, m.vacuum, m.vacuum)));
  return worst;
}

inline Complex geometry_overlap(const FracElement& g) {
  // weight sqrt(Leb(source) Leb(target)) summed over matched leaf pairs
  double acc = 0;
  for (int j = 1; j <= g.leaves(); ++j) {
    double lt = boost::rational_cast<double>(leaf_interval(g.top, j).length());
    double ls = boost::rational_cast<double>(
        leaf_interval(g.bottom, g.match_bottom(j)).length());
    acc += std::sqrt(lt * ls);
  }
  return acc;
}

}  // namespace detail

inline ExampleReport run_trivial() {
  ExampleReport rep;
  rep.id = "trivial";
  rep.blurb = "members (1,0): every interval-preserving element has coefficient 1";
  PythModule m = trivial_module();
  rep.checks.push_back(detail::partition_of_unity(m));
  rep.checks.push_back(detail::residual_check(
      "coefficient-one-on-interval-maps",
      detail::coefficient_deviation(m, enumerate_ball(5, Flavor::F),
                                    [](const FracElement&) { return 1.0; }),
      1e-12));
  rep.checks.push_back(detail::residual_check(
      "circle-maps-detect-leftmost-leaf",
      detail::coefficient_deviation(
          m, enumerate_ball(3, Flavor::T),
          [](const FracElement& g) { return g.match_top(1) == 1 ? 1.0 : 0.0; }),
      1e-12));
  return rep;
}

inline ExampleReport run_lebesgue() {
  ExampleReport rep;
  rep.id = "lebesgue";
  rep.blurb = "members (1,1)/sqrt2: coefficients are interval-overlap sums";
  PythModule m = lebesgue_module();
  rep.checks.push_back(detail::partition_of_unity(m));
  std::vector<FracElement> ball = enumerate_ball(5, Flavor::F);
  std::vector<FracElement> tball = enumerate_ball(3, Flavor::T);
  ball.insert(ball.end(), tball.begin(), tball.end());
  rep.checks.push_back(detail::residual_check(
      "coefficient-equals-interval-overlap",
      detail::coefficient_deviation(m, ball, detail::geometry_overlap), 1e-12));
  LimitVec vac = vacuum_vector(m);
  RotationSequence seq = empirical_rotation_limit(vac, vac, 1, 6, 0.0);
  double worst = 0;
  for (Complex v : seq.values) worst = std::max(worst, std::abs(v - 1.0));
  rep.checks.push_back(
      detail::residual_check("rotation-sequence-constant-one", worst, 1e-12));
  return rep;
}

// The telescoping elements whose coefficients stabilise: a fixed pair of
// 3-leaf trees grafted onto every leaf of the full tree of depth n.
inline FracElement averaging_element(int n) {
  Tree a = parse_tree("((..).)"), b = parse_tree("(.(..))");
  Tree tn = full_tree(n);
  std::vector<Tree> ga(tn.leaf_count(), a), gb(tn.leaf_count(), b);
  return detail::from_trees(compose_tree(Forest(2, ga), tn),
                            compose_tree(Forest(2, gb), tn));
}

inline ExampleReport run_scalar(double theta) {
  ExampleReport rep;
  rep.id = "scalar";
  rep.param = std::to_string(theta);
  rep.blurb = "members (cos t, sin t): commuting positive scalars";
  PythModule m = real_scalar_module(theta);
  double c = std::cos(theta), s = std::sin(theta);
  rep.checks.push_back(detail::partition_of_unity(m));

  FracElement g0 = element_from_text("((..).)/(.(..))");
  double v = c * c * c + c * c * s * s + s * s * s;
  rep.checks.push_back(detail::residual_check(
      "basic-element-coefficient-closed-form",
      std::abs(vacuum_coefficient(m, g0) - v), 1e-13));

  // the grafted elements act as v times the identity on states over the
  // depth-2 partition
  double worst = 0;
  bool reduced = true;
  Tree t2 = full_tree(2);
  std::vector<LimitVec> family;
  for (int l = 0; l < t2.leaf_count(); ++l) {
    LimitVec x;
    x.mod = &m;
    x.tree = t2;
    for (int k = 0; k < t2.leaf_count(); ++k)
      x.parts.push_back(Vec::dense(Eigen::VectorXcd::Constant(1, k == l ? 1.0 : 0.0)));
    family.push_back(std::move(x));
  }
  for (int n = 3; n <= 5; ++n) {
    FracElement gn = averaging_element(n);
    reduced = reduced && is_reduced(gn);
    for (const LimitVec& xi : family)
      for (const LimitVec& eta : family)
        worst = std::max(worst, std::abs(coefficient(gn, xi, eta) -
                                         v * inner(xi, eta)));
  }
  rep.checks.push_back(detail::flag_check("telescoping-elements-reduced", reduced));
  rep.checks.push_back(detail::residual_check(
      "telescoping-coefficients-stabilise", worst, 1e-12));

  // rotation limits: exact geometric approach to the closed form
  Complex w = omega_of(m);
  LimitVec vac = vacuum_vector(m);
  RotationSequence seq = empirical_rotation_limit(vac, vac, 1, 9, 0.0);
  double ratio_err = 0, extrap_err = 0;
  for (size_t n = 0; n + 1 < seq.values.size(); ++n) {
    Complex ya = seq.values[n] - x1(w), yb = seq.values[n + 1] - x1(w);
    if (std::abs(ya) > 1e-4)
      ratio_err = std::max(ratio_err,
                           std::abs(std::abs(yb) / std::abs(ya) - std::abs(w)));
    extrap_err = std::max(
        extrap_err,
        std::abs((seq.values[n + 1] - w * seq.values[n]) / (1.0 - w) - x1(w)));
  }
  rep.checks.push_back(
      detail::residual_check("rotation-ratio-matches-omega", ratio_err, 1e-10));
  rep.checks.push_back(detail::residual_check(
      "rotation-limit-extrapolates-to-closed-form", extrap_err, 1e-12));

  // higher rotation powers against the recursion, run at omega = 1/4
  PythModule quarter = real_scalar_module(std::acos(-1.0) / 12.0);
  Complex wq = omega_of(quarter);
  LimitVec qvac = vacuum_vector(quarter);
  double jworst = 0;
  for (int j : {1, 3, 5, 13}) {
    RotationSequence js = empirical_rotation_limit(qvac, qvac, j, 13);
    jworst = std::max(jworst, std::abs(js.limit - xj(j, wq)));
  }
  rep.checks.push_back(detail::residual_check(
      "higher-rotation-powers-match-recursion", jworst, 1e-6));
  return rep;
}

inline ExampleReport run_complex_scalar(Complex a) {
  ExampleReport rep;
  rep.id = "scalar-complex";
  rep.param = std::to_string(a.real()) + "+" + std::to_string(a.imag()) + "i";
  rep.blurb = "members (a, sqrt(1-|a|^2)): complex scalar coefficients";
  PythModule m = complex_scalar_module(a);
  Complex w = omega_of(m);
  rep.checks.push_back(detail::partition_of_unity(m));

  LimitVec vac = vacuum_vector(m);
  RotationSequence seq = empirical_rotation_limit(vac, vac, 1, 9, 0.0);
  double phase_err = 0, extrap_err = 0;
  for (size_t n = 0; n + 1 < seq.values.size(); ++n) {
    Complex ya = seq.values[n] - x1(w), yb = seq.values[n + 1] - x1(w);
    phase_err = std::max(phase_err, std::abs(yb - w * ya));
    extrap_err = std::max(
        extrap_err,
        std::abs((seq.values[n + 1] - w * seq.values[n]) / (1.0 - w) - x1(w)));
  }
  rep.checks.push_back(detail::residual_check(
      "rotation-errors-rotate-by-omega-exactly", phase_err, 1e-13));
  rep.checks.push_back(detail::residual_check(
      "rotation-limit-extrapolates-to-closed-form", extrap_err, 1e-12));

  Complex wb = std::conj(w);
  double x13_err = std::abs(
      xj(13, w) - (wb * wb + wb * w + wb * wb * w + wb * w * w + w * w) * x1(w));
  rep.checks.push_back(detail::residual_check(
      "thirteenth-limit-five-monomial-form", x13_err, 1e-13));
  double tree_err = 0;
  for (long long j = 1; j <= 512; ++j)
    tree_err = std::max(tree_err, std::abs(xj(j, w) - xj_via_tree(j, w)));
  rep.checks.push_back(detail::residual_check(
      "recursion-agrees-with-decorated-tree", tree_err, 1e-12));
  return rep;
}

inline ExampleReport run_free_group() {
  ExampleReport rep;
  rep.id = "free-group";
  rep.blurb = "translations of the free group: coefficient = measure of fixed points";
  PythModule m = free_group_module();
  rep.checks.push_back(detail::partition_of_unity(m));
  std::vector<FracElement> ball = enumerate_ball(5, Flavor::F);
  std::vector<FracElement> tball = enumerate_ball(3, Flavor::T);
  ball.insert(ball.end(), tball.begin(), tball.end());
  FracElement e = identity_element(Flavor::F);
  rep.checks.push_back(detail::residual_check(
      "coefficient-equals-fixed-point-measure",
      detail::coefficient_deviation(m, ball,
                                    [&](const FracElement& g) {
                                      return boost::rational_cast<double>(
                                          fixed_point_measure(g));
                                    }),
      1e-12, std::to_string(ball.size()) + " elements"));
  rep.checks.push_back(detail::residual_check(
      "coefficient-complements-displacement-metric",
      detail::coefficient_deviation(
          m, ball,
          [&](const FracElement& g) {
            return 1.0 - boost::rational_cast<double>(
                             pl_metric(g, identity_element(g.flavor)));
          }),
      1e-12));
  LimitVec vac = vacuum_vector(m);
  RotationSequence seq = empirical_rotation_limit(vac, vac, 1, 5, 0.0);
  double worst = 0;
  for (Complex v : seq.values) worst = std::max(worst, std::abs(v));
  rep.checks.push_back(
      detail::residual_check("rotation-coefficients-vanish", worst, 1e-13));
  return rep;
}

inline ExampleReport run_car() {
  ExampleReport rep;
  rep.id = "car";
  rep.blurb = "fermion mode: coefficient detects stabilising one third";
  PythModule m = car_module();
  rep.checks.push_back(detail::partition_of_unity(m));

  std::vector<FracElement> ball = enumerate_ball(7, Flavor::F);
  double worst = 0;
  int stabilisers = 0;
  Rat third(1, 3);
  for (const FracElement& g : ball) {
    bool fixes = pl_eval(g, third) == third;
    stabilisers += fixes;
    worst = std::max(worst, std::abs(coefficient_pathsum(m, g, m.vacuum, m.vacuum) -
                                     (fixes ? 1.0 : 0.0)));
  }
  rep.checks.push_back(detail::residual_check(
      "coefficient-is-indicator-of-fixing-one-third", worst, 1e-12,
      std::to_string(stabilisers) + " of " + std::to_string(ball.size()) +
          " elements fix 1/3"));

  PythModule ms = car_module_sparse();
  double agree = 0;
  for (const FracElement& g : enumerate_ball(5, Flavor::F))
    agree = std::max(agree, std::abs(vacuum_coefficient(m, g) -
                                     vacuum_coefficient(ms, g)));
  rep.checks.push_back(detail::residual_check(
      "dense-and-sparse-backends-agree", agree, 1e-12));

  auto decay = weak_decay(m, m.vacuum, m.vacuum, 6);
  double tail = 0;
  for (Complex v : decay) tail = std::max(tail, std::abs(v));
  rep.checks.push_back(
      detail::residual_check("alternating-products-vanish", tail, 0.0));
  return rep;
}

inline ExampleReport run_ray(const std::string& prefix, const std::string& period) {
  ExampleReport rep;
  rep.id = "ray";
  rep.param = prefix + "," + period;
  PythModule m = ray_module(prefix, period);
  Rat x = ray_point(prefix, period);
  rep.blurb = "digit-stream walk along x = " + to_string(x);
  rep.checks.push_back(detail::partition_of_unity(m));
  std::vector<FracElement> ball = enumerate_ball(5, Flavor::F);
  rep.checks.push_back(detail::residual_check(
      "coefficient-detects-fixing-the-point-with-slope-one",
      detail::coefficient_deviation(m, ball,
                                    [&](const FracElement& g) {
                                      return pl_eval(g, x) == x &&
                                                     slope(g, x) == Rat(1)
                                                 ? 1.0
                                                 : 0.0;
                                    }),
      1e-12, std::to_string(ball.size()) + " elements"));
  return rep;
}

inline ExampleReport run_projections() {
  ExampleReport rep;
  rep.id = "projections";
  rep.blurb = "commuting projections: coefficient 1 on interval maps, 0 off them";
  PythModule m = projections_module();
  rep.checks.push_back(detail::partition_of_unity(m));
  rep.checks.push_back(detail::residual_check(
      "interval-maps-have-coefficient-one",
      detail::coefficient_deviation(m, enumerate_ball(5, Flavor::F),
                                    [](const FracElement&) { return 1.0; }),
      1e-12));
  rep.checks.push_back(detail::residual_check(
      "proper-circle-maps-have-coefficient-zero",
      detail::coefficient_deviation(
          m, enumerate_ball(3, Flavor::T),
          [](const FracElement& g) { return g.match_top(1) == 1 ? 1.0 : 0.0; }),
      1e-12));
  return rep;
}

inline ExampleReport run_cantor() {
  ExampleReport rep;
  rep.id = "cantor";
  rep.blurb = "ternary scalars (1,0,1)/sqrt2 supported on the Cantor set";
  PythModule m = cantor_module();
  rep.checks.push_back(detail::partition_of_unity(m));

  auto middle_free = [](const Tree& t) {
    std::set<DyadicInterval> out;
    std::vector<LeafAddress> addrs = leaf_addresses(t);
    for (const LeafAddress& a : addrs)
      if (std::none_of(a.begin(), a.end(), [](int d) { return d == 1; }))
        out.insert(interval_of_address(a, 3));
    return out;
  };
  std::vector<FracElement> ball = enumerate_ball(5, Flavor::F, 3);
  bool ok = true;
  int full = 0;
  std::string witness;
  for (const FracElement& g : ball) {
    Complex cv = coefficient_pathsum(m, g, m.vacuum, m.vacuum);
    bool is_one = std::abs(cv - 1.0) <= 1e-12;
    bool sets_equal = middle_free(g.top) == middle_free(g.bottom);
    full += is_one;
    if (is_one != sets_equal && witness.empty()) witness = to_text(g);
    ok = ok && (is_one == sets_equal);
  }
  rep.checks.push_back(detail::flag_check(
      "coefficient-one-iff-surviving-intervals-match", ok,
      witness.empty() ? std::to_string(full) + " of " + std::to_string(ball.size()) +
                            " elements reach coefficient one"
                      : "mismatch at " + witness));
  rep.checks.push_back(detail::residual_check(
      "pathsum-agrees-with-transport", detail::algorithm_agreement(m, ball), 1e-12));
  return rep;
}

inline ExampleReport run_triple_projections() {
  ExampleReport rep;
  rep.id = "triple-projections";
  rep.blurb = "rank-one projections at mutual angle 60 degrees, scaled";
  PythModule m = triple_projections_module();
  std::vector<Eigen::MatrixXcd> p = triple_projection_matrices();

  double rel2 = 0, rel3 = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      rel2 = std::max(rel2, (p[i] * p[j] * p[i] - 0.25 * p[i]).norm());
      for (int k = 0; k < 3; ++k) {
        if (k == i || k == j) continue;
        rel3 = std::max(rel3, (p[i] * p[j] * p[k] * p[i] + 0.125 * p[i]).norm());
      }
    }
  rep.checks.push_back(
      detail::residual_check("sandwich-relation-quarter", rel2, 1e-12));
  rep.checks.push_back(
      detail::residual_check("cycle-relation-minus-eighth", rel3, 1e-12));
  rep.checks.push_back(detail::partition_of_unity(m));

  double min_gap = 1.0;
  bool identity_seen = false;
  for (const FracElement& g : enumerate_ball(5, Flavor::F, 3)) {
    double dist = std::abs(coefficient_pathsum(m, g, m.vacuum, m.vacuum) - 1.0);
    if (g.is_identity()) {
      identity_seen = true;
      min_gap = std::min(min_gap, 1.0);
      if (dist > 1e-12) min_gap = 0;
      continue;
    }
    min_gap = std::min(min_gap, dist);
  }
  rep.checks.push_back(detail::flag_check(
      "vacuum-stabiliser-trivial-on-ball", identity_seen && min_gap > 1e-6,
      "smallest non-identity gap " + std::to_string(min_gap)));

  // grafting two different subtrees onto the first leg fixes the vector
  // orthogonal to the vacuum, because the first member kills it
  std::vector<Tree> five = enumerate_trees(5, 3);
  Tree caret = Tree::caret(3), leaf = Tree::leaf(3);
  FracElement graft = detail::from_trees(
      compose_tree(Forest(3, {five.at(0), leaf, leaf}), caret),
      compose_tree(Forest(3, {five.at(1), leaf, leaf}), caret), 3);
  Eigen::VectorXcd perp(2);
  perp << 0.0, 1.0;
  LimitVec xp = root_vector(m, Vec::dense(perp));
  rep.checks.push_back(detail::flag_check(
      "grafted-element-fixes-orthogonal-vector",
      is_reduced(graft) && !graft.is_identity() &&
          norm(combine(1.0, act(graft, xp), -1.0, xp)) <= 1e-12 &&
          std::abs(coefficient(graft, xp, xp) - 1.0) <= 1e-12,
      to_text(graft)));
  return rep;
}

inline ExampleReport run_connes_landi(Complex lambda) {
  ExampleReport rep;
  rep.id = "connes-landi";
  rep.param = std::to_string(lambda.real()) + "+" + std::to_string(lambda.imag()) + "i";
  rep.blurb = "shift and diagonal multiplier on l^2(Z)";
  PythModule m = connes_landi_module(lambda);
  lambda /= std::abs(lambda);
  rep.checks.push_back(detail::partition_of_unity(m));

  // components of the stabilised vacuum: index = number of 0-digits,
  // modulus 2^{-depth/2}
  double comp_err = 0;
  bool comp_ok = true;
  std::vector<Tree> trees = enumerate_trees(5, 2);
  trees.push_back(full_tree(3));
  for (const Tree& t : trees) {
    LimitVec ph = stabilize(vacuum_vector(m), t);
    for (int l = 1; l <= t.leaf_count(); ++l) {
      const Vec& part = ph.parts[l - 1];
      int zeros = turn_counts(t, l)[0];
      int depth = static_cast<int>(leaf_addresses(t)[l - 1].size());
      if (part.is_dense || part.s.size() != 1 ||
          part.s.begin()->first != Label(static_cast<long long>(zeros))) {
        comp_ok = false;
        continue;
      }
      comp_err = std::max(comp_err, std::abs(std::abs(part.s.begin()->second) -
                                             std::pow(2.0, -depth / 2.0)));
    }
  }
  rep.checks.push_back(detail::residual_check(
      "vacuum-components-track-left-turn-counts", comp_ok ? comp_err : 1.0, 1e-13));

  LimitVec vac = vacuum_vector(m);
  RotationSequence seq = empirical_rotation_limit(vac, vac, 1, 8, 0.0);
  double bound_excess = 0;
  for (Complex v : seq.values)
    bound_excess = std::max(bound_excess, std::abs(v) - 0.25);
  rep.checks.push_back(detail::residual_check(
      "rotation-coefficients-bounded-by-quarter", std::max(0.0, bound_excess),
      1e-12));

  if (std::abs(lambda - 1.0) < 1e-12) {
    double flat_err = 0;
    for (size_t n = 1; n < seq.values.size(); ++n)
      flat_err = std::max(flat_err, std::abs(seq.values[n] - 0.25));
    rep.checks.push_back(detail::residual_check(
        "rotation-sequence-locks-at-quarter", flat_err, 1e-3));
    CommutingLimitReport solver = solve_commuting_limit(m);
    rep.checks.push_back(detail::flag_check(
        "limit-operator-hypothesis-holds",
        solver.hypothesis_ok && solver.converged &&
            solver.equation_residual <= 1e-12));
    rep.checks.push_back(detail::residual_check(
        "limit-operator-vacuum-value-quarter",
        std::abs(solver.vacuum_value - 0.25), 1e-10));
  }
  return rep;
}

inline ExampleReport run_twisted(Complex omega) {
  ExampleReport rep;
  rep.id = "twisted";
  rep.param = std::to_string(omega.real()) + "+" + std::to_string(omega.imag()) + "i";
  rep.blurb = "phase-twisted square modules on L^2[0,1]";
  PythModule m = twisted_module(omega);
  omega /= std::abs(omega);
  rep.checks.push_back(detail::partition_of_unity(m));
  rep.checks.push_back(detail::residual_check(
      "members-are-scaled-unitaries", scaled_unitary_residual(m), 1e-12));

  // embedding isometry on a spread of states
  double iso_err = 0;
  std::vector<Tree> trees = enumerate_trees(4, 2);
  std::vector<FracElement> ball = enumerate_ball(4, Flavor::F);
  for (size_t k = 0; k < trees.size(); ++k) {
    LimitVec x;
    x.mod = &m;
    x.tree = trees[k];
    for (int l = 0; l < trees[k].leaf_count(); ++l)
      x.parts.push_back(Vec::dense(Eigen::VectorXcd::Constant(
          1, Complex(0.3 + 0.2 * l, 0.1 * static_cast<double>(k) - 0.4))));
    iso_err = std::max(iso_err, std::abs(step_norm(to_l2(x)) - norm(x)));
    const FracElement& g = ball[(3 * k + 1) % ball.size()];
    if (!approx_equal(sigma_act(g, to_l2(x)), to_l2(act(g, x)), 1e-10))
      iso_err = 1.0;
  }
  rep.checks.push_back(detail::residual_check(
      "embedding-isometric-and-equivariant", iso_err, 1e-12));

  // pulling back along the basic element multiplies by
  // omega^{-log2 g'} sqrt(g') pointwise
  FracElement g0 = element_from_text("((..).)/(.(..))");
  StepFn f = make_step(
      m, full_tree(2),
      {Vec::dense(Eigen::VectorXcd::Constant(1, Complex(1.0, 0.0))),
       Vec::dense(Eigen::VectorXcd::Constant(1, Complex(0.5, -0.3))),
       Vec::dense(Eigen::VectorXcd::Constant(1, Complex(-0.2, 0.8))),
       Vec::dense(Eigen::VectorXcd::Constant(1, Complex(0.0, 0.7)))});
  StepFn pulled = sigma_act(inverse(g0), f);
  double tw_err = 0;
  for (int l = 1; l <= pulled.pieces(); ++l) {
    DyadicInterval iv = leaf_interval(pulled.tree, l);
    Rat z = (iv.lo() + iv.hi()) / 2;
    Rat sl = slope(g0, z);
    int k = 0;
    for (Rat v = sl; v < Rat(1); v *= 2) --k;
    for (Rat v = sl; v > Rat(1); v /= 2) ++k;
    Complex expected = std::pow(omega, Complex(-k)) *
                       std::sqrt(boost::rational_cast<double>(sl)) *
                       inner(step_eval(f, pl_eval(g0, z)), m.vacuum);
    tw_err = std::max(tw_err,
                      std::abs(inner(step_eval(pulled, z), m.vacuum) - expected));
  }
  rep.checks.push_back(detail::residual_check(
      "pullback-twists-by-slope-power-of-omega", tw_err, 1e-12));
  return rep;
}

inline ExampleReport run_interleave() {
  ExampleReport rep;
  rep.id = "interleave";
  rep.blurb = "even/odd halving isometries on l^2(N): the word-sum target model";
  PythModule m = interleave_cuntz_module();
  rep.checks.push_back(detail::partition_of_unity(m));
  rep.checks.push_back(detail::residual_check(
      "generator-relations-hold", cuntz_relation_residual(m), 1e-12));

  // deterministic spread of states with labels 0..4
  auto state_on = [&m](const Tree& t, int salt) {
    LimitVec x;
    x.mod = &m;
    x.tree = t;
    for (int l = 0; l < t.leaf_count(); ++l) {
      Vec v = Vec::sparse();
      for (long long lab = 0; lab <= 4; ++lab)
        v += Complex(0.31 + 0.11 * static_cast<double>(lab + l), 0.2 - 0.07 * salt) *
             Vec::basis(lab);
      x.parts.push_back(std::move(v));
    }
    return x;
  };
  double iso_err = 0, twist_err = 0, unit_err = 0;
  std::vector<Tree> trees = enumerate_trees(4, 2);
  for (size_t k = 0; k < trees.size(); ++k) {
    LimitVec x = state_on(trees[k], static_cast<int>(k));
    iso_err = std::max(iso_err, std::abs(norm(u_beta(x)) - norm(x)));
  }
  rep.checks.push_back(
      detail::residual_check("compression-is-isometric", iso_err, 1e-12));

  std::vector<FracElement> ball = enumerate_ball(5, Flavor::F);
  std::vector<FracElement> tball = enumerate_ball(3, Flavor::T);
  ball.insert(ball.end(), tball.begin(), tball.end());
  LimitVec probe = state_on(full_tree(2), 3);
  Vec compressed = compress_to_root(probe);
  for (const FracElement& g : ball) {
    Vec rhs = evaluate(nekrashevych(g), m, compressed);
    twist_err = std::max(twist_err, norm(compress_to_root(act(g, probe)) - rhs));
    unit_err = std::max(unit_err, std::abs(norm(rhs) - norm(compressed)));
  }
  rep.checks.push_back(detail::residual_check(
      "word-sums-intertwine-the-action", twist_err, 1e-12,
      std::to_string(ball.size()) + " elements"));
  rep.checks.push_back(detail::residual_check(
      "word-sum-evaluation-is-unitary", unit_err, 1e-12));
  return rep;
}

// ---------------------------------------------------------------------------
// Selector plumbing
// ---------------------------------------------------------------------------

inline Complex parse_complex(const std::string& text) {
  const char* s = text.c_str();
  char* end = nullptr;
  double re = std::strtod(s, &end);
  if (end == s) throw std::invalid_argument("cannot parse number: " + text);
  if (*end == '\0') return Complex(re, 0);
  if (*end == 'i' && *(end + 1) == '\0') return Complex(0, re);
  if (*end != '+' && *end != '-')
    throw std::invalid_argument("cannot parse number: " + text);
  const char* s2 = end;
  double im = std::strtod(s2, &end);
  if (end == s2 || *end != 'i' || *(end + 1) != '\0')
    throw std::invalid_argument("cannot parse number: " + text);
  return Complex(re, im);
}

inline std::vector<std::string> preset_ids() {
  return {"trivial",     "lebesgue", "twisted", "scalar",
          "scalar-complex", "free-group", "car",     "ray",
          "projections", "cantor",   "triple-projections", "connes-landi",
          "interleave"};
}

namespace detail {
inline std::pair<std::string, std::string> split_selector(const std::string& sel) {
  size_t colon = sel.find(':');
  if (colon == std::string::npos) return {sel, ""};
  return {sel.substr(0, colon), sel.substr(colon + 1)};
}

inline std::pair<std::string, std::string> ray_params(const std::string& param) {
  if (param.empty()) return {"", "01"};
  size_t comma = param.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("ray parameter is prefix,period");
  return {param.substr(0, comma), param.substr(comma + 1)};
}
}  // namespace detail

// Builds the module named by "id" or "id:param".
inline PythModule preset_module(const std::string& selector) {
  auto [id, param] = detail::split_selector(selector);
  if (id == "trivial") return trivial_module();
  if (id == "lebesgue") return lebesgue_module();
  if (id == "twisted")
    return twisted_module(param.empty() ? std::polar(1.0, 0.83) : parse_complex(param));
  if (id == "scalar") return real_scalar_module(param.empty() ? 0.7 : std::stod(param));
  if (id == "scalar-complex")
    return complex_scalar_module(param.empty() ? Complex(0.6, 0.3)
                                               : parse_complex(param));
  if (id == "free-group") return free_group_module();
  if (id == "car") return car_module();
  if (id == "car-sparse") return car_module_sparse();
  if (id == "ray") {
    auto [prefix, period] = detail::ray_params(param);
    return ray_module(prefix, period);
  }
  if (id == "projections") return projections_module();
  if (id == "cantor") return cantor_module();
  if (id == "triple-projections") return triple_projections_module();
  if (id == "connes-landi")
    return connes_landi_module(param.empty() ? Complex(1.0) : parse_complex(param));
  if (id == "interleave") return interleave_cuntz_module();
  throw std::invalid_argument("unknown module preset: " + id);
}

// Runs the certified check suite of a preset.
inline ExampleReport run_preset(const std::string& selector) {
  auto [id, param] = detail::split_selector(selector);
  if (id == "trivial") return run_trivial();
  if (id == "lebesgue") return run_lebesgue();
  if (id == "twisted")
    return run_twisted(param.empty() ? std::polar(1.0, 0.83) : parse_complex(param));
  if (id == "scalar") return run_scalar(param.empty() ? 0.7 : std::stod(param));
  if (id == "scalar-complex")
    return run_complex_scalar(param.empty() ? Complex(0.6, 0.3)
                                            : parse_complex(param));
  if (id == "free-group") return run_free_group();
  if (id == "car") return run_car();
  if (id == "ray") {
    auto [prefix, period] = detail::ray_params(param);
    return run_ray(prefix, period);
  }
  if (id == "projections") return run_projections();
  if (id == "cantor") return run_cantor();
  if (id == "triple-projections") return run_triple_projections();
  if (id == "connes-landi")
    return run_connes_landi(param.empty() ? Complex(1.0) : parse_complex(param));
  if (id == "interleave") return run_interleave();
  throw std::invalid_argument("unknown preset: " + id);
}

inline std::vector<ExampleReport> run_all() {
  std::vector<ExampleReport> out;
  for (const std::string& id : {"trivial", "lebesgue", "twisted", "scalar",
                                "scalar-complex", "free-group", "car", "ray",
                                "projections", "cantor", "triple-projections",
                                "connes-landi"})
    out.push_back(run_preset(id));
  return out;
}

}  // namespace pythrep
