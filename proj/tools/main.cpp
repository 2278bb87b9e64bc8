// Command line front end: evaluate matrix coefficients, apply group elements
// to states, probe rotation limits, run the certified example suites, and
// inspect the combinatorial data (word sums, interval carriers) behind them.
#include <CLI11.hpp>
#include <json.hpp>

#include <complex>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pythrep/cocycle.hpp"
#include "pythrep/cuntz.hpp"
#include "pythrep/gallery.hpp"
#include "pythrep/rep.hpp"
#include "pythrep/rotation.hpp"

using namespace pythrep;
using nlohmann::json;

namespace {

std::string fmt_c(Complex z, int prec = 12) {
  std::ostringstream os;
  os << std::setprecision(prec);
  if (std::abs(z.imag()) < 1e-14) {
    os << z.real();
    return os.str();
  }
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

std::string fmt_label(const Label& l) {
  if (std::holds_alternative<long long>(l))
    return std::to_string(std::get<long long>(l));
  return "'" + std::get<std::string>(l) + "'";
}

std::string vec_repr(const Vec& v) {
  std::ostringstream os;
  if (v.is_dense) {
    os << "[";
    for (int i = 0; i < v.d.size(); ++i) os << (i ? ", " : "") << fmt_c(v.d[i]);
    os << "]";
    return os.str();
  }
  os << "{";
  bool first = true;
  for (const auto& [l, a] : v.s) {
    if (std::abs(a) < 1e-15) continue;
    os << (first ? "" : ", ") << fmt_label(l) << ": " << fmt_c(a);
    first = false;
  }
  os << "}";
  return os.str();
}

std::string addr_repr(const LeafAddress& a) {
  if (a.empty()) return "(root)";
  std::string s;
  for (int d : a) s += static_cast<char>('0' + d);
  return s;
}

std::string interval_repr(const DyadicInterval& iv) {
  return "[" + to_string(iv.lo()) + ", " + to_string(iv.hi()) + ")";
}

long long parse_int(const std::string& text) {
  size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty())
    throw std::invalid_argument("cannot parse integer: " + text);
  return v;
}

Rat parse_rat(const std::string& text) {
  size_t slash = text.find('/');
  if (slash == std::string::npos) return Rat(parse_int(text));
  return Rat(parse_int(text.substr(0, slash)),
             parse_int(text.substr(slash + 1)));
}

void render_index_tree(const IndexTree& t, int indent) {
  std::cout << std::string(indent, ' ') << t.label << (t.is_leaf() ? "  *\n" : "\n");
  for (const IndexTree& c : t.children) render_index_tree(c, indent + 2);
}

int cmd_coeff(const std::string& elem, const std::string& mod_sel, int arity,
              const std::string& algorithm) {
  PythModule m = preset_module(mod_sel);
  if (m.arity != arity)
    throw std::invalid_argument("module arity " + std::to_string(m.arity) +
                                " does not match element arity " +
                                std::to_string(arity));
  FracElement g = element_from_text(elem, arity);
  Complex via_transport = 0, via_pathsum = 0;
  if (algorithm != "pathsum") via_transport = vacuum_coefficient(m, g);
  if (algorithm != "transport")
    via_pathsum = coefficient_pathsum(m, g, m.vacuum, m.vacuum);
  std::cout << "element:  " << to_text(g) << "\n";
  std::cout << "module:   " << m.id << "\n";
  if (algorithm == "transport") {
    std::cout << "coefficient (transport): " << fmt_c(via_transport) << "\n";
  } else if (algorithm == "pathsum") {
    std::cout << "coefficient (path sum):  " << fmt_c(via_pathsum) << "\n";
  } else {
    std::cout << "coefficient (transport): " << fmt_c(via_transport) << "\n";
    std::cout << "coefficient (path sum):  " << fmt_c(via_pathsum) << "\n";
    std::cout << "disagreement: " << std::abs(via_transport - via_pathsum) << "\n";
  }
  return 0;
}

int cmd_act(const std::string& elem, const std::string& mod_sel, int arity) {
  PythModule m = preset_module(mod_sel);
  FracElement g = element_from_text(elem, arity);
  LimitVec x = act(g, vacuum_vector(m));
  std::cout << "element: " << to_text(g) << "\n";
  std::cout << "module:  " << m.id << "\n";
  std::cout << "carrier: " << serialize(x.tree) << "\n";
  std::vector<LeafAddress> addrs = leaf_addresses(x.tree);
  for (int l = 1; l <= x.leaves(); ++l)
    std::cout << "  leaf " << l << "  " << addr_repr(addrs[l - 1]) << "  "
              << vec_repr(x.parts[l - 1]) << "\n";
  std::cout << "norm: " << norm(x) << "\n";
  return 0;
}

int cmd_rotlimit(const std::string& mod_sel, int power, int n_max, bool csv) {
  PythModule m = preset_module(mod_sel);
  LimitVec vac = vacuum_vector(m);
  RotationSequence seq = empirical_rotation_limit(vac, vac, power, n_max, 0.0);
  if (csv) {
    std::cout << "n,re,im,step\n";
    for (size_t i = 0; i < seq.values.size(); ++i) {
      double step = i ? std::abs(seq.values[i] - seq.values[i - 1]) : 0.0;
      std::cout << (i + 1) << "," << std::setprecision(15) << seq.values[i].real()
                << "," << seq.values[i].imag() << "," << step << "\n";
    }
    return 0;
  }
  std::cout << "module: " << m.id << "   power j = " << power << "\n";
  std::cout << "  n   <act(r_n^j) vacuum, vacuum>\n";
  for (size_t i = 0; i < seq.values.size(); ++i)
    std::cout << std::setw(3) << (i + 1) << "   " << fmt_c(seq.values[i]) << "\n";
  if (m.arity == 2 && m.is_dense && m.vacuum.dim() == 1) {
    Complex w = omega_of(m);
    std::cout << "omega = <B vacuum, A vacuum> = " << fmt_c(w) << "\n";
    if (std::abs(w - 1.0) > 1e-12 && seq.values.size() >= 2) {
      size_t k = seq.values.size() - 1;
      Complex extrap = (seq.values[k] - w * seq.values[k - 1]) / (1.0 - w);
      std::cout << "geometric extrapolation: " << fmt_c(extrap) << "\n";
      std::cout << "scalar-limit prediction x_" << power << "(omega): "
                << fmt_c(xj(power, w)) << "\n";
    }
  }
  return 0;
}

int cmd_xj(long long j, const std::string& omega_text, bool show_tree) {
  Complex w = parse_complex(omega_text);
  Complex val = xj(j, w);
  std::cout << "x_" << j << "(" << fmt_c(w) << ") = " << fmt_c(val) << "\n";
  std::cout << "(tree evaluation: " << fmt_c(xj_via_tree(j, w)) << ")\n";
  if (show_tree) {
    std::cout << "index tree (leaves marked *, labels halve to odd parts):\n";
    render_index_tree(tj_tree(j), 2);
  }
  return 0;
}

json check_json(const CheckResult& c) {
  return json{{"name", c.name},
              {"pass", c.pass},
              {"residual", c.residual},
              {"tol", c.tol},
              {"detail", c.detail}};
}

int cmd_verify(std::vector<std::string> selectors, bool as_json) {
  if (selectors.empty() ||
      (selectors.size() == 1 && selectors.front() == "all")) {
    selectors.clear();
    for (const auto& r : run_all()) selectors.push_back(r.id);
  }
  std::vector<ExampleReport> reports;
  reports.reserve(selectors.size());
  for (const std::string& sel : selectors) reports.push_back(run_preset(sel));
  bool all_pass = true;
  if (as_json) {
    json out;
    out["reports"] = json::array();
    for (const ExampleReport& r : reports) {
      json jr{{"id", r.id},       {"param", r.param}, {"blurb", r.blurb},
              {"pass", r.pass()}, {"checks", json::array()}};
      for (const CheckResult& c : r.checks) jr["checks"].push_back(check_json(c));
      out["reports"].push_back(jr);
      all_pass = all_pass && r.pass();
    }
    out["pass"] = all_pass;
    std::cout << out.dump(2) << "\n";
    return all_pass ? 0 : 1;
  }
  for (const ExampleReport& r : reports) {
    all_pass = all_pass && r.pass();
    std::cout << "== " << r.id;
    if (!r.param.empty()) std::cout << " (" << r.param << ")";
    std::cout << " — " << (r.pass() ? "PASS" : "FAIL") << "\n";
    std::cout << "   " << r.blurb << "\n";
    for (const CheckResult& c : r.checks) {
      std::cout << "   " << (c.pass ? " ok " : "FAIL") << " " << std::left
                << std::setw(48) << c.name << std::right << "  residual "
                << std::setw(10) << std::setprecision(3) << std::scientific
                << c.residual << "  tol " << std::setw(8) << c.tol
                << std::defaultfloat;
      if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
      std::cout << "\n";
    }
  }
  std::cout << (all_pass ? "all suites passed" : "SOME SUITES FAILED") << "\n";
  return all_pass ? 0 : 1;
}

int cmd_enumerate(int max_leaves, const std::string& flavor_s, int arity,
                  bool count_only) {
  Flavor f = flavor_s == "T" ? Flavor::T : flavor_s == "V" ? Flavor::V : Flavor::F;
  if (flavor_s != "F" && flavor_s != "T" && flavor_s != "V")
    throw std::invalid_argument("flavor must be F, T or V");
  std::vector<FracElement> ball = enumerate_ball(max_leaves, f, arity);
  if (count_only) {
    std::cout << ball.size() << "\n";
    return 0;
  }
  for (const FracElement& g : ball) std::cout << to_text(g) << "\n";
  return 0;
}

// Dilation checks for a module: the child-block operators on limit vectors
// satisfy the generator relations, and for relation-satisfying modules the
// root compression is unitary.
int cmd_cuntz_checks(const std::string& mod_sel) {
  PythModule m = preset_module(mod_sel);
  LimitVec vac = vacuum_vector(m);
  std::vector<Tree> trees = enumerate_trees(m.arity == 2 ? 4 : 5, m.arity);
  trees.push_back(Tree::leaf(m.arity));
  double dil_err = 0;
  for (const Tree& t : trees) {
    LimitVec x = stabilize(vac, t);
    LimitVec total = combine(1.0, x, -1.0, x);
    for (int i = 0; i < m.arity; ++i) {
      for (int j = 0; j < m.arity; ++j) {
        LimitVec y = dilation_c(i, dilation_c_star(j, x));
        dil_err = std::max(dil_err,
                           i == j ? norm(combine(1.0, y, -1.0, x)) : norm(y));
      }
      total = combine(1.0, total, 1.0, dilation_c_star(i, dilation_c(i, x)));
    }
    dil_err = std::max(dil_err, norm(combine(1.0, total, -1.0, x)));
  }
  double rel = cuntz_relation_residual(m);
  std::cout << "module: " << m.id << "\n";
  std::cout << "dilation relations on limit vectors: residual " << dil_err
            << " (tol 1e-12)\n";
  std::cout << "member generator relations: residual " << rel << "\n";
  bool pass = dil_err <= 1e-12;
  if (rel <= 1e-9) {
    double iso = 0;
    for (const Tree& t : trees) {
      LimitVec x = stabilize(vac, t);
      iso = std::max(iso, std::abs(norm(u_beta(x)) - norm(x)));
    }
    std::cout << "root compression unitary: residual " << iso
              << " (tol 1e-12)\n";
    pass = pass && iso <= 1e-12;
  } else {
    std::cout << "root compression unitary: skipped (module members do not "
                 "satisfy the generator relations)\n";
  }
  std::cout << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : 1;
}

int cmd_cuntz(const std::string& elem, int arity, const std::string& mod_sel) {
  FracElement g = element_from_text(elem, arity);
  CuntzWordSum w = nekrashevych(g);
  std::cout << "element:  " << to_text(g) << "\n";
  std::cout << "word sum: " << w.str() << "\n";
  if (!mod_sel.empty()) {
    PythModule m = preset_module(mod_sel);
    LimitVec vac = vacuum_vector(m);
    Vec lhs = compress_to_root(act(g, vac));
    Vec rhs = evaluate(w, m, compress_to_root(vac));
    std::cout << "module " << m.id << ": compressed action " << vec_repr(lhs)
              << "\n";
    std::cout << "word sum on compressed vacuum:  " << vec_repr(rhs) << "\n";
    std::cout << "disagreement: " << norm(lhs - rhs) << "\n";
  }
  return 0;
}

int cmd_cocycle(const std::string& elem, const std::string& mod_sel,
                const std::string& interval) {
  PythModule m = preset_module(mod_sel);
  FracElement g = element_from_text(elem, 2);
  std::vector<DyadicInterval> sources;
  if (!interval.empty()) {
    size_t comma = interval.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("interval is lo,hi (for example 1/4,3/8)");
    sources.push_back(dyadic_interval(parse_rat(interval.substr(0, comma)),
                                      parse_rat(interval.substr(comma + 1))));
  } else {
    for (int l = 1; l <= g.leaves(); ++l)
      sources.push_back(leaf_interval(g.bottom, l));
  }
  std::cout << "element: " << to_text(g) << "   module: " << m.id << "\n";
  for (const DyadicInterval& J : sources) {
    LocalCocycle lc = cocycle_local(g, J);
    std::cout << interval_repr(lc.source) << " -> " << interval_repr(lc.target)
              << "   scale " << lc.scale << "\n";
    if (m.is_dense) {
      Eigen::MatrixXcd u = cocycle_matrix(m, lc);
      for (int r = 0; r < u.rows(); ++r) {
        std::cout << "    [";
        for (int c = 0; c < u.cols(); ++c)
          std::cout << (c ? ", " : "") << fmt_c(u(r, c), 6);
        std::cout << "]\n";
      }
    } else {
      std::cout << "    vacuum image: " << vec_repr(cocycle_apply(m, lc, m.vacuum))
                << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unitary representations of the binary and n-ary interval groups\n"
               "built from partitions of unity in an operator algebra."};
  app.require_subcommand(1);

  std::string elem, mod_sel = "lebesgue", algorithm = "both", omega_text = "0.25";
  std::string flavor_s = "F", interval, cuntz_mod;
  std::vector<std::string> selectors;
  int arity = 2, power = 1, n_max = 10, max_leaves = 4;
  long long j_index = 1;
  bool csv = false, show_tree = false, as_json = false, count_only = false;

  CLI::App* coeff = app.add_subcommand(
      "coeff", "Vacuum matrix coefficient of a group element");
  coeff->add_option("element,-g,--element", elem,
                    "element text, e.g. \"((..).)/(.(..))\"")
      ->required();
  coeff->add_option("-m,--module", mod_sel, "module preset id[:param]");
  coeff->add_option("-a,--arity", arity, "tree arity");
  coeff->add_option("--algorithm", algorithm, "pathsum | transport | both")
      ->check(CLI::IsMember({"pathsum", "transport", "both"}));

  CLI::App* act_cmd =
      app.add_subcommand("act", "Apply an element to the vacuum state");
  act_cmd->add_option("element,-g,--element", elem)->required();
  act_cmd->add_option("-m,--module", mod_sel);
  act_cmd->add_option("-a,--arity", arity);

  CLI::App* rot = app.add_subcommand(
      "rotlimit", "Coefficients of powers of the dyadic rotations");
  rot->add_option("-m,--module", mod_sel);
  rot->add_option("-j,--power", power, "rotation power j");
  rot->add_option("-n,--nmax", n_max, "largest rotation depth probed");
  rot->add_flag("--csv", csv, "machine readable output");

  CLI::App* xj_cmd = app.add_subcommand(
      "xj", "Closed-form rotation limit x_j(omega) and its index tree");
  xj_cmd->add_option("j,-j,--index", j_index, "power index")->required();
  xj_cmd->add_option("-w,--omega", omega_text, "complex parameter, e.g. 0.1+0.2i");
  xj_cmd->add_flag("--tree", show_tree, "print the recursion tree");

  CLI::App* verify = app.add_subcommand(
      "verify", "Run the certified example suites and report pass/fail");
  verify->add_option("presets", selectors, "preset ids (default: all)");
  verify->add_flag("--json", as_json, "emit a JSON report");

  CLI::App* enumerate = app.add_subcommand(
      "enumerate", "List reduced group elements with at most N leaves");
  enumerate->add_option("-l,--leaves", max_leaves, "leaf bound");
  enumerate->add_option("-f,--flavor", flavor_s, "F | T | V");
  enumerate->add_option("-a,--arity", arity);
  enumerate->add_flag("--count", count_only, "print only the count");

  CLI::App* cuntz_cmd = app.add_subcommand(
      "cuntz", "Word-sum form of an element; with no element, dilation checks");
  cuntz_cmd->add_option("element,-g,--element", elem);
  cuntz_cmd->add_option("-a,--arity", arity);
  cuntz_cmd->add_option("-m,--module", cuntz_mod,
                        "evaluate in this module (or run its dilation checks)");

  CLI::App* coc = app.add_subcommand(
      "cocycle", "Local unitaries of the square-integrable model");
  coc->add_option("element,-g,--element", elem)->required();
  coc->add_option("-m,--module", mod_sel);
  coc->add_option("-i,--interval", interval, "dyadic source interval lo,hi");

  // accept the single-dash long spellings from the documentation
  std::vector<std::string> args;
  for (int i = argc - 1; i >= 1; --i) {
    std::string a = argv[i];
    if (a == "-omega") a = "--omega";
    else if (a == "-leaves") a = "--leaves";
    else if (a == "-flavor") a = "--flavor";
    else if (a == "-element") a = "--element";
    else if (a == "-module") a = "--module";
    else if (a == "-N" || a == "-nmax") a = "--nmax";
    args.push_back(std::move(a));
  }
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*coeff) return cmd_coeff(elem, mod_sel, arity, algorithm);
    if (*act_cmd) return cmd_act(elem, mod_sel, arity);
    if (*rot) return cmd_rotlimit(mod_sel, power, n_max, csv);
    if (*xj_cmd) return cmd_xj(j_index, omega_text, show_tree);
    if (*verify) return cmd_verify(selectors, as_json);
    if (*enumerate) return cmd_enumerate(max_leaves, flavor_s, arity, count_only);
    if (*cuntz_cmd)
      return elem.empty()
                 ? cmd_cuntz_checks(cuntz_mod.empty() ? "interleave" : cuntz_mod)
                 : cmd_cuntz(elem, arity, cuntz_mod);
    if (*coc) return cmd_cocycle(elem, mod_sel, interval);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
