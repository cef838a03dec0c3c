#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "polyosc/bases.hpp"
#include "polyosc/serialize.hpp"
#include "polyosc/special_functions.hpp"
#include "polyosc/transition.hpp"
#include "polyosc/tree.hpp"
#include "polyosc/verification.hpp"

namespace {

using namespace polyosc;

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<double> parse_doubles(const std::string& s, const char* what) {
  std::vector<double> out;
  for (const std::string& tok : split_commas(s)) {
    size_t used = 0;
    double v;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string(what) + ": cannot parse '" +
                                  tok + "' as a number");
    }
    if (used != tok.size())
      throw std::invalid_argument(std::string(what) + ": trailing text in '" +
                                  tok + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<int> parse_ints(const std::string& s, const char* what) {
  std::vector<int> out;
  for (double v : parse_doubles(s, what)) {
    if (v != static_cast<int>(v))
      throw std::invalid_argument(std::string(what) +
                                  ": expected integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<int> parse_signs(const std::string& s) {
  std::vector<int> out;
  for (const std::string& tok : split_commas(s)) {
    if (tok == "+" || tok == "+1" || tok == "1")
      out.push_back(1);
    else if (tok == "-" || tok == "-1")
      out.push_back(-1);
    else
      throw std::invalid_argument("--signs: expected '+' or '-', got '" + tok +
                                  "'");
  }
  return out;
}

// --tree accepts a DSL literal, a JSON literal, or a path to a file
// holding either.
struct TreeSource {
  std::string text;  // what diagnostics refer to
  Tree tree;
};

TreeSource load_tree(const std::string& arg) {
  std::string text = arg;
  size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos)
    throw std::invalid_argument("--tree: empty value");
  if (text[first] != '(' && text[first] != '{' && text[first] != 'x') {
    std::ifstream in(arg);
    if (!in)
      throw std::invalid_argument("--tree: cannot open file '" + arg + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
    first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
      throw std::invalid_argument("--tree: file '" + arg + "' is empty");
  }
  if (text[first] == '{')
    return {text, tree_from_json(nlohmann::json::parse(text))};
  return {text, Tree::parse(text)};
}

void print_parse_error(const ParseError& e, const std::string& src) {
  std::cerr << "error: " << e.what() << " (offset " << e.offset << ")\n";
  size_t line_start = src.rfind('\n', e.offset == 0 ? 0 : e.offset - 1);
  line_start = (line_start == std::string::npos) ? 0 : line_start + 1;
  size_t line_end = src.find('\n', e.offset);
  if (line_end == std::string::npos) line_end = src.size();
  std::cerr << "  " << src.substr(line_start, line_end - line_start) << "\n  "
            << std::string(e.offset - line_start, ' ') << "^\n";
}

ModelParams make_params(double omega, const std::string& k_arg,
                        const std::string& signs_arg, int expected_dim) {
  if (k_arg.empty()) throw std::invalid_argument("--k is required");
  ModelParams p;
  p.omega = omega;
  p.k = parse_doubles(k_arg, "--k");
  p.sign = signs_arg.empty() ? std::vector<int>(p.k.size(), 1)
                             : parse_signs(signs_arg);
  if (expected_dim > 0 && static_cast<int>(p.k.size()) != expected_dim)
    throw std::invalid_argument("--k: expected " +
                                std::to_string(expected_dim) + " values, got " +
                                std::to_string(p.k.size()));
  validate_params(p);
  return p;
}

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(out_path);
  if (!f)
    throw std::invalid_argument("--out: cannot open '" + out_path + "'");
  f << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact transition matrices between the Cartesian and hyperspherical "
      "eigenbases of the D-dimensional singular oscillator"};
  app.require_subcommand(1);

  std::string tree_arg, k_arg, signs_arg, state_arg, point_arg, basis_arg;
  std::string format = "csv", out_path, n_arg, q_arg;
  double omega = 1.0, tol = 1e-8;
  int N = 0, pairs = 200, points = 20;
  unsigned long long seed = 12345;

  auto add_tree = [&](CLI::App* c, bool required = true) {
    auto* o = c->add_option("--tree", tree_arg,
                            "coupling tree: DSL like '((x1 x2) x3)', JSON, or "
                            "a file holding either");
    if (required) o->required();
  };
  auto add_model = [&](CLI::App* c) {
    c->add_option("--omega", omega, "oscillator frequency (default 1)");
    c->add_option("--k", k_arg, "comma list of centrifugal strengths k_i")
        ->required();
    c->add_option("--signs", signs_arg,
                  "comma list of +/- branch choices (default all +)");
  };

  CLI::App* c_tree = app.add_subcommand(
      "tree", "parse a coupling tree and print its coordinate map");
  add_tree(c_tree);
  c_tree->add_option("--out", out_path, "write output to a file");

  CLI::App* c_matrix = app.add_subcommand(
      "matrix", "emit the level-N transition matrix");
  add_tree(c_matrix);
  add_model(c_matrix);
  c_matrix->add_option("--N", N, "level (total excitation)")->required();
  c_matrix->add_option("--format", format, "csv or json (default csv)")
      ->check(CLI::IsMember({"csv", "json"}));
  c_matrix->add_option("--out", out_path, "write output to a file");

  CLI::App* c_verify = app.add_subcommand(
      "verify", "run the self-consistency battery on one configuration");
  add_tree(c_verify);
  add_model(c_verify);
  c_verify->add_option("--N", N, "level (total excitation)")->required();
  c_verify->add_option("--tol", tol, "tolerance for every check (default 1e-8)");
  c_verify->add_option("--seed", seed, "RNG seed (default 12345)");
  c_verify->add_option("--pairs", pairs, "telescoping sample count");
  c_verify->add_option("--points", points, "pointwise sample count");

  CLI::App* c_eval = app.add_subcommand(
      "eval", "evaluate one basis function at one point");
  add_tree(c_eval, false);
  c_eval->add_option("--omega", omega, "oscillator frequency (default 1)");
  c_eval->add_option("--k", k_arg, "comma list of k_i")->required();
  c_eval->add_option("--signs", signs_arg, "comma list of +/-");
  c_eval
      ->add_option("--basis", basis_arg,
                   "cartesian or hyperspherical")
      ->required()
      ->check(CLI::IsMember({"cartesian", "hyperspherical"}));
  c_eval
      ->add_option("--state", state_arg,
                   "cartesian: n1,..,nD; hyperspherical: nr,q1,..,qD-1")
      ->required();
  c_eval
      ->add_option("--point", point_arg,
                   "cartesian: x1,..,xD; hyperspherical: r,t1,..,tD-1")
      ->required();
  c_eval->add_option("--out", out_path, "write output to a file");

  CLI::App* c_cg = app.add_subcommand(
      "cg", "print the per-cell coefficient breakdown of one matrix element");
  add_tree(c_cg);
  add_model(c_cg);
  c_cg->add_option("--n", n_arg, "cartesian state n1,..,nD")->required();
  c_cg->add_option("--q", q_arg, "angular numbers q1,..,qD-1 (pre-order)")
      ->required();
  c_cg->add_option("--out", out_path, "write output to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string tree_text;  // for caret diagnostics
  try {
    if (c_tree->parsed()) {
      TreeSource ts = load_tree((tree_text = tree_arg, tree_arg));
      tree_text = ts.text;
      emit(ts.tree.coordinate_map_text(), out_path);
      return 0;
    }

    if (c_matrix->parsed()) {
      tree_text = tree_arg;
      TreeSource ts = load_tree(tree_arg);
      tree_text = ts.text;
      ModelParams p =
          make_params(omega, k_arg, signs_arg, ts.tree.dimension());
      if (N < 0) throw std::invalid_argument("--N must be nonnegative");
      TransitionMatrix W = transition_matrix(ts.tree, p, N);
      if (format == "csv")
        emit(matrix_to_csv(W, ts.tree, p), out_path);
      else
        emit(matrix_to_json(W, ts.tree, p).dump(2) + "\n", out_path);
      return 0;
    }

    if (c_verify->parsed()) {
      tree_text = tree_arg;
      TreeSource ts = load_tree(tree_arg);
      tree_text = ts.text;
      ModelParams p =
          make_params(omega, k_arg, signs_arg, ts.tree.dimension());
      if (N < 0) throw std::invalid_argument("--N must be nonnegative");
      VerifyOptions opt;
      opt.N = N;
      opt.tol = tol;
      opt.seed = seed;
      opt.pairs = pairs;
      opt.points = points;
      VerifyReport rep = run_verification(ts.tree, p, opt);
      for (const CheckResult& c : rep.checks) {
        std::printf("%-14s max dev %-12.3e tol %-9.1e %s%s%s\n",
                    c.name.c_str(), c.deviation, c.tol,
                    c.pass ? "PASS" : "FAIL",
                    c.detail.empty() ? "" : "  worst at ",
                    c.detail.c_str());
      }
      std::printf("VERIFY %s\n", rep.pass ? "PASS" : "FAIL");
      return rep.pass ? 0 : 1;
    }

    if (c_eval->parsed()) {
      double value = 0.0;
      if (basis_arg == "cartesian") {
        auto n = parse_ints(state_arg, "--state");
        auto x = parse_doubles(point_arg, "--point");
        ModelParams p =
            make_params(omega, k_arg, signs_arg, static_cast<int>(n.size()));
        if (x.size() != n.size())
          throw std::invalid_argument("--point: expected " +
                                      std::to_string(n.size()) + " values");
        value = cartesian_wavefunction(p, {n}, x);
      } else {
        if (tree_arg.empty())
          throw std::invalid_argument("--tree is required for hyperspherical");
        tree_text = tree_arg;
        TreeSource ts = load_tree(tree_arg);
        tree_text = ts.text;
        const int D = ts.tree.dimension();
        ModelParams p = make_params(omega, k_arg, signs_arg, D);
        auto st = parse_ints(state_arg, "--state");
        auto pt = parse_doubles(point_arg, "--point");
        if (static_cast<int>(st.size()) != D)
          throw std::invalid_argument("--state: expected nr plus " +
                                      std::to_string(D - 1) + " q values");
        if (static_cast<int>(pt.size()) != D)
          throw std::invalid_argument("--point: expected r plus " +
                                      std::to_string(D - 1) + " angles");
        HypersphericalState h;
        h.n_r = st[0];
        h.q.assign(st.begin() + 1, st.end());
        value = hyperspherical_wavefunction(
            ts.tree, p, h, pt[0],
            std::span<const double>(pt.data() + 1, pt.size() - 1));
      }
      emit(format17(value) + "\n", out_path);
      return 0;
    }

    if (c_cg->parsed()) {
      tree_text = tree_arg;
      TreeSource ts = load_tree(tree_arg);
      tree_text = ts.text;
      const int D = ts.tree.dimension();
      ModelParams p = make_params(omega, k_arg, signs_arg, D);
      CartesianState cart{parse_ints(n_arg, "--n")};
      HypersphericalState hyp;
      auto qs = parse_ints(q_arg, "--q");
      if (static_cast<int>(qs.size()) != D - 1)
        throw std::invalid_argument("--q: expected " + std::to_string(D - 1) +
                                    " values");
      hyp.q = qs;
      hyp.n_r = cart.total() - hyp.total();
      if (hyp.n_r < 0)
        throw std::invalid_argument("sum of q exceeds the level of --n");
      std::ostringstream out;
      double product = 1.0;
      for (const CellData& c : collect_cell_data(ts.tree, p, cart, hyp)) {
        CGArgs g = cell_cg_args(c);
        double cg = cg_continued(g);
        double coef = cell_coefficient(c);
        out << "cell t" << c.angle << " type " << cell_type_letter(c.type)
            << ": q=" << c.q << " l=" << format17(c.l)
            << " l_s=" << format17(c.l_s) << " l_r=" << format17(c.l_r)
            << " v_s=" << c.v_s << " v_r=" << c.v_r
            << " N_s=" << format17(c.N_s) << " N_r=" << format17(c.N_r)
            << '\n';
        out << "  a=" << format17(g.a) << " alpha=" << format17(g.alpha)
            << " b=" << format17(g.b) << " beta=" << format17(g.beta)
            << " c=" << format17(g.c) << " gamma=" << format17(g.gamma)
            << '\n';
        out << "  cg=" << format17(cg)
            << " phase=" << (cg == 0.0 ? 0 : (coef / cg < 0 ? -1 : 1))
            << " coefficient=" << format17(coef) << '\n';
        product *= coef;
      }
      out << "n_r=" << hyp.n_r << '\n';
      out << "product=" << format17(product) << '\n';
      emit(out.str(), out_path);
      return 0;
    }
  } catch (const ParseError& e) {
    print_parse_error(e, tree_text);
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
