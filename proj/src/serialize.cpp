#include "polyosc/serialize.hpp"

#include <cstdio>
#include <sstream>

namespace polyosc {

namespace {

nlohmann::json node_to_json(const Tree& t, int id) {
  const TreeNode& n = t.node(id);
  if (n.is_leaf()) return {{"leaf", n.leaf}};
  return {{"left", node_to_json(t, n.left)},
          {"right", node_to_json(t, n.right)}};
}

void node_to_dsl(const nlohmann::json& j, std::string& out) {
  if (j.contains("leaf")) {
    if (!j["leaf"].is_number_integer())
      throw std::invalid_argument("tree json: \"leaf\" must be an integer");
    out += 'x';
    out += std::to_string(j["leaf"].get<long long>());
    return;
  }
  if (!j.contains("left") || !j.contains("right"))
    throw std::invalid_argument(
        "tree json: node needs either \"leaf\" or \"left\"+\"right\"");
  out += '(';
  node_to_dsl(j["left"], out);
  out += ' ';
  node_to_dsl(j["right"], out);
  out += ')';
}

}  // namespace

nlohmann::json tree_to_json(const Tree& t) { return node_to_json(t, t.root()); }

Tree tree_from_json(const nlohmann::json& j) {
  std::string dsl;
  node_to_dsl(j, dsl);
  return Tree::parse(dsl);
}

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string state_label(const CartesianState& s) {
  std::string out = "n=";
  for (size_t i = 0; i < s.n.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(s.n[i]);
  }
  return out;
}

std::string state_label(const HypersphericalState& s) {
  std::string out = "nr=" + std::to_string(s.n_r) + "|q=";
  for (size_t i = 0; i < s.q.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(s.q[i]);
  }
  if (s.q.empty()) out += '-';
  return out;
}

namespace {

std::string join_list(const std::vector<double>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += format17(v[i]);
  }
  return out;
}

std::string join_signs(const std::vector<int>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += (v[i] > 0 ? "+" : "-");
  }
  return out;
}

}  // namespace

std::string matrix_to_csv(const TransitionMatrix& W, const Tree& t,
                          const ModelParams& p) {
  std::ostringstream out;
  out << "# tree," << t.render() << '\n';
  out << "# omega," << format17(p.omega) << '\n';
  out << "# k," << join_list(p.k) << '\n';
  out << "# signs," << join_signs(p.sign) << '\n';
  out << "# N," << W.N << '\n';
  out << "state";
  for (const auto& h : W.cols) out << ',' << state_label(h);
  out << '\n';
  for (Eigen::Index i = 0; i < W.values.rows(); ++i) {
    out << state_label(W.rows[i]);
    for (Eigen::Index j = 0; j < W.values.cols(); ++j)
      out << ',' << format17(W.values(i, j));
    out << '\n';
  }
  return out.str();
}

nlohmann::json matrix_to_json(const TransitionMatrix& W, const Tree& t,
                              const ModelParams& p) {
  nlohmann::json j;
  j["tree"] = t.render();
  j["omega"] = p.omega;
  j["k"] = p.k;
  j["signs"] = p.sign;
  j["N"] = W.N;
  auto rows = nlohmann::json::array();
  for (const auto& c : W.rows) rows.push_back(c.n);
  j["row_states"] = rows;
  auto cols = nlohmann::json::array();
  for (const auto& h : W.cols)
    cols.push_back({{"n_r", h.n_r}, {"q", h.q}});
  j["col_states"] = cols;
  auto vals = nlohmann::json::array();
  for (Eigen::Index i = 0; i < W.values.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (Eigen::Index j2 = 0; j2 < W.values.cols(); ++j2)
      row.push_back(W.values(i, j2));
    vals.push_back(std::move(row));
  }
  j["values"] = std::move(vals);
  return j;
}

}  // namespace polyosc
