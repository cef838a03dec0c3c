#include "polyosc/tree.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

namespace polyosc {

char cell_type_letter(CellType t) {
  switch (t) {
    case CellType::LeafLeaf: return 'a';
    case CellType::LeafTree: return 'b';
    case CellType::TreeLeaf: return 'c';
    case CellType::TreeTree: return 'd';
  }
  return '?';
}

namespace {

struct Parser {
  const std::string& s;
  size_t pos = 0;
  std::vector<TreeNode>& nodes;
  std::map<int, size_t> seen;  // leaf index -> offset of first occurrence

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' ||
                              s[pos] == '\n' || s[pos] == '\r'))
      ++pos;
  }

  [[noreturn]] void fail(const std::string& msg, size_t off) {
    throw ParseError(msg, off);
  }

  int parse_leaf() {
    size_t start = pos;
    ++pos;  // consume 'x'
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
      fail("expected digits after 'x'", pos);
    long idx = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      idx = idx * 10 + (s[pos] - '0');
      if (idx > 1000000) fail("leaf index out of range", start);
      ++pos;
    }
    if (idx < 1) fail("leaf indices start at x1", start);
    auto [it, inserted] = seen.emplace(static_cast<int>(idx), start);
    if (!inserted)
      fail("duplicate leaf x" + std::to_string(idx), start);
    TreeNode n;
    n.leaf = static_cast<int>(idx);
    nodes.push_back(n);
    return static_cast<int>(nodes.size()) - 1;
  }

  int parse_tree() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of input, expected subtree", pos);
    if (s[pos] == 'x') return parse_leaf();
    if (s[pos] != '(')
      fail(std::string("unexpected character '") + s[pos] +
               "', expected '(' or leaf",
           pos);
    ++pos;  // '('
    int left = parse_tree();
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of input, expected subtree", pos);
    int right = parse_tree();
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of input, expected ')'", pos);
    if (s[pos] != ')')
      fail(std::string("unexpected character '") + s[pos] + "', expected ')'",
           pos);
    ++pos;
    TreeNode n;
    n.left = left;
    n.right = right;
    n.v = nodes[left].v + nodes[right].v + 1;
    nodes.push_back(n);
    return static_cast<int>(nodes.size()) - 1;
  }
};

}  // namespace

Tree Tree::parse(const std::string& dsl) {
  Tree t;
  Parser p{dsl, 0, t.nodes_, {}};
  t.root_ = p.parse_tree();
  p.skip_ws();
  if (p.pos != dsl.size())
    throw ParseError("trailing input after complete tree", p.pos);

  t.dim_ = static_cast<int>(p.seen.size());
  for (auto& [idx, off] : p.seen)
    if (idx > t.dim_)
      throw ParseError("leaf x" + std::to_string(idx) + " present but only " +
                           std::to_string(t.dim_) +
                           " leaves total; labels must form exactly {x1..xD}",
                       off);
  t.leaf_slot_.assign(t.dim_, -1);
  for (int id = 0; id < t.node_count(); ++id)
    if (t.nodes_[id].is_leaf()) t.leaf_slot_[t.nodes_[id].leaf - 1] = id;

  // angle indices in pre-order
  std::vector<int> stack{t.root_};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    if (t.nodes_[id].is_leaf()) continue;
    t.internal_.push_back(id);
    t.nodes_[id].angle = static_cast<int>(t.internal_.size());
    stack.push_back(t.nodes_[id].right);
    stack.push_back(t.nodes_[id].left);
  }
  return t;
}

namespace {
void render_rec(const Tree& t, int id, std::string& out) {
  const TreeNode& n = t.node(id);
  if (n.is_leaf()) {
    out += 'x';
    out += std::to_string(n.leaf);
    return;
  }
  out += '(';
  render_rec(t, n.left, out);
  out += ' ';
  render_rec(t, n.right, out);
  out += ')';
}
}  // namespace

std::string Tree::render() const {
  std::string out;
  render_rec(*this, root_, out);
  return out;
}

CellType Tree::cell_type(int id) const {
  const TreeNode& n = nodes_.at(id);
  if (n.is_leaf())
    throw std::invalid_argument("cell_type: node is a leaf, not a cell");
  bool ls = nodes_[n.left].is_leaf();
  bool rs = nodes_[n.right].is_leaf();
  if (ls && rs) return CellType::LeafLeaf;
  if (ls) return CellType::LeafTree;
  if (rs) return CellType::TreeLeaf;
  return CellType::TreeTree;
}

std::vector<std::vector<Tree::Factor>> Tree::coordinate_map() const {
  std::vector<std::vector<Factor>> map(dim_);
  std::vector<std::pair<int, std::vector<Factor>>> stack;
  stack.push_back({root_, {}});
  while (!stack.empty()) {
    auto [id, path] = std::move(stack.back());
    stack.pop_back();
    const TreeNode& n = nodes_[id];
    if (n.is_leaf()) {
      map[n.leaf - 1] = std::move(path);
      continue;
    }
    auto lp = path;
    lp.push_back({n.angle, true});
    auto rp = std::move(path);
    rp.push_back({n.angle, false});
    stack.push_back({n.right, std::move(rp)});
    stack.push_back({n.left, std::move(lp)});
  }
  return map;
}

std::string Tree::coordinate_map_text() const {
  std::ostringstream out;
  auto map = coordinate_map();
  for (int i = 0; i < dim_; ++i) {
    out << 'x' << (i + 1) << " = ";
    if (map[i].empty()) out << '1';
    for (size_t j = 0; j < map[i].size(); ++j) {
      if (j) out << '*';
      out << (map[i][j].cosine ? "cos(t" : "sin(t") << map[i][j].angle << ')';
    }
    out << '\n';
  }
  return out.str();
}

std::vector<double> Tree::angles_to_unit_vector(
    std::span<const double> theta) const {
  if (static_cast<int>(theta.size()) != dim_ - 1)
    throw std::invalid_argument("angles_to_unit_vector: expected " +
                                std::to_string(dim_ - 1) + " angles, got " +
                                std::to_string(theta.size()));
  for (double th : theta)
    if (!(th >= 0.0 && th <= M_PI / 2 + 1e-15))
      throw std::domain_error("angles_to_unit_vector: angle outside [0, pi/2]");
  std::vector<double> x(dim_);
  auto map = coordinate_map();
  for (int i = 0; i < dim_; ++i) {
    double v = 1.0;
    for (const Factor& f : map[i])
      v *= f.cosine ? std::cos(theta[f.angle - 1]) : std::sin(theta[f.angle - 1]);
    x[i] = v;
  }
  return x;
}

}  // namespace polyosc
