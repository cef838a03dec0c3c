#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyosc {

/// Parse failure for the tree DSL; offset is the 0-based byte position in
/// the input the diagnostic points at.
struct ParseError : std::runtime_error {
  size_t offset;
  ParseError(const std::string& msg, size_t off)
      : std::runtime_error(msg), offset(off) {}
};

/// Coupling-cell classification by the kinds of the two children:
/// a = leaf-leaf, b = leaf-subtree, c = subtree-leaf, d = subtree-subtree.
enum class CellType { LeafLeaf, LeafTree, TreeLeaf, TreeTree };

char cell_type_letter(CellType t);

struct TreeNode {
  int left = -1;   // child slot ids, -1 for leaves
  int right = -1;
  int leaf = 0;    // coordinate index 1..D for leaves, 0 otherwise
  int angle = 0;   // pre-order angle index 1..D-1 for internal nodes
  int v = 0;       // number of internal nodes in this subtree
  bool is_leaf() const { return left < 0; }
};

/// Rooted binary coupling tree over coordinates x1..xD. Every internal node
/// carries one angle; angles are numbered in pre-order (root = t1, then the
/// left subtree, then the right). Left descent contributes a cosine factor
/// to a leaf's coordinate product, right descent a sine.
class Tree {
 public:
  /// Grammar: tree := leaf | '(' tree ' ' tree ')', leaf := 'x' digits.
  /// The leaf labels must form exactly the set {x1..xD}.
  static Tree parse(const std::string& dsl);

  int dimension() const { return dim_; }
  int root() const { return root_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  const TreeNode& node(int id) const { return nodes_.at(id); }

  /// Internal node ids in pre-order; element j-1 is the node carrying
  /// angle t_j.
  const std::vector<int>& internal_preorder() const { return internal_; }
  /// Leaf node id for coordinate i (1-based).
  int leaf_slot(int coordinate) const { return leaf_slot_.at(coordinate - 1); }

  /// Canonical DSL text, e.g. "((x1 x2) x3)".
  std::string render() const;

  CellType cell_type(int id) const;

  /// One cosine/sine factor of a coordinate product.
  struct Factor {
    int angle;
    bool cosine;
  };
  /// Per coordinate (index 0 = x1): the path factors whose product is the
  /// unit-sphere component of that coordinate.
  std::vector<std::vector<Factor>> coordinate_map() const;
  /// The same map as printable lines "x1 = cos(t1)*sin(t2)".
  std::string coordinate_map_text() const;

  /// Evaluate the coordinate products at given angles (size D-1, each in
  /// [0, pi/2]); the result is a point on the unit sphere's positive
  /// orthant. Throws std::invalid_argument / std::domain_error on bad input.
  std::vector<double> angles_to_unit_vector(std::span<const double> theta) const;

 private:
  std::vector<TreeNode> nodes_;
  std::vector<int> internal_;
  std::vector<int> leaf_slot_;
  int root_ = -1;
  int dim_ = 0;
};

}  // namespace polyosc
