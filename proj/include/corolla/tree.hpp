#pragma once

#include <memory>
#include <string>
#include <vector>

#include "corolla/rational.hpp"

namespace corolla {

// Canonical corked rooted tree: every internal vertex has >= 2 children,
// a vertex with zero children is a cork. The trivial tree is a single leaf
// (arity 1, weight 0). Weight counts vertices, corks included.
//
// Values are immutable; children of a node are kept sorted by the canonical
// order (corks < leaves < nodes, nodes compared child-wise), so equal trees
// have equal notation strings.
class Tree {
public:
  enum class Kind { leaf, cork, node };

  Tree() : Tree(leaf()) {}

  static Tree leaf();
  static Tree cork();
  static Tree node(std::vector<Tree> children);  // sorts children
  static Tree corolla(int n);                    // n leaves, n != 1

  // `*` cork, `|` leaf, `(t1 t2 ...)` node; whitespace ignored.
  static Tree parse(const std::string& s);
  const std::string& str() const;

  Kind kind() const;
  int arity() const;   // number of leaves
  int weight() const;  // number of vertices, corks included
  const std::vector<Tree>& children() const;  // empty for leaf/cork
  bool is_leaf() const { return kind() == Kind::leaf; }
  bool is_cork() const { return kind() == Kind::cork; }

  // total order matching the canonical child order
  static int cmp(const Tree& a, const Tree& b);
  friend bool operator==(const Tree& a, const Tree& b) { return cmp(a, b) == 0; }
  friend bool operator!=(const Tree& a, const Tree& b) { return cmp(a, b) != 0; }
  friend bool operator<(const Tree& a, const Tree& b) { return cmp(a, b) < 0; }

  // Substitutes child i at leaf i (leaves in canonical traversal order);
  // throws on length mismatch.
  Tree graft(const std::vector<Tree>& at_leaves) const;

  struct Impl;

private:
  explicit Tree(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// All canonical trees of given arity and weight, sorted; cork-free when
// allow_corks is off.
std::vector<Tree> enumerate_trees(int arity, int weight, bool allow_corks);

// Symmetry coefficient: n! for corollas, multiplicative over branches with
// one factorial per group of isomorphic branches.
Rat symmetry_coefficient(const Tree& t);

// One term of the vertex-splitting differential: a weight+1 tree together
// with the signed multiplicity it carries (aggregated over canonical-form
// collisions, Koszul signs for the all-even-decoration case).
struct SplitTerm {
  Tree tree;
  long multiplicity;
  int sign;  // +1 or -1
};

// All single-vertex splittings of t, including splittings that introduce a
// cork. Throws on the trivial tree. Defined in element.cpp next to the
// decorated version so both use one sign convention.
std::vector<SplitTerm> vertex_splittings(const Tree& t);

}  // namespace corolla
