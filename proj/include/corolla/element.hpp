#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "corolla/tree.hpp"

namespace corolla {

// Degrees and weights of the decorating generators (or of a finite basis,
// which is the special case where only trivial trees appear).
struct GenInfo {
  std::string label;
  int degree = 0;
  int weight = 1;
};

class GenTable {
public:
  GenTable() = default;
  explicit GenTable(std::vector<GenInfo> gens) : gens_(std::move(gens)) {}
  int add(const GenInfo& g) {
    gens_.push_back(g);
    return (int)gens_.size() - 1;
  }
  int size() const { return (int)gens_.size(); }
  const GenInfo& info(int id) const { return gens_[id]; }
  int degree(int id) const { return gens_[id].degree; }
  int weight(int id) const { return gens_[id].weight; }
  int find(const std::string& label) const;

private:
  std::vector<GenInfo> gens_;
};

// Canonical decorated corked rooted tree: skeleton plus generator ids on the
// leaves in traversal order. Children of every vertex are sorted by skeleton
// first, decoration sequence second; the Koszul sign produced by sorting is
// tracked separately (see canonicalize).
struct DecTree {
  Tree skel;
  std::vector<int> decor;

  static DecTree generator(int id) { return DecTree{Tree::leaf(), {id}}; }
  static DecTree cork_tree() { return DecTree{Tree::cork(), {}}; }

  std::string key() const;
  static int cmp(const DecTree& a, const DecTree& b);
  friend bool operator==(const DecTree& a, const DecTree& b) {
    return cmp(a, b) == 0;
  }
  friend bool operator<(const DecTree& a, const DecTree& b) {
    return cmp(a, b) < 0;
  }
};

int dec_degree(const DecTree& t, const GenTable& g);  // sum(deg) - weight(skel)
int dec_weight(const DecTree& t, const GenTable& g);  // weight(skel) + sum(wt)

// Linear combination of canonical decorated trees.
using Element = std::map<DecTree, Rat>;

void add_scaled(Element& dst, const Element& src, const Rat& c);
bool is_zero(const Element& e);
// degree of a homogeneous element, throws if mixed; 0 for the zero element
int element_degree(const Element& e, const GenTable& g);
int element_min_weight(const Element& e, const GenTable& g);
void truncate_weight(Element& e, const GenTable& g, int wmax);
std::string element_str(const Element& e, const GenTable& g);

// Grafts canonical decorated subtrees (corks allowed) under a fresh root and
// canonicalizes. Returns the signed coefficient of the resulting class; the
// coefficient is zero when the symmetric class vanishes (equal odd factors)
// or when no valid vertex arises. This is the elementary operation l_k of
// the free algebra, evaluation prefactor included.
struct GraftResult {
  DecTree tree;
  int sign = 0;  // 0 means the class is zero
};
GraftResult graft_root(std::span<const DecTree> children, const GenTable& g);

// Children of the root as canonical decorated subtrees, in stored order.
std::vector<DecTree> root_children(const DecTree& t);

// Vertex-splitting part of the cobar differential on decorated trees:
// all ways of splitting one vertex into two (including cork insertions),
// with Koszul signs. Generator differentials are handled by the caller.
Element split_differential(const DecTree& t, const GenTable& g);

// Full cobar-type differential: splits every vertex and substitutes gen_d
// at every leaf, with the Leibniz signs of the derivation.
Element cobar_diff(const DecTree& t, const GenTable& g,
                   const std::function<Element(int)>& gen_d);

}  // namespace corolla
