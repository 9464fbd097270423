#pragma once

#include <memory>

#include "corolla/quasifree.hpp"
#include "corolla/transfer.hpp"

namespace corolla {

extern int kImportVariant;

// Maurer-Cartan cosimplicial algebra: the complete cobar construction on
// the cellular chains of the n-simplex, truncated at weight W. Generators
// a_I for nonempty I, degree |I|-1, weight 1.
std::shared_ptr<QuasiFreeAlgebra> build_mc(int n, int W);

// generator index of a_I inside build_mc(n, W)
int mc_generator(int n, Subset I);

// One tree monomial of the pre-differential of a_I on the n-simplex, with
// its full coefficient (duality, symmetry normalization, Koszul signs).
struct McTreeTerm {
  Tree tau;
  std::vector<Subset> tuple;
  Rat coeff;
};
// all tree terms with arity <= arity_budget; weights are bounded by the
// degree window of the transferred operations
const std::vector<McTreeTerm>& mc_tree_terms(int n, Subset I,
                                             int arity_budget);

// A simplex candidate: assignments I -> element of the target algebra.
struct SimplexAssignment {
  int n = 0;
  std::map<Subset, Element> phi;
};

struct SimplexCheck {
  bool ok = true;
  // per generator the defect d_g(phi(a_I)) - phi#(d_mc(a_I))
  std::map<Subset, Element> residuals;
};

// true iff the assignment extends to a morphism mc^n -> g, checked on every
// generator equation.
SimplexCheck is_simplex(const Algebra& g, const SimplexAssignment& phi, int W);

// Fills the (n,k)-horn: given all faces except a_{[n] minus k} and a top
// element y of degree n, solves the generator equation for a_{[n]} by
// weight-graded fixed-point iteration and returns the full simplex.
SimplexAssignment horn_fill(const Algebra& g, int n, int k,
                            const SimplexAssignment& horn, const Element& y,
                            int W);

// Weight-truncated free Lie algebra on x, y in degree 1 (Lyndon basis,
// weight = bracket length).
struct FreeLie {
  std::shared_ptr<TableAlgebra> alg;
  int x = 0, y = 1;  // generator ids
  std::vector<std::string> lyndon_words;  // basis labels in order
};
FreeLie free_lie_two(int W);

// Baker-Campbell-Hausdorff series through weight W via the canonical
// Lambda^2_1 horn filler, as coordinates in the Lyndon basis.
Element bch(const FreeLie& L, int W);

// Independent oracle: log(exp x exp y) in the truncated free associative
// algebra, projected by the Dynkin idempotent and rewritten in the Lyndon
// basis.
Element bch_oracle(const FreeLie& L, int W);

// Coherence of the transferred decompositions for one tree shape: the
// edge-sum identity, verified as the vanishing of the tau-shaped components
// of d^2 - l_2(-, l_0) on the generators of mc^n.
struct CoherenceReport {
  bool ok = true;
  std::string witness;
};
CoherenceReport check_coalgebra_coherence(int n, const Tree& tau);

}  // namespace corolla
