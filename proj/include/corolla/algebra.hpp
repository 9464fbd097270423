#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "corolla/element.hpp"
#include "corolla/homology.hpp"

namespace corolla {

struct BasisInfo {
  DecTree t;
  std::string label;
  int degree = 0;
  int weight = 1;
};

// Weight-truncated curved absolute L-infinity algebra, presented as the
// weight <= wmax nilpotent quotient. Elementary operations l_n (n != 1) are
// symmetric of degree -1; the pre-differential d is weight-nondecreasing;
// weights of basis elements are >= 1 and operations add them up, so every
// tree evaluation below the truncation is finite.
class Algebra {
public:
  Algebra(GenTable gens, int wmax) : gens_(std::move(gens)), wmax_(wmax) {}
  virtual ~Algebra() = default;

  const GenTable& gens() const { return gens_; }
  int wmax() const { return wmax_; }

  int basis_size() const { return (int)basis_.size(); }
  const BasisInfo& basis(int i) const { return basis_[i]; }
  int index_of(const DecTree& t) const;
  std::vector<int> basis_in_degree(int deg, int weight_cap) const;

  // l_n on canonical classes; n >= 2 or n == 0 (which ignores args)
  virtual Element op_ln(int n, std::span<const DecTree> args) const = 0;
  virtual Element curvature() const = 0;
  virtual Element diff_class(const DecTree& t) const = 0;

  Element d(const Element& e) const;
  Element ln_elements(int n, std::span<const Element> args) const;

  // evaluates a corked tree whose leaves are fed the given homogeneous
  // elements; corks evaluate through the curvature
  Element gamma_tree(const Tree& tau, std::span<const Element> leaves) const;

  // gamma of a finite series of decorated trees, truncated at weight W
  struct SeriesTerm {
    Tree tau;
    std::vector<int> decorations;  // generator ids
    Rat coeff;
  };
  Element gamma_eval(std::span<const SeriesTerm> series, int W) const;

  Element truncated(Element e, int W) const;

protected:
  void set_basis(std::vector<BasisInfo> b);

  GenTable gens_;
  int wmax_;
  std::vector<BasisInfo> basis_;
  std::map<std::string, int> index_;
};

// ---------------------------------------------------------------------------
// finite presentations backed by explicit operation tables

class TableAlgebra : public Algebra {
public:
  TableAlgebra(GenTable basis_gens, int wmax);

  // inputs in any order; stored under the sorted tuple with its Koszul sign
  void set_ln(int n, std::vector<int> inputs, Element value);
  void set_curvature(Element c) { curvature_ = std::move(c); }
  void set_diff(int basis_id, Element value);

  Element op_ln(int n, std::span<const DecTree> args) const override;
  Element curvature() const override { return curvature_; }
  Element diff_class(const DecTree& t) const override;

  std::string to_json() const;
  static std::shared_ptr<TableAlgebra> from_json(const std::string& text);

private:
  std::map<std::pair<int, std::vector<int>>, Element> ln_;
  Element curvature_;
  std::vector<Element> diff_;
};

// zero differential, all operations zero; basis from (label, degree) pairs
std::shared_ptr<TableAlgebra> abelian_complex(
    const std::vector<std::pair<std::string, int>>& basis,
    const std::vector<std::tuple<int, int, Rat>>& diff_entries, int wmax);

// ---------------------------------------------------------------------------
// structure checks and Maurer-Cartan machinery (generic over presentations)

struct CheckReport {
  bool ok = true;
  std::string witness;  // first violated identity, human readable
};

// Verifies, on basis tuples of total weight <= W:
//   d(l_0) = 0, d^2 = l_2(l_0,-), and the curved homotopy-Jacobi relations
//   sum_{p+q=n+1} (-1)^q sum_{(q,n-q)-shuffles} l_p(l_q(...) ,...) = 0
// for n <= arity_cap, with l_1 := d.
CheckReport check_structure(const Algebra& alg, int W, int arity_cap = 4);

// MC residual d(a) + sum_{n != 1} l_n(a,..,a)/n!  (n = 0 term is l_0)
Element mc_residual(const Algebra& alg, const Element& alpha, int W);
struct McResult {
  bool is_mc;
  Element residual;
};
McResult mc_verify(const Algebra& alg, const Element& alpha, int W);

// d^alpha(u) = d(u) + sum_{n>=2} l_n(alpha,..,alpha,u)/(n-1)!
Element twisted_apply(const Algebra& alg, const Element& alpha,
                      const Element& u, int W);

// chain complex of d^alpha on the weight <= W basis, degrees [lo-1, hi+1]
GradedComplex twisted_complex(const Algebra& alg, const Element& alpha, int lo,
                              int hi, int W, Elim policy = Elim::serial);

std::map<int, int> alpha_homology(const Algebra& alg, const Element& alpha,
                                  int lo, int hi, int W,
                                  Elim policy = Elim::serial);

// integrates d gamma/dt = d^{gamma(t)}(lambda), gamma(0) = alpha, and
// returns gamma(1); exact, the weight grading makes the flow polynomial
Element gauge_act(const Algebra& alg, const Element& lambda,
                  const Element& alpha, int W);

}  // namespace corolla
