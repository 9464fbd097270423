#pragma once

#include <mutex>

#include "corolla/algebra.hpp"

namespace corolla {

// One tree monomial of a generator differential.
struct TreeTerm {
  Tree tau;
  std::vector<int> decorations;  // generator ids on the leaves of tau
  Rat coeff;
};

// d(generator) = sum linear + cork * [the cork class] + sum of tree terms.
// Signs are the caller's: the stored coefficients enter as written.
struct GeneratorDiff {
  std::vector<std::pair<int, Rat>> linear;
  Rat cork;
  std::vector<TreeTerm> trees;
};

// Quasi-free presentation: the basis is every canonical decorated corked
// tree over the generators up to the truncation weight; l_n grafts, the
// curvature is the single-cork class, and d is the derivation extending
// the generator differentials plus vertex splitting.
class QuasiFreeAlgebra : public Algebra {
public:
  QuasiFreeAlgebra(GenTable generators, std::vector<GeneratorDiff> gen_d,
                   int wmax);

  Element op_ln(int n, std::span<const DecTree> args) const override;
  Element curvature() const override;
  Element diff_class(const DecTree& t) const override;

  const std::vector<GeneratorDiff>& generator_diffs() const { return gen_d_; }
  int generator_count() const { return gens_.size(); }

  // the generator value of d as an Element of this algebra
  Element generator_diff_element(int gen) const;

  // homology of the generator space under the generator-linear part of d
  std::map<int, int> minimal_generators(Elim policy = Elim::serial) const;

private:
  std::vector<GeneratorDiff> gen_d_;
  mutable std::map<std::string, Element> diff_cache_;
  mutable std::mutex cache_mu_;
};

// every canonical decorated tree of weight <= wmax over the generators,
// zero classes excluded, sorted
std::vector<DecTree> enumerate_decorated_basis(const GenTable& gens, int wmax);

}  // namespace corolla
