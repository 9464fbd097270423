#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "corolla/polyform.hpp"

namespace corolla {

// Subsets of {0..n} as bitmasks; cellular cochains of the n-simplex with
// basis {w_I}, I nonempty, of homological degree -(|I|-1).
using Subset = uint32_t;

struct Cochain {
  int n = 0;
  std::map<Subset, Rat> coeff;

  Cochain() = default;
  explicit Cochain(int dim) : n(dim) {}
  void add(Subset I, const Rat& c);
  bool is_zero() const { return coeff.empty(); }
  friend bool operator==(const Cochain& a, const Cochain& b) {
    return a.n == b.n && a.coeff == b.coeff;
  }
  std::string str() const;
};

std::vector<int> subset_elements(Subset I);
std::string subset_str(Subset I);

// simplicial cochain differential (degree -1 here, dual of the boundary)
Cochain cochain_diff(const Cochain& c);

// Whitney elementary form of a nonempty I, with the |I|-1 factorial factor.
PolyForm whitney(int n, Subset I);

// i_n: cochains into forms, linear over the Whitney basis.
PolyForm dupont_i(const Cochain& c);

// p_n: exact fiber integration over the faces (vertex evaluation in
// degree 0).
Cochain dupont_p(const PolyForm& f);

// h_n: the Dupont homotopy, sum over nonempty I of Whitney forms wedged
// with iterated Poincare contractions.
PolyForm dupont_h(const PolyForm& f);

// transferred unit p_n(1) = sum of the vertex cochains
Cochain cochain_unit(int n);

struct ContractionReport {
  bool ok = true;
  std::string counterexample;
};

// Checks the five contraction identities and compatibility with all
// simplicial cofaces/codegeneracies on monomial forms of polynomial degree
// <= max_poly_degree.
ContractionReport verify_contraction(int n, int max_poly_degree,
                                     bool parallel = false);

// pullback of cochains along a vertex map [m] -> [n]
Cochain cochain_pullback(const Cochain& c, int m, const std::vector<int>& phi);

}  // namespace corolla
