#pragma once

#include <map>
#include <string>
#include <vector>

#include "corolla/matrix.hpp"

namespace corolla {

// Finite graded chain complex over the rationals, differentials of degree -1.
// diff(k) maps degree k to degree k-1; stored as a matrix whose columns are
// indexed by the degree-k basis and rows by the degree-(k-1) basis.
struct GradedComplex {
  std::map<int, std::vector<std::string>> basis;  // degree -> labels
  std::map<int, SparseMat> diff;                  // degree k -> d_k

  int dim(int k) const {
    auto it = basis.find(k);
    return it == basis.end() ? 0 : (int)it->second.size();
  }
  const SparseMat* differential(int k) const {
    auto it = diff.find(k);
    return it == diff.end() ? nullptr : &it->second;
  }
};

struct ComplexError : std::runtime_error {
  explicit ComplexError(const std::string& what) : std::runtime_error(what) {}
};

// Checks d^2 = 0 on [lo-1, hi+1] and returns dim ker(d_k)/im(d_{k+1}) for
// k in [lo, hi]. Throws ComplexError naming the offending degree otherwise.
std::map<int, int> homology_dims(const GradedComplex& c, int lo, int hi,
                                 Elim policy = Elim::serial);

}  // namespace corolla
