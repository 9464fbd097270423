#include "corolla/homology.hpp"

namespace corolla {

namespace {

int matrix_rank_checked(const GradedComplex& c, int k, Elim policy) {
  const SparseMat* d = c.differential(k);
  if (!d) return 0;
  if (d->cols != c.dim(k) || d->rows != c.dim(k - 1))
    throw ComplexError("differential shape mismatch at degree " +
                       std::to_string(k));
  return rank(*d, policy);
}

}  // namespace

std::map<int, int> homology_dims(const GradedComplex& c, int lo, int hi,
                                 Elim policy) {
  for (int k = lo; k <= hi + 1; ++k) {
    const SparseMat* dk = c.differential(k);
    const SparseMat* dk1 = c.differential(k + 1);
    if (!dk || !dk1) continue;
    SparseMat sq = mat_mul(*dk, *dk1);
    for (const auto& rw : sq.row)
      if (!rw.empty())
        throw ComplexError("d^2 != 0 at degree " + std::to_string(k + 1));
  }
  std::map<int, int> h;
  for (int k = lo; k <= hi; ++k) {
    int n = c.dim(k);
    int rk = matrix_rank_checked(c, k, policy);
    int rk1 = matrix_rank_checked(c, k + 1, policy);
    h[k] = n - rk - rk1;
  }
  return h;
}

}  // namespace corolla
