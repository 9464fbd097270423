#pragma once

#include <utility>
#include <vector>

#include "corolla/rational.hpp"

namespace corolla {

// Sparse exact matrix, row-major triplets. Entries are kept sorted by column
// with no explicit zeros.
struct SparseMat {
  int rows = 0;
  int cols = 0;
  std::vector<std::vector<std::pair<int, Rat>>> row;

  SparseMat() = default;
  SparseMat(int r, int c) : rows(r), cols(c), row(r) {}

  void set(int r, int c, const Rat& v);
  Rat get(int r, int c) const;
  void add(int r, int c, const Rat& v);
  long nnz() const;

  friend bool operator==(const SparseMat& a, const SparseMat& b);
};

// Pivot strategy is fixed (first nonzero scanning rows in order), so serial
// and parallel elimination produce bit-identical results.
enum class Elim { serial, parallel };

struct EchelonResult {
  SparseMat mat;               // reduced row-echelon form over the rationals
  std::vector<int> pivot_col;  // pivot column per pivot row
  int rank = 0;
};

EchelonResult rref(const SparseMat& m, Elim policy = Elim::serial);

int rank(const SparseMat& m, Elim policy = Elim::serial);

// Basis of the right kernel, deterministic: one vector per free column in
// column order, normalized so the free coordinate is 1.
std::vector<std::vector<Rat>> kernel_basis(const SparseMat& m,
                                           Elim policy = Elim::serial);

SparseMat mat_mul(const SparseMat& a, const SparseMat& b);

}  // namespace corolla
