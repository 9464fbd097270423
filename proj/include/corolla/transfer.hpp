#pragma once

#include <optional>

#include "corolla/dupont.hpp"
#include "corolla/tree.hpp"

namespace corolla {

// Transferred operation of a cork-free rooted tree on the cochains of the
// n-simplex: Whitney inclusion on leaves, wedge at the vertices, the Dupont
// homotopy on internal edges, projection at the root. The single cork gives
// p(1); trees mixing corks and leaves act by zero (flagged with a note).
struct TransferResult {
  Cochain value;
  bool vanishing_cork_case = false;
};
TransferResult transferred_operation(int n, const Tree& tau,
                                     const std::vector<Cochain>& inputs);

// lambda coefficients of mu_tau on all ordered tuples of nonempty subsets:
// by_output[I] lists (tuple (I_1..I_m), coefficient of w_I).
struct TreeTable {
  int n = 0;
  Tree tau;
  std::map<Subset, std::vector<std::pair<std::vector<Subset>, Rat>>> by_output;
};

// Memoized per (n, tau); honors the COROLLA_CACHE_DIR environment variable
// (content-addressed JSON files). Builds are idempotent and thread-safe.
const TreeTable& decomposition_table(int n, const Tree& tau,
                                     bool parallel = true);

// Dual elementary decomposition under plain adjoint duality: the coefficient
// of (I_1,..,I_m) in the decomposition of a_I is the coefficient of w_I in
// mu_tau(w_{I_1},..,w_{I_m}).
std::vector<std::pair<std::vector<Subset>, Rat>> simplex_decomposition(
    int n, const Tree& tau, Subset I);

std::string table_json(const TreeTable& t);

}  // namespace corolla
