#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "corolla/rational.hpp"

namespace corolla {

constexpr int kMaxFormVars = 6;

// One exterior monomial: dt bits over the reduced coordinates t_1..t_n and
// polynomial exponents. Homological degree is -popcount(mask).
struct FormKey {
  uint32_t mask = 0;
  std::array<uint8_t, kMaxFormVars> exp{};

  friend bool operator<(const FormKey& a, const FormKey& b) {
    if (a.mask != b.mask) return a.mask < b.mask;
    return a.exp < b.exp;
  }
  friend bool operator==(const FormKey& a, const FormKey& b) {
    return a.mask == b.mask && a.exp == b.exp;
  }
};

// Polynomial differential form on the n-simplex in reduced coordinates
// (t_0 and dt_0 eliminated). Terms are canonical; the zero form is empty.
class PolyForm {
public:
  PolyForm() = default;
  explicit PolyForm(int n) : n_(n) {}

  static PolyForm unit(int n);          // the constant 1
  static PolyForm coordinate(int n, int i);  // t_i, 0 <= i <= n (t_0 reduced)
  static PolyForm differential_coordinate(int n, int i);  // dt_i, reduced

  int dim() const { return n_; }
  bool is_zero() const { return terms_.empty(); }
  // homological degree of a homogeneous form; throws on mixed
  int degree() const;
  int poly_degree() const;  // max total polynomial degree

  void add_term(const FormKey& k, const Rat& c);
  const std::map<FormKey, Rat>& terms() const { return terms_; }

  PolyForm& operator+=(const PolyForm& o);
  PolyForm& operator-=(const PolyForm& o);
  PolyForm operator*(const Rat& c) const;
  friend PolyForm operator+(PolyForm a, const PolyForm& b) { return a += b; }
  friend PolyForm operator-(PolyForm a, const PolyForm& b) { return a -= b; }
  friend bool operator==(const PolyForm& a, const PolyForm& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

  std::string str() const;  // debug rendering, not a stability contract

private:
  int n_ = 0;
  std::map<FormKey, Rat> terms_;
};

PolyForm wedge(const PolyForm& a, const PolyForm& b);
PolyForm wedge_all(int n, const std::vector<PolyForm>& forms);
PolyForm de_rham(const PolyForm& f);

// Pullback along the affine map of simplices induced by a monotone (or any)
// vertex map phi: [m] -> [n]; t_i pulls back to the sum of the target
// barycentric coordinates mapping onto i.
PolyForm simplicial_pullback(const PolyForm& f, int m,
                             const std::vector<int>& phi);

// Poincare contraction toward vertex i: integrate the flow-parameter
// component of the pullback along u |-> u x + (1-u) e_i. Degree +1.
PolyForm poincare_contraction(const PolyForm& f, int vertex);

// Exact integral over the whole simplex of the top-degree component.
Rat integrate_top(const PolyForm& f);

// Evaluation of the 0-form part at a vertex.
Rat evaluate_at_vertex(const PolyForm& f, int vertex);

}  // namespace corolla
