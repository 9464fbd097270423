#include "corolla/polyform.hpp"

#include <sstream>
#include <stdexcept>

namespace corolla {

namespace {

int popcount(uint32_t m) { return __builtin_popcount(m); }

}  // namespace

PolyForm PolyForm::unit(int n) {
  PolyForm f(n);
  f.add_term(FormKey{}, Rat(1));
  return f;
}

PolyForm PolyForm::coordinate(int n, int i) {
  PolyForm f(n);
  if (i == 0) {
    // t_0 = 1 - t_1 - ... - t_n
    f.add_term(FormKey{}, Rat(1));
    for (int j = 1; j <= n; ++j) {
      FormKey k;
      k.exp[j - 1] = 1;
      f.add_term(k, Rat(-1));
    }
  } else {
    FormKey k;
    k.exp[i - 1] = 1;
    f.add_term(k, Rat(1));
  }
  return f;
}

PolyForm PolyForm::differential_coordinate(int n, int i) {
  PolyForm f(n);
  if (i == 0) {
    for (int j = 1; j <= n; ++j)
      f.add_term(FormKey{uint32_t(1) << (j - 1), {}}, Rat(-1));
  } else {
    f.add_term(FormKey{uint32_t(1) << (i - 1), {}}, Rat(1));
  }
  return f;
}

int PolyForm::degree() const {
  bool first = true;
  int deg = 0;
  for (const auto& [k, c] : terms_) {
    int d = -popcount(k.mask);
    if (first) {
      deg = d;
      first = false;
    } else if (d != deg) {
      throw std::logic_error("form is not homogeneous");
    }
  }
  return deg;
}

int PolyForm::poly_degree() const {
  int d = 0;
  for (const auto& [k, c] : terms_) {
    int s = 0;
    for (int i = 0; i < n_; ++i) s += k.exp[i];
    d = std::max(d, s);
  }
  return d;
}

void PolyForm::add_term(const FormKey& k, const Rat& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(k, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

PolyForm& PolyForm::operator+=(const PolyForm& o) {
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

PolyForm& PolyForm::operator-=(const PolyForm& o) {
  for (const auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

PolyForm PolyForm::operator*(const Rat& c) const {
  PolyForm out(n_);
  if (c.is_zero()) return out;
  for (const auto& [k, v] : terms_) out.terms_.emplace(k, v * c);
  return out;
}

std::string PolyForm::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.str();
    for (int i = 0; i < n_; ++i)
      if (k.exp[i]) {
        os << "*t" << (i + 1);
        if (k.exp[i] > 1) os << "^" << int(k.exp[i]);
      }
    for (int i = 0; i < n_; ++i)
      if (k.mask >> i & 1) os << "*dt" << (i + 1);
  }
  return os.str();
}

PolyForm wedge(const PolyForm& a, const PolyForm& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("wedge: dimension mismatch");
  PolyForm out(a.dim());
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      if (ka.mask & kb.mask) continue;
      int inv = 0;
      for (int i = 0; i < kMaxFormVars; ++i)
        if (kb.mask >> i & 1) inv += popcount(ka.mask >> (i + 1));
      FormKey k;
      k.mask = ka.mask | kb.mask;
      bool overflow = false;
      for (int i = 0; i < kMaxFormVars; ++i) {
        int e = ka.exp[i] + kb.exp[i];
        if (e > 255) overflow = true;
        k.exp[i] = (uint8_t)e;
      }
      if (overflow) throw std::overflow_error("polynomial degree too large");
      out.add_term(k, (inv & 1) ? -(ca * cb) : ca * cb);
    }
  }
  return out;
}

PolyForm wedge_all(int n, const std::vector<PolyForm>& forms) {
  PolyForm acc = PolyForm::unit(n);
  for (const PolyForm& f : forms) acc = wedge(acc, f);
  return acc;
}

PolyForm de_rham(const PolyForm& f) {
  PolyForm out(f.dim());
  for (const auto& [k, c] : f.terms()) {
    for (int i = 0; i < f.dim(); ++i) {
      if (k.exp[i] == 0 || (k.mask >> i & 1)) continue;
      // d t_i^e = e t_i^{e-1} dt_i, dt_i moved leftmost over dt_S
      int inv = popcount(k.mask & ((uint32_t(1) << i) - 1));
      FormKey nk = k;
      nk.exp[i] -= 1;
      nk.mask |= uint32_t(1) << i;
      Rat v = c * Rat(k.exp[i]);
      out.add_term(nk, (inv & 1) ? -v : v);
    }
  }
  return out;
}

namespace {

// builds the affine image forms for t_i under a vertex map [m] -> [n]
std::vector<PolyForm> coordinate_images(int n, int m,
                                        const std::vector<int>& phi) {
  std::vector<PolyForm> img(n + 1, PolyForm(m));
  for (int j = 0; j <= m; ++j) {
    int target = phi[j];
    if (target < 0 || target > n)
      throw std::invalid_argument("simplicial_pullback: bad vertex image");
    img[target] += PolyForm::coordinate(m, j);
  }
  return img;
}

}  // namespace

PolyForm simplicial_pullback(const PolyForm& f, int m,
                             const std::vector<int>& phi) {
  const int n = f.dim();
  if ((int)phi.size() != m + 1)
    throw std::invalid_argument("simplicial_pullback: vertex map size");
  std::vector<PolyForm> timg = coordinate_images(n, m, phi);
  std::vector<PolyForm> dtimg(n + 1);
  for (int i = 0; i <= n; ++i) dtimg[i] = de_rham(timg[i]);

  PolyForm out(m);
  for (const auto& [k, c] : f.terms()) {
    PolyForm acc = PolyForm::unit(m) * c;
    for (int i = 1; i <= n; ++i)
      for (int e = 0; e < k.exp[i - 1]; ++e) acc = wedge(acc, timg[i]);
    for (int i = 1; i <= n; ++i)
      if (k.mask >> (i - 1) & 1) acc = wedge(acc, dtimg[i]);
    out += acc;
  }
  return out;
}

PolyForm poincare_contraction(const PolyForm& f, int vertex) {
  const int n = f.dim();
  // work in n+1 variables, u last: t_i |-> u t_i + [i == vertex](1-u),
  // dt_i |-> u dt_i + (t_i - [i == vertex]) du
  const int U = n;  // index of u among 0-based vars
  auto tsub = [&](int i) {
    PolyForm p(n + 1);
    FormKey ut;
    ut.exp[U] = 1;
    ut.exp[i - 1] += 1;
    p.add_term(ut, Rat(1));
    if (i == vertex) {
      p.add_term(FormKey{}, Rat(1));
      FormKey u;
      u.exp[U] = 1;
      p.add_term(u, Rat(-1));
    }
    return p;
  };
  auto dtsub = [&](int i) {
    PolyForm p(n + 1);
    FormKey udt;
    udt.exp[U] = 1;
    udt.mask = uint32_t(1) << (i - 1);
    p.add_term(udt, Rat(1));
    FormKey tdu;
    tdu.exp[i - 1] = 1;
    tdu.mask = uint32_t(1) << U;
    p.add_term(tdu, Rat(1));
    if (i == vertex) {
      FormKey du;
      du.mask = uint32_t(1) << U;
      p.add_term(du, Rat(-1));
    }
    return p;
  };
  // vertex 0 in reduced coordinates: t_0 = 1 - sum, handled by substituting
  // every t_i with i >= 1 as above; the i == vertex branch only fires for
  // vertex >= 1, and vertex 0 needs no correction term since the flow is
  // u x alone in the reduced chart.
  PolyForm pulled(n + 1);
  for (const auto& [k, c] : f.terms()) {
    PolyForm acc(n + 1);
    acc.add_term(FormKey{}, c);
    for (int i = 1; i <= n; ++i)
      for (int e = 0; e < k.exp[i - 1]; ++e) acc = wedge(acc, tsub(i));
    for (int i = 1; i <= n; ++i)
      if (k.mask >> (i - 1) & 1) acc = wedge(acc, dtsub(i));
    pulled += acc;
  }
  // du component: normalize du to the front, integrate u over [0,1]
  PolyForm out(n);
  for (const auto& [k, c] : pulled.terms()) {
    if (!(k.mask >> U & 1)) continue;
    int inv = popcount(k.mask & ((uint32_t(1) << U) - 1));
    FormKey nk;
    nk.mask = k.mask & ~(uint32_t(1) << U);
    for (int i = 0; i < n; ++i) nk.exp[i] = k.exp[i];
    Rat v = c / Rat(k.exp[U] + 1);  // integral of u^e over [0,1]
    out.add_term(nk, (inv & 1) ? -v : v);
  }
  return out;
}

Rat integrate_top(const PolyForm& f) {
  const int n = f.dim();
  const uint32_t full = (uint32_t(1) << n) - 1;
  Rat total(0);
  for (const auto& [k, c] : f.terms()) {
    if (k.mask != full) continue;
    // Dirichlet: int over the simplex of prod t_i^{a_i} equals
    // prod a_i! / (n + sum a_i)!
    Rat num(1);
    int s = 0;
    for (int i = 0; i < n; ++i) {
      num *= Rat::factorial(k.exp[i]);
      s += k.exp[i];
    }
    total += c * num / Rat::factorial(n + s);
  }
  return total;
}

Rat evaluate_at_vertex(const PolyForm& f, int vertex) {
  // t_vertex = 1, every other coordinate 0
  Rat total(0);
  for (const auto& [k, c] : f.terms()) {
    if (k.mask != 0) continue;
    bool nonzero = true;
    for (int i = 0; i < f.dim(); ++i)
      if (k.exp[i] && i != vertex - 1) nonzero = false;
    if (nonzero) total += c;
  }
  return total;
}

}  // namespace corolla
