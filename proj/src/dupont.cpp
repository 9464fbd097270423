#include "corolla/dupont.hpp"

#include <functional>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace corolla {

void Cochain::add(Subset I, const Rat& c) {
  if (c.is_zero()) return;
  auto it = coeff.find(I);
  if (it == coeff.end()) {
    coeff.emplace(I, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) coeff.erase(it);
  }
}

std::vector<int> subset_elements(Subset I) {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i)
    if (I >> i & 1) out.push_back(i);
  return out;
}

std::string subset_str(Subset I) {
  std::string s;
  for (int i : subset_elements(I)) s += std::to_string(i);
  return s;
}

std::string Cochain::str() const {
  if (coeff.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [I, c] : coeff) {
    if (!first) os << " + ";
    first = false;
    os << c.str() << "*w" << subset_str(I);
  }
  return os.str();
}

Cochain cochain_diff(const Cochain& c) {
  Cochain out(c.n);
  for (const auto& [I, v] : c.coeff) {
    // dual of the face maps: w_I |-> sum over J = I + {j}
    for (int j = 0; j <= c.n; ++j) {
      if (I >> j & 1) continue;
      Subset J = I | (uint32_t(1) << j);
      int pos = __builtin_popcount(J & ((uint32_t(1) << j) - 1));
      out.add(J, (pos & 1) ? -v : v);
    }
  }
  return out;
}

PolyForm whitney(int n, Subset I) {
  std::vector<int> el = subset_elements(I);
  if (el.empty()) throw std::invalid_argument("whitney: empty subset");
  if (el.back() > n) throw std::invalid_argument("whitney: subset out of range");
  const int k = (int)el.size() - 1;
  PolyForm out(n);
  for (int j = 0; j <= k; ++j) {
    std::vector<PolyForm> factors;
    factors.push_back(PolyForm::coordinate(n, el[j]));
    for (int l = 0; l <= k; ++l)
      if (l != j)
        factors.push_back(PolyForm::differential_coordinate(n, el[l]));
    PolyForm term = wedge_all(n, factors);
    out += (j & 1) ? term * Rat(-1) : term;
  }
  return out * Rat::factorial(k);
}

PolyForm dupont_i(const Cochain& c) {
  PolyForm out(c.n);
  for (const auto& [I, v] : c.coeff) out += whitney(c.n, I) * v;
  return out;
}

Cochain dupont_p(const PolyForm& f) {
  const int n = f.dim();
  Cochain out(n);
  for (Subset I = 1; I < (uint32_t(1) << (n + 1)); ++I) {
    std::vector<int> el = subset_elements(I);
    if (el.back() > n) continue;
    const int k = (int)el.size() - 1;
    if (k == 0) {
      out.add(I, evaluate_at_vertex(f, el[0]));
      continue;
    }
    // pull back to the face spanned by I and integrate
    PolyForm restricted = simplicial_pullback(f, k, el);
    out.add(I, integrate_top(restricted));
  }
  return out;
}

PolyForm dupont_h(const PolyForm& f) {
  const int n = f.dim();
  PolyForm out(n);
  for (Subset I = 1; I < (uint32_t(1) << (n + 1)); ++I) {
    std::vector<int> el = subset_elements(I);
    if (el.back() > n) continue;
    PolyForm acc = f;
    for (int v : el) acc = poincare_contraction(acc, v);
    if (acc.is_zero()) continue;
    PolyForm term = wedge(whitney(n, I), acc);
    // one minus sign per contraction
    out += (el.size() & 1) ? term * Rat(-1) : term;
  }
  return out;
}

Cochain cochain_unit(int n) {
  Cochain u(n);
  for (int i = 0; i <= n; ++i) u.add(uint32_t(1) << i, Rat(1));
  return u;
}

Cochain cochain_pullback(const Cochain& c, int m, const std::vector<int>& phi) {
  Cochain out(m);
  for (const auto& [I, v] : c.coeff) {
    // w_I pulls back to the sum over subsets J of [m] mapping bijectively
    // onto I
    for (Subset J = 1; J < (uint32_t(1) << (m + 1)); ++J) {
      std::vector<int> el = subset_elements(J);
      Subset img = 0;
      bool inj = true;
      for (int j : el) {
        uint32_t b = uint32_t(1) << phi[j];
        if (img & b) inj = false;
        img |= b;
      }
      if (inj && img == I) out.add(J, v);
    }
  }
  return out;
}

namespace {

std::vector<PolyForm> monomial_basis(int n, int max_poly_degree) {
  std::vector<PolyForm> out;
  std::vector<int> exps(n, 0);
  std::function<void(int, int)> rec = [&](int var, int left) {
    if (var == n) {
      for (uint32_t mask = 0; mask < (uint32_t(1) << n); ++mask) {
        FormKey k;
        k.mask = mask;
        for (int i = 0; i < n; ++i) k.exp[i] = (uint8_t)exps[i];
        PolyForm f(n);
        f.add_term(k, Rat(1));
        out.push_back(f);
      }
      return;
    }
    for (int e = 0; e <= left; ++e) {
      exps[var] = e;
      rec(var + 1, left - e);
      exps[var] = 0;
    }
  };
  rec(0, max_poly_degree);
  return out;
}

bool check_one(int n, const PolyForm& s, std::string& witness) {
  // i p - id = d h + h d
  PolyForm lhs = dupont_i(dupont_p(s)) - s;
  PolyForm rhs = de_rham(dupont_h(s)) + dupont_h(de_rham(s));
  if (!(lhs == rhs)) {
    witness = "homotopy identity fails at " + s.str();
    return false;
  }
  // p is a chain map
  Cochain pd = dupont_p(de_rham(s));
  Cochain dp = cochain_diff(dupont_p(s));
  if (!(pd == dp)) {
    witness = "p d != d p at " + s.str();
    return false;
  }
  if (!dupont_h(dupont_h(s)).is_zero()) {
    witness = "h^2 != 0 at " + s.str();
    return false;
  }
  if (!dupont_p(dupont_h(s)).is_zero()) {
    witness = "p h != 0 at " + s.str();
    return false;
  }
  // face and degeneracy compatibility
  for (int m : {n - 1, n + 1}) {
    if (m < 0) continue;
    std::vector<std::vector<int>> maps;
    if (m == n - 1) {
      for (int j = 0; j <= n; ++j) {
        std::vector<int> phi(m + 1);
        for (int v = 0; v <= m; ++v) phi[v] = v < j ? v : v + 1;
        maps.push_back(phi);
      }
    } else {
      for (int j = 0; j <= n; ++j) {
        std::vector<int> phi(m + 1);
        for (int v = 0; v <= m; ++v) phi[v] = v <= j ? v : v - 1;
        maps.push_back(phi);
      }
    }
    for (const auto& phi : maps) {
      PolyForm a = simplicial_pullback(dupont_h(s), m, phi);
      PolyForm b = dupont_h(simplicial_pullback(s, m, phi));
      if (!(a == b)) {
        witness = "h is not simplicial at " + s.str();
        return false;
      }
      Cochain pa = cochain_pullback(dupont_p(s), m, phi);
      Cochain pb = dupont_p(simplicial_pullback(s, m, phi));
      if (!(pa == pb)) {
        witness = "p is not simplicial at " + s.str();
        return false;
      }
    }
  }
  return true;
}

}  // namespace

ContractionReport verify_contraction(int n, int max_poly_degree,
                                     bool parallel) {
  // p i = id and h i = 0 on the cochain basis
  for (Subset I = 1; I < (uint32_t(1) << (n + 1)); ++I) {
    Cochain e(n);
    e.add(I, Rat(1));
    PolyForm w = dupont_i(e);
    if (!(dupont_p(w) == e))
      return {false, "p i != id at w" + subset_str(I)};
    if (!dupont_h(w).is_zero())
      return {false, "h i != 0 at w" + subset_str(I)};
    if (!(de_rham(w) == dupont_i(cochain_diff(e))))
      return {false, "i d != d i at w" + subset_str(I)};
  }

  std::vector<PolyForm> basis = monomial_basis(n, max_poly_degree);
  std::vector<std::string> fails(basis.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long idx = 0; idx < (long)basis.size(); ++idx)
    check_one(n, basis[idx], fails[idx]);
#else
  (void)parallel;
  for (size_t idx = 0; idx < basis.size(); ++idx)
    check_one(n, basis[idx], fails[idx]);
#endif
  ContractionReport rep;
  for (const std::string& w : fails)
    if (!w.empty()) {
      rep.ok = false;
      rep.counterexample = w;
      break;
    }
  return rep;
}

}  // namespace corolla
