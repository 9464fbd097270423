#include "corolla/integration.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace corolla {

namespace {

std::vector<Subset> mc_subsets(int n) {
  std::vector<Subset> out;
  for (Subset I = 1; I < (uint32_t(1) << (n + 1)); ++I) out.push_back(I);
  std::sort(out.begin(), out.end(), [](Subset a, Subset b) {
    int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
    if (pa != pb) return pa < pb;
    return a < b;
  });
  return out;
}

std::string mc_label(Subset I) { return "a" + subset_str(I); }

}  // namespace


int kImportVariant = 0;

namespace {

// number of internal edges between each leaf (in canonical order) and the
// root
std::vector<int> leaf_depths(const Tree& t) {
  std::vector<int> out;
  std::function<void(const Tree&, int)> rec = [&](const Tree& node, int d) {
    for (const Tree& c : node.children()) {
      if (c.kind() == Tree::Kind::leaf) out.push_back(d);
      else if (c.kind() == Tree::Kind::node) rec(c, d + 1);
    }
  };
  if (t.kind() == Tree::Kind::leaf) out.push_back(0);
  else rec(t, 0);
  return out;
}

// Koszul factor of the desuspended generator passing the decorations,
// weighted by the number of edges above each leaf. Pinned by the curvature
// identity on the Maurer-Cartan algebras and the horn-filler equations;
// those overdetermine it.
int import_sign(int gen_degree, const std::vector<Subset>& tuple,
                const std::vector<int>& depth) {
  if (!((gen_degree - 1) & 1)) return 1;
  int e = 0;
  for (size_t j = 0; j < tuple.size(); ++j) {
    int d = __builtin_popcount(tuple[j]) - 1;
    switch (kImportVariant) {
      case 0: if (depth[j] == 0) e += d; break;
      case 1: e += (depth[j] + 1) * d; break;
      case 2: if ((depth[j] & 1) == 0) e += d; break;
      case 3: e += depth[j] * d; break;
      case 4: e += d; break;
    }
  }
  return e & 1 ? -1 : 1;
}

}  // namespace

const std::vector<McTreeTerm>& mc_tree_terms(int n, Subset I,
                                             int arity_budget) {
  static std::mutex mu;
  static std::map<std::tuple<int, Subset, int>, std::vector<McTreeTerm>> memo;
  std::tuple<int, Subset, int> key{n, I, arity_budget};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }
  std::vector<McTreeTerm> out;
  int deg = __builtin_popcount(I) - 1;
  for (int m = 2; m <= arity_budget; ++m) {
    // the degree window bounds the weight of contributing trees
    int wmax_tree = m * n - (deg + 1) + 2;
    for (int w = 1; w <= wmax_tree; ++w) {
      for (const Tree& tau : enumerate_trees(m, w, false)) {
        Rat norm = Rat(deg & 1 ? 1 : -1) / symmetry_coefficient(tau);
        std::vector<int> depth = leaf_depths(tau);
        for (const auto& [tuple, lambda] : simplex_decomposition(n, tau, I)) {
          McTreeTerm t;
          t.tau = tau;
          t.tuple = tuple;
          t.coeff = norm * lambda * Rat(import_sign(deg, tuple, depth));
          out.push_back(std::move(t));
        }
      }
    }
  }
  std::lock_guard<std::mutex> lock(mu);
  auto [it, ins] = memo.emplace(key, std::move(out));
  return it->second;
}

int mc_generator(int n, Subset I) {
  std::vector<Subset> subs = mc_subsets(n);
  auto it = std::find(subs.begin(), subs.end(), I);
  if (it == subs.end()) throw std::invalid_argument("mc_generator: bad subset");
  return (int)(it - subs.begin());
}

std::shared_ptr<QuasiFreeAlgebra> build_mc(int n, int W) {
  if (n > 3) throw std::invalid_argument("mc^n supported for n <= 3");
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<QuasiFreeAlgebra>> memo;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find({n, W});
    if (it != memo.end()) return it->second;
  }

  std::vector<Subset> subs = mc_subsets(n);
  GenTable gens;
  for (Subset I : subs)
    gens.add(GenInfo{mc_label(I), __builtin_popcount(I) - 1, 1});

  std::map<Subset, int> id_of;
  for (size_t i = 0; i < subs.size(); ++i) id_of[subs[i]] = (int)i;

  std::vector<GeneratorDiff> gds(subs.size());
  for (size_t gi = 0; gi < subs.size(); ++gi) {
    Subset I = subs[gi];
    GeneratorDiff gd;
    std::vector<int> el = subset_elements(I);
    if (el.size() >= 2) {
      for (size_t l = 0; l < el.size(); ++l) {
        Subset J = I & ~(uint32_t(1) << el[l]);
        gd.linear.emplace_back(id_of[J], Rat(l & 1 ? -1 : 1));
      }
    }
    // the cork appears exactly in the decompositions of the vertices
    gd.cork = el.size() == 1 ? Rat(-1) : Rat(0);

    // inside mc^n a tree term of arity m and weight w sits in weight w + m
    for (const McTreeTerm& t : mc_tree_terms(n, I, W - 1)) {
      if (t.tau.weight() + t.tau.arity() > W) continue;
      TreeTerm tt;
      tt.tau = t.tau;
      for (Subset J : t.tuple) tt.decorations.push_back(id_of[J]);
      tt.coeff = t.coeff;
      gd.trees.push_back(std::move(tt));
    }
    gds[gi] = std::move(gd);
  }

  auto alg = std::make_shared<QuasiFreeAlgebra>(gens, gds, W);
  std::lock_guard<std::mutex> lock(mu);
  memo[{n, W}] = alg;
  return alg;
}

namespace {

// the right-hand side of the generator equation for a_I, evaluated in g:
// the pushforward of the pre-differential of a_I along phi
Element mc_equation_rhs(const Algebra& g, int n, Subset I,
                        const std::map<Subset, Element>& phi, int W) {
  Element rhs;
  std::vector<int> el = subset_elements(I);
  if (el.size() >= 2) {
    for (size_t l = 0; l < el.size(); ++l) {
      Subset J = I & ~(uint32_t(1) << el[l]);
      auto it = phi.find(J);
      if (it != phi.end()) add_scaled(rhs, it->second, Rat(l & 1 ? -1 : 1));
    }
  } else {
    add_scaled(rhs, g.curvature(), Rat(-1));
  }
  for (const McTreeTerm& t : mc_tree_terms(n, I, W)) {
    std::vector<Element> leaves;
    int wmin = 0;
    bool dead = false;
    for (Subset J : t.tuple) {
      auto it = phi.find(J);
      if (it == phi.end() || is_zero(it->second)) {
        dead = true;
        break;
      }
      wmin += element_min_weight(it->second, g.gens());
      leaves.push_back(it->second);
    }
    if (dead || wmin > W) continue;
    add_scaled(rhs, g.gamma_tree(t.tau, leaves), t.coeff);
  }
  return g.truncated(std::move(rhs), W);
}

}  // namespace

SimplexCheck is_simplex(const Algebra& g, const SimplexAssignment& phi,
                        int W) {
  std::vector<Subset> subs = mc_subsets(phi.n);
  std::map<Subset, Element> vals;
  for (Subset I : subs) {
    auto it = phi.phi.find(I);
    if (it != phi.phi.end()) {
      int expect = __builtin_popcount(I) - 1;
      if (!is_zero(it->second) &&
          element_degree(it->second, g.gens()) != expect)
        throw std::invalid_argument("simplex value of a" + subset_str(I) +
                                    " has the wrong degree");
      vals[I] = it->second;
    } else {
      vals[I] = Element{};
    }
  }
  SimplexCheck out;
  for (Subset I : subs) {
    Element lhs = g.truncated(g.d(vals[I]), W);
    add_scaled(lhs, mc_equation_rhs(g, phi.n, I, vals, W), Rat(-1));
    if (!is_zero(lhs)) {
      out.ok = false;
      out.residuals[I] = std::move(lhs);
    }
  }
  return out;
}

SimplexAssignment horn_fill(const Algebra& g, int n, int k,
                            const SimplexAssignment& horn, const Element& y,
                            int W) {
  if (k < 0 || k > n) throw std::invalid_argument("horn_fill: bad k");
  const Subset full = (uint32_t(1) << (n + 1)) - 1;
  const Subset missing = full & ~(uint32_t(1) << k);

  std::vector<Subset> subs = mc_subsets(n);
  std::map<Subset, Element> vals;
  for (Subset I : subs) {
    if (I == full || I == missing) {
      vals[I] = Element{};
      continue;
    }
    auto it = horn.phi.find(I);
    if (it == horn.phi.end())
      throw std::invalid_argument("horn_fill: face a" + subset_str(I) +
                                  " missing");
    vals[I] = it->second;
  }
  // horn faces must satisfy their own equations; every generator equation
  // of a face only involves its own subsets, which are all given
  for (Subset I : subs) {
    if (I == full || I == missing) continue;
    Element lhs = g.truncated(g.d(vals[I]), W);
    add_scaled(lhs, mc_equation_rhs(g, n, I, vals, W), Rat(-1));
    if (!is_zero(lhs))
      throw std::invalid_argument("horn_fill: inconsistent horn at a" +
                                  subset_str(I) + ": " +
                                  element_str(lhs, g.gens()));
  }

  if (!is_zero(y) && element_degree(y, g.gens()) != n)
    throw std::invalid_argument("horn_fill: top element degree");

  // the missing face appears linearly in the top equation with sign (-1)^k
  Rat miss_coeff(__builtin_popcount(full & ((uint32_t(1) << k) - 1)) & 1
                     ? -1
                     : 1);
  vals[full] = y;
  Element x;  // unknown face, weight-graded fixed point
  for (int iter = 0; iter <= W + 1; ++iter) {
    vals[missing] = x;
    Element rhs = mc_equation_rhs(g, n, full, vals, W);
    // remove the linear occurrence of the unknown
    add_scaled(rhs, x, -miss_coeff);
    Element next = g.truncated(g.d(y), W);
    add_scaled(next, rhs, Rat(-1));
    Element nx;
    add_scaled(nx, next, Rat(1) / miss_coeff);
    if (nx == x) break;
    x = std::move(nx);
    if (iter == W + 1)
      throw std::runtime_error("horn_fill: fixed point did not stabilize");
  }
  vals[missing] = x;

  SimplexAssignment out;
  out.n = n;
  for (Subset I : subs) out.phi[I] = vals[I];
  SimplexCheck check = is_simplex(g, out, W);
  if (!check.ok)
    throw std::runtime_error("horn_fill: filled simplex fails verification");
  return out;
}

// ---------------------------------------------------------------------------
// free Lie algebra on two generators, Lyndon basis

namespace {

bool is_lyndon(const std::string& w) {
  for (size_t i = 1; i < w.size(); ++i)
    if (w.substr(i) + w.substr(0, i) <= w) return false;
  return true;
}

// standard factorization: longest proper Lyndon suffix
std::pair<std::string, std::string> std_factor(const std::string& w) {
  for (size_t i = 1; i < w.size(); ++i)
    if (is_lyndon(w.substr(i))) return {w.substr(0, i), w.substr(i)};
  throw std::logic_error("not factorizable");
}

using Assoc = std::map<std::string, Rat>;  // free associative, words in x,y

void assoc_add(Assoc& a, const std::string& w, const Rat& c) {
  if (c.is_zero()) return;
  auto it = a.find(w);
  if (it == a.end()) {
    a.emplace(w, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) a.erase(it);
  }
}

Assoc assoc_mul(const Assoc& a, const Assoc& b, int maxlen) {
  Assoc out;
  for (const auto& [wa, ca] : a)
    for (const auto& [wb, cb] : b) {
      if ((int)(wa.size() + wb.size()) > maxlen) continue;
      assoc_add(out, wa + wb, ca * cb);
    }
  return out;
}

Assoc assoc_comm(const Assoc& a, const Assoc& b, int maxlen) {
  Assoc out = assoc_mul(a, b, maxlen);
  Assoc ba = assoc_mul(b, a, maxlen);
  for (const auto& [w, c] : ba) assoc_add(out, w, -c);
  return out;
}

// expansion of the Lyndon bracket in associative words
Assoc lyndon_assoc(const std::string& w, int maxlen) {
  if (w.size() == 1) {
    Assoc val;
    val.emplace(w, Rat(1));
    return val;
  }
  auto [u, v] = std_factor(w);
  return assoc_comm(lyndon_assoc(u, maxlen), lyndon_assoc(v, maxlen), maxlen);
}

// rewrites a Lie element given in associative coordinates into Lyndon
// bracket coordinates; the expansion of [w] has leading (lex-least) word w
std::map<std::string, Rat> to_lyndon(Assoc p, int maxlen) {
  std::map<std::string, Rat> out;
  while (!p.empty()) {
    auto it = p.begin();  // lex-least word
    std::string w = it->first;
    Rat c = it->second;
    if (!is_lyndon(w))
      throw std::logic_error("not a Lie element: leading word " + w);
    out[w] = c;
    const Assoc& ex = lyndon_assoc(w, maxlen);
    for (const auto& [wx, cx] : ex) assoc_add(p, wx, -(c * cx));
  }
  return out;
}

}  // namespace

FreeLie free_lie_two(int W) {
  FreeLie L;
  std::vector<std::string> lyndon;
  // all Lyndon words over {x < y} of length <= W
  std::function<void(std::string)> gen = [&](std::string w) {
    if ((int)w.size() > W) return;
    if (!w.empty() && is_lyndon(w)) lyndon.push_back(w);
    if ((int)w.size() < W) {
      gen(w + "x");
      gen(w + "y");
    }
  };
  gen("");
  std::sort(lyndon.begin(), lyndon.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });

  GenTable gens;
  for (const std::string& w : lyndon)
    gens.add(GenInfo{w, 1, (int)w.size()});
  auto alg = std::make_shared<TableAlgebra>(gens, W);

  // l_2 = Lie bracket; everything else zero, no differential, no curvature
  for (size_t i = 0; i < lyndon.size(); ++i) {
    for (size_t j = 0; j < lyndon.size(); ++j) {
      if (i > j) continue;
      const std::string& u = lyndon[i];
      const std::string& v = lyndon[j];
      if ((int)(u.size() + v.size()) > W) continue;
      if (i == j) continue;  // [w,w] = 0, and the slot is a vanishing one
      Assoc br = assoc_comm(lyndon_assoc(u, W), lyndon_assoc(v, W), W);
      std::map<std::string, Rat> coords = to_lyndon(std::move(br), W);
      Element val;
      for (const auto& [w, c] : coords)
        add_scaled(val, Element{{DecTree::generator(gens.find(w)), Rat(1)}}, c);
      if (!is_zero(val)) alg->set_ln(2, {(int)i, (int)j}, val);
    }
  }
  L.alg = alg;
  L.x = gens.find("x");
  L.y = gens.find("y");
  L.lyndon_words = lyndon;
  return L;
}

Element bch(const FreeLie& L, int W) {
  SimplexAssignment horn;
  horn.n = 2;
  Element zero;
  horn.phi[0b001] = zero;
  horn.phi[0b010] = zero;
  horn.phi[0b100] = zero;
  horn.phi[0b011] = Element{{DecTree::generator(L.x), Rat(1)}};
  horn.phi[0b110] = Element{{DecTree::generator(L.y), Rat(1)}};
  SimplexAssignment filled = horn_fill(*L.alg, 2, 1, horn, Element{}, W);
  return filled.phi.at(0b101);
}

Element bch_oracle(const FreeLie& L, int W) {
  // log(exp x exp y) in words of length <= W
  Assoc s;  // exp x exp y - 1
  for (int a = 0; a <= W; ++a)
    for (int b = 0; a + b <= W; ++b) {
      if (a + b == 0) continue;
      assoc_add(s, std::string(a, 'x') + std::string(b, 'y'),
                Rat(1) / (Rat::factorial(a) * Rat::factorial(b)));
    }
  Assoc log;
  Assoc power;  // s^m
  power.emplace("", Rat(1));
  for (int m = 1; m <= W; ++m) {
    power = assoc_mul(power, s, W);
    Rat c = Rat(m & 1 ? 1 : -1) / Rat(m);
    for (const auto& [w, v] : power) assoc_add(log, w, c * v);
  }

  // Dynkin idempotent: theta(a_1..a_p)/p with left-nested brackets
  Assoc lie;
  for (const auto& [w, c] : log) {
    Assoc theta;
    theta.emplace(std::string(1, w[0]), Rat(1));
    for (size_t i = 1; i < w.size(); ++i) {
      Assoc letter;
      letter.emplace(std::string(1, w[i]), Rat(1));
      theta = assoc_comm(theta, letter, W);
    }
    Rat f = c / Rat((long)w.size());
    for (const auto& [wt, ct] : theta) assoc_add(lie, wt, f * ct);
  }

  std::map<std::string, Rat> coords = to_lyndon(std::move(lie), W);
  Element out;
  for (const auto& [w, c] : coords) {
    int id = L.alg->gens().find(w);
    if (id < 0) throw std::logic_error("oracle: missing Lyndon word " + w);
    add_scaled(out, Element{{DecTree::generator(id), Rat(1)}}, c);
  }
  return out;
}

CoherenceReport check_coalgebra_coherence(int n, const Tree& tau) {
  // The edge-sum identity on the elementary decompositions is equivalent to
  // the vanishing, on the cobar side, of the tau-shaped components of
  // d^2 - l_2(-, l_0) applied to the generators.
  if (tau.kind() != Tree::Kind::node) return {true, ""};
  const int W = tau.weight() + tau.arity() + 1;
  auto mc = build_mc(n, W);
  const Algebra& alg = *mc;
  for (int gi = 0; gi < mc->generator_count(); ++gi) {
    Element x{{DecTree::generator(gi), Rat(1)}};
    Element defect = alg.d(alg.d(x));
    std::vector<Element> args{x, alg.curvature()};
    add_scaled(defect, alg.ln_elements(2, args), Rat(-1));
    for (const auto& [t, c] : defect) {
      if (t.skel == tau) {
        std::ostringstream os;
        os << "coherence fails for " << tau.str() << " at generator "
           << alg.gens().info(gi).label << ": coefficient " << c.str();
        return {false, os.str()};
      }
    }
  }
  return {true, ""};
}

}  // namespace corolla
