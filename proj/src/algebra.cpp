#include "corolla/algebra.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace corolla {

void Algebra::set_basis(std::vector<BasisInfo> b) {
  basis_ = std::move(b);
  index_.clear();
  for (int i = 0; i < (int)basis_.size(); ++i)
    index_[basis_[i].t.key()] = i;
}

int Algebra::index_of(const DecTree& t) const {
  auto it = index_.find(t.key());
  return it == index_.end() ? -1 : it->second;
}

std::vector<int> Algebra::basis_in_degree(int deg, int weight_cap) const {
  std::vector<int> out;
  for (int i = 0; i < (int)basis_.size(); ++i)
    if (basis_[i].degree == deg && basis_[i].weight <= weight_cap)
      out.push_back(i);
  return out;
}

Element Algebra::d(const Element& e) const {
  Element out;
  for (const auto& [t, c] : e) add_scaled(out, diff_class(t), c);
  truncate_weight(out, gens_, wmax_);
  return out;
}

Element Algebra::truncated(Element e, int W) const {
  truncate_weight(e, gens_, std::min(W, wmax_));
  return e;
}

Element Algebra::ln_elements(int n, std::span<const Element> args) const {
  if ((int)args.size() != n)
    throw std::invalid_argument("ln_elements: arity mismatch");
  if (n == 0) return curvature();
  Element out;
  std::vector<Element::const_iterator> its(n);
  std::vector<DecTree> trees(n);
  std::function<void(int, Rat)> rec = [&](int k, Rat coeff) {
    if (k == n) {
      add_scaled(out, op_ln(n, trees), coeff);
      return;
    }
    for (const auto& [t, c] : args[k]) {
      trees[k] = t;
      rec(k + 1, coeff * c);
    }
  };
  rec(0, Rat(1));
  truncate_weight(out, gens_, wmax_);
  return out;
}

Element Algebra::gamma_tree(const Tree& tau,
                            std::span<const Element> leaves) const {
  if ((int)leaves.size() != tau.arity())
    throw std::invalid_argument("gamma_tree: decoration arity mismatch");
  size_t next = 0;
  std::function<Element(const Tree&)> rec = [&](const Tree& t) -> Element {
    switch (t.kind()) {
      case Tree::Kind::leaf:
        return leaves[next++];
      case Tree::Kind::cork:
        return curvature();
      case Tree::Kind::node: {
        const auto& kids = t.children();
        std::vector<Element> vals;
        vals.reserve(kids.size());
        for (const Tree& c : kids) vals.push_back(rec(c));
        return ln_elements((int)kids.size(), vals);
      }
    }
    return Element{};
  };
  return rec(tau);
}

Element Algebra::gamma_eval(std::span<const SeriesTerm> series, int W) const {
  Element out;
  for (const auto& term : series) {
    std::vector<Element> leaves;
    for (int id : term.decorations) {
      Element e;
      e.emplace(DecTree::generator(id), Rat(1));
      leaves.push_back(std::move(e));
    }
    add_scaled(out, gamma_tree(term.tau, leaves), term.coeff);
  }
  return truncated(std::move(out), W);
}

// ---------------------------------------------------------------------------

TableAlgebra::TableAlgebra(GenTable basis_gens, int wmax)
    : Algebra(std::move(basis_gens), wmax) {
  std::vector<BasisInfo> b;
  for (int i = 0; i < gens_.size(); ++i) {
    const GenInfo& g = gens_.info(i);
    if (g.weight < 1)
      throw std::invalid_argument("basis weight must be >= 1: " + g.label);
    if (g.weight <= wmax_)
      b.push_back(BasisInfo{DecTree::generator(i), g.label, g.degree, g.weight});
  }
  set_basis(std::move(b));
  diff_.resize(gens_.size());
}

namespace {

// sorts ids, returns Koszul sign by degrees, 0 if two equal odd ids collide
int sort_ids(std::vector<int>& ids, const GenTable& g) {
  int sign = 1;
  for (size_t i = 1; i < ids.size(); ++i) {
    size_t j = i;
    while (j > 0 && ids[j] < ids[j - 1]) {
      if ((g.degree(ids[j]) & 1) && (g.degree(ids[j - 1]) & 1)) sign = -sign;
      std::swap(ids[j], ids[j - 1]);
      --j;
    }
  }
  for (size_t i = 1; i < ids.size(); ++i)
    if (ids[i] == ids[i - 1] && (g.degree(ids[i]) & 1)) return 0;
  return sign;
}

}  // namespace

void TableAlgebra::set_ln(int n, std::vector<int> inputs, Element value) {
  if ((int)inputs.size() != n)
    throw std::invalid_argument("set_ln: arity mismatch");
  int sign = sort_ids(inputs, gens_);
  if (sign == 0) throw std::invalid_argument("set_ln: vanishing symmetric slot");
  Element v;
  add_scaled(v, value, Rat(sign));
  ln_[{n, std::move(inputs)}] = std::move(v);
}

void TableAlgebra::set_diff(int basis_id, Element value) {
  diff_[basis_id] = std::move(value);
}

Element TableAlgebra::op_ln(int n, std::span<const DecTree> args) const {
  if (n == 0) return curvature_;
  std::vector<int> ids;
  ids.reserve(args.size());
  for (const DecTree& t : args) {
    if (t.skel.kind() != Tree::Kind::leaf)
      throw std::invalid_argument("table algebra: arguments must be basis classes");
    ids.push_back(t.decor[0]);
  }
  int sign = sort_ids(ids, gens_);
  if (sign == 0) return {};
  auto it = ln_.find({n, ids});
  if (it == ln_.end()) return {};
  Element out;
  add_scaled(out, it->second, Rat(sign));
  return out;
}

Element TableAlgebra::diff_class(const DecTree& t) const {
  if (t.skel.kind() != Tree::Kind::leaf)
    throw std::invalid_argument("table algebra: not a basis class");
  return diff_[t.decor[0]];
}

std::shared_ptr<TableAlgebra> abelian_complex(
    const std::vector<std::pair<std::string, int>>& basis,
    const std::vector<std::tuple<int, int, Rat>>& diff_entries, int wmax) {
  GenTable g;
  for (const auto& [label, deg] : basis) g.add(GenInfo{label, deg, 1});
  auto alg = std::make_shared<TableAlgebra>(g, wmax);
  std::map<int, Element> ds;
  for (const auto& [from, to, coeff] : diff_entries) {
    Element& e = ds[from];
    add_scaled(e, Element{{DecTree::generator(to), Rat(1)}}, coeff);
  }
  for (auto& [id, e] : ds) alg->set_diff(id, e);
  return alg;
}

// --------------------------------------------------------------------------
// JSON (schema: basis entries {label, degree, weight}; operations as lists
// {arity, inputs, output}; curvature / differential as coefficient lists)

using nlohmann::ordered_json;

namespace {

ordered_json element_json(const Element& e, const GenTable& g) {
  ordered_json arr = ordered_json::array();
  std::vector<std::pair<std::string, Rat>> items;
  for (const auto& [t, c] : e) {
    if (t.skel.kind() != Tree::Kind::leaf)
      throw std::invalid_argument("element_json: only basis classes");
    items.emplace_back(g.info(t.decor[0]).label, c);
  }
  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [label, c] : items)
    arr.push_back({{"label", label}, {"coeff", c.str()}});
  return arr;
}

Element element_from_json(const ordered_json& arr, const GenTable& g) {
  Element e;
  for (const auto& item : arr) {
    int id = g.find(item.at("label").get<std::string>());
    if (id < 0)
      throw std::invalid_argument("unknown basis label " +
                                  item.at("label").get<std::string>());
    add_scaled(e, Element{{DecTree::generator(id), Rat(1)}},
               Rat::parse(item.at("coeff").get<std::string>()));
  }
  return e;
}

}  // namespace

std::string TableAlgebra::to_json() const {
  ordered_json j;
  j["wmax"] = wmax_;
  ordered_json basis = ordered_json::array();
  std::vector<int> order(gens_.size());
  for (int i = 0; i < gens_.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return gens_.info(a).label < gens_.info(b).label;
  });
  for (int i : order) {
    const GenInfo& g = gens_.info(i);
    basis.push_back(
        {{"label", g.label}, {"degree", g.degree}, {"weight", g.weight}});
  }
  j["basis"] = basis;

  ordered_json ops = ordered_json::array();
  for (const auto& [key, value] : ln_) {
    ordered_json inputs = ordered_json::array();
    for (int id : key.second) inputs.push_back(gens_.info(id).label);
    ops.push_back({{"arity", key.first},
                   {"inputs", inputs},
                   {"output", element_json(value, gens_)}});
  }
  j["operations"] = ops;
  j["curvature"] = element_json(curvature_, gens_);

  ordered_json diffs = ordered_json::array();
  for (int i : order) {
    if (is_zero(diff_[i])) continue;
    diffs.push_back({{"label", gens_.info(i).label},
                     {"output", element_json(diff_[i], gens_)}});
  }
  j["differential"] = diffs;
  return j.dump(2);
}

std::shared_ptr<TableAlgebra> TableAlgebra::from_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  GenTable g;
  for (const auto& item : j.at("basis")) {
    g.add(GenInfo{item.at("label").get<std::string>(),
                  item.at("degree").get<int>(),
                  item.value("weight", 1)});
  }
  auto alg = std::make_shared<TableAlgebra>(g, j.value("wmax", 6));
  for (const auto& op : j.value("operations", ordered_json::array())) {
    std::vector<int> inputs;
    for (const auto& label : op.at("inputs")) {
      int id = g.find(label.get<std::string>());
      if (id < 0)
        throw std::invalid_argument("unknown label " +
                                    label.get<std::string>());
      inputs.push_back(id);
    }
    alg->set_ln(op.at("arity").get<int>(), inputs,
                element_from_json(op.at("output"), g));
  }
  if (j.contains("curvature"))
    alg->set_curvature(element_from_json(j["curvature"], g));
  for (const auto& dd : j.value("differential", ordered_json::array())) {
    int id = g.find(dd.at("label").get<std::string>());
    if (id < 0) throw std::invalid_argument("unknown label in differential");
    alg->set_diff(id, element_from_json(dd.at("output"), g));
  }
  return alg;
}

// ---------------------------------------------------------------------------

namespace {

Element basis_element(const Algebra& alg, int i) {
  Element e;
  e.emplace(alg.basis(i).t, Rat(1));
  return e;
}

}  // namespace

CheckReport check_structure(const Algebra& alg, int W, int arity_cap) {
  const GenTable& g = alg.gens();

  // d(l_0) = 0
  Element dl0 = alg.truncated(alg.d(alg.curvature()), W);
  if (!is_zero(dl0))
    return {false, "d(l0) != 0: " + element_str(dl0, g)};

  // d preserves or raises weight
  for (int i = 0; i < alg.basis_size(); ++i) {
    Element dx = alg.d(basis_element(alg, i));
    if (!is_zero(dx) && element_min_weight(dx, g) < alg.basis(i).weight)
      return {false, "d lowers weight at " + alg.basis(i).label};
  }

  // d^2 = l_2(-, l_0) on every basis class (curvature inserted in the last
  // slot; on even classes this is the same as l_2(l_0, -))
  Element curv = alg.curvature();
  for (int i = 0; i < alg.basis_size(); ++i) {
    if (alg.basis(i).weight > W) continue;
    Element x = basis_element(alg, i);
    Element lhs = alg.truncated(alg.d(alg.d(x)), W);
    std::vector<Element> args{x, curv};
    Element rhs = alg.truncated(alg.ln_elements(2, args), W);
    add_scaled(lhs, rhs, Rat(-1));
    if (!is_zero(lhs))
      return {false, "d^2 != l2(-,l0) at " + alg.basis(i).label + ": " +
                         element_str(lhs, g)};
  }

  // Homotopy-Jacobi coherence: d is compatible with every l_n in the sense
  // that d(gamma(tau)) equals gamma of the formal cobar differential of tau,
  // checked on corollas decorated by basis tuples. Together with the
  // curvature identity this is the full curved structure.
  auto eval_class = [&](const DecTree& t) -> Element {
    if (t.skel.kind() == Tree::Kind::leaf) {
      Element e;
      e.emplace(t, Rat(1));
      return e;
    }
    std::vector<Element> leaves;
    for (int id : t.decor)
      leaves.push_back(Element{{DecTree::generator(id), Rat(1)}});
    return alg.gamma_tree(t.skel, leaves);
  };

  std::vector<int> tuple;
  std::function<CheckReport(int, int, int)> rec = [&](int n, int start,
                                                      int wleft) -> CheckReport {
    if ((int)tuple.size() == n) {
      std::vector<DecTree> gens_tuple;
      for (int id : tuple) {
        if (alg.basis(id).t.skel.kind() != Tree::Kind::leaf) return CheckReport{true, ""};
        gens_tuple.push_back(alg.basis(id).t);
      }
      GraftResult corolla = graft_root(gens_tuple, g);
      if (corolla.sign == 0) return {true, ""};
      Element lhs = alg.d(eval_class(corolla.tree));
      Element rhs;
      Element formal = cobar_diff(corolla.tree, g, [&](int gen) {
        return alg.diff_class(DecTree::generator(gen));
      });
      for (const auto& [t, c] : formal) add_scaled(rhs, eval_class(t), c);
      add_scaled(lhs, rhs, Rat(-1));
      lhs = alg.truncated(std::move(lhs), W);
      if (!is_zero(lhs)) {
        std::string wit = "derivation compatibility fails for l_" +
                          std::to_string(n) + " at (";
        for (size_t i = 0; i < tuple.size(); ++i)
          wit += (i ? "," : "") + alg.basis(tuple[i]).label;
        wit += "): " + element_str(lhs, g);
        return {false, wit};
      }
      return {true, ""};
    }
    for (int i = start; i < alg.basis_size(); ++i) {
      int w = alg.basis(i).weight;
      if (w > wleft) continue;
      tuple.push_back(i);
      CheckReport r = rec(n, i, wleft - w);
      tuple.pop_back();
      if (!r.ok) return r;
    }
    return {true, ""};
  };

  for (int n = 2; n <= arity_cap; ++n) {
    CheckReport r = rec(n, 0, W);
    if (!r.ok) return r;
  }
  return {true, ""};
}

Element mc_residual(const Algebra& alg, const Element& alpha, int W) {
  if (!is_zero(alpha) && element_degree(alpha, alg.gens()) != 0)
    throw std::invalid_argument("Maurer-Cartan candidates must have degree 0");
  Element res = alg.d(alpha);
  add_scaled(res, alg.curvature(), Rat(1));
  int minw = is_zero(alpha) ? 1 : element_min_weight(alpha, alg.gens());
  for (int n = 2; n * minw <= W; ++n) {
    std::vector<Element> args(n, alpha);
    add_scaled(res, alg.ln_elements(n, args), Rat(1) / Rat::factorial(n));
  }
  return alg.truncated(std::move(res), W);
}

McResult mc_verify(const Algebra& alg, const Element& alpha, int W) {
  Element r = mc_residual(alg, alpha, W);
  return {is_zero(r), std::move(r)};
}

Element twisted_apply(const Algebra& alg, const Element& alpha,
                      const Element& u, int W) {
  // insertion in the last slot; the odd insertion operator passes u first,
  // hence the parity of u in the sign
  Element out = alg.d(u);
  if (is_zero(u)) return alg.truncated(std::move(out), W);
  int par = element_degree(u, alg.gens()) & 1;
  int minw = is_zero(alpha) ? 1 : element_min_weight(alpha, alg.gens());
  for (int n = 2; (n - 1) * minw + 1 <= W; ++n) {
    std::vector<Element> args(n, alpha);
    args.back() = u;
    add_scaled(out, alg.ln_elements(n, args),
               Rat(par ? -1 : 1) / Rat::factorial(n - 1));
  }
  return alg.truncated(std::move(out), W);
}

GradedComplex twisted_complex(const Algebra& alg, const Element& alpha, int lo,
                              int hi, int W, Elim policy) {
  McResult mc = mc_verify(alg, alpha, W);
  if (!mc.is_mc)
    throw std::invalid_argument("twisted differential needs a Maurer-Cartan " \
                                "element; residual " +
                                element_str(mc.residual, alg.gens()));
  GradedComplex c;
  std::map<int, std::map<std::string, int>> pos;
  for (int k = lo - 2; k <= hi + 2; ++k) {
    std::vector<int> idx = alg.basis_in_degree(k, W);
    auto& labels = c.basis[k];
    for (int i : idx) {
      pos[k][alg.basis(i).t.key()] = (int)labels.size();
      labels.push_back(alg.basis(i).label);
    }
  }
  for (int k = lo - 1; k <= hi + 2; ++k) {
    std::vector<int> idx = alg.basis_in_degree(k, W);
    SparseMat m((int)c.basis[k - 1].size(), (int)idx.size());
    for (int col = 0; col < (int)idx.size(); ++col) {
      Element e;
      e.emplace(alg.basis(idx[col]).t, Rat(1));
      Element du = twisted_apply(alg, alpha, e, W);
      for (const auto& [t, v] : du) {
        auto it = pos[k - 1].find(t.key());
        if (it == pos[k - 1].end())
          throw std::logic_error("twisted differential leaves the complex");
        m.add(it->second, col, v);
      }
    }
    c.diff[k] = std::move(m);
  }
  (void)policy;
  return c;
}

std::map<int, int> alpha_homology(const Algebra& alg, const Element& alpha,
                                  int lo, int hi, int W, Elim policy) {
  GradedComplex c = twisted_complex(alg, alpha, lo, hi, W, policy);
  return homology_dims(c, lo, hi, policy);
}

Element gauge_act(const Algebra& alg, const Element& lambda,
                  const Element& alpha, int W) {
  McResult mc = mc_verify(alg, alpha, W);
  if (!mc.is_mc)
    throw std::invalid_argument("gauge_act needs a Maurer-Cartan start point");
  if (!is_zero(lambda) && element_degree(lambda, alg.gens()) != 1)
    throw std::invalid_argument("gauge parameter must have degree 1");

  const int K = std::min(W, alg.wmax());
  std::vector<Element> gamma(K + 1);
  gamma[0] = alpha;
  Element dlambda = alg.truncated(alg.d(lambda), W);
  for (int k = 0; k < K; ++k) {
    Element rhs = k == 0 ? dlambda : Element{};
    // t^k coefficient of the lambda-insertions of d^{gamma(t)}; lambda is
    // odd, so the insertion operator carries a minus
    for (int n = 2; n <= K + 1; ++n) {
      int slots = n - 1;
      std::vector<int> comp(slots, 0);
      std::function<void(int, int)> enumerate = [&](int s, int left) {
        if (s == slots) {
          if (left != 0) return;
          std::vector<Element> args;
          for (int j = 0; j < slots; ++j) args.push_back(gamma[comp[j]]);
          args.push_back(lambda);
          add_scaled(rhs, alg.ln_elements(n, args),
                     Rat(-1) / Rat::factorial(n - 1));
          return;
        }
        for (int v = 0; v <= left; ++v) {
          comp[s] = v;
          enumerate(s + 1, left - v);
        }
      };
      enumerate(0, k);
    }
    rhs = alg.truncated(std::move(rhs), W);
    Element next;
    add_scaled(next, rhs, Rat(1) / Rat(k + 1));
    gamma[k + 1] = std::move(next);
  }
  Element out;
  for (const Element& gk : gamma) add_scaled(out, gk, Rat(1));
  return alg.truncated(std::move(out), W);
}

}  // namespace corolla
