#include "corolla/quasifree.hpp"

#include <algorithm>
#include <functional>

namespace corolla {

namespace {

int full_parity(const DecTree& t, const GenTable& g) {
  return std::abs(dec_degree(t, g)) & 1;
}

// decorated trees of exact weight w, canonical, nonzero classes only
void trees_of_weight(const GenTable& gens, int wmax,
                     std::vector<std::vector<DecTree>>& by_weight) {
  // by_weight[w] filled for increasing w
  for (int w = 1; w <= wmax; ++w) {
    std::vector<DecTree>& out = by_weight[w];
    // generators of this weight
    for (int id = 0; id < gens.size(); ++id)
      if (gens.weight(id) == w) out.push_back(DecTree::generator(id));
    if (w == 1) out.push_back(DecTree::cork_tree());

    // nodes: children multisets, non-decreasing, total weight w-1
    std::vector<DecTree> acc;
    std::function<void(int, const DecTree*)> extend = [&](int wleft,
                                                          const DecTree* lo) {
      if (wleft == 0) {
        if (acc.size() >= 2) {
          // reject vanishing symmetric classes early
          bool zero = false;
          for (size_t i = 1; i < acc.size(); ++i)
            if (DecTree::cmp(acc[i], acc[i - 1]) == 0 &&
                full_parity(acc[i], gens))
              zero = true;
          if (!zero) {
            std::vector<Tree> skels;
            std::vector<int> decor;
            for (const DecTree& c : acc) {
              skels.push_back(c.skel);
              decor.insert(decor.end(), c.decor.begin(), c.decor.end());
            }
            out.push_back(DecTree{Tree::node(std::move(skels)), std::move(decor)});
          }
        }
        return;
      }
      for (int cw = 1; cw <= wleft; ++cw) {
        for (const DecTree& cand : by_weight[cw]) {
          if (lo && DecTree::cmp(cand, *lo) < 0) continue;
          DecTree lower = cand;
          acc.push_back(cand);
          extend(wleft - cw, &lower);
          acc.pop_back();
        }
      }
    };
    extend(w - 1, nullptr);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
}

}  // namespace

std::vector<DecTree> enumerate_decorated_basis(const GenTable& gens, int wmax) {
  std::vector<std::vector<DecTree>> by_weight(wmax + 1);
  trees_of_weight(gens, wmax, by_weight);
  std::vector<DecTree> all;
  for (int w = 1; w <= wmax; ++w)
    all.insert(all.end(), by_weight[w].begin(), by_weight[w].end());
  std::sort(all.begin(), all.end());
  return all;
}

QuasiFreeAlgebra::QuasiFreeAlgebra(GenTable generators,
                                   std::vector<GeneratorDiff> gen_d, int wmax)
    : Algebra(std::move(generators), wmax), gen_d_(std::move(gen_d)) {
  if ((int)gen_d_.size() != gens_.size())
    throw std::invalid_argument("one generator differential per generator");
  std::vector<BasisInfo> b;
  for (const DecTree& t : enumerate_decorated_basis(gens_, wmax_)) {
    BasisInfo info;
    info.label = t.skel.str();
    if (!t.decor.empty()) {
      info.label += "[";
      for (size_t i = 0; i < t.decor.size(); ++i)
        info.label += (i ? "," : "") + gens_.info(t.decor[i]).label;
      info.label += "]";
    }
    info.degree = dec_degree(t, gens_);
    info.weight = dec_weight(t, gens_);
    info.t = t;
    b.push_back(std::move(info));
  }
  set_basis(std::move(b));
}

Element QuasiFreeAlgebra::op_ln(int n, std::span<const DecTree> args) const {
  if (n == 0) return curvature();
  if ((int)args.size() != n)
    throw std::invalid_argument("op_ln: arity mismatch");
  GraftResult r = graft_root(args, gens_);
  Element out;
  if (r.sign != 0 && dec_weight(r.tree, gens_) <= wmax_)
    out.emplace(std::move(r.tree), Rat(r.sign));
  return out;
}

Element QuasiFreeAlgebra::curvature() const {
  Element e;
  if (wmax_ >= 1) e.emplace(DecTree::cork_tree(), Rat(1));
  return e;
}

Element QuasiFreeAlgebra::generator_diff_element(int gen) const {
  const GeneratorDiff& gd = gen_d_[gen];
  Element out;
  for (const auto& [id, c] : gd.linear)
    add_scaled(out, Element{{DecTree::generator(id), Rat(1)}}, c);
  if (!gd.cork.is_zero())
    add_scaled(out, Element{{DecTree::cork_tree(), Rat(1)}}, gd.cork);
  for (const TreeTerm& tt : gd.trees) {
    std::vector<Element> leaves;
    for (int id : tt.decorations)
      leaves.push_back(Element{{DecTree::generator(id), Rat(1)}});
    add_scaled(out, gamma_tree(tt.tau, leaves), tt.coeff);
  }
  truncate_weight(out, gens_, wmax_);
  return out;
}

Element QuasiFreeAlgebra::diff_class(const DecTree& t) const {
  std::string key = t.key();
  {
    std::lock_guard<std::mutex> lock(cache_mu_);
    auto it = diff_cache_.find(key);
    if (it != diff_cache_.end()) return it->second;
  }
  Element out = cobar_diff(
      t, gens_, [this](int gen) { return generator_diff_element(gen); });
  truncate_weight(out, gens_, wmax_);
  std::lock_guard<std::mutex> lock(cache_mu_);
  diff_cache_[key] = out;
  return out;
}

std::map<int, int> QuasiFreeAlgebra::minimal_generators(Elim policy) const {
  GradedComplex c;
  std::map<int, std::map<int, int>> pos;  // degree -> gen id -> column
  for (int id = 0; id < gens_.size(); ++id) {
    int deg = gens_.degree(id);
    auto& labels = c.basis[deg];
    pos[deg][id] = (int)labels.size();
    labels.push_back(gens_.info(id).label);
  }
  int lo = 0, hi = 0;
  for (int id = 0; id < gens_.size(); ++id) {
    lo = std::min(lo, gens_.degree(id));
    hi = std::max(hi, gens_.degree(id));
  }
  for (int k = lo; k <= hi + 1; ++k) {
    SparseMat m(c.basis.count(k - 1) ? (int)c.basis[k - 1].size() : 0,
                c.basis.count(k) ? (int)c.basis[k].size() : 0);
    if (c.basis.count(k)) {
      for (int id = 0; id < gens_.size(); ++id) {
        if (gens_.degree(id) != k) continue;
        for (const auto& [to, coeff] : gen_d_[id].linear) {
          if (gens_.degree(to) != k - 1) continue;
          m.add(pos[k - 1][to], pos[k][id], coeff);
        }
      }
    }
    c.diff[k] = std::move(m);
  }
  return homology_dims(c, lo, hi, policy);
}

}  // namespace corolla
