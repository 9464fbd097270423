#include "corolla/transfer.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>

#include "corolla/element.hpp"
#include "json.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace corolla {

namespace {

int cochain_parity(Subset I) {
  return (__builtin_popcount(I) - 1) & 1;  // parity of deg w_I
}

using EvalCache = std::map<std::string, PolyForm>;

std::string eval_key(const Tree& t, std::span<const Subset> inputs) {
  std::string k = t.str();
  for (Subset I : inputs) {
    k += ':';
    k += std::to_string(I);
  }
  return k;
}

// value of the labeled subtree inside the transfer composite, with the
// homotopy applied on the edge above when with_h is set
PolyForm eval_subtree(int n, const Tree& t, std::span<const Subset> inputs,
                      bool with_h, EvalCache* cache) {
  if (t.kind() == Tree::Kind::leaf) {
    // leaf edges carry the inclusion only; the homotopy sits on internal
    // edges, between two vertices
    Cochain c(n);
    c.add(inputs[0], Rat(1));
    return dupont_i(c);
  }
  std::string key;
  if (cache && with_h) {
    key = eval_key(t, inputs);
    auto it = cache->find(key);
    if (it != cache->end()) return it->second;
  }

  // plain recursive composite: wedge the children left to right. Koszul
  // bookkeeping lives entirely in the form arithmetic; the cobar machinery
  // interprets the resulting coefficients in the same plain convention.
  PolyForm acc = PolyForm::unit(n);
  size_t pos = 0;
  for (const Tree& c : t.children()) {
    size_t take = c.arity();
    PolyForm v = eval_subtree(n, c, inputs.subspan(pos, take),
                              /*with_h=*/c.kind() == Tree::Kind::node, cache);
    acc = wedge(acc, v);
    pos += take;
  }
  PolyForm out = with_h ? dupont_h(acc) : acc;
  if (cache && with_h) (*cache)[key] = out;
  return out;
}

bool has_cork(const Tree& t) {
  if (t.kind() == Tree::Kind::cork) return true;
  for (const Tree& c : t.children())
    if (has_cork(c)) return true;
  return false;
}

}  // namespace

TransferResult transferred_operation(int n, const Tree& tau,
                                     const std::vector<Cochain>& inputs) {
  if ((int)inputs.size() != tau.arity())
    throw std::invalid_argument("transferred_operation: arity mismatch");
  TransferResult res;
  res.value = Cochain(n);
  if (tau.kind() == Tree::Kind::cork) {
    res.value = cochain_unit(n);
    return res;
  }
  if (tau.kind() == Tree::Kind::leaf) {
    res.value = inputs[0];
    return res;
  }
  if (has_cork(tau)) {
    // mixed corks vanish after transfer (unit absorption plus h(1) = 0)
    res.vanishing_cork_case = true;
    return res;
  }
  // expand multilinearly over the input cochains
  std::vector<std::pair<std::vector<Subset>, Rat>> tuples{{{}, Rat(1)}};
  for (const Cochain& c : inputs) {
    std::vector<std::pair<std::vector<Subset>, Rat>> next;
    for (const auto& [tup, coeff] : tuples)
      for (const auto& [I, v] : c.coeff) {
        auto t2 = tup;
        t2.push_back(I);
        next.emplace_back(std::move(t2), coeff * v);
      }
    tuples = std::move(next);
  }
  for (const auto& [tup, coeff] : tuples) {
    PolyForm top = eval_subtree(n, tau, tup, /*with_h=*/false, nullptr);
    Cochain pv = dupont_p(top);
    for (const auto& [I, v] : pv.coeff) res.value.add(I, v * coeff);
  }
  return res;
}

namespace {

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::optional<std::filesystem::path> cache_path(int n, const Tree& tau) {
  const char* dir = std::getenv("ABS_CACHE_DIR");
  if (!dir || !*dir) return std::nullopt;
  std::ostringstream name;
  name << "table_n" << n << "_" << std::hex << fnv1a(tau.str()) << ".json";
  return std::filesystem::path(dir) / name.str();
}

using nlohmann::ordered_json;

ordered_json table_to_json(const TreeTable& t) {
  ordered_json j;
  j["n"] = t.n;
  j["tree"] = t.tau.str();
  ordered_json entries = ordered_json::array();
  for (const auto& [I, list] : t.by_output) {
    for (const auto& [tuple, lambda] : list) {
      ordered_json inputs = ordered_json::array();
      for (Subset s : tuple) {
        ordered_json sub = ordered_json::array();
        for (int e : subset_elements(s)) sub.push_back(e);
        inputs.push_back(sub);
      }
      ordered_json out = ordered_json::array();
      for (int e : subset_elements(I)) out.push_back(e);
      entries.push_back({{"output", out},
                         {"inputs", inputs},
                         {"lambda", lambda.str()}});
    }
  }
  j["entries"] = entries;
  return j;
}

std::optional<TreeTable> table_from_json(const ordered_json& j, int n,
                                         const Tree& tau) {
  if (j.value("n", -1) != n || j.value("tree", "") != tau.str())
    return std::nullopt;
  TreeTable t;
  t.n = n;
  t.tau = tau;
  for (const auto& e : j.at("entries")) {
    Subset I = 0;
    for (int v : e.at("output")) I |= uint32_t(1) << v;
    std::vector<Subset> tuple;
    for (const auto& sub : e.at("inputs")) {
      Subset s = 0;
      for (int v : sub) s |= uint32_t(1) << v;
      tuple.push_back(s);
    }
    t.by_output[I].emplace_back(std::move(tuple),
                                Rat::parse(e.at("lambda").get<std::string>()));
  }
  return t;
}

TreeTable build_table(int n, const Tree& tau, bool parallel) {
  TreeTable table;
  table.n = n;
  table.tau = tau;
  const int m = tau.arity();
  const int omega = tau.weight();

  std::vector<Subset> subsets;
  for (Subset I = 1; I < (uint32_t(1) << (n + 1)); ++I) subsets.push_back(I);

  // all ordered tuples, pruned by the output degree window
  std::vector<std::vector<Subset>> tuples;
  std::vector<Subset> acc(m);
  std::function<void(int, int)> rec = [&](int slot, int degsum) {
    if (degsum > omega - 1 + n) return;  // output degree below -n
    if (slot == m) {
      if (degsum >= omega - 1) tuples.push_back(acc);
      return;
    }
    for (Subset I : subsets) {
      acc[slot] = I;
      rec(slot + 1, degsum + __builtin_popcount(I) - 1);
    }
  };
  rec(0, 0);

  std::vector<Cochain> results(tuples.size());
#ifdef _OPENMP
#pragma omp parallel if (parallel)
  {
    EvalCache cache;
#pragma omp for schedule(dynamic, 4)
    for (long i = 0; i < (long)tuples.size(); ++i) {
      PolyForm top = eval_subtree(n, tau, tuples[i], false, &cache);
      results[i] = dupont_p(top);
    }
  }
#else
  (void)parallel;
  EvalCache cache;
  for (size_t i = 0; i < tuples.size(); ++i) {
    PolyForm top = eval_subtree(n, tau, tuples[i], false, &cache);
    results[i] = dupont_p(top);
  }
#endif

  for (size_t i = 0; i < tuples.size(); ++i)
    for (const auto& [I, v] : results[i].coeff)
      table.by_output[I].emplace_back(tuples[i], v);
  return table;
}

}  // namespace

const TreeTable& decomposition_table(int n, const Tree& tau, bool parallel) {
  static std::mutex mu;
  static std::map<std::pair<int, std::string>, TreeTable> memo;
  std::pair<int, std::string> key{n, tau.str()};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }

  std::optional<TreeTable> loaded;
  auto path = cache_path(n, tau);
  if (path && std::filesystem::exists(*path)) {
    std::ifstream in(*path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      loaded = table_from_json(ordered_json::parse(ss.str()), n, tau);
    } catch (...) {
      loaded.reset();
    }
  }
  TreeTable built = loaded ? std::move(*loaded) : build_table(n, tau, parallel);
  if (!loaded && path) {
    std::error_code ec;
    std::filesystem::create_directories(path->parent_path(), ec);
    std::ofstream out(*path);
    out << table_to_json(built).dump(2) << "\n";
  }

  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = memo.emplace(key, std::move(built));
  return it->second;
}

std::vector<std::pair<std::vector<Subset>, Rat>> simplex_decomposition(
    int n, const Tree& tau, Subset I) {
  if (tau.kind() == Tree::Kind::cork) {
    // counit: dual of p(1) = t_0 + ... + t_n
    std::vector<std::pair<std::vector<Subset>, Rat>> out;
    if (__builtin_popcount(I) == 1) out.push_back({{}, Rat(1)});
    return out;
  }
  const TreeTable& t = decomposition_table(n, tau);
  auto it = t.by_output.find(I);
  if (it == t.by_output.end()) return {};
  return it->second;
}

std::string table_json(const TreeTable& t) { return table_to_json(t).dump(2); }

}  // namespace corolla
