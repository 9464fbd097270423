#include "corolla/tree.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace corolla {

struct Tree::Impl {
  Kind kind;
  std::vector<Tree> children;
  int arity = 0;
  int weight = 0;
  std::string str;
};

namespace {

std::shared_ptr<const Tree::Impl> make_impl(Tree::Kind k,
                                            std::vector<Tree> ch) {
  auto impl = std::make_shared<Tree::Impl>();
  impl->kind = k;
  impl->children = std::move(ch);
  switch (k) {
    case Tree::Kind::leaf:
      impl->arity = 1;
      impl->weight = 0;
      impl->str = "|";
      break;
    case Tree::Kind::cork:
      impl->arity = 0;
      impl->weight = 1;
      impl->str = "*";
      break;
    case Tree::Kind::node: {
      impl->weight = 1;
      impl->str = "(";
      for (const Tree& c : impl->children) {
        impl->arity += c.arity();
        impl->weight += c.weight();
        impl->str += c.str();
      }
      impl->str += ")";
      break;
    }
  }
  return impl;
}

const std::shared_ptr<const Tree::Impl>& leaf_impl() {
  static const auto i = make_impl(Tree::Kind::leaf, {});
  return i;
}
const std::shared_ptr<const Tree::Impl>& cork_impl() {
  static const auto i = make_impl(Tree::Kind::cork, {});
  return i;
}

}  // namespace

Tree Tree::leaf() { return Tree(leaf_impl()); }
Tree Tree::cork() { return Tree(cork_impl()); }

Tree Tree::node(std::vector<Tree> children) {
  if (children.size() < 2)
    throw std::invalid_argument("node needs >= 2 children");
  std::sort(children.begin(), children.end());
  return Tree(make_impl(Kind::node, std::move(children)));
}

Tree Tree::corolla(int n) {
  if (n == 1) throw std::invalid_argument("no unary corolla");
  if (n == 0) return cork();
  return node(std::vector<Tree>(n, leaf()));
}

Tree::Kind Tree::kind() const { return impl_->kind; }
int Tree::arity() const { return impl_->arity; }
int Tree::weight() const { return impl_->weight; }
const std::vector<Tree>& Tree::children() const { return impl_->children; }
const std::string& Tree::str() const { return impl_->str; }

int Tree::cmp(const Tree& a, const Tree& b) {
  if (a.impl_ == b.impl_) return 0;
  auto rank = [](Kind k) {
    switch (k) {
      case Kind::cork: return 0;
      case Kind::leaf: return 1;
      case Kind::node: return 2;
    }
    return 3;
  };
  if (rank(a.kind()) != rank(b.kind()))
    return rank(a.kind()) < rank(b.kind()) ? -1 : 1;
  if (a.kind() != Kind::node) return 0;
  const auto& ca = a.children();
  const auto& cb = b.children();
  size_t n = std::min(ca.size(), cb.size());
  for (size_t i = 0; i < n; ++i) {
    int c = cmp(ca[i], cb[i]);
    if (c != 0) return c;
  }
  if (ca.size() != cb.size()) return ca.size() < cb.size() ? -1 : 1;
  return 0;
}

namespace {

Tree parse_one(const std::string& s, size_t& pos) {
  while (pos < s.size() && isspace((unsigned char)s[pos])) ++pos;
  if (pos >= s.size()) throw std::invalid_argument("unexpected end of tree");
  char ch = s[pos];
  if (ch == '|') { ++pos; return Tree::leaf(); }
  if (ch == '*') { ++pos; return Tree::cork(); }
  if (ch == '(') {
    ++pos;
    std::vector<Tree> kids;
    while (true) {
      while (pos < s.size() && isspace((unsigned char)s[pos])) ++pos;
      if (pos >= s.size()) throw std::invalid_argument("unbalanced tree");
      if (s[pos] == ')') { ++pos; break; }
      kids.push_back(parse_one(s, pos));
    }
    return Tree::node(std::move(kids));
  }
  throw std::invalid_argument(std::string("bad tree character: ") + ch);
}

}  // namespace

Tree Tree::parse(const std::string& s) {
  size_t pos = 0;
  Tree t = parse_one(s, pos);
  while (pos < s.size() && isspace((unsigned char)s[pos])) ++pos;
  if (pos != s.size()) throw std::invalid_argument("trailing tree input");
  return t;
}

Tree Tree::graft(const std::vector<Tree>& at_leaves) const {
  if ((int)at_leaves.size() != arity())
    throw std::invalid_argument("graft: arity mismatch");
  size_t next = 0;
  // substitute in canonical traversal order, then re-canonicalize
  struct Rec {
    const std::vector<Tree>& repl;
    size_t& next;
    Tree operator()(const Tree& t) const {
      switch (t.kind()) {
        case Tree::Kind::leaf: return repl[next++];
        case Tree::Kind::cork: return t;
        case Tree::Kind::node: {
          std::vector<Tree> kids;
          kids.reserve(t.children().size());
          for (const Tree& c : t.children()) kids.push_back((*this)(c));
          return Tree::node(std::move(kids));
        }
      }
      return t;
    }
  };
  return Rec{at_leaves, next}(*this);
}

namespace {

using Key = std::tuple<int, int, bool>;

// children multisets in non-decreasing order; each child is a leaf, a cork,
// or a previously enumerated smaller tree
void extend_children(int arity_left, int weight_left, bool corks,
                     const Tree* min_child, std::vector<Tree>& acc,
                     std::vector<std::vector<Tree>>& out) {
  if (arity_left == 0 && weight_left == 0) {
    if (acc.size() >= 2) out.push_back(acc);
    return;
  }
  if (arity_left < 0 || weight_left < 0) return;
  std::vector<Tree> options;
  if (corks && weight_left >= 1) options.push_back(Tree::cork());
  if (arity_left >= 1) options.push_back(Tree::leaf());
  for (int w = 1; w <= weight_left; ++w)
    for (int a = 0; a <= arity_left; ++a)
      for (const Tree& t : enumerate_trees(a, w, corks))
        if (t.kind() == Tree::Kind::node) options.push_back(t);
  for (const Tree& opt : options) {
    if (min_child && opt < *min_child) continue;
    Tree lower = opt;  // acc may reallocate below
    acc.push_back(opt);
    extend_children(arity_left - opt.arity(), weight_left - opt.weight(),
                    corks, &lower, acc, out);
    acc.pop_back();
  }
}

}  // namespace

std::vector<Tree> enumerate_trees(int arity, int weight, bool allow_corks) {
  static std::mutex mu;
  static std::map<Key, std::vector<Tree>> memo;
  Key key{arity, weight, allow_corks};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }

  std::vector<Tree> out;
  if (weight == 0) {
    if (arity == 1) out.push_back(Tree::leaf());
  } else if (weight == 1 && arity == 0) {
    if (allow_corks) out.push_back(Tree::cork());
  } else {
    std::vector<std::vector<Tree>> kidsets;
    std::vector<Tree> acc;
    extend_children(arity, weight - 1, allow_corks, nullptr, acc, kidsets);
    for (auto& ks : kidsets) out.push_back(Tree::node(std::move(ks)));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  std::lock_guard<std::mutex> lock(mu);
  memo[key] = out;
  return out;
}

Rat symmetry_coefficient(const Tree& t) {
  if (t.kind() != Tree::Kind::node) return Rat(1);
  Rat e(1);
  const auto& kids = t.children();
  size_t i = 0;
  while (i < kids.size()) {
    size_t j = i;
    while (j < kids.size() && kids[j] == kids[i]) ++j;
    e *= Rat::factorial((unsigned)(j - i));
    for (size_t k = i; k < j; ++k) e *= symmetry_coefficient(kids[k]);
    i = j;
  }
  return e;
}

}  // namespace corolla
