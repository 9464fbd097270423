#include "corolla/element.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace corolla {

int GenTable::find(const std::string& label) const {
  for (int i = 0; i < (int)gens_.size(); ++i)
    if (gens_[i].label == label) return i;
  return -1;
}

std::string DecTree::key() const {
  std::string k = skel.str();
  k += '#';
  for (size_t i = 0; i < decor.size(); ++i) {
    if (i) k += ',';
    k += std::to_string(decor[i]);
  }
  return k;
}

int DecTree::cmp(const DecTree& a, const DecTree& b) {
  int c = Tree::cmp(a.skel, b.skel);
  if (c != 0) return c;
  if (a.decor != b.decor) return a.decor < b.decor ? -1 : 1;
  return 0;
}

int dec_degree(const DecTree& t, const GenTable& g) {
  int d = -t.skel.weight();
  for (int id : t.decor) d += g.degree(id);
  return d;
}

int dec_weight(const DecTree& t, const GenTable& g) {
  int w = t.skel.weight();
  for (int id : t.decor) w += g.weight(id);
  return w;
}

void add_scaled(Element& dst, const Element& src, const Rat& c) {
  if (c.is_zero()) return;
  for (const auto& [t, v] : src) {
    auto it = dst.find(t);
    if (it == dst.end()) {
      dst.emplace(t, c * v);
    } else {
      it->second += c * v;
      if (it->second.is_zero()) dst.erase(it);
    }
  }
}

bool is_zero(const Element& e) { return e.empty(); }

int element_degree(const Element& e, const GenTable& g) {
  bool first = true;
  int deg = 0;
  for (const auto& [t, v] : e) {
    int d = dec_degree(t, g);
    if (first) {
      deg = d;
      first = false;
    } else if (d != deg) {
      throw std::invalid_argument("element is not homogeneous");
    }
  }
  return deg;
}

int element_min_weight(const Element& e, const GenTable& g) {
  int w = -1;
  for (const auto& [t, v] : e) {
    int tw = dec_weight(t, g);
    if (w < 0 || tw < w) w = tw;
  }
  return w < 0 ? 0 : w;
}

void truncate_weight(Element& e, const GenTable& g, int wmax) {
  for (auto it = e.begin(); it != e.end();) {
    if (dec_weight(it->first, g) > wmax) it = e.erase(it);
    else ++it;
  }
}

std::string element_str(const Element& e, const GenTable& g) {
  if (e.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [t, v] : e) {
    if (!first) os << " + ";
    first = false;
    os << v.str() << "*" << t.skel.str() << "[";
    for (size_t i = 0; i < t.decor.size(); ++i) {
      if (i) os << ",";
      os << g.info(t.decor[i]).label;
    }
    os << "]";
  }
  return os.str();
}

namespace {

struct Block {
  DecTree t;
  int dec_par;    // decoration degree parity
  int omega_par;  // vertex count parity
  int full_par;   // (dec + omega) mod 2, the class degree parity
};

Block make_block(const DecTree& t, const GenTable& g) {
  int dp = 0;
  for (int id : t.decor) dp += g.degree(id);
  dp &= 1;
  int wp = t.skel.weight() & 1;
  return Block{t, dp, wp, (dp + wp) & 1};
}

// Sorts blocks in place, accumulating the Koszul sign: a decorated subtree
// is one contiguous block of its orientation word, so swapping adjacent
// blocks i,j costs (-1)^{full_i full_j}. Returns 0 when two equal blocks of
// odd class degree make the symmetric class vanish.
int sort_blocks(std::vector<Block>& blocks) {
  int sign = 1;
  for (size_t i = 1; i < blocks.size(); ++i) {
    size_t j = i;
    while (j > 0 && DecTree::cmp(blocks[j].t, blocks[j - 1].t) < 0) {
      if (blocks[j].full_par & blocks[j - 1].full_par) sign = -sign;
      std::swap(blocks[j], blocks[j - 1]);
      --j;
    }
  }
  for (size_t i = 1; i < blocks.size(); ++i) {
    if (blocks[i].full_par == 1 &&
        DecTree::cmp(blocks[i].t, blocks[i - 1].t) == 0)
      return 0;
  }
  return sign;
}

GraftResult graft_blocks(std::vector<Block> blocks, const GenTable& g) {
  int s = sort_blocks(blocks);
  if (s == 0) return {};

  std::vector<Tree> skels;
  std::vector<int> decor;
  skels.reserve(blocks.size());
  for (const Block& b : blocks) {
    skels.push_back(b.t.skel);
    decor.insert(decor.end(), b.t.decor.begin(), b.t.decor.end());
  }
  GraftResult r;
  r.tree = DecTree{Tree::node(std::move(skels)), std::move(decor)};
  r.sign = s;
  return r;
}

}  // namespace

GraftResult graft_root(std::span<const DecTree> children, const GenTable& g) {
  if (children.size() < 2)
    throw std::invalid_argument("graft_root needs >= 2 children");
  std::vector<Block> blocks;
  blocks.reserve(children.size());
  for (const DecTree& c : children) blocks.push_back(make_block(c, g));
  return graft_blocks(std::move(blocks), g);
}

std::vector<DecTree> root_children(const DecTree& t) {
  std::vector<DecTree> out;
  if (t.skel.kind() != Tree::Kind::node) return out;
  size_t pos = 0;
  for (const Tree& c : t.skel.children()) {
    std::vector<int> d(t.decor.begin() + pos, t.decor.begin() + pos + c.arity());
    pos += c.arity();
    out.push_back(DecTree{c, std::move(d)});
  }
  return out;
}

namespace {

void add_term(Element& e, const GraftResult& r, const Rat& c) {
  if (r.sign == 0 || c.is_zero()) return;
  Rat v = c * Rat(r.sign);
  auto it = e.find(r.tree);
  if (it == e.end()) {
    e.emplace(r.tree, v);
  } else {
    it->second += v;
    if (it->second.is_zero()) e.erase(it);
  }
}

}  // namespace

Element cobar_diff(const DecTree& t, const GenTable& g,
                   const std::function<Element(int)>& gen_d) {
  Element out;
  if (t.skel.kind() == Tree::Kind::cork) return out;
  if (t.skel.kind() == Tree::Kind::leaf) {
    if (gen_d) out = gen_d(t.decor[0]);
    return out;
  }

  std::vector<DecTree> kids = root_children(t);
  const int k = (int)kids.size();
  std::vector<Block> blocks;
  for (const DecTree& c : kids) blocks.push_back(make_block(c, g));

  // The orientation word lists each subtree block followed by its vertex
  // (root last), so the root split passes every child block first.
  int root_sgn = 1;
  for (int a = 0; a < k; ++a)
    if (blocks[a].full_par) root_sgn = -root_sgn;

  // splits of the root: move a sub-multiset A of children onto a new vertex
  // (A empty inserts a cork); at least one child must stay behind
  for (int mask = 0; mask < (1 << k); ++mask) {
    int q = __builtin_popcount((unsigned)mask);
    if (q == 1 || q == k) continue;

    // Koszul sign of moving the A blocks (in order) past the later B blocks
    int sgn = root_sgn;
    for (int a = 0; a < k; ++a) {
      if (!(mask >> a & 1)) continue;
      for (int b = a + 1; b < k; ++b)
        if (!(mask >> b & 1) && (blocks[a].full_par & blocks[b].full_par))
          sgn = -sgn;
    }

    DecTree newchild;
    int inner_sign = 1;
    if (q == 0) {
      newchild = DecTree::cork_tree();
    } else {
      std::vector<DecTree> sub;
      for (int a = 0; a < k; ++a)
        if (mask >> a & 1) sub.push_back(kids[a]);
      GraftResult inner = graft_root(sub, g);
      if (inner.sign == 0) continue;
      newchild = inner.tree;
      inner_sign = inner.sign;
    }

    std::vector<DecTree> outer;
    for (int a = 0; a < k; ++a)
      if (!(mask >> a & 1)) outer.push_back(kids[a]);
    outer.push_back(newchild);
    add_term(out, graft_root(outer, g), Rat(sgn * inner_sign));
  }

  // recurse into the children, Leibniz with full class degrees
  int left_par = 0;
  for (int j = 0; j < k; ++j) {
    Element inner = cobar_diff(kids[j], g, gen_d);
    for (const auto& [it, iv] : inner) {
      std::vector<DecTree> outer = kids;
      outer[j] = it;
      add_term(out, graft_root(outer, g), (left_par ? -iv : iv));
    }
    left_par ^= blocks[j].full_par;
  }
  return out;
}

Element split_differential(const DecTree& t, const GenTable& g) {
  return cobar_diff(t, g, nullptr);
}

std::vector<SplitTerm> vertex_splittings(const Tree& t) {
  if (t.kind() == Tree::Kind::leaf)
    throw std::invalid_argument("vertex_splittings: trivial tree");
  GenTable g({GenInfo{"x", 0, 1}});
  std::vector<int> decor(t.arity(), 0);
  Element e = split_differential(DecTree{t, decor}, g);
  std::vector<SplitTerm> out;
  for (const auto& [dt, c] : e) {
    long num = (long)mpz_get_si(mpz_class(c.raw().get_num()).get_mpz_t());
    SplitTerm st{dt.skel, num < 0 ? -num : num, num < 0 ? -1 : 1};
    out.push_back(st);
  }
  return out;
}

}  // namespace corolla
