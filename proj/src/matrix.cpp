#include "corolla/matrix.hpp"

#include <algorithm>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace corolla {

void SparseMat::set(int r, int c, const Rat& v) {
  auto& rw = row[r];
  auto it = std::lower_bound(rw.begin(), rw.end(), c,
                             [](const auto& e, int col) { return e.first < col; });
  if (it != rw.end() && it->first == c) {
    if (v.is_zero()) rw.erase(it);
    else it->second = v;
  } else if (!v.is_zero()) {
    rw.insert(it, {c, v});
  }
}

Rat SparseMat::get(int r, int c) const {
  const auto& rw = row[r];
  auto it = std::lower_bound(rw.begin(), rw.end(), c,
                             [](const auto& e, int col) { return e.first < col; });
  if (it != rw.end() && it->first == c) return it->second;
  return Rat(0);
}

void SparseMat::add(int r, int c, const Rat& v) {
  if (v.is_zero()) return;
  auto& rw = row[r];
  auto it = std::lower_bound(rw.begin(), rw.end(), c,
                             [](const auto& e, int col) { return e.first < col; });
  if (it != rw.end() && it->first == c) {
    it->second += v;
    if (it->second.is_zero()) rw.erase(it);
  } else {
    rw.insert(it, {c, v});
  }
}

long SparseMat::nnz() const {
  long n = 0;
  for (const auto& r : row) n += (long)r.size();
  return n;
}

bool operator==(const SparseMat& a, const SparseMat& b) {
  return a.rows == b.rows && a.cols == b.cols && a.row == b.row;
}

namespace {

using Row = std::vector<std::pair<int, Rat>>;

// dst <- dst + coeff * src, sparse merge
Row axpy(const Row& dst, const Rat& coeff, const Row& src) {
  Row out;
  out.reserve(dst.size() + src.size());
  size_t i = 0, j = 0;
  while (i < dst.size() || j < src.size()) {
    if (j == src.size() || (i < dst.size() && dst[i].first < src[j].first)) {
      out.push_back(dst[i++]);
    } else if (i == dst.size() || src[j].first < dst[i].first) {
      Rat v = coeff * src[j].second;
      if (!v.is_zero()) out.emplace_back(src[j].first, v);
      ++j;
    } else {
      Rat v = dst[i].second + coeff * src[j].second;
      if (!v.is_zero()) out.emplace_back(dst[i].first, v);
      ++i;
      ++j;
    }
  }
  return out;
}

Rat row_get(const Row& rw, int c) {
  auto it = std::lower_bound(rw.begin(), rw.end(), c,
                             [](const auto& e, int col) { return e.first < col; });
  if (it != rw.end() && it->first == c) return it->second;
  return Rat(0);
}

// Clear denominators; scaling a row leaves rank and kernel unchanged and
// keeps intermediate entries integral for longer.
void scale_to_integer(Row& rw) {
  if (rw.empty()) return;
  mpz_class l = 1;
  for (const auto& [c, v] : rw) {
    mpz_class den = v.raw().get_den();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
  }
  mpz_class g = 0;
  for (const auto& [c, v] : rw) {
    mpz_class num = v.raw().get_num() * (l / v.raw().get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), num.get_mpz_t());
  }
  if (g == 0) return;
  Rat f(mpq_class(l, g));
  for (auto& [c, v] : rw) v *= f;
}

}  // namespace

EchelonResult rref(const SparseMat& m, Elim policy) {
  std::vector<Row> work = m.row;
  for (auto& rw : work) scale_to_integer(rw);

  EchelonResult res;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int piv = -1;
    for (int i = r; i < m.rows; ++i) {
      if (!work[i].empty() && work[i].front().first == c) { piv = i; break; }
    }
    if (piv < 0) continue;
    std::swap(work[r], work[piv]);
    Rat pv = work[r].front().second;
    if (!(pv == Rat(1))) {
      Rat inv = Rat(1) / pv;
      for (auto& [cc, v] : work[r]) v *= inv;
    }

    const Row& prow = work[r];
    const int nrows = m.rows;
#ifdef _OPENMP
    bool par = (policy == Elim::parallel);
#pragma omp parallel for schedule(dynamic, 8) if (par)
    for (int i = 0; i < nrows; ++i) {
      if (i == r) continue;
      Rat mi = row_get(work[i], c);
      if (mi.is_zero()) continue;
      work[i] = axpy(work[i], -mi, prow);
    }
#else
    (void)policy;
    for (int i = 0; i < nrows; ++i) {
      if (i == r) continue;
      Rat mi = row_get(work[i], c);
      if (mi.is_zero()) continue;
      work[i] = axpy(work[i], -mi, prow);
    }
#endif
    res.pivot_col.push_back(c);
    ++r;
  }
  res.rank = r;
  res.mat.rows = m.rows;
  res.mat.cols = m.cols;
  res.mat.row = std::move(work);
  return res;
}

int rank(const SparseMat& m, Elim policy) { return rref(m, policy).rank; }

std::vector<std::vector<Rat>> kernel_basis(const SparseMat& m, Elim policy) {
  EchelonResult e = rref(m, policy);
  std::vector<bool> is_pivot(m.cols, false);
  for (int c : e.pivot_col) is_pivot[c] = true;

  std::vector<std::vector<Rat>> basis;
  for (int f = 0; f < m.cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rat> v(m.cols, Rat(0));
    v[f] = Rat(1);
    for (int r = 0; r < e.rank; ++r) {
      Rat coeff = row_get(e.mat.row[r], f);
      if (!coeff.is_zero()) v[e.pivot_col[r]] = -coeff;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

SparseMat mat_mul(const SparseMat& a, const SparseMat& b) {
  if (a.cols != b.rows) throw std::invalid_argument("mat_mul: shape mismatch");
  SparseMat out(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    Row acc;
    for (const auto& [k, av] : a.row[i]) acc = axpy(acc, av, b.row[k]);
    out.row[i] = std::move(acc);
  }
  return out;
}

}  // namespace corolla
