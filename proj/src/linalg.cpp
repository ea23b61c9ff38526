#include "sullivan/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace sullivan {

void axpy(SparseVec& y, const Rational& a, const SparseVec& x) {
  if (sgn(a) == 0 || x.empty()) return;
  SparseVec out;
  out.reserve(y.size() + x.size());
  auto iy = y.begin();
  auto ix = x.begin();
  while (iy != y.end() || ix != x.end()) {
    if (ix == x.end() || (iy != y.end() && iy->first < ix->first)) {
      out.push_back(std::move(*iy++));
    } else if (iy == y.end() || ix->first < iy->first) {
      out.emplace_back(ix->first, a * ix->second);
      ++ix;
    } else {
      Rational v = iy->second + a * ix->second;
      if (sgn(v) != 0) out.emplace_back(iy->first, std::move(v));
      ++iy;
      ++ix;
    }
  }
  y = std::move(out);
}

SparseVec scaled(const SparseVec& x, const Rational& a) {
  SparseVec out;
  if (sgn(a) == 0) return out;
  out.reserve(x.size());
  for (const auto& [i, v] : x) out.emplace_back(i, a * v);
  return out;
}

Rational entry(const SparseVec& x, std::size_t index) {
  auto it = std::lower_bound(x.begin(), x.end(), index,
                             [](const auto& p, std::size_t i) { return p.first < i; });
  return (it != x.end() && it->first == index) ? it->second : Rational(0);
}

SparseVec unit_vector(std::size_t index) { return SparseVec{{index, Rational(1)}}; }

Reducer::Reduced Reducer::reduce(SparseVec v, SparseVec tag) const {
  while (!v.empty()) {
    auto it = pivots_.find(v.front().first);
    if (it == pivots_.end()) break;
    const Row& row = it->second;
    const Rational f = v.front().second / row.v.front().second;
    axpy(v, -f, row.v);
    if (!row.tag.empty()) axpy(tag, -f, row.tag);
  }
  return {std::move(v), std::move(tag)};
}

bool Reducer::insert(SparseVec v, SparseVec tag, SparseVec* relation) {
  auto r = reduce(std::move(v), std::move(tag));
  if (r.residual.empty()) {
    if (relation) *relation = std::move(r.tag);
    return false;
  }
  const auto lead = r.residual.front().first;
  pivots_.emplace(lead, Row{std::move(r.residual), std::move(r.tag)});
  return true;
}

namespace {

std::vector<std::size_t> sparsest_first(const std::vector<SparseVec>& columns) {
  std::vector<std::size_t> order(columns.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return columns[a].size() < columns[b].size();
  });
  return order;
}

}  // namespace

std::vector<SparseVec> null_space(const std::vector<SparseVec>& columns) {
  Reducer red;
  std::vector<SparseVec> kernel;
  for (auto i : sparsest_first(columns)) {
    SparseVec relation;
    if (!red.insert(columns[i], unit_vector(i), &relation)) {
      kernel.push_back(std::move(relation));
    }
  }
  return kernel;
}

std::optional<SparseVec> solve(const std::vector<SparseVec>& columns, const SparseVec& target) {
  Reducer red;
  for (auto i : sparsest_first(columns)) red.insert(columns[i], unit_vector(i));
  auto r = red.reduce(target);
  if (!r.residual.empty()) return std::nullopt;
  return scaled(r.tag, -1);
}

std::optional<DenseMatrix> invert(DenseMatrix a) {
  const std::size_t n = a.size();
  DenseMatrix inv(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) return std::nullopt;
    inv[i][i] = 1;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && sgn(a[piv][col]) == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const Rational s = 1 / a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] *= s;
      inv[col][j] *= s;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || sgn(a[r][col]) == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

}  // namespace sullivan
