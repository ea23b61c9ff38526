#include "sullivan/cohom.hpp"

#include <algorithm>

#include "sullivan/error.hpp"
#include "sullivan/kernels.hpp"

namespace sullivan {

namespace {

void sort_vec(SparseVec& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
}

struct Shape {
  bool pure = true;
  std::optional<int> weight;  // common even word length of all image monomials
  bool uniform = true;
};

Shape shape_of(const Derivation& d) {
  const auto& alg = *d.algebra();
  Shape s;
  for (std::size_t g = 0; g < alg.size(); ++g) {
    const auto& img = d.image(g);
    if (img.is_zero()) continue;
    if (!alg.is_odd(g)) s.pure = false;
    for (const auto& [m, c] : img.terms()) {
      int p = 0;
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (alg.is_odd(i)) {
          s.pure = false;
        } else {
          p += m[i];
        }
      }
      if (!s.weight) s.weight = p;
      if (*s.weight != p) s.uniform = false;
    }
  }
  return s;
}

}  // namespace

CohomologyTable::CohomologyTable(AlgebraPtr alg, Derivation d, int max_degree, Grading grading)
    : alg_(std::move(alg)), d_(std::move(d)), max_degree_(max_degree) {
  if (!same_algebra(alg_, d_.algebra())) throw StructuralError("differential is defined on a different algebra");
  if (max_degree < 0) throw StructuralError("negative truncation degree");

  const Shape s = shape_of(d_);
  if (grading != Grading::none && s.pure) {
    split_odd_ = true;
    split_even_ = s.uniform;
    bigraded_ = s.uniform && (!s.weight || *s.weight == 2);
  }
  if (grading == Grading::bigraded && !bigraded_) {
    throw StructuralError("differential is not bihomogeneous of bidegree (+2,-1)");
  }

  blocks_.resize(static_cast<std::size_t>(max_degree_) + 1);
  std::vector<Element> prev_images;
  for (int n = 0; n <= max_degree_; ++n) {
    auto monos = alg_->monomials_of_degree(n);
    auto& level = blocks_[static_cast<std::size_t>(n)];
    std::map<Bidegree, std::vector<std::size_t>> members;  // block -> positions in `monos`
    for (std::size_t k = 0; k < monos.size(); ++k) {
      const Bidegree b = key(monos[k]);
      auto& blk = level[b];
      blk.index.emplace(monos[k], blk.index.size());
      members[b].push_back(k);
    }

    // Coboundaries from degree n-1.
    for (const auto& img : prev_images) {
      if (img.is_zero()) continue;
      auto& blk = level.at(key(img.terms().begin()->first));
      SparseVec v;
      for (const auto& [m, c] : img.terms()) v.emplace_back(blk.index.at(m), c);
      sort_vec(v);
      blk.reducer.insert(std::move(v));
    }

    // Cocycles of degree n, block by block.
    auto images = kernels::apply_to_basis(d_, monos);
    for (auto& [b, pos] : members) {
      auto& blk = level.at(b);
      std::map<Monomial, std::size_t> target;
      std::vector<SparseVec> columns;
      columns.reserve(pos.size());
      for (auto k : pos) {
        SparseVec col;
        for (const auto& [m, c] : images[k].terms()) {
          col.emplace_back(target.emplace(m, target.size()).first->second, c);
        }
        sort_vec(col);
        columns.push_back(std::move(col));
      }
      // Column j is monos[pos[j]], which also has block index j.
      auto kernel = null_space(columns);
      std::sort(kernel.begin(), kernel.end(), [](const SparseVec& a, const SparseVec& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
      });
      for (auto& z : kernel) {
        if (blk.reducer.contains(z)) continue;
        const std::size_t idx = classes_.size();
        Element rep(alg_);
        for (const auto& [j, c] : z) rep.add_term(monos[pos[j]], c);
        blk.reducer.insert(z, unit_vector(idx));
        classes_.push_back(CohomologyClass{n, b, std::move(rep)});
      }
    }
    prev_images = std::move(images);
  }
}

Bidegree CohomologyTable::key(const Monomial& m) const {
  if (!split_odd_) return {0, 0};
  int p = 0, q = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (alg_->is_odd(i)) {
      q += m[i];
    } else {
      p += m[i];
    }
  }
  return {split_even_ ? p : 0, q};
}

const CohomologyTable::Block& CohomologyTable::block(int degree, Bidegree k) const {
  return blocks_.at(static_cast<std::size_t>(degree)).at(k);
}

std::size_t CohomologyTable::dim(int degree) const {
  return static_cast<std::size_t>(std::count_if(classes_.begin(), classes_.end(),
                                                [&](const auto& c) { return c.degree == degree; }));
}

std::size_t CohomologyTable::dim(Bidegree pq) const {
  return static_cast<std::size_t>(std::count_if(classes_.begin(), classes_.end(),
                                                [&](const auto& c) { return c.block == pq; }));
}

std::vector<std::size_t> CohomologyTable::classes_in_degree(int degree) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (classes_[i].degree == degree) out.push_back(i);
  }
  return out;
}

SparseVec CohomologyTable::coordinates(const Element& a) const {
  if (a.is_zero()) return {};
  if (!same_algebra(alg_, a.algebra())) throw StructuralError("element from a different algebra");
  if (!is_cocycle(a)) throw StructuralError("coordinates requested for a non-cocycle");
  std::map<std::pair<int, Bidegree>, SparseVec> parts;
  for (const auto& [m, c] : a.terms()) {
    const int n = alg_->degree(m);
    if (n > max_degree_) throw NotComputable("class of degree " + std::to_string(n) + " beyond the table");
    const Bidegree b = key(m);
    parts[{n, b}].emplace_back(block(n, b).index.at(m), c);
  }
  SparseVec coords;
  for (auto& [where, v] : parts) {
    sort_vec(v);
    auto r = block(where.first, where.second).reducer.reduce(std::move(v));
    if (!r.residual.empty()) throw ConstructionError("cocycle outside the span of classes and coboundaries");
    axpy(coords, -1, r.tag);
  }
  return coords;
}

Element CohomologyTable::representative(const SparseVec& coords) const {
  Element out(alg_);
  for (const auto& [i, c] : coords) out += c * classes_.at(i).rep;
  return out;
}

CohomologyTable cohomology(const SullivanModel& m, std::optional<int> max_degree) {
  if (!m.flags().pure) throw NotComputable("cohomology of a non-pure model is not supported");
  if (is_elliptic(m) != Ellipticity::yes) {
    throw NotComputable("cohomology of ΛV needs a model verified elliptic");
  }
  const int fd = formal_dimension(m);
  const int top = max_degree.value_or(fd);
  if (top > fd) {
    throw NotComputable("degree " + std::to_string(top) + " exceeds the formal dimension " + std::to_string(fd));
  }
  return CohomologyTable(m.algebra(), m.differential(), top);
}

CohomologyTable cohomology(const QuotientAlgebra& a) { return CohomologyTable(a.algebra, a.d, a.top_degree); }

CohomologyTable bigraded_cohomology(const QuotientAlgebra& a) {
  return CohomologyTable(a.algebra, a.d, a.top_degree, Grading::bigraded);
}

CohomologyRing::CohomologyRing(const CohomologyTable& table) : table_(&table) {
  const std::size_t n = table.size();
  table_products_.assign(n * n, {});
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      if (degree(i) + degree(j) <= table.max_degree()) pairs.emplace_back(i, j);
    }
  }
  std::vector<Element> reps;
  reps.reserve(n);
  for (const auto& c : table.classes()) reps.push_back(c.rep);
  const auto prods = kernels::pairwise_products(reps, pairs);
  std::vector<SparseVec> coords(pairs.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(pairs.size()); ++k) {
    coords[k] = table.coordinates(prods[k]);
  }
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    const bool odd = (degree(i) % 2 != 0) && (degree(j) % 2 != 0);
    table_products_[j * n + i] = odd ? scaled(coords[k], -1) : coords[k];
    table_products_[i * n + j] = std::move(coords[k]);
  }
}

SparseVec CohomologyRing::multiply(const SparseVec& a, const SparseVec& b) const {
  std::map<std::size_t, Rational> acc;
  for (const auto& [i, ci] : a) {
    for (const auto& [j, cj] : b) {
      const Rational f = ci * cj;
      for (const auto& [k, ck] : product(i, j)) acc[k] += f * ck;
    }
  }
  SparseVec out;
  for (auto& [k, c] : acc) {
    if (sgn(c) != 0) out.emplace_back(k, std::move(c));
  }
  return out;
}

SparseVec cup(const CohomologyRing& ring, const SparseVec& c1, const SparseVec& c2) { return ring.multiply(c1, c2); }

int class_degree(const CohomologyTable& table, const SparseVec& c) {
  if (c.empty()) throw StructuralError("the zero class has no degree");
  const int n = table.cls(c.front().first).degree;
  for (const auto& [i, v] : c) {
    if (table.cls(i).degree != n) throw StructuralError("class is not homogeneous");
  }
  return n;
}

SparseVec fundamental_class(const QuotientAlgebra& a, const CohomologyTable& table) {
  if (table.max_degree() < a.top_degree) throw StructuralError("table does not reach the top degree");
  if (table.dim(a.top_degree) != 1) {
    throw StructuralError("top cohomology of A has dimension " + std::to_string(table.dim(a.top_degree)));
  }
  auto c = table.coordinates(a.top_monomial());
  if (c.empty()) throw StructuralError("top monomial is a coboundary");
  return c;
}

SparseVec poincare_dual(const CohomologyRing& ring, const SparseVec& z, const SparseVec& top) {
  const auto& table = ring.table();
  if (z.empty()) throw StructuralError("the zero class has no Poincaré dual");
  const int e = class_degree(table, z);
  const int D = class_degree(table, top);
  const auto candidates = table.classes_in_degree(D - e);
  std::vector<SparseVec> columns;
  for (auto j : candidates) columns.push_back(ring.multiply(z, unit_vector(j)));
  auto x = solve(columns, top);
  if (!x) throw StructuralError("no Poincaré dual exists for this class");
  SparseVec out;
  for (const auto& [k, c] : *x) out.emplace_back(candidates[k], c);
  sort_vec(out);
  if (ring.multiply(z, out) != top) throw ConstructionError("Poincaré dual failed its re-check");
  return out;
}

}  // namespace sullivan
