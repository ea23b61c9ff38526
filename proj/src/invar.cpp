#include "sullivan/invar.hpp"

#include <algorithm>
#include <map>

#include "sullivan/error.hpp"

namespace sullivan {

namespace {

SparseVec collect(std::map<std::size_t, Rational>& acc) {
  SparseVec out;
  out.reserve(acc.size());
  for (auto& [k, c] : acc) {
    if (sgn(c) != 0) out.emplace_back(k, std::move(c));
  }
  return out;
}

std::string join_names(const Algebra& alg, std::span<const std::size_t> gens) {
  std::string out;
  for (auto g : gens) {
    if (!out.empty()) out += ",";
    out += alg.gen(g).name;
  }
  return out;
}

}  // namespace

ProductSearch longest_product(const std::vector<SparseVec>& generators, const Multiplication& mul) {
  struct Entry {
    std::vector<std::size_t> tuple;
    SparseVec value;
  };
  std::vector<Entry> current;
  std::vector<std::size_t> base;
  Reducer first;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (!generators[i].empty() && first.insert(generators[i])) {
      current.push_back({{i}, generators[i]});
      base.push_back(i);
    }
  }
  if (current.empty()) return {};

  for (int r = 1;; ++r) {
    const std::size_t nb = base.size();
    std::vector<SparseVec> products(current.size() * nb);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(products.size()); ++k) {
      products[k] = mul(current[k / nb].value, generators[base[k % nb]]);
    }
    std::vector<Entry> next;
    Reducer span;
    for (std::size_t k = 0; k < products.size(); ++k) {
      if (products[k].empty() || !span.insert(products[k])) continue;
      auto tuple = current[k / nb].tuple;
      tuple.push_back(base[k % nb]);
      next.push_back({std::move(tuple), std::move(products[k])});
    }
    if (next.empty()) return {r, current.front().tuple, current.front().value};
    current = std::move(next);
  }
}

SparseVec TensorSquareRing::multiply(const SparseVec& a, const SparseVec& b) const {
  const std::size_t n = ring_->size();
  std::map<std::size_t, Rational> acc;
  for (const auto& [ia, ca] : a) {
    const std::size_t a1 = ia / n, a2 = ia % n;
    for (const auto& [ib, cb] : b) {
      const std::size_t b1 = ib / n, b2 = ib % n;
      const auto& left = ring_->product(a1, b1);
      if (left.empty()) continue;
      const auto& right = ring_->product(a2, b2);
      if (right.empty()) continue;
      Rational f = ca * cb;
      if (ring_->degree(a2) % 2 != 0 && ring_->degree(b1) % 2 != 0) f = -f;
      for (const auto& [k, ck] : left) {
        const Rational fk = f * ck;
        for (const auto& [l, cl] : right) acc[k * n + l] += fk * cl;
      }
    }
  }
  return collect(acc);
}

SparseVec TensorSquareRing::mu(const SparseVec& v) const {
  const std::size_t n = ring_->size();
  std::map<std::size_t, Rational> acc;
  for (const auto& [i, c] : v) {
    for (const auto& [k, ck] : ring_->product(i / n, i % n)) acc[k] += c * ck;
  }
  return collect(acc);
}

SparseVec TensorSquareRing::zero_divisor(std::size_t i) const {
  const auto one = ring_->table().coordinates(Element::one(ring_->table().algebra()));
  SparseVec out;
  for (const auto& [k, c] : one) {
    axpy(out, c, unit_vector(index(i, k)));
    axpy(out, -c, unit_vector(index(k, i)));
  }
  return out;
}

std::vector<SparseVec> zero_divisor_kernel(const TensorSquareRing& t) {
  const std::size_t n = t.factor_size();
  std::vector<SparseVec> columns;
  columns.reserve(n * n);
  for (std::size_t k = 0; k < n * n; ++k) columns.push_back(t.mu(unit_vector(k)));
  return null_space(columns);
}

ProductSearch cuplength_search(const CohomologyRing& ring) {
  std::vector<SparseVec> gens;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    gens.push_back(ring.degree(i) > 0 ? unit_vector(i) : SparseVec{});
  }
  return longest_product(gens, [&](const SparseVec& a, const SparseVec& b) { return ring.multiply(a, b); });
}

int cuplength(const CohomologyRing& ring) { return cuplength_search(ring).length; }

int cuplength(const CohomologyTable& table) { return cuplength(CohomologyRing(table)); }

ProductSearch zero_divisor_cuplength_search(const CohomologyRing& ring) {
  TensorSquareRing t(ring);
  std::vector<SparseVec> gens;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    gens.push_back(ring.degree(i) > 0 ? t.zero_divisor(i) : SparseVec{});
  }
  return longest_product(gens, [&](const SparseVec& a, const SparseVec& b) { return t.multiply(a, b); });
}

int zero_divisor_cuplength(const SullivanModel& m) {
  if (!m.flags().pure || is_elliptic(m) != Ellipticity::yes) {
    throw NotComputable("zcl needs a pure model verified elliptic");
  }
  auto h = cohomology(m);
  return zero_divisor_cuplength_search(CohomologyRing(h)).length;
}

LInvariant L_invariant(const CohomologyRing& ring) {
  const auto& table = ring.table();
  if (!table.bigraded()) throw StructuralError("L needs a bigraded table");
  std::vector<SparseVec> gens;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    gens.push_back(table.cls(i).block.first % 2 != 0 ? unit_vector(i) : SparseVec{});
  }
  auto r = longest_product(gens, [&](const SparseVec& a, const SparseVec& b) { return ring.multiply(a, b); });
  return {r.length, r.witness};
}

LInvariant L_invariant(const SullivanModel& m, std::span<const std::string> basis) {
  if (!m.flags().pure || !m.flags().coformal) throw NotComputable("L needs a pure coformal model");
  auto q = quotient_A(elliptic_extension(m, basis));
  auto h = bigraded_cohomology(q);
  return L_invariant(CohomologyRing(h));
}

CatValue cat_pure(const SullivanModel& m) {
  if (!m.flags().pure || is_elliptic(m) != Ellipticity::yes) {
    throw NotComputable("cat needs a pure model verified elliptic");
  }
  const int n = static_cast<int>(m.even_generators().size());
  const int odd = static_cast<int>(m.odd_generators().size());
  if (m.flags().coformal) return {odd, "coformal"};
  if (m.flags().word_length) return {n * (*m.flags().word_length - 2) + odd, "homogeneous"};
  throw NotComputable("cat is not computable by this tool: d is neither quadratic nor word-homogeneous");
}

bool is_factored_f0(const SullivanModel& m, std::vector<std::size_t>* z_gens) {
  if (!m.flags().pure) return false;
  std::vector<std::size_t> z = m.even_generators();
  std::size_t y1 = 0;
  for (auto y : m.odd_generators()) {
    if (!m.differential().image(y).is_zero()) {
      z.push_back(y);
      ++y1;
    }
  }
  if (y1 != m.even_generators().size()) return false;
  std::sort(z.begin(), z.end());
  if (is_elliptic(submodel(m, z)) != Ellipticity::yes) return false;
  if (z_gens) *z_gens = z;
  return true;
}

namespace {

// Subsets of `pool` of size k in lexicographic order.
void for_each_subset(const std::vector<std::size_t>& pool, std::size_t k,
                     const std::function<void(const std::vector<std::size_t>&)>& f) {
  if (k > pool.size()) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  std::vector<std::size_t> pick(k);
  for (;;) {
    for (std::size_t i = 0; i < k; ++i) pick[i] = pool[idx[i]];
    f(pick);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == pool.size() - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

TCBoundReport tc_bounds(const SullivanModel& m, const BoundOptions& options) {
  if (!m.flags().pure) throw NotComputable("TC bounds need a pure model");
  const auto& alg = *m.algebra();
  TCBoundReport rep;
  const int chi = chi_pi(m);
  const auto evens = m.even_generators();
  const auto odds = m.odd_generators();
  const bool elliptic = is_elliptic(m) == Ellipticity::yes;

  std::optional<int> cat;
  std::string cat_method;
  std::vector<std::size_t> factor;
  const bool factored = is_factored_f0(m, &factor);
  const bool formal = options.assert_formal || factored;

  if (elliptic) {
    auto h = cohomology(m);
    CohomologyRing ring(h);
    rep.lower.push_back({zero_divisor_cuplength_search(ring).length, "zcl", ""});
    try {
      auto c = cat_pure(m);
      cat = c.value;
      cat_method = c.method;
    } catch (const NotComputable&) {
      if (formal) {
        cat = cuplength(ring);
        cat_method = "cuplength";
      }
    }
    if (cat) {
      rep.lower.push_back({*cat, "cat", cat_method});
      rep.upper.push_back({2 * *cat, "2cat", cat_method});
      if (m.flags().word_length) {
        rep.upper.push_back({2 * *cat + chi, "theorem42_homogeneous",
                             "k=" + std::to_string(*m.flags().word_length)});
      }
      if (formal) {
        const std::string why = options.assert_formal ? "asserted formal" : "factored F0 form Z=" + join_names(alg, factor);
        rep.lower.push_back({2 * *cat + chi, "theorem41", why});
        rep.upper.push_back({2 * *cat + chi, "theorem41", why});
      }
    } else {
      rep.notes.push_back("cat: not computable (d neither quadratic nor word-homogeneous)");
    }
  } else {
    rep.notes.push_back("zcl, cat: model not verified elliptic");
  }

  if (m.flags().coformal) {
    std::vector<std::vector<std::string>> bases = options.bases;
    if (bases.empty()) bases.emplace_back();
    for (const auto& b : bases) {
      auto L = L_invariant(m, b);
      std::string label = "basis=";
      if (b.empty()) {
        label += join_names(alg, evens);
      } else {
        for (std::size_t i = 0; i < b.size(); ++i) label += (i ? "," : "") + b[i];
      }
      rep.lower.push_back({static_cast<int>(odds.size()) + L.value, "theorem51", label + " L=" + std::to_string(L.value)});
    }
  } else {
    rep.notes.push_back("theorem51: model is not coformal");
  }

  if (odds.size() <= options.subset_cap) {
    for_each_subset(odds, evens.size(), [&](const std::vector<std::size_t>& s) {
      std::vector<std::size_t> z = evens;
      z.insert(z.end(), s.begin(), s.end());
      std::sort(z.begin(), z.end());
      auto sub = submodel(m, z);
      if (is_elliptic(sub) != Ellipticity::yes) return;
      const int catz = cuplength(cohomology(sub));
      rep.upper.push_back({2 * catz - chi, "theorem42", "Z=" + join_names(alg, z) + " cat(Z)=" + std::to_string(catz)});
    });
  } else {
    rep.notes.push_back("theorem42: F0 sub-model search skipped, more than " + std::to_string(options.subset_cap) +
                        " odd generators");
  }

  if (auto e = identify_extension(m)) {
    rep.upper.push_back({static_cast<int>(alg.size()), "prop51", "dim W"});
  }

  for (const auto& c : options.certified) rep.lower.push_back(c);

  for (const auto& b : rep.lower) rep.low = rep.low ? std::max(*rep.low, b.value) : b.value;
  for (const auto& b : rep.upper) rep.high = rep.high ? std::min(*rep.high, b.value) : b.value;
  if (rep.low && rep.high) {
    rep.inconsistent = *rep.low > *rep.high;
    rep.exact = *rep.low == *rep.high;
  }
  if (rep.lower.empty()) rep.notes.push_back("no lower bound applies");
  if (rep.upper.empty()) rep.notes.push_back("no upper bound applies");
  return rep;
}

}  // namespace sullivan
