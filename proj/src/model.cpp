#include "sullivan/model.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "sullivan/error.hpp"
#include "sullivan/linalg.hpp"

namespace sullivan {

namespace {

// Re-indexes an element along an increasing generator map; order-preserving
// maps never introduce Koszul signs.
Element remap(const Element& a, const AlgebraPtr& target, const std::vector<std::size_t>& map) {
  Element out(target);
  for (const auto& [m, c] : a.terms()) {
    Monomial t(target->size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] != 0) t[map[i]] = m[i];
    }
    out.add_term(t, c);
  }
  return out;
}

std::vector<std::size_t> identity_map(std::size_t n, std::size_t offset = 0) {
  std::vector<std::size_t> map(n);
  std::iota(map.begin(), map.end(), offset);
  return map;
}

bool only_even(const Algebra& alg, const Element& a) {
  for (const auto& [m, c] : a.terms()) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] != 0 && alg.is_odd(i)) return false;
    }
  }
  return true;
}

}  // namespace

SullivanModel::SullivanModel(AlgebraPtr alg, Derivation d) : alg_(std::move(alg)), d_(std::move(d)) {
  if (!alg_ || !same_algebra(alg_, d_.algebra())) {
    throw StructuralError("differential is defined on a different algebra");
  }
  flags_ = validate(*this);
}

std::vector<std::size_t> SullivanModel::even_generators() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < alg_->size(); ++i) {
    if (!alg_->is_odd(i)) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> SullivanModel::odd_generators() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < alg_->size(); ++i) {
    if (alg_->is_odd(i)) out.push_back(i);
  }
  return out;
}

ValidationReport validate(const SullivanModel& m) {
  const auto& alg = *m.algebra();
  const auto& d = m.differential();
  ValidationReport r;
  r.pure = r.coformal = r.minimal = true;
  std::optional<int> k;
  bool homogeneous = true;
  for (std::size_t g = 0; g < alg.size(); ++g) {
    const Element& dg = d.image(g);
    if (!d.apply(dg).is_zero()) {
      throw InvalidModel("d^2 != 0 on generator '" + alg.gen(g).name + "'");
    }
    if (dg.is_zero()) continue;
    if (!alg.is_odd(g) || !only_even(alg, dg)) r.pure = false;
    for (const auto& [mono, c] : dg.terms()) {
      const int w = mono.word_length();
      if (w != 2) r.coformal = false;
      if (w < 2) r.minimal = false;
      if (!k) k = w;
      if (*k != w) homogeneous = false;
    }
  }
  if (homogeneous) r.word_length = k;
  return r;
}

int chi_pi(const SullivanModel& m) {
  return static_cast<int>(m.even_generators().size()) - static_cast<int>(m.odd_generators().size());
}

SullivanModel submodel(const SullivanModel& m, std::span<const std::size_t> gens) {
  const auto& alg = *m.algebra();
  std::vector<Generator> sub;
  std::vector<std::optional<std::size_t>> where(alg.size());
  for (std::size_t k = 0; k < gens.size(); ++k) {
    if (gens[k] >= alg.size()) throw StructuralError("generator index out of range");
    if (where[gens[k]]) throw StructuralError("duplicate generator in sub-model");
    where[gens[k]] = k;
    sub.push_back(alg.gen(gens[k]));
  }
  auto target = make_algebra(std::move(sub));
  std::vector<Element> images;
  for (std::size_t i = 0; i < alg.size(); ++i) {
    images.push_back(where[i] ? Element::generator(target, *where[i]) : Element(target));
  }
  Morphism restrict(m.algebra(), target, std::move(images));
  std::vector<Element> dimg;
  for (auto g : gens) {
    const Element& dg = m.differential().image(g);
    for (const auto& [mono, c] : dg.terms()) {
      for (std::size_t i = 0; i < mono.size(); ++i) {
        if (mono[i] != 0 && !where[i]) {
          throw StructuralError("sub-model is not closed under d: d(" + alg.gen(g).name +
                                ") involves '" + alg.gen(i).name + "'");
        }
      }
    }
    dimg.push_back(restrict.apply(dg));
  }
  return SullivanModel(target, Derivation(target, std::move(dimg)));
}

EllipticExtension elliptic_extension(const SullivanModel& m, std::span<const std::string> basis) {
  if (!m.flags().pure) throw StructuralError("elliptic extension requires a pure model");
  const auto& alg = *m.algebra();
  const auto evens = m.even_generators();

  std::vector<std::size_t> order;
  if (basis.empty()) {
    order = evens;
  } else {
    std::set<std::size_t> seen;
    for (const auto& name : basis) {
      const auto i = alg.find(name);
      if (!i || alg.is_odd(*i)) {
        throw StructuralError("basis entry '" + name + "' is not an even generator");
      }
      if (!seen.insert(*i).second) throw StructuralError("basis entry '" + name + "' repeated");
      order.push_back(*i);
    }
    if (order.size() != evens.size()) {
      throw StructuralError("basis has " + std::to_string(order.size()) + " entries but V^even has dimension " +
                            std::to_string(evens.size()));
    }
  }

  // u_i names: u1, u2, ... unless that collides, then u_<x>.
  std::vector<std::string> unames;
  bool clash = false;
  for (std::size_t i = 0; i < order.size(); ++i) {
    unames.push_back("u" + std::to_string(i + 1));
    if (alg.find(unames.back())) clash = true;
  }
  if (clash) {
    for (std::size_t i = 0; i < order.size(); ++i) {
      std::string name = "u_" + alg.gen(order[i]).name;
      while (alg.find(name)) name += "_";
      unames[i] = name;
    }
  }

  std::vector<Generator> gens = alg.generators();
  for (std::size_t i = 0; i < order.size(); ++i) {
    gens.push_back(Generator{unames[i], 2 * alg.gen(order[i]).degree - 1, 0});
  }
  auto ext = make_algebra(std::move(gens));
  const auto embed = identity_map(alg.size());
  std::vector<Element> images;
  for (std::size_t g = 0; g < alg.size(); ++g) {
    images.push_back(remap(m.differential().image(g), ext, embed));
  }
  EllipticExtension e{m, m, order, m.odd_generators(), {}};
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto x = Element::generator(ext, order[i]);
    images.push_back(x * x);
    e.u.push_back(alg.size() + i);
  }
  e.extension = SullivanModel(ext, Derivation(ext, std::move(images)));
  return e;
}

std::optional<EllipticExtension> identify_extension(const SullivanModel& m) {
  if (!m.flags().pure) return std::nullopt;
  const auto& alg = *m.algebra();
  const auto evens = m.even_generators();
  const auto odds = m.odd_generators();
  std::vector<char> used(alg.size(), 0);
  std::vector<std::size_t> u;
  for (auto x : evens) {
    const auto xx = Element::generator(m.algebra(), x) * Element::generator(m.algebra(), x);
    std::optional<std::size_t> hit;
    for (auto o : odds) {
      if (!used[o] && m.differential().image(o) == xx) {
        hit = o;
        break;
      }
    }
    if (!hit) return std::nullopt;
    used[*hit] = 1;
    u.push_back(*hit);
  }
  std::vector<std::size_t> y;
  for (auto o : odds) {
    if (!used[o]) y.push_back(o);
  }
  std::vector<std::size_t> base_gens;
  for (std::size_t i = 0; i < alg.size(); ++i) {
    if (!used[i]) base_gens.push_back(i);
  }
  EllipticExtension e{submodel(m, base_gens), m, evens, y, u};
  return e;
}

Element QuotientAlgebra::top_monomial() const {
  Monomial t(algebra->size());
  for (auto i : x) t[i] = 1;
  for (auto j : y) t[j] = 1;
  return Element::monomial(algebra, t);
}

QuotientAlgebra quotient_A(const EllipticExtension& e) {
  const auto& ext = *e.extension.algebra();
  // The quotient keeps the base generators (x's and y's) in extension order.
  std::vector<std::size_t> keep;
  std::vector<char> is_u(ext.size(), 0);
  for (auto i : e.u) is_u[i] = 1;
  for (std::size_t i = 0; i < ext.size(); ++i) {
    if (!is_u[i]) keep.push_back(i);
  }
  std::vector<std::optional<std::size_t>> where(ext.size());
  std::vector<Generator> gens;
  for (std::size_t k = 0; k < keep.size(); ++k) {
    Generator g = ext.gen(keep[k]);
    if (!g.odd()) g.cap = 1;
    where[keep[k]] = k;
    gens.push_back(g);
  }
  auto A = make_algebra(std::move(gens));
  std::vector<Element> phi_images;
  for (std::size_t i = 0; i < ext.size(); ++i) {
    phi_images.push_back(where[i] ? Element::generator(A, *where[i]) : Element(A));
  }
  Morphism phi(e.extension.algebra(), A, std::move(phi_images));
  std::vector<Element> dbar;
  for (auto i : keep) dbar.push_back(phi.apply(e.extension.differential().image(i)));

  QuotientAlgebra q{A, Derivation(A, std::move(dbar)), std::move(phi), {}, {}, 0};
  for (auto i : e.x) {
    q.x.push_back(*where[i]);
    q.top_degree += ext.gen(i).degree;
  }
  for (auto j : e.y) {
    q.y.push_back(*where[j]);
    q.top_degree += ext.gen(j).degree;
  }
  return q;
}

AlgebraPtr doubled_algebra(const Algebra& alg) {
  std::vector<Generator> gens = alg.generators();
  for (const auto& g : alg.generators()) {
    Generator p = g;
    p.name += "'";
    if (alg.find(p.name)) {
      throw StructuralError("priming '" + g.name + "' collides with an existing generator");
    }
    gens.push_back(std::move(p));
  }
  return make_algebra(std::move(gens));
}

Derivation doubled_derivation(const AlgebraPtr& doubled, const Derivation& d) {
  const std::size_t n = d.algebra()->size();
  if (doubled->size() != 2 * n) throw StructuralError("doubled algebra has the wrong size");
  const auto first = identity_map(n);
  const auto second = identity_map(n, n);
  std::vector<Element> images;
  for (std::size_t g = 0; g < n; ++g) images.push_back(remap(d.image(g), doubled, first));
  for (std::size_t g = 0; g < n; ++g) images.push_back(remap(d.image(g), doubled, second));
  return Derivation(doubled, std::move(images));
}

Morphism copy_into_double(const AlgebraPtr& alg, const AlgebraPtr& doubled, bool first) {
  const std::size_t n = alg->size();
  std::vector<Element> images;
  for (std::size_t g = 0; g < n; ++g) images.push_back(Element::generator(doubled, first ? g : g + n));
  return Morphism(alg, doubled, std::move(images));
}

Element TensorSquare::zero_divisor(std::size_t gen) const {
  return left.apply(Element::generator(base, gen)) - right.apply(Element::generator(base, gen));
}

TensorSquare tensor_square(const SullivanModel& m) {
  auto dbl = doubled_algebra(*m.algebra());
  SullivanModel sq(dbl, doubled_derivation(dbl, m.differential()));
  const std::size_t n = m.algebra()->size();
  std::vector<Element> mu_images;
  for (std::size_t g = 0; g < 2 * n; ++g) mu_images.push_back(Element::generator(m.algebra(), g % n));
  return TensorSquare{std::move(sq), m.algebra(), Morphism(dbl, m.algebra(), std::move(mu_images)),
                      copy_into_double(m.algebra(), dbl, true),
                      copy_into_double(m.algebra(), dbl, false)};
}

namespace {

int formal_dimension_estimate(const SullivanModel& m) {
  const auto& alg = *m.algebra();
  int fd = 0;
  for (std::size_t i = 0; i < alg.size(); ++i) {
    fd += alg.is_odd(i) ? alg.gen(i).degree : -(alg.gen(i).degree - 1);
  }
  return fd;
}

}  // namespace

Ellipticity is_elliptic(const SullivanModel& m, std::optional<int> window_limit) {
  if (!m.flags().pure) throw StructuralError("ellipticity test requires a pure model");
  const auto& alg = *m.algebra();
  const auto evens = m.even_generators();
  if (evens.empty()) return Ellipticity::yes;

  std::vector<Element> relations;
  for (auto y : m.odd_generators()) {
    if (!m.differential().image(y).is_zero()) relations.push_back(m.differential().image(y));
  }

  // Some x_i with no pure power among the relations survives in every degree.
  for (auto x : evens) {
    bool killed = false;
    for (const auto& f : relations) {
      for (const auto& [mono, c] : f.terms()) {
        if (mono[x] != 0 && mono.word_length() == mono[x]) killed = true;
      }
    }
    if (!killed) return Ellipticity::no;
  }

  int max_x = 0;
  for (auto x : evens) max_x = std::max(max_x, alg.gen(x).degree);
  const int limit =
      window_limit.value_or(4 * std::max(formal_dimension_estimate(m), max_x) + max_x);

  auto even_only = [&](const Monomial& mono) {
    for (std::size_t i = 0; i < mono.size(); ++i) {
      if (mono[i] != 0 && alg.is_odd(i)) return false;
    }
    return true;
  };

  int zeros = 0;
  for (int n = 1; n <= limit; ++n) {
    const auto basis = alg.monomials_of_degree(n, even_only);
    if (basis.empty()) {
      if (++zeros >= max_x) return Ellipticity::yes;
      continue;
    }
    std::map<Monomial, std::size_t> index;
    for (std::size_t k = 0; k < basis.size(); ++k) index.emplace(basis[k], k);
    Reducer red;
    for (const auto& f : relations) {
      const int e = *f.degree();
      if (e > n) continue;
      for (const auto& mono : alg.monomials_of_degree(n - e, even_only)) {
        const Element g = Element::monomial(m.algebra(), mono) * f;
        SparseVec v;
        for (const auto& [t, c] : g.terms()) v.emplace_back(index.at(t), c);
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        red.insert(std::move(v));
        if (red.rank() == basis.size()) break;
      }
      if (red.rank() == basis.size()) break;
    }
    if (red.rank() == basis.size()) {
      if (++zeros >= max_x) return Ellipticity::yes;
    } else {
      zeros = 0;
    }
  }
  return Ellipticity::unknown;
}

int formal_dimension(const SullivanModel& m) {
  if (is_elliptic(m) != Ellipticity::yes) {
    throw NotComputable("formal dimension requires a model verified elliptic");
  }
  return formal_dimension_estimate(m);
}

SullivanModel change_even_basis(const SullivanModel& m, std::span<const std::string> names,
                                const std::vector<std::vector<Rational>>& matrix) {
  if (!m.flags().pure) throw StructuralError("change of even basis requires a pure model");
  const auto& alg = *m.algebra();
  const auto evens = m.even_generators();
  const std::size_t n = evens.size();
  if (names.size() != n || matrix.size() != n) {
    throw StructuralError("change of basis needs " + std::to_string(n) + " new generators");
  }
  std::vector<int> degree(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != n) throw StructuralError("change-of-basis matrix is not square");
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(matrix[i][j]) == 0) continue;
      const int dj = alg.gen(evens[j]).degree;
      if (degree[i] != 0 && degree[i] != dj) {
        throw StructuralError("change-of-basis row " + std::to_string(i + 1) + " mixes degrees");
      }
      degree[i] = dj;
    }
  }
  const auto inv = invert(matrix);
  if (!inv) throw StructuralError("change-of-basis matrix is singular");

  // New generator list: the i-th even slot holds x̃_i, odd generators unchanged.
  std::vector<Generator> gens = alg.generators();
  for (std::size_t i = 0; i < n; ++i) gens[evens[i]] = Generator{names[i], degree[i], 0};
  auto target = make_algebra(std::move(gens));

  // x_j = Σ_i (P^{-1})_{ji} x̃_i
  std::vector<Element> images(alg.size());
  for (std::size_t g = 0; g < alg.size(); ++g) images[g] = Element::generator(target, g);
  for (std::size_t j = 0; j < n; ++j) {
    Element e(target);
    for (std::size_t i = 0; i < n; ++i) {
      if (sgn((*inv)[j][i]) != 0) e += (*inv)[j][i] * Element::generator(target, evens[i]);
    }
    images[evens[j]] = e;
  }
  Morphism sub(m.algebra(), target, std::move(images));
  std::vector<Element> dimg;
  for (std::size_t g = 0; g < alg.size(); ++g) dimg.push_back(sub.apply(m.differential().image(g)));
  return SullivanModel(target, Derivation(target, std::move(dimg)));
}

}  // namespace sullivan
