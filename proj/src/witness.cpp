#include "sullivan/witness.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "sullivan/cohom.hpp"
#include "sullivan/error.hpp"
#include "sullivan/invar.hpp"
#include "sullivan/kernels.hpp"
#include "sullivan/linalg.hpp"

namespace sullivan {

namespace {

std::string fresh_name(const Algebra& alg, const std::vector<Generator>& extra, std::string name) {
  auto taken = [&](const std::string& s) {
    return alg.find(s) || std::any_of(extra.begin(), extra.end(), [&](const Generator& g) { return g.name == s; });
  };
  while (taken(name)) name += "_";
  return name;
}

// Same element in an algebra whose generator list starts with this one's.
Element widen(const Element& a, const AlgebraPtr& target) {
  Element out(target);
  for (const auto& [m, c] : a.terms()) {
    Monomial t(target->size());
    for (std::size_t i = 0; i < m.size(); ++i) t[i] = m[i];
    out.add_term(t, c);
  }
  return out;
}

// Inverse of widen on elements that avoid the extra generators.
Element narrow(const Element& a, const AlgebraPtr& target) {
  Element out(target);
  for (const auto& [m, c] : a.terms()) {
    Monomial t(target->size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i < t.size()) {
        t[i] = m[i];
      } else if (m[i] != 0) {
        throw StructuralError("element involves generators outside the target algebra");
      }
    }
    out.add_term(t, c);
  }
  return out;
}

// Multiplies the factors left to right, dropping terms that can no longer
// collect all of `odd_set` (each factor is linear in those generators).
Element expand_full(const AlgebraPtr& alg, const std::vector<Element>& factors, const std::vector<std::size_t>& odd_set) {
  Element acc = Element::one(alg);
  for (std::size_t f = 0; f < factors.size(); ++f) {
    acc = kernels::multiply(acc, factors[f]);
    const std::size_t remaining = factors.size() - f - 1;
    Element kept(alg);
    for (const auto& [m, c] : acc.terms()) {
      std::size_t have = 0;
      for (auto s : odd_set) have += m[s];
      if (have + remaining >= odd_set.size()) kept.add_term(m, c);
    }
    acc = std::move(kept);
  }
  return acc;
}

Element coefficient_of_all(const Element& a, const std::vector<std::size_t>& odd_set) {
  Monomial key(a.algebra()->size());
  for (auto s : odd_set) key[s] = 1;
  auto parts = coefficient_of(a, odd_set);
  auto it = parts.find(key);
  return it == parts.end() ? Element(a.algebra()) : it->second;
}

Element product_of(const AlgebraPtr& alg, const std::vector<Element>& factors) {
  return product(alg, std::span<const Element>(factors));
}

Element term_value(const AlgebraPtr& alg, const KernelTerm& t) {
  return t.coeff * kernels::multiply(product_of(alg, t.factors), t.cofactor);
}

Element block_sum(const AlgebraPtr& alg, const std::vector<KernelTerm>& terms) {
  Element out(alg);
  for (const auto& t : terms) out += term_value(alg, t);
  return out;
}

int permutation_sign(std::vector<std::size_t> seq) {
  int sign = 1;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    for (std::size_t j = i + 1; j < seq.size(); ++j) {
      if (seq[i] > seq[j]) sign = -sign;
    }
  }
  return sign;
}

bool is_power_of_two(Rational r) {
  if (sgn(r) < 0) r = -r;
  if (r.get_den() != 1) return false;
  mpz_class n = r.get_num();
  return n > 0 && (n & (n - 1)) == 0;
}

int exponent_of_two(Rational r) {
  if (sgn(r) < 0) r = -r;
  mpz_class n = r.get_num();
  int k = 0;
  while (n > 1) {
    n /= 2;
    ++k;
  }
  return k;
}

std::string sign_string(const Rational& r) { return to_string(r); }

}  // namespace

// ---------------------------------------------------------------------------

std::vector<QuadraticForm> quadratic_forms(const EllipticExtension& e) {
  const auto& alg = *e.extension.algebra();
  std::vector<std::optional<std::size_t>> pos(alg.size());
  for (std::size_t k = 0; k < e.x.size(); ++k) pos[e.x[k]] = k;
  const std::size_t n = e.n();
  std::vector<QuadraticForm> out;
  for (auto yj : e.y) {
    QuadraticForm f{std::vector<Rational>(n, 0), std::vector<std::vector<Rational>>(n, std::vector<Rational>(n, 0))};
    for (const auto& [m, c] : e.extension.differential().image(yj).terms()) {
      std::vector<std::size_t> hit;
      int total = 0;
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (!pos[i]) {
          throw NotComputable("d(" + alg.gen(yj).name + ") involves '" + alg.gen(i).name + "', not only the x's");
        }
        hit.push_back(*pos[i]);
        total += m[i];
      }
      if (total != 2) throw NotComputable("d(" + alg.gen(yj).name + ") is not quadratic");
      if (hit.size() == 1) {
        f.square[hit[0]] += c;
      } else {
        f.cross[std::min(hit[0], hit[1])][std::max(hit[0], hit[1])] += c;
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

DiagonalContext::DiagonalContext(EllipticExtension e, bool adjoined)
    : e_(std::move(e)),
      adjoined_(adjoined),
      q_(quotient_A(e_)),
      sq_(tensor_square(e_.extension)),
      aa_(doubled_algebra(*q_.algebra)),
      aa_d_(doubled_derivation(aa_, q_.d)),
      a_left_(copy_into_double(q_.algebra, aa_, true)),
      a_right_(copy_into_double(q_.algebra, aa_, false)) {
  const std::size_t N = e_.extension.algebra()->size();
  std::vector<Element> images;
  for (std::size_t g = 0; g < N; ++g) images.push_back(a_left_.apply(q_.phi.image(g)));
  for (std::size_t g = 0; g < N; ++g) images.push_back(a_right_.apply(q_.phi.image(g)));
  phi2_ = Morphism(sq_.model.algebra(), aa_, std::move(images));
  top_ = image_left(q_.top_monomial()) * image_right(q_.top_monomial());

  // x_[n]y_[m] spans the top degree of A; it is a non-zero class exactly when
  // nothing of degree D−1 hits it, and then its square spans H^top(A⊗A').
  if (q_.top_degree > 0) {
    for (const auto& m : q_.algebra->monomials_of_degree(q_.top_degree - 1)) {
      if (!q_.d.apply(m).is_zero()) throw ConstructionError("top monomial of A is a coboundary");
    }
  }

  try {
    forms_ = quadratic_forms(e_);
  } catch (const NotComputable& err) {
    form_error_ = err.what();
  }
}

const QuadraticForm& DiagonalContext::form(std::size_t j) const {
  if (!form_error_.empty()) throw NotComputable(form_error_);
  return forms_.at(j);
}

std::optional<Rational> DiagonalContext::top_multiple(const Element& e) const {
  if (e.is_zero()) return Rational(0);
  if (e.size() != 1) return std::nullopt;
  const auto& [m, c] = *e.terms().begin();
  const auto& [tm, tc] = *top_.terms().begin();
  if (m != tm) return std::nullopt;
  return Rational(c / tc);
}

// ---------------------------------------------------------------------------

Element omega_single(const EllipticExtension& e) {
  const auto forms = quadratic_forms(e);
  const auto& W = e.extension.algebra();
  const std::size_t N = W->size(), n = e.n();

  std::vector<Generator> gens = W->generators();
  std::vector<Generator> bars;
  for (auto xi : e.x) {
    bars.push_back(Generator{fresh_name(*W, bars, "bar_" + W->gen(xi).name), W->gen(xi).degree - 1, 0});
  }
  gens.insert(gens.end(), bars.begin(), bars.end());
  auto T = make_algebra(std::move(gens));
  std::vector<std::size_t> bar_idx;
  for (std::size_t i = 0; i < n; ++i) bar_idx.push_back(N + i);

  auto g = [&](std::size_t idx) { return Element::generator(T, idx); };
  std::vector<Element> factors;
  for (std::size_t j = 0; j < e.m(); ++j) {
    Element f = g(e.y[j]);
    for (std::size_t k = 0; k < n; ++k) {
      if (sgn(forms[j].square[k]) != 0) f -= forms[j].square[k] * (g(e.x[k]) * g(bar_idx[k]));
      for (std::size_t q = k + 1; q < n; ++q) {
        if (sgn(forms[j].cross[k][q]) != 0) f -= forms[j].cross[k][q] * (g(e.x[k]) * g(bar_idx[q]));
      }
    }
    factors.push_back(std::move(f));
  }
  for (std::size_t i = 0; i < n; ++i) factors.push_back(g(e.u[i]) - g(e.x[i]) * g(bar_idx[i]));

  // Sanity: every factor is a cocycle in ΛW ⊗ ΛX̄.
  std::vector<Element> dT;
  for (std::size_t i = 0; i < N; ++i) dT.push_back(widen(e.extension.differential().image(i), T));
  for (std::size_t i = 0; i < n; ++i) dT.push_back(g(e.x[i]));
  Derivation d(T, std::move(dT));
  for (const auto& f : factors) {
    if (!d.apply(f).is_zero()) throw ConstructionError("ω factor is not a cocycle");
  }

  Element omega = narrow(coefficient_of_all(expand_full(T, factors, bar_idx), bar_idx), W);
  if (!e.extension.d(omega).is_zero()) throw ConstructionError("dω ≠ 0");

  auto q = quotient_A(e);
  Element expected = q.top_monomial();
  if (n % 2) expected = -expected;
  if (q.phi.apply(omega) != expected) throw ConstructionError("φ(ω) ≠ (−1)^n x_[n]y_[m]");
  return omega;
}

// ---------------------------------------------------------------------------

KernelBlock omega_block(const DiagonalContext& ctx) {
  const auto& e = ctx.extension();
  const std::size_t n = e.n(), m = e.m();
  const auto& WW = ctx.square().model.algebra();
  const std::size_t NN = WW->size();

  // T = ΛW ⊗ ΛW' ⊗ Λ(σ_i), σ_i = x̄_i + x̄_i', dσ_i = x_i + x_i'.
  std::vector<Generator> gens = WW->generators();
  std::vector<Generator> sig;
  for (auto xi : e.x) {
    const auto& g = e.extension.algebra()->gen(xi);
    sig.push_back(Generator{fresh_name(*WW, sig, "sigma_" + g.name), g.degree - 1, 0});
  }
  gens.insert(gens.end(), sig.begin(), sig.end());
  auto T = make_algebra(std::move(gens));
  std::vector<std::size_t> sigma;
  for (std::size_t i = 0; i < n; ++i) sigma.push_back(NN + i);

  auto inT = [&](const Element& a) { return widen(a, T); };
  auto s = [&](std::size_t i) { return Element::generator(T, sigma[i]); };
  std::vector<Element> D, Dt;
  for (std::size_t k = 0; k < n; ++k) {
    D.push_back(ctx.difference(ctx.x(k)));
    Dt.push_back(inT(D.back()));
  }

  // Linear σ-coefficients L[f][k] of each factor, and its σ-free part.
  std::vector<Element> free_part;
  std::vector<std::vector<Element>> L(m + n, std::vector<Element>(n, Element(WW)));
  for (std::size_t j = 0; j < m; ++j) {
    const auto& f = ctx.form(j);
    free_part.push_back(ctx.difference(ctx.y(j)));
    for (std::size_t k = 0; k < n; ++k) {
      Element c = -f.square[k] * D[k];
      for (std::size_t p = 0; p < n; ++p) {
        if (p == k) continue;
        const Rational& b = p < k ? f.cross[p][k] : f.cross[k][p];
        if (sgn(b) != 0) c -= make_rational(1, 2) * b * D[p];
      }
      L[j][k] = std::move(c);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    free_part.push_back(ctx.difference(ctx.u(i)));
    L[m + i][i] = -D[i];
  }

  std::vector<Element> factors;
  for (std::size_t f = 0; f < m + n; ++f) {
    Element t = inT(free_part[f]);
    for (std::size_t k = 0; k < n; ++k) {
      if (!L[f][k].is_zero()) t += inT(L[f][k]) * s(k);
    }
    factors.push_back(std::move(t));
  }

  std::vector<Element> dT;
  for (std::size_t i = 0; i < NN; ++i) dT.push_back(widen(ctx.square().model.differential().image(i), T));
  for (std::size_t i = 0; i < n; ++i) dT.push_back(inT(ctx.left(ctx.x(i)) + ctx.right(ctx.x(i))));
  Derivation d(T, std::move(dT));
  for (const auto& f : factors) {
    if (!d.apply(f).is_zero()) throw ConstructionError("Ω factor is not a cocycle");
  }

  KernelBlock block;
  block.name = "Omega";
  block.power = static_cast<int>(n + m);
  block.value = narrow(coefficient_of_all(expand_full(T, factors, sigma), sigma), WW);

  // Decomposition: every way of drawing each σ_k from a distinct factor.
  // The free parts are odd and the σ-coefficients even, so moving σ's to the
  // right only costs signs where a free part passes an odd number of σ's.
  std::vector<Element> chosen;
  std::vector<std::size_t> order;
  std::vector<char> used(n, 0);
  std::function<void(std::size_t, int)> walk = [&](std::size_t f, int sign) {
    if (f == m + n) {
      if (order.size() != n) return;
      block.terms.push_back(KernelTerm{Rational(sign * permutation_sign(order)), chosen, Element::one(WW)});
      return;
    }
    if (n - order.size() > m + n - f) return;
    chosen.push_back(free_part[f]);
    walk(f + 1, order.size() % 2 ? -sign : sign);
    chosen.pop_back();
    for (std::size_t k = 0; k < n; ++k) {
      if (used[k] || L[f][k].is_zero()) continue;
      used[k] = 1;
      order.push_back(k);
      chosen.push_back(L[f][k]);
      walk(f + 1, sign);
      chosen.pop_back();
      order.pop_back();
      used[k] = 0;
    }
  };
  walk(0, 1);
  return block;
}

Element omega_A(const DiagonalContext& ctx) {
  const auto& q = ctx.quotient();
  Element out = Element::one(ctx.quotient_square());
  auto diff = [&](std::size_t g) {
    const auto a = Element::generator(q.algebra, g);
    return ctx.image_left(a) - ctx.image_right(a);
  };
  for (auto i : q.x) out = out * diff(i);
  for (auto j : q.y) out = out * diff(j);
  return out;
}

WitnessCertificate omega_diagonal(const DiagonalContext& ctx) {
  const auto& WW = ctx.square().model.algebra();
  const std::size_t n = ctx.extension().n();
  WitnessCertificate c;
  c.construction = "omega";
  c.blocks.push_back(omega_block(ctx));
  const auto& omega = c.blocks.back().value;
  c.power = c.blocks.back().power;
  c.cofactor = Element::one(WW);
  c.product = omega;

  Element oa = omega_A(ctx);
  Element expected = n % 2 ? -oa : oa;
  if (ctx.image(omega) != expected) throw ConstructionError("(φ⊗φ)(Ω) ≠ (−1)^n Ω_A");
  c.pairing = ctx.image_right(ctx.quotient().top_monomial());
  c.image = kernels::multiply(ctx.image(omega), c.pairing);
  auto lambda = ctx.top_multiple(c.image);
  if (!lambda || sgn(*lambda) == 0) throw ConstructionError("[Ω_A]·[ω'_A] is not a non-zero multiple of the top class");
  c.scalar = *lambda;
  c.model_lower_bound = ctx.adjoined() ? c.power - static_cast<int>(n) : c.power;
  verify_certificate(ctx, c);
  return c;
}

// ---------------------------------------------------------------------------

Element lift_cocycle(const DiagonalContext& ctx, const Element& a) {
  const auto& e = ctx.extension();
  const auto& q = ctx.quotient();
  const auto& W = e.extension.algebra();
  if (!same_algebra(a.algebra(), q.algebra)) throw StructuralError("lift_cocycle expects an element of A");
  if (!q.d.apply(a).is_zero()) throw StructuralError("lift_cocycle expects a cocycle");

  // A generator k sits at extension index where[k].
  std::vector<std::size_t> where(q.algebra->size());
  for (std::size_t g = 0; g < W->size(); ++g) {
    const auto& img = q.phi.image(g);
    if (img.is_zero()) continue;
    const auto& mono = img.terms().begin()->first;
    for (std::size_t k = 0; k < mono.size(); ++k) {
      if (mono[k]) where[k] = g;
    }
  }
  std::vector<char> is_u(W->size(), 0);
  for (auto i : e.u) is_u[i] = 1;
  auto in_kernel = [&](const Monomial& mono) {
    for (std::size_t i = 0; i < mono.size(); ++i) {
      if (mono[i] == 0) continue;
      if (is_u[i] || (!W->is_odd(i) && mono[i] >= 2)) return true;
    }
    return false;
  };

  Element out(W);
  for (const auto& [deg, part] : a.by_degree()) {
    Element emb(W);
    for (const auto& [m, c] : part.terms()) {
      Monomial t(W->size());
      for (std::size_t k = 0; k < m.size(); ++k) {
        if (m[k]) t[where[k]] = m[k];
      }
      emb.add_term(t, c);
    }
    const Element r = e.extension.d(emb);
    if (!r.is_zero()) {
      const auto basis = W->monomials_of_degree(deg, in_kernel);
      const auto images = kernels::apply_to_basis(e.extension.differential(), basis);
      std::map<Monomial, std::size_t> index;
      auto column = [&](const Element& v) {
        SparseVec col;
        for (const auto& [mono, c] : v.terms()) col.emplace_back(index.emplace(mono, index.size()).first->second, c);
        std::sort(col.begin(), col.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        return col;
      };
      std::vector<SparseVec> columns;
      for (const auto& img : images) columns.push_back(column(img));
      const SparseVec target = column(-r);
      auto sol = solve(columns, target);
      if (!sol) throw ConstructionError("no cocycle of ΛW lifts the class through φ");
      for (const auto& [k, c] : *sol) emb.add_term(basis[k], c);
    }
    out += emb;
  }
  if (!e.extension.d(out).is_zero()) throw ConstructionError("lift is not a cocycle");
  if (q.phi.apply(out) != a) throw ConstructionError("lift does not map onto the representative");
  return out;
}

WitnessCertificate theorem51_certificate(const DiagonalContext& ctx, std::span<const std::size_t> classes) {
  const auto& q = ctx.quotient();
  const auto& WW = ctx.square().model.algebra();
  const std::size_t n = ctx.extension().n();
  auto h = bigraded_cohomology(q);
  CohomologyRing ring(h);

  SparseVec z = unit_vector(0);  // class of 1
  if (h.cls(0).degree != 0) throw ConstructionError("first class of the table is not the unit");
  for (auto k : classes) {
    if (k >= h.size()) throw StructuralError("not a valid L-witness: class index out of range");
    if (h.cls(k).block.first % 2 == 0) throw StructuralError("not a valid L-witness: class has even x-word length");
    z = ring.multiply(z, unit_vector(k));
  }
  if (z.empty()) throw StructuralError("not a valid L-witness: the product vanishes");
  const auto top = fundamental_class(q, h);
  const auto zhat = poincare_dual(ring, z, top);

  WitnessCertificate c;
  c.construction = "theorem51";
  c.blocks.push_back(omega_block(ctx));
  for (auto k : classes) {
    Element lift = lift_cocycle(ctx, h.cls(k).rep);
    KernelBlock b;
    b.name = "lift_difference";
    b.power = 1;
    b.value = ctx.difference(lift);
    b.terms.push_back(KernelTerm{1, {b.value}, Element::one(WW)});
    c.blocks.push_back(std::move(b));
  }
  c.cofactor = ctx.left(lift_cocycle(ctx, h.representative(zhat)));
  c.pairing = Element::one(ctx.quotient_square());

  c.product = Element::one(WW);
  c.image = Element::one(ctx.quotient_square());
  for (const auto& b : c.blocks) {
    c.power += b.power;
    c.product = kernels::multiply(c.product, b.value);
    c.image = kernels::multiply(c.image, ctx.image(b.value));
  }
  c.product = kernels::multiply(c.product, c.cofactor);
  c.image = kernels::multiply(c.image, ctx.image(c.cofactor));
  auto lambda = ctx.top_multiple(c.image);
  if (!lambda || sgn(*lambda) == 0) throw ConstructionError("L-witness product has vanishing image");
  c.scalar = *lambda;
  c.model_lower_bound = ctx.adjoined() ? c.power - static_cast<int>(n) : c.power;
  verify_certificate(ctx, c);
  return c;
}

WitnessCertificate theorem51_certificate(const DiagonalContext& ctx) {
  auto h = bigraded_cohomology(ctx.quotient());
  CohomologyRing ring(h);
  const auto l = L_invariant(ring);
  return theorem51_certificate(ctx, l.witness);
}

// ---------------------------------------------------------------------------

BetaPair lemma54_beta(const DiagonalContext& ctx, std::span<const std::size_t> xs, std::size_t j) {
  const auto& e = ctx.extension();
  const auto& WW = ctx.square().model.algebra();
  const auto& f = ctx.form(j);
  const Rational half = make_rational(1, 2);
  std::vector<char> in(e.n(), 0);
  for (auto k : xs) {
    if (k >= e.n() || in[k]) throw StructuralError("lemma54_beta: bad x positions");
    in[k] = 1;
  }
  for (std::size_t k = 0; k < e.n(); ++k) {
    if (in[k]) continue;
    bool touches = sgn(f.square[k]) != 0;
    for (std::size_t p = 0; p < e.n(); ++p) {
      if (p != k && sgn(p < k ? f.cross[p][k] : f.cross[k][p]) != 0) touches = true;
    }
    if (touches) throw StructuralError("d(y) involves an x outside the chosen sub-extension");
  }

  // Y = y − Σ a_k u_k, so dY has no squares and φ(Y) = y.
  Element Y = ctx.y(j);
  for (auto k : xs) {
    if (sgn(f.square[k]) != 0) Y -= f.square[k] * ctx.u(k);
  }
  const Element Yp = ctx.right(Y);
  const Element Yd = ctx.difference(Y);
  auto D = [&](std::size_t k) { return ctx.difference(ctx.x(k)); };
  auto U = [&](std::size_t k) { return ctx.difference(ctx.u(k)); };
  auto xp = [&](std::size_t k) { return ctx.right(ctx.x(k)); };
  auto up = [&](std::size_t k) { return ctx.right(ctx.u(k)); };
  auto pi = [&](std::initializer_list<std::size_t> skip) {
    std::vector<Element> out;
    for (auto k : xs) {
      if (std::find(skip.begin(), skip.end(), k) == skip.end()) out.push_back(D(k));
    }
    return out;
  };
  auto with = [](std::vector<Element> v, std::initializer_list<Element> more) {
    v.insert(v.end(), more.begin(), more.end());
    return v;
  };

  std::vector<KernelTerm> theta, theta_hat, half_sum;
  theta.push_back(KernelTerm{1, pi({}), Yp});
  for (auto l : xs) {
    half_sum.push_back(KernelTerm{half, with(pi({l}), {Yd}), xp(l)});
    theta.push_back(half_sum.back());
  }
  std::vector<std::size_t> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t a = 0; a < sorted.size(); ++a) {
    for (std::size_t b = a + 1; b < sorted.size(); ++b) {
      const std::size_t i = sorted[a], k = sorted[b];
      const Rational& beta = f.cross[i][k];
      if (sgn(beta) == 0) continue;
      const Rational h = half * beta;
      theta_hat.push_back(KernelTerm{h, with(pi({i, k}), {U(k), D(i)}), xp(i)});
      theta_hat.push_back(KernelTerm{h, with(pi({i, k}), {U(i), D(k)}), xp(k)});
      theta_hat.push_back(KernelTerm{h, with(pi({i, k}), {D(k), D(k)}), up(i)});
      theta_hat.push_back(KernelTerm{h, with(pi({i, k}), {D(i), D(i)}), up(k)});
      for (auto l : sorted) {
        if (l == i || l == k) continue;
        const Rational qtr = half * h;
        theta_hat.push_back(KernelTerm{qtr, with(pi({i, k, l}), {D(i), D(i), U(k)}), xp(l)});
        theta_hat.push_back(KernelTerm{qtr, with(pi({i, k, l}), {D(k), D(k), U(i)}), xp(l)});
      }
    }
  }

  BetaPair out;
  out.theta = block_sum(WW, theta);
  out.theta_hat = block_sum(WW, theta_hat);
  out.gamma = out.theta_hat - block_sum(WW, half_sum);
  out.beta.name = "beta";
  out.beta.power = static_cast<int>(xs.size());
  out.beta.terms = theta;
  for (auto t : theta_hat) {
    t.coeff = -t.coeff;
    out.beta.terms.push_back(std::move(t));
  }
  out.beta.value = out.theta - out.theta_hat;

  const auto& d = ctx.square().model;
  if (d.d(out.theta) != d.d(out.theta_hat)) throw ConstructionError("dθ ≠ dθ̂");
  if (!d.d(out.beta.value).is_zero()) throw ConstructionError("dβ ≠ 0");
  if (!ctx.image(out.theta_hat).is_zero()) throw ConstructionError("(φ⊗φ)(θ̂) ≠ 0");
  if (ctx.image(out.gamma) != -ctx.image(block_sum(WW, half_sum))) {
    throw ConstructionError("(φ⊗φ)(γ) ≠ −½ Σ x_l' π_⟨l⟩ (y − y')");
  }
  return out;
}

BetaPair lemma54_beta(const DiagonalContext& ctx) {
  if (ctx.extension().m() != 1) {
    throw StructuralError("lemma54_beta needs exactly one odd base generator, found " +
                          std::to_string(ctx.extension().m()));
  }
  std::vector<std::size_t> xs(ctx.extension().n());
  for (std::size_t k = 0; k < xs.size(); ++k) xs[k] = k;
  return lemma54_beta(ctx, xs, 0);
}

namespace {

WitnessCertificate assemble(const DiagonalContext& ctx, std::string name, std::vector<KernelBlock> blocks,
                            int expected_two_power) {
  const auto& WW = ctx.square().model.algebra();
  WitnessCertificate c;
  c.construction = std::move(name);
  c.blocks = std::move(blocks);
  c.cofactor = Element::one(WW);
  c.pairing = Element::one(ctx.quotient_square());
  c.product = Element::one(WW);
  c.image = Element::one(ctx.quotient_square());
  for (const auto& b : c.blocks) {
    c.power += b.power;
    c.product = kernels::multiply(c.product, b.value);
    c.image = kernels::multiply(c.image, ctx.image(b.value));
  }
  auto lambda = ctx.top_multiple(c.image);
  if (!lambda || !is_power_of_two(*lambda) || exponent_of_two(*lambda) != expected_two_power) {
    throw ConstructionError(c.construction + ": image is not ±2^" + std::to_string(expected_two_power) +
                            " times the top class" + (lambda ? " (got " + sign_string(*lambda) + ")" : ""));
  }
  c.scalar = *lambda;
  c.model_lower_bound = ctx.adjoined() ? c.power - static_cast<int>(ctx.extension().n()) : c.power;
  verify_certificate(ctx, c);
  return c;
}

}  // namespace

WitnessCertificate theorem53_certificate(const DiagonalContext& ctx) {
  auto bp = lemma54_beta(ctx);
  return assemble(ctx, "theorem53", {omega_block(ctx), std::move(bp.beta)}, static_cast<int>(ctx.extension().n()));
}

std::optional<FamilyPartition> find_family_partition(const DiagonalContext& ctx) {
  const auto& e = ctx.extension();
  const std::size_t n = e.n(), m = e.m();
  if (n == 0 || m == 0) return std::nullopt;
  auto b = [](const QuadraticForm& f, std::size_t p, std::size_t q) -> const Rational& {
    return p < q ? f.cross[p][q] : f.cross[q][p];
  };
  for (std::size_t xn = n; xn-- > 0;) {
    for (std::size_t y1 = 0; y1 < m; ++y1) {
      bool ok = sgn(ctx.form(y1).square[xn]) == 0;
      for (std::size_t p = 0; p < n && ok; ++p) {
        if (p != xn && sgn(b(ctx.form(y1), p, xn)) != 0) ok = false;
      }
      for (std::size_t j = 0; j < m && ok; ++j) {
        if (j == y1) continue;
        const auto& f = ctx.form(j);
        for (std::size_t p = 0; p < n && ok; ++p) {
          if (p == xn) continue;
          if (sgn(f.square[p]) != 0) ok = false;
          for (std::size_t q = p + 1; q < n && ok; ++q) {
            if (q != xn && sgn(f.cross[p][q]) != 0) ok = false;
          }
        }
      }
      if (ok) return FamilyPartition{xn, y1};
    }
  }
  return std::nullopt;
}

WitnessCertificate special_family_certificate(const DiagonalContext& ctx, std::optional<FamilyPartition> partition) {
  const auto& e = ctx.extension();
  const auto found = find_family_partition(ctx);
  if (!found) throw NotComputable("family conditions unsatisfied");
  FamilyPartition p = partition.value_or(*found);
  if (partition) {
    // Validate the caller's choice with the same test.
    if (p.xn >= e.n() || p.y1 >= e.m()) throw NotComputable("family conditions unsatisfied");
    const auto& f1 = ctx.form(p.y1);
    bool ok = sgn(f1.square[p.xn]) == 0;
    for (std::size_t k = 0; k < e.n(); ++k) {
      if (k != p.xn && sgn(k < p.xn ? f1.cross[k][p.xn] : f1.cross[p.xn][k]) != 0) ok = false;
    }
    for (std::size_t j = 0; j < e.m(); ++j) {
      if (j == p.y1) continue;
      const auto& f = ctx.form(j);
      for (std::size_t a = 0; a < e.n(); ++a) {
        if (a == p.xn) continue;
        if (sgn(f.square[a]) != 0) ok = false;
        for (std::size_t b = a + 1; b < e.n(); ++b) {
          if (b != p.xn && sgn(f.cross[a][b]) != 0) ok = false;
        }
      }
    }
    if (!ok) throw NotComputable("family conditions unsatisfied");
  }

  std::vector<std::size_t> xs;
  for (std::size_t k = 0; k < e.n(); ++k) {
    if (k != p.xn) xs.push_back(k);
  }
  auto bp = lemma54_beta(ctx, xs, p.y1);
  bp.beta.name = "beta1";

  // a = x_n y_2⋯y_m − ε, lifted from the A-cocycle x_n·y_2⋯y_m.
  const auto& q = ctx.quotient();
  Element a = Element::generator(q.algebra, q.x[p.xn]);
  for (std::size_t j = 0; j < e.m(); ++j) {
    if (j != p.y1) a = a * Element::generator(q.algebra, q.y[j]);
  }
  KernelBlock tail;
  tail.name = "family_tail";
  tail.power = 1;
  tail.value = ctx.difference(lift_cocycle(ctx, a));
  tail.terms.push_back(KernelTerm{1, {tail.value}, Element::one(ctx.square().model.algebra())});

  return assemble(ctx, "family4", {omega_block(ctx), std::move(bp.beta), std::move(tail)},
                  static_cast<int>(e.n()));
}

// ---------------------------------------------------------------------------

bool lemma52_check(const AlgebraPtr& alg, std::span<const std::size_t> subset) {
  auto dbl = doubled_algebra(*alg);
  const std::size_t N = alg->size();
  std::vector<std::size_t> ys;
  for (std::size_t i = 0; i < N; ++i) {
    if (alg->is_odd(i)) ys.push_back(i);
  }
  Element P = Element::one(dbl);
  for (auto y : ys) P = P * (Element::generator(dbl, y) - Element::generator(dbl, y + N));
  Element lhs = P, rhs = P;
  for (auto k : subset) {
    if (k >= ys.size()) throw StructuralError("lemma52_check: index out of range");
    lhs = lhs * Element::generator(dbl, ys[k]);
    rhs = rhs * Element::generator(dbl, ys[k] + N);
  }
  return lhs == rhs;
}

void verify_certificate(const DiagonalContext& ctx, const WitnessCertificate& c) {
  const auto& WW = ctx.square().model.algebra();
  const auto& sq = ctx.square();
  auto fail = [&](const std::string& what) { throw ConstructionError(c.construction + " certificate: " + what); };

  int power = 0;
  Element product = Element::one(WW);
  Element image = Element::one(ctx.quotient_square());
  for (const auto& b : c.blocks) {
    power += b.power;
    for (const auto& t : b.terms) {
      if (static_cast<int>(t.factors.size()) < b.power) fail(b.name + " has a term with too few kernel factors");
      for (const auto& f : t.factors) {
        if (!sq.mu.apply(f).is_zero()) fail(b.name + " has a factor outside ker μ");
      }
    }
    if (block_sum(WW, b.terms) != b.value) fail(b.name + " differs from its kernel decomposition");
    if (!sq.model.d(b.value).is_zero()) fail(b.name + " is not a cocycle");
    product = kernels::multiply(product, b.value);
    image = kernels::multiply(image, ctx.image(b.value));
  }
  if (power != c.power) fail("power does not match the blocks");
  if (!sq.model.d(c.cofactor).is_zero()) fail("cofactor is not a cocycle");
  product = kernels::multiply(product, c.cofactor);
  if (product != c.product) fail("stored product differs from the blocks");
  if (!sq.model.d(product).is_zero()) fail("product is not a cocycle");
  image = kernels::multiply(kernels::multiply(image, ctx.image(c.cofactor)), c.pairing);
  if (image != c.image) fail("stored image differs from (φ⊗φ)(product)");
  auto lambda = ctx.top_multiple(image);
  if (!lambda || sgn(*lambda) == 0 || *lambda != c.scalar) fail("image is not the recorded non-zero multiple of the top class");
}

}  // namespace sullivan
