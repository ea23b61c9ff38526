#include "sullivan/element.hpp"

#include <unordered_map>

#include "sullivan/error.hpp"
#include "sullivan/kernels.hpp"

namespace sullivan {

Element Element::scalar(AlgebraPtr alg, const Rational& c) {
  Element e(alg);
  e.add_term(alg->one(), c);
  return e;
}

Element Element::generator(AlgebraPtr alg, std::size_t index) {
  if (index >= alg->size()) throw StructuralError("generator index out of range");
  Element e(alg);
  e.add_term(alg->generator_monomial(index), 1);
  return e;
}

Element Element::generator(AlgebraPtr alg, std::string_view name) {
  const auto i = alg->index(name);
  return generator(std::move(alg), i);
}

Element Element::monomial(AlgebraPtr alg, Monomial m, const Rational& c) {
  if (m.size() != alg->size()) throw StructuralError("monomial does not belong to the algebra");
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] > alg->max_exponent(i)) return Element(alg);
  }
  Element e(alg);
  e.add_term(m, c);
  return e;
}

std::optional<int> Element::degree() const {
  if (terms_.empty()) return std::nullopt;
  const int d = alg_->degree(terms_.begin()->first);
  for (const auto& [m, c] : terms_) {
    if (alg_->degree(m) != d) return std::nullopt;
  }
  return d;
}

bool Element::is_homogeneous() const { return terms_.empty() || degree().has_value(); }

Rational Element::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Element::add_term(const Monomial& m, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

std::map<int, Element> Element::by_degree() const {
  std::map<int, Element> out;
  for (const auto& [m, c] : terms_) {
    auto [it, _] = out.try_emplace(alg_->degree(m), alg_);
    it->second.terms_.emplace(m, c);
  }
  return out;
}

void Element::require_same(const Element& o) const {
  if (!same_algebra(alg_, o.alg_)) throw StructuralError("elements belong to different algebras");
}

Element& Element::operator+=(const Element& o) {
  if (!alg_) alg_ = o.alg_;
  require_same(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Element& Element::operator-=(const Element& o) {
  if (!alg_) alg_ = o.alg_;
  require_same(o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Element& Element::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Element operator*(const Element& a, const Element& b) { return multiply(a, b); }

bool operator==(const Element& a, const Element& b) {
  if (a.terms_.empty() && b.terms_.empty()) return true;
  return same_algebra(a.alg_, b.alg_) && a.terms_ == b.terms_;
}

std::string Element::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    const bool neg = sgn(c) < 0;
    const Rational mag = abs(c);
    if (s.empty()) {
      if (neg) s += '-';
    } else {
      s += neg ? " - " : " + ";
    }
    if (m.is_one()) {
      s += sullivan::to_string(mag);
    } else {
      if (mag != 1) s += sullivan::to_string(mag) + '*';
      s += alg_->format(m);
    }
  }
  return s;
}

Element multiply(const Element& a, const Element& b) { return kernels::multiply(a, b); }

Element product(const AlgebraPtr& alg, std::span<const Element> factors) {
  Element acc = Element::one(alg);
  for (const auto& f : factors) {
    acc = multiply(acc, f);
    if (acc.is_zero()) break;
  }
  return acc;
}

// ---------------------------------------------------------------------------

Derivation::Derivation(AlgebraPtr alg, std::vector<Element> images)
    : alg_(std::move(alg)), images_(std::move(images)) {
  if (images_.size() != alg_->size()) {
    throw StructuralError("derivation needs one image per generator");
  }
  for (std::size_t i = 0; i < images_.size(); ++i) {
    auto& img = images_[i];
    if (!img.algebra()) img = Element(alg_);
    if (!same_algebra(img.algebra(), alg_)) {
      throw StructuralError("image of '" + alg_->gen(i).name + "' lives in another algebra");
    }
    if (img.is_zero()) continue;
    const auto deg = img.degree();
    if (!deg) {
      throw StructuralError("image of '" + alg_->gen(i).name + "' is not homogeneous");
    }
    if (*deg != alg_->gen(i).degree + 1) {
      throw StructuralError("image of '" + alg_->gen(i).name + "' has degree " +
                            std::to_string(*deg) + ", expected " +
                            std::to_string(alg_->gen(i).degree + 1));
    }
  }
}

Derivation Derivation::zero(AlgebraPtr alg) {
  std::vector<Element> images(alg->size(), Element(alg));
  return Derivation(std::move(alg), std::move(images));
}

Element Derivation::apply(const Monomial& m) const {
  Element out(alg_);
  const std::size_t n = alg_->size();
  Monomial left(n), right(n), tmp(n), res(n);
  int prefix_degree = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto e = m[i];
    if (e == 0) continue;
    const auto& img = images_[i];
    if (!img.is_zero()) {
      for (std::size_t j = 0; j < n; ++j) {
        left[j] = j < i ? m[j] : 0;
        right[j] = j > i ? m[j] : 0;
      }
      left[i] = static_cast<Monomial::Exponent>(e - 1);
      const Rational base = (prefix_degree % 2 ? -1 : 1) * Rational(e);
      for (const auto& [t, c] : img.terms()) {
        const int s1 = alg_->multiply(left, t, tmp);
        if (s1 == 0) continue;
        const int s2 = alg_->multiply(tmp, right, res);
        if (s2 == 0) continue;
        out.add_term(res, (s1 * s2) * base * c);
      }
    }
    prefix_degree += e * alg_->gen(i).degree;
  }
  return out;
}

Element Derivation::apply(const Element& a) const {
  if (a.is_zero()) return Element(alg_);
  if (!same_algebra(a.algebra(), alg_)) throw StructuralError("derivation applied to a foreign element");
  return kernels::apply_derivation(*this, a);
}

// ---------------------------------------------------------------------------

Morphism::Morphism(AlgebraPtr source, AlgebraPtr target, std::vector<Element> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
  if (images_.size() != source_->size()) {
    throw StructuralError("morphism needs one image per source generator");
  }
  simple_.resize(images_.size());
  all_simple_ = true;
  for (std::size_t i = 0; i < images_.size(); ++i) {
    auto& img = images_[i];
    if (!img.algebra()) img = Element(target_);
    if (!same_algebra(img.algebra(), target_)) {
      throw StructuralError("morphism image lives outside the target algebra");
    }
    if (!img.is_zero()) {
      const auto deg = img.degree();
      if (!deg || *deg != source_->gen(i).degree) {
        throw StructuralError("morphism does not preserve the degree of '" + source_->gen(i).name +
                              "'");
      }
    }
    if (img.is_zero()) {
      simple_[i] = std::pair<std::size_t, int>{0, 0};
    } else if (img.size() == 1 && img.terms().begin()->first.word_length() == 1 &&
               abs(img.terms().begin()->second) == 1) {
      const auto& [m, c] = *img.terms().begin();
      std::size_t g = 0;
      while (m[g] == 0) ++g;
      simple_[i] = std::pair<std::size_t, int>{g, sgn(c)};
    } else {
      all_simple_ = false;
    }
  }
}

Element Morphism::apply(const Monomial& m) const {
  if (all_simple_) {
    const std::size_t n = target_->size();
    Monomial acc(n), g(n), tmp(n);
    int sign = 1;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      const auto& [gen, s] = *simple_[i];
      if (s == 0) return Element(target_);
      for (unsigned k = 0; k < m[i]; ++k) {
        g.resize(n);
        g[gen] = 1;
        const int t = target_->multiply(acc, g, tmp);
        if (t == 0) return Element(target_);
        sign *= t * s;
        std::swap(acc, tmp);
      }
    }
    Element out(target_);
    out.add_term(acc, sign);
    return out;
  }
  Element acc = Element::one(target_);
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (unsigned k = 0; k < m[i]; ++k) {
      acc = multiply(acc, images_[i]);
      if (acc.is_zero()) return acc;
    }
  }
  return acc;
}

Element Morphism::apply(const Element& a) const {
  if (!a.is_zero() && !same_algebra(a.algebra(), source_)) {
    throw StructuralError("morphism applied to a foreign element");
  }
  Element out(target_);
  for (const auto& [m, c] : a.terms()) {
    Element img = apply(m);
    img *= c;
    out += img;
  }
  return out;
}

// ---------------------------------------------------------------------------

std::map<Monomial, Element> coefficient_of(const Element& a, std::span<const std::size_t> odd_set) {
  const auto& alg = a.algebra();
  std::map<Monomial, Element> out;
  if (a.is_zero()) return out;
  std::vector<char> in_set(alg->size(), 0);
  for (auto i : odd_set) {
    if (!alg->is_odd(i)) {
      throw StructuralError("coefficient extraction needs odd generators, '" + alg->gen(i).name +
                            "' is even");
    }
    in_set[i] = 1;
  }
  const std::size_t n = alg->size();
  Monomial base(n), s_part(n), check(n);
  for (const auto& [m, c] : a.terms()) {
    for (std::size_t i = 0; i < n; ++i) {
      base[i] = in_set[i] ? 0 : m[i];
      s_part[i] = in_set[i] ? m[i] : 0;
    }
    // m = sign · base · s_part
    const int sign = alg->multiply(base, s_part, check);
    auto [it, _] = out.try_emplace(s_part, alg);
    it->second.add_term(base, sign * c);
  }
  for (auto it = out.begin(); it != out.end();) {
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  }
  return out;
}

Element word_length_part(const Element& a, std::span<const std::size_t> gens, int length) {
  Element out(a.algebra());
  for (const auto& [m, c] : a.terms()) {
    int w = 0;
    for (auto g : gens) w += m[g];
    if (w == length) out.add_term(m, c);
  }
  return out;
}

}  // namespace sullivan
