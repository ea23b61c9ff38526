#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sullivan/algebra.hpp"
#include "sullivan/rational.hpp"

namespace sullivan {

/// Sparse exact-rational linear combination of canonical monomials.
/// No zero coefficients are ever stored, so equality is map equality.
class Element {
 public:
  using Terms = std::map<Monomial, Rational>;

  Element() = default;
  explicit Element(AlgebraPtr alg) : alg_(std::move(alg)) {}

  static Element scalar(AlgebraPtr alg, const Rational& c);
  static Element one(AlgebraPtr alg) { return scalar(std::move(alg), 1); }
  static Element generator(AlgebraPtr alg, std::size_t index);
  static Element generator(AlgebraPtr alg, std::string_view name);
  static Element monomial(AlgebraPtr alg, Monomial m, const Rational& c = 1);

  const AlgebraPtr& algebra() const { return alg_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Degree when homogeneous and non-zero.
  std::optional<int> degree() const;
  bool is_homogeneous() const;
  Rational coefficient(const Monomial& m) const;

  /// Adds c·m, dropping the term if it cancels.
  void add_term(const Monomial& m, const Rational& c);

  /// Homogeneous components keyed by degree.
  std::map<int, Element> by_degree() const;

  Element& operator+=(const Element& o);
  Element& operator-=(const Element& o);
  Element& operator*=(const Rational& c);

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator-(Element a) { return a *= Rational(-1); }
  friend Element operator*(Element a, const Rational& c) { return a *= c; }
  friend Element operator*(const Rational& c, Element a) { return a *= c; }
  friend Element operator*(const Element& a, const Element& b);

  friend bool operator==(const Element& a, const Element& b);

  std::string to_string() const;

 private:
  void require_same(const Element& o) const;

  AlgebraPtr alg_;
  Terms terms_;
};

/// Graded-commutative product (Koszul signs, odd squares vanish).
Element multiply(const Element& a, const Element& b);

/// Left-to-right product of a list; the empty product is 1 in `alg`.
Element product(const AlgebraPtr& alg, std::span<const Element> factors);

/// Degree +1 derivation determined by its values on generators.
class Derivation {
 public:
  Derivation() = default;
  /// Throws StructuralError unless every image is zero or homogeneous of degree |g|+1.
  Derivation(AlgebraPtr alg, std::vector<Element> images);

  static Derivation zero(AlgebraPtr alg);

  const AlgebraPtr& algebra() const { return alg_; }
  const Element& image(std::size_t gen) const { return images_[gen]; }
  const std::vector<Element>& images() const { return images_; }

  Element apply(const Monomial& m) const;
  Element apply(const Element& a) const;

 private:
  AlgebraPtr alg_;
  std::vector<Element> images_;
};

/// Graded Leibniz extension of `d` applied to `a`.
inline Element apply_derivation(const Derivation& d, const Element& a) { return d.apply(a); }

/// Algebra map out of a free graded-commutative algebra, fixed by generator images.
class Morphism {
 public:
  Morphism() = default;
  Morphism(AlgebraPtr source, AlgebraPtr target, std::vector<Element> images);

  const AlgebraPtr& source() const { return source_; }
  const AlgebraPtr& target() const { return target_; }
  const Element& image(std::size_t gen) const { return images_[gen]; }

  Element apply(const Element& a) const;
  Element apply(const Monomial& m) const;

 private:
  AlgebraPtr source_;
  AlgebraPtr target_;
  std::vector<Element> images_;
  // Set when every image is 0 or ±(single generator); enables a fast path.
  std::vector<std::optional<std::pair<std::size_t, int>>> simple_;
  bool all_simple_ = false;
};

/// Expansion a = Σ_M c_M·M over the monomials M of Λ(S), with each c_M free of S.
/// Keys are monomials of the ambient algebra supported on S. S must be odd.
std::map<Monomial, Element> coefficient_of(const Element& a, std::span<const std::size_t> odd_set);

/// Sum of the terms whose word length in `gens` equals `length`.
Element word_length_part(const Element& a, std::span<const std::size_t> gens, int length);

}  // namespace sullivan
