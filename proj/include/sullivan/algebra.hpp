#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sullivan {

/// A free generator of a graded-commutative algebra.
///
/// `cap` bounds the exponent of an even generator (cap 1 gives x^2 = 0, as in
/// the quotient algebras Λ(x)/(x^2)); 0 means unbounded. Odd generators always
/// square to zero, so their cap is ignored.
struct Generator {
  std::string name;
  int degree = 1;
  int cap = 0;

  bool odd() const { return degree % 2 != 0; }
};

/// Exponent vector over the generators of one algebra, in declaration order.
/// The stored order is the canonical order of the product.
class Monomial {
 public:
  using Exponent = std::uint16_t;

  Monomial() = default;
  explicit Monomial(std::size_t n) : exps_(n, 0) {}
  explicit Monomial(std::vector<Exponent> exps) : exps_(std::move(exps)) {}

  std::size_t size() const { return exps_.size(); }
  Exponent operator[](std::size_t i) const { return exps_[i]; }
  Exponent& operator[](std::size_t i) { return exps_[i]; }
  const std::vector<Exponent>& exponents() const { return exps_; }
  void resize(std::size_t n) { exps_.assign(n, 0); }

  bool is_one() const;
  /// Total number of generator factors, counted with multiplicity.
  int word_length() const;

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial& a, const Monomial& b) { return a.exps_ <=> b.exps_; }

  std::size_t hash() const;

 private:
  std::vector<Exponent> exps_;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

/// Free graded-commutative algebra on an ordered generator list, optionally
/// truncated by exponent caps on even generators. Immutable once built.
class Algebra {
 public:
  explicit Algebra(std::vector<Generator> gens);

  std::size_t size() const { return gens_.size(); }
  const Generator& gen(std::size_t i) const { return gens_[i]; }
  const std::vector<Generator>& generators() const { return gens_; }
  bool is_odd(std::size_t i) const { return odd_[i] != 0; }
  Monomial::Exponent max_exponent(std::size_t i) const { return max_exp_[i]; }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Like find() but throws StructuralError for unknown names.
  std::size_t index(std::string_view name) const;

  int degree(const Monomial& m) const;
  bool is_odd(const Monomial& m) const { return degree(m) % 2 != 0; }
  /// True when every even generator is capped, i.e. the algebra is finite-dimensional.
  bool finite() const;
  /// Largest degree carrying a non-zero monomial, for finite algebras.
  int top_degree() const;

  Monomial one() const { return Monomial(gens_.size()); }
  Monomial generator_monomial(std::size_t i) const;

  /// Canonical product out = ±(a·b). Returns the Koszul sign, or 0 when the
  /// product vanishes (odd square or an exceeded cap).
  int multiply(const Monomial& a, const Monomial& b, Monomial& out) const;

  /// All monomials of the given degree, in a fixed deterministic order.
  std::vector<Monomial> monomials_of_degree(int degree) const;
  /// Same, restricted to monomials accepted by the filter.
  std::vector<Monomial> monomials_of_degree(int degree,
                                            const std::function<bool(const Monomial&)>& keep) const;

  std::string format(const Monomial& m) const;

  friend bool operator==(const Algebra& a, const Algebra& b);

 private:
  std::vector<Generator> gens_;
  std::vector<char> odd_;
  std::vector<Monomial::Exponent> max_exp_;
  std::unordered_map<std::string, std::size_t> by_name_;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

AlgebraPtr make_algebra(std::vector<Generator> gens);

/// Pointer-equal or structurally equal.
bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b);

}  // namespace sullivan
