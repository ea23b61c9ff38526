#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sullivan/element.hpp"

namespace sullivan {

/// Structural flags of a Sullivan model. Only produced for models with d∘d = 0.
struct ValidationReport {
  bool pure = false;
  bool coformal = false;
  bool minimal = false;
  /// k when every non-zero d(v) is a sum of words of length exactly k.
  std::optional<int> word_length;
};

/// (ΛV, d): a free graded-commutative algebra with a differential given on
/// generators. Construction fails with InvalidModel when d∘d ≠ 0.
class SullivanModel {
 public:
  SullivanModel(AlgebraPtr alg, Derivation d);

  const AlgebraPtr& algebra() const { return alg_; }
  const Derivation& differential() const { return d_; }
  const ValidationReport& flags() const { return flags_; }

  /// Indices of even / odd generators in declaration order.
  std::vector<std::size_t> even_generators() const;
  std::vector<std::size_t> odd_generators() const;

  Element generator(std::string_view name) const { return Element::generator(alg_, name); }
  Element d(const Element& a) const { return d_.apply(a); }

 private:
  AlgebraPtr alg_;
  Derivation d_;
  ValidationReport flags_;
};

/// Re-derives the structural flags; throws InvalidModel naming the offending
/// generator when d∘d ≠ 0.
ValidationReport validate(const SullivanModel& m);

/// dim V^even − dim V^odd.
int chi_pi(const SullivanModel& m);

/// ΛW_ℬ = Λ(X ⊕ Y ⊕ U) with du_i = x_i^2, together with the index bookkeeping.
struct EllipticExtension {
  SullivanModel base;
  SullivanModel extension;
  std::vector<std::size_t> x;  ///< ℬ, as indices into the extension algebra
  std::vector<std::size_t> y;  ///< odd base generators, declaration order
  std::vector<std::size_t> u;  ///< u[i] kills x[i]^2

  std::size_t n() const { return x.size(); }
  std::size_t m() const { return y.size(); }
};

/// Adjoins u_i with du_i = x_i^2 for the basis ℬ (names of all even
/// generators, any order; empty means declaration order).
EllipticExtension elliptic_extension(const SullivanModel& m,
                                     std::span<const std::string> basis = {});

/// Recognises a model that already has the shape Λ(x_i, u_i, y_j) with
/// du_i = x_i^2 (first matching odd generator per x_i, in declaration order).
std::optional<EllipticExtension> identify_extension(const SullivanModel& m);

/// A_ℬ = Λ(x_i)/(x_i^2) ⊗ ΛY with the induced differential and φ: ΛW_ℬ → A_ℬ.
struct QuotientAlgebra {
  AlgebraPtr algebra;
  Derivation d;
  Morphism phi;
  std::vector<std::size_t> x;  ///< indices into `algebra`, ℬ order
  std::vector<std::size_t> y;
  int top_degree = 0;

  /// x_[n]·y_[m], spanning the top degree.
  Element top_monomial() const;
};

QuotientAlgebra quotient_A(const EllipticExtension& e);

/// Algebra on the generator list followed by primed copies; caps are kept.
/// Throws StructuralError when a primed name collides with an existing one.
AlgebraPtr doubled_algebra(const Algebra& alg);
Derivation doubled_derivation(const AlgebraPtr& doubled, const Derivation& d);
/// a ↦ a (first = true) or a ↦ a' into the doubled algebra.
Morphism copy_into_double(const AlgebraPtr& alg, const AlgebraPtr& doubled, bool first);

/// ΛV ⊗ ΛV' with its multiplication map μ.
struct TensorSquare {
  SullivanModel model;
  AlgebraPtr base;
  Morphism mu;
  Morphism left;   ///< a ↦ a
  Morphism right;  ///< a ↦ a'

  /// a ⊗ 1 − 1 ⊗ a for a base generator.
  Element zero_divisor(std::size_t gen) const;
};

TensorSquare tensor_square(const SullivanModel& m);

enum class Ellipticity { yes, no, unknown };

/// Decides finite-dimensionality of Q[X]/(dY) degree by degree. `window_limit`
/// bounds the degrees examined; by default four times the formal-dimension estimate.
Ellipticity is_elliptic(const SullivanModel& m, std::optional<int> window_limit = std::nullopt);

/// Σ|y_j| − Σ(|x_i| − 1). Throws NotComputable unless is_elliptic(m) == yes.
int formal_dimension(const SullivanModel& m);

/// Rewrites the differential in the even basis x̃_i = Σ_j P_ij x_j, where rows
/// of P index the new generators (named `names`) and columns index the even
/// generators in declaration order. P must be invertible and degree-preserving.
SullivanModel change_even_basis(const SullivanModel& m, std::span<const std::string> names,
                                const std::vector<std::vector<Rational>>& matrix);

/// The sub-model generated by the listed generators (must be closed under d).
SullivanModel submodel(const SullivanModel& m, std::span<const std::size_t> gens);

}  // namespace sullivan
