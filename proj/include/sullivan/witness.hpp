#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sullivan/model.hpp"

namespace sullivan {

/// dy_j = Σ_k a_k x_k^2 + Σ_{p<q} b_pq x_p x_q, indices into the x list of an extension.
struct QuadraticForm {
  std::vector<Rational> square;               ///< a_k
  std::vector<std::vector<Rational>> cross;   ///< b_pq for p < q (upper triangle)
};

/// c · f_1 ⋯ f_k · g where every f_i lies in ker μ and g is unrestricted.
struct KernelTerm {
  Rational coeff;
  std::vector<Element> factors;
  Element cofactor;
};

/// An element of (ker μ)^power written as a sum of kernel products.
struct KernelBlock {
  std::string name;
  int power = 0;
  Element value;
  std::vector<KernelTerm> terms;
};

/// A non-zero class in (ker μ)^power ⊂ ΛW⊗ΛW', hence TC(ΛW) ≥ power.
///
/// The certified cocycle is block_1 ⋯ block_r · cofactor. Its image under
/// φ⊗φ (times `pairing` for the Ω construction) is `scalar` times the top
/// monomial x_[n]y_[m]x'_[n]y'_[m] of A⊗A'.
struct WitnessCertificate {
  std::string construction;
  int power = 0;
  std::vector<KernelBlock> blocks;
  Element cofactor;   ///< in ΛW⊗ΛW'; 1 when absent
  Element product;    ///< the cocycle itself
  Element pairing;    ///< A⊗A' factor multiplied into the image (ω'_A for Ω), else 1
  Element image;      ///< evidence element in A⊗A'
  Rational scalar;
  /// Bound transferred to the model the certificate was requested for:
  /// power − n when ΛW had to be adjoined, power when the model is ΛW.
  int model_lower_bound = 0;
};

/// ΛW⊗ΛW', A⊗A' and φ⊗φ for one elliptic extension.
class DiagonalContext {
 public:
  /// `adjoined` records whether ΛW was built from a smaller model (see
  /// WitnessCertificate::model_lower_bound).
  DiagonalContext(EllipticExtension e, bool adjoined);

  const EllipticExtension& extension() const { return e_; }
  const QuotientAlgebra& quotient() const { return q_; }
  const TensorSquare& square() const { return sq_; }
  const AlgebraPtr& quotient_square() const { return aa_; }
  const Derivation& quotient_square_d() const { return aa_d_; }
  bool adjoined() const { return adjoined_; }

  /// Coefficients of dy_j; throws NotComputable unless dy_j is quadratic in X.
  const QuadraticForm& form(std::size_t j) const;

  Element left(const Element& w) const { return sq_.left.apply(w); }
  Element right(const Element& w) const { return sq_.right.apply(w); }
  /// w ⊗ 1 − 1 ⊗ w
  Element difference(const Element& w) const { return left(w) - right(w); }
  Element x(std::size_t i) const { return Element::generator(e_.extension.algebra(), e_.x[i]); }
  Element u(std::size_t i) const { return Element::generator(e_.extension.algebra(), e_.u[i]); }
  Element y(std::size_t j) const { return Element::generator(e_.extension.algebra(), e_.y[j]); }

  /// φ⊗φ: ΛW⊗ΛW' → A⊗A'.
  Element image(const Element& ww) const { return phi2_.apply(ww); }
  Element image_left(const Element& a) const { return a_left_.apply(a); }
  Element image_right(const Element& a) const { return a_right_.apply(a); }
  /// x_[n]y_[m]·x'_[n]y'_[m]
  const Element& top() const { return top_; }

  /// Scalar λ with `e` = λ·top, or nullopt when `e` is not a multiple of top.
  std::optional<Rational> top_multiple(const Element& e) const;

 private:
  EllipticExtension e_;
  bool adjoined_;
  QuotientAlgebra q_;
  TensorSquare sq_;
  AlgebraPtr aa_;
  Derivation aa_d_;
  Morphism phi2_;
  Morphism a_left_;
  Morphism a_right_;
  Element top_;
  std::vector<QuadraticForm> forms_;
  std::string form_error_;
};

/// Reads off the quadratic form of each dy_j. Throws NotComputable when some
/// dy_j is not a quadratic polynomial in the x's.
std::vector<QuadraticForm> quadratic_forms(const EllipticExtension& e);

/// ω: coefficient of x̄_1⋯x̄_n in ∏_j(y_j − Σα x_k x̄_k − Σβ x_p x̄_q)·∏_i(u_i − x_i x̄_i),
/// with dx̄ = x. Checks dω = 0 and φ(ω) = (−1)^n x_[n]y_[m].
Element omega_single(const EllipticExtension& e);

/// Ω ∈ (ker μ)^{n+m} with its decomposition into kernel products.
KernelBlock omega_block(const DiagonalContext& ctx);

/// Ω_A = ∏(x_i − x_i')·∏(y_j − y_j') in A⊗A'.
Element omega_A(const DiagonalContext& ctx);

/// Ω with evidence [Ω_A]·[ω'_A] = λ·[top], λ ≠ 0.
WitnessCertificate omega_diagonal(const DiagonalContext& ctx);

/// Cocycle of ΛW mapping onto the A-cocycle `a` under φ on the nose: the
/// embedded representative corrected by an element of ker φ.
Element lift_cocycle(const DiagonalContext& ctx, const Element& a);

/// Ω·∏(α_k − α_k')·α̂ for classes z_k of H_{odd,*}(A) (indices in `bigraded`,
/// the bigraded table of A). Throws StructuralError "not a valid L-witness"
/// when ∏z_k vanishes in cohomology.
WitnessCertificate theorem51_certificate(const DiagonalContext& ctx, std::span<const std::size_t> classes);

/// Same, using the witness found by L_invariant.
WitnessCertificate theorem51_certificate(const DiagonalContext& ctx);

/// γ and β = π_⟨0⟩·y' − γ for an m = 1 extension over the listed x's.
struct BetaPair {
  Element gamma;
  Element theta;
  Element theta_hat;
  KernelBlock beta;
};

/// Builds θ, θ̂, γ, β over the x's with positions `xs` (into ctx's x list) and
/// the odd generator y_j. dy_j must involve only those x's. Checks dβ = 0.
BetaPair lemma54_beta(const DiagonalContext& ctx, std::span<const std::size_t> xs, std::size_t j);

/// Whole-extension version; requires m = 1.
BetaPair lemma54_beta(const DiagonalContext& ctx);

/// Ω·β for an m = 1 extension; scalar ±2^n.
WitnessCertificate theorem53_certificate(const DiagonalContext& ctx);

/// Positions (into the x and y lists) of x_n and y_1 realising the family
/// conditions: dy_1 free of x_n, every other dy_j divisible by x_n.
struct FamilyPartition {
  std::size_t xn = 0;
  std::size_t y1 = 0;
};

std::optional<FamilyPartition> find_family_partition(const DiagonalContext& ctx);

/// α = Ω·β₁·(a − a') with a = x_n y_2⋯y_m − ε; scalar ±2^n, power 2n+m.
/// Throws NotComputable "family conditions unsatisfied" when no partition exists.
WitnessCertificate special_family_certificate(const DiagonalContext& ctx,
                                              std::optional<FamilyPartition> partition = std::nullopt);

/// ∏_l(y_l − y_l')·y_J = ∏_l(y_l − y_l')·y'_J in the doubled algebra of `alg`,
/// where the y's are the odd generators of `alg` and J indexes into them.
bool lemma52_check(const AlgebraPtr& alg, std::span<const std::size_t> subset);

/// Re-runs every check on a certificate: kernel membership of all factors,
/// block decompositions, cocycle condition, image and scalar.
/// Throws ConstructionError describing the first failure.
void verify_certificate(const DiagonalContext& ctx, const WitnessCertificate& c);

}  // namespace sullivan
