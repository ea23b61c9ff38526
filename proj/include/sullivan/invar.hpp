#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sullivan/cohom.hpp"
#include "sullivan/model.hpp"

namespace sullivan {

/// Longest non-vanishing product of elements of span(generators).
struct ProductSearch {
  int length = 0;
  std::vector<std::size_t> witness;  ///< generator indices whose product is non-zero
  SparseVec product;                 ///< that product
};

using Multiplication = std::function<SparseVec(const SparseVec&, const SparseVec&)>;

/// Grows the spans P_1 = span(g), P_r = span{p·g} until they vanish. Every
/// span basis vector is a product of generators, so the witness is explicit.
/// Generators must have positive degree so the iteration terminates.
ProductSearch longest_product(const std::vector<SparseVec>& generators, const Multiplication& mul);

/// H ⊗ H with (a⊗b)(c⊗d) = (-1)^{|b||c|} ac⊗bd; basis e_i⊗e_j has index i·N + j.
class TensorSquareRing {
 public:
  explicit TensorSquareRing(const CohomologyRing& ring) : ring_(&ring) {}

  std::size_t factor_size() const { return ring_->size(); }
  std::size_t index(std::size_t i, std::size_t j) const { return i * ring_->size() + j; }
  SparseVec multiply(const SparseVec& a, const SparseVec& b) const;
  /// Coordinates of μ(v) in H.
  SparseVec mu(const SparseVec& v) const;
  /// e_i ⊗ 1 − 1 ⊗ e_i
  SparseVec zero_divisor(std::size_t i) const;

 private:
  const CohomologyRing* ring_;
};

/// Basis of ker(μ: H⊗H → H) by elimination.
std::vector<SparseVec> zero_divisor_kernel(const TensorSquareRing& t);

ProductSearch cuplength_search(const CohomologyRing& ring);
int cuplength(const CohomologyRing& ring);
int cuplength(const CohomologyTable& table);

/// zcl, computed as the longest non-zero product of the ideal generators
/// ā = a⊗1 − 1⊗a of ker μ. `witness` holds class indices a.
ProductSearch zero_divisor_cuplength_search(const CohomologyRing& ring);
int zero_divisor_cuplength(const SullivanModel& m);

struct LInvariant {
  int value = 0;
  std::vector<std::size_t> witness;  ///< class indices in the bigraded table of A_ℬ
};

/// L(ΛV, ℬ): longest non-zero product in H(A_ℬ) of classes with odd x-word length.
LInvariant L_invariant(const SullivanModel& m, std::span<const std::string> basis = {});
/// Same on precomputed data.
LInvariant L_invariant(const CohomologyRing& bigraded_ring);

struct CatValue {
  int value = 0;
  std::string method;  ///< "coformal" or "homogeneous"
};

/// cat of a pure elliptic model, from dim V^odd (coformal) or n(k-2)+m
/// (word-homogeneous of length k). Throws NotComputable otherwise.
CatValue cat_pure(const SullivanModel& m);

struct Bound {
  int value = 0;
  std::string source;  ///< short label of the result that produced it
  std::string detail;
};

struct TCBoundReport {
  std::vector<Bound> lower;
  std::vector<Bound> upper;
  std::optional<int> low;   ///< max lower
  std::optional<int> high;  ///< min upper
  bool exact = false;
  bool inconsistent = false;
  std::vector<std::string> notes;  ///< bounds that were skipped, and why
};

struct BoundOptions {
  /// Caller asserts ΛV is formal, enabling TC = 2cat + χ_π.
  bool assert_formal = false;
  /// Bases ℬ for the dim V^odd + L bound; empty means declaration order.
  std::vector<std::vector<std::string>> bases;
  /// Lower bounds established elsewhere (certificates), already translated to ΛV.
  std::vector<Bound> certified;
  /// F₀ sub-model search runs over all subsets when dim V^odd is at most this.
  std::size_t subset_cap = 12;
};

/// Whether ΛV = ΛZ ⊗ (ΛY₀, 0) with ΛZ an F₀-model; sets the split when it is.
bool is_factored_f0(const SullivanModel& m, std::vector<std::size_t>* z_gens = nullptr);

TCBoundReport tc_bounds(const SullivanModel& m, const BoundOptions& options = {});

}  // namespace sullivan
