#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "sullivan/element.hpp"
#include "sullivan/linalg.hpp"
#include "sullivan/model.hpp"

namespace sullivan {

/// (p, q): word length in even generators, word length in odd generators.
using Bidegree = std::pair<int, int>;

/// How monomials are split into blocks that d maps block to block.
enum class Grading {
  automatic,  ///< finest grading the differential preserves
  bigraded,   ///< (p, q) with d of bidegree (+2, -1); fails otherwise
  none,       ///< one block per degree
};

struct CohomologyClass {
  int degree = 0;
  Bidegree block{0, 0};
  Element rep;  ///< a cocycle
};

/// Cohomology of a cochain algebra up to a truncation degree, computed block
/// by block with exact sparse elimination. Classes are numbered globally in
/// increasing degree; coordinates refer to that numbering.
class CohomologyTable {
 public:
  CohomologyTable(AlgebraPtr alg, Derivation d, int max_degree, Grading grading = Grading::automatic);

  const AlgebraPtr& algebra() const { return alg_; }
  const Derivation& differential() const { return d_; }
  int max_degree() const { return max_degree_; }
  /// True when blocks are the (p, q) bidegrees with d of bidegree (+2, -1).
  bool bigraded() const { return bigraded_; }

  std::size_t size() const { return classes_.size(); }
  const CohomologyClass& cls(std::size_t i) const { return classes_[i]; }
  const std::vector<CohomologyClass>& classes() const { return classes_; }
  std::size_t dim(int degree) const;
  std::size_t dim(Bidegree pq) const;
  std::vector<std::size_t> classes_in_degree(int degree) const;

  bool is_cocycle(const Element& a) const { return d_.apply(a).is_zero(); }
  /// Coordinates of [a] for a cocycle `a`; throws StructuralError otherwise.
  SparseVec coordinates(const Element& a) const;
  bool is_coboundary(const Element& a) const { return coordinates(a).empty(); }
  /// Σ c_i·rep_i
  Element representative(const SparseVec& coords) const;

 private:
  struct Block {
    std::map<Monomial, std::size_t> index;
    Reducer reducer;
  };

  Bidegree key(const Monomial& m) const;
  const Block& block(int degree, Bidegree key) const;

  AlgebraPtr alg_;
  Derivation d_;
  int max_degree_;
  bool bigraded_ = false;
  bool split_even_ = false;  // p is part of the key
  bool split_odd_ = false;   // q is part of the key
  std::vector<std::map<Bidegree, Block>> blocks_;
  std::vector<CohomologyClass> classes_;
};

/// H(ΛV) up to `max_degree`, by default the formal dimension. Degrees past the
/// formal dimension, or models not verified elliptic, are refused.
CohomologyTable cohomology(const SullivanModel& m, std::optional<int> max_degree = std::nullopt);
/// H(A_ℬ) in all degrees.
CohomologyTable cohomology(const QuotientAlgebra& a);
/// H(A_ℬ) split by (p, q); needs a coformal base.
CohomologyTable bigraded_cohomology(const QuotientAlgebra& a);

/// Multiplicative structure on a table, in coordinates. Products of
/// representatives are computed once per pair and reduced to coordinates.
class CohomologyRing {
 public:
  explicit CohomologyRing(const CohomologyTable& table);

  const CohomologyTable& table() const { return *table_; }
  std::size_t size() const { return table_->size(); }
  int degree(std::size_t i) const { return table_->cls(i).degree; }

  /// Coordinates of [e_i]·[e_j]; empty past the truncation degree.
  const SparseVec& product(std::size_t i, std::size_t j) const { return table_products_[i * size() + j]; }
  SparseVec multiply(const SparseVec& a, const SparseVec& b) const;

 private:
  const CohomologyTable* table_;
  std::vector<SparseVec> table_products_;
};

/// [c1]·[c2] for class coordinate vectors.
SparseVec cup(const CohomologyRing& ring, const SparseVec& c1, const SparseVec& c2);

/// Coordinates of [x_[n]·y_[m]]; throws unless the top cohomology is a line
/// spanned by that class.
SparseVec fundamental_class(const QuotientAlgebra& a, const CohomologyTable& table);

/// Some ẑ with [z]·[ẑ] = [top] for a non-zero homogeneous class z.
SparseVec poincare_dual(const CohomologyRing& ring, const SparseVec& z, const SparseVec& top);

/// Degree of a non-zero homogeneous coordinate vector.
int class_degree(const CohomologyTable& table, const SparseVec& c);

}  // namespace sullivan
