#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "sullivan/rational.hpp"

namespace sullivan {

/// Sparse vector: (index, value) pairs sorted by index, no zero values.
using SparseVec = std::vector<std::pair<std::size_t, Rational>>;

/// y += a·x
void axpy(SparseVec& y, const Rational& a, const SparseVec& x);
SparseVec scaled(const SparseVec& x, const Rational& a);
Rational entry(const SparseVec& x, std::size_t index);
SparseVec unit_vector(std::size_t index);

/// Incremental row echelon form over the rationals.
///
/// Each stored row carries a tag vector recording which combination of
/// inserted rows it came from, so the same structure answers span membership,
/// coordinates with respect to tagged rows, and null spaces.
class Reducer {
 public:
  struct Reduced {
    SparseVec residual;
    SparseVec tag;
  };

  /// Eliminates leading entries of `v` that hit stored pivots. The residual is
  /// zero iff `v` lies in the span; then v = Σ f_i·row_i and tag = tag0 - Σ f_i·tag_i.
  Reduced reduce(SparseVec v, SparseVec tag = {}) const;

  /// Adds `v` as a new pivot row unless it is dependent. A dependent row's
  /// reduced tag (a relation among inserted rows) is written to `relation`.
  bool insert(SparseVec v, SparseVec tag = {}, SparseVec* relation = nullptr);

  bool contains(const SparseVec& v) const { return reduce(v).residual.empty(); }
  std::size_t rank() const { return pivots_.size(); }

 private:
  struct Row {
    SparseVec v;
    SparseVec tag;
  };
  std::map<std::size_t, Row> pivots_;
};

/// Kernel basis of the linear map whose column i is `columns[i]`, returned as
/// coefficient vectors over column indices. Columns are processed sparsest first.
std::vector<SparseVec> null_space(const std::vector<SparseVec>& columns);

/// One solution x of Σ x_i·columns[i] = target, or nullopt when none exists.
std::optional<SparseVec> solve(const std::vector<SparseVec>& columns, const SparseVec& target);

using DenseMatrix = std::vector<std::vector<Rational>>;

/// Exact inverse of a square matrix, or nullopt when it is singular.
std::optional<DenseMatrix> invert(DenseMatrix a);

}  // namespace sullivan
