#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP implementation used by
// the library and a serial reference in `kernels::serial` that the tests and
// the benchmark compare against. Results are identical: rational arithmetic is
// exact and every output is assembled into canonical (ordered) containers.

#include <span>
#include <vector>

#include "sullivan/element.hpp"

namespace sullivan::kernels {

/// Below this many term pairs the parallel kernels run serially.
inline constexpr std::size_t kParallelThreshold = 4096;

Element multiply(const Element& a, const Element& b);
Element apply_derivation(const Derivation& d, const Element& a);
/// d(m) for every monomial of a basis.
std::vector<Element> apply_to_basis(const Derivation& d, std::span<const Monomial> basis);
/// All products reps[i]*reps[j] for the listed index pairs.
std::vector<Element> pairwise_products(std::span<const Element> reps,
                                       std::span<const std::pair<std::size_t, std::size_t>> pairs);

int max_threads();

namespace serial {

Element multiply(const Element& a, const Element& b);
Element apply_derivation(const Derivation& d, const Element& a);
std::vector<Element> apply_to_basis(const Derivation& d, std::span<const Monomial> basis);
std::vector<Element> pairwise_products(std::span<const Element> reps,
                                       std::span<const std::pair<std::size_t, std::size_t>> pairs);

}  // namespace serial

}  // namespace sullivan::kernels
