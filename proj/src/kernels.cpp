#include "sullivan/kernels.hpp"

#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sullivan/error.hpp"

namespace sullivan::kernels {

namespace {

using Accumulator = std::unordered_map<Monomial, Rational, MonomialHash>;

void require_same(const Element& a, const Element& b) {
  if (!same_algebra(a.algebra(), b.algebra())) {
    throw StructuralError("elements belong to different algebras");
  }
}

void multiply_into(const Algebra& alg, const Monomial& ma, const Rational& ca, const Element& b,
                   Accumulator& acc, Monomial& out) {
  for (const auto& [mb, cb] : b.terms()) {
    const int s = alg.multiply(ma, mb, out);
    if (s == 0) continue;
    auto& slot = acc[out];
    if (s > 0) {
      slot += ca * cb;
    } else {
      slot -= ca * cb;
    }
  }
}

Element collect(const AlgebraPtr& alg, Accumulator& acc) {
  Element out(alg);
  for (auto& [m, c] : acc) out.add_term(m, c);
  return out;
}

void merge(Accumulator& into, Accumulator& from) {
  for (auto& [m, c] : from) into[m] += c;
}

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// ---------------------------------------------------------------------------
// Serial references

Element serial::multiply(const Element& a, const Element& b) {
  if (a.is_zero() || b.is_zero()) return Element(a.algebra() ? a.algebra() : b.algebra());
  require_same(a, b);
  const auto& alg = *a.algebra();
  Accumulator acc;
  Monomial out(alg.size());
  for (const auto& [ma, ca] : a.terms()) multiply_into(alg, ma, ca, b, acc, out);
  return collect(a.algebra(), acc);
}

Element serial::apply_derivation(const Derivation& d, const Element& a) {
  Element out(d.algebra());
  for (const auto& [m, c] : a.terms()) {
    Element img = d.apply(m);
    img *= c;
    out += img;
  }
  return out;
}

std::vector<Element> serial::apply_to_basis(const Derivation& d, std::span<const Monomial> basis) {
  std::vector<Element> out;
  out.reserve(basis.size());
  for (const auto& m : basis) out.push_back(d.apply(m));
  return out;
}

std::vector<Element> serial::pairwise_products(
    std::span<const Element> reps, std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  std::vector<Element> out;
  out.reserve(pairs.size());
  for (const auto& [i, j] : pairs) out.push_back(serial::multiply(reps[i], reps[j]));
  return out;
}

// ---------------------------------------------------------------------------
// OpenMP versions

Element multiply(const Element& a, const Element& b) {
  if (a.size() * b.size() < kParallelThreshold || max_threads() == 1) {
    return serial::multiply(a, b);
  }
  require_same(a, b);
  const auto& alg = *a.algebra();
  std::vector<const std::pair<const Monomial, Rational>*> lhs;
  lhs.reserve(a.size());
  for (const auto& t : a.terms()) lhs.push_back(&t);

  std::vector<Accumulator> partial(static_cast<std::size_t>(max_threads()));
#pragma omp parallel
  {
#ifdef _OPENMP
    auto& acc = partial[static_cast<std::size_t>(omp_get_thread_num())];
#else
    auto& acc = partial[0];
#endif
    Monomial out(alg.size());
#pragma omp for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(lhs.size()); ++i) {
      multiply_into(alg, lhs[i]->first, lhs[i]->second, b, acc, out);
    }
  }
  for (std::size_t t = 1; t < partial.size(); ++t) merge(partial[0], partial[t]);
  return collect(a.algebra(), partial[0]);
}

Element apply_derivation(const Derivation& d, const Element& a) {
  if (a.size() < 64 || max_threads() == 1) return serial::apply_derivation(d, a);
  std::vector<const std::pair<const Monomial, Rational>*> terms;
  terms.reserve(a.size());
  for (const auto& t : a.terms()) terms.push_back(&t);
  std::vector<Element> parts(terms.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(terms.size()); ++i) {
    Element img = d.apply(terms[i]->first);
    img *= terms[i]->second;
    parts[i] = std::move(img);
  }
  Accumulator acc;
  for (const auto& p : parts) {
    for (const auto& [m, c] : p.terms()) acc[m] += c;
  }
  return collect(d.algebra(), acc);
}

std::vector<Element> apply_to_basis(const Derivation& d, std::span<const Monomial> basis) {
  if (basis.size() < 64 || max_threads() == 1) return serial::apply_to_basis(d, basis);
  std::vector<Element> out(basis.size());
#pragma omp parallel for schedule(dynamic, 32)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(basis.size()); ++i) {
    out[i] = d.apply(basis[i]);
  }
  return out;
}

std::vector<Element> pairwise_products(std::span<const Element> reps,
                                       std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  if (pairs.size() < 64 || max_threads() == 1) return serial::pairwise_products(reps, pairs);
  std::vector<Element> out(pairs.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(pairs.size()); ++k) {
    out[k] = serial::multiply(reps[pairs[k].first], reps[pairs[k].second]);
  }
  return out;
}

}  // namespace sullivan::kernels
