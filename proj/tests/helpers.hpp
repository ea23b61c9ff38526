#pragma once

#include <initializer_list>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sullivan/element.hpp"
#include "sullivan/model.hpp"

namespace testing {

using namespace sullivan;

inline AlgebraPtr algebra(std::initializer_list<std::pair<const char*, int>> gens) {
  std::vector<Generator> g;
  for (const auto& [name, deg] : gens) g.push_back(Generator{name, deg, 0});
  return make_algebra(std::move(g));
}

inline Element gen(const AlgebraPtr& a, const char* name) { return Element::generator(a, name); }

/// Model from generator list and (name, image builder) pairs; unlisted images are zero.
template <class F>
SullivanModel model(const AlgebraPtr& a, F images) {
  std::vector<Element> d(a->size(), Element(a));
  images(d);
  return SullivanModel(a, Derivation(a, std::move(d)));
}

inline SullivanModel example1() {
  auto a = algebra({{"x1", 4}, {"x2", 6}, {"y1", 7}, {"y2", 11}, {"y3", 9}});
  return model(a, [&](std::vector<Element>& d) {
    d[2] = gen(a, "x1") * gen(a, "x1");
    d[3] = gen(a, "x2") * gen(a, "x2");
    d[4] = gen(a, "x1") * gen(a, "x2");
  });
}

inline SullivanModel example2() {
  auto a = algebra({{"x1", 2}, {"x2", 2}, {"x3", 2}, {"x4", 2},
                    {"y1", 3}, {"y2", 3}, {"y3", 3}, {"y4", 3}, {"y5", 3}});
  return model(a, [&](std::vector<Element>& d) {
    for (int i = 0; i < 4; ++i) d[4 + i] = Element::generator(a, i) * Element::generator(a, i);
    d[8] = gen(a, "x1") * gen(a, "x2") - gen(a, "x3") * gen(a, "x4");
  });
}

inline SullivanModel odd_sphere(int degree = 3) {
  auto a = make_algebra({Generator{"y", degree, 0}});
  return SullivanModel(a, Derivation::zero(a));
}

inline SullivanModel even_sphere(int degree = 2) {
  auto a = make_algebra({Generator{"x", degree, 0}, Generator{"u", 2 * degree - 1, 0}});
  return model(a, [&](std::vector<Element>& d) { d[1] = gen(a, "x") * gen(a, "x"); });
}

/// Random sparse element of the given degree with small integer coefficients.
inline Element random_element(const AlgebraPtr& a, int degree, std::mt19937& rng, int max_terms = 4) {
  Element e(a);
  auto basis = a->monomials_of_degree(degree);
  if (basis.empty()) return e;
  std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
  std::uniform_int_distribution<int> coeff(-3, 3);
  for (int k = 0; k < max_terms; ++k) e.add_term(basis[pick(rng)], coeff(rng));
  return e;
}

/// Pure coformal model on x1..xn (degree 2) and y1..ym (degree 3) with random
/// quadratic dy_j. Entries are zero with probability one half.
inline SullivanModel random_coformal(int n, int m, std::mt19937& rng) {
  std::vector<Generator> g;
  for (int i = 1; i <= n; ++i) g.push_back(Generator{"x" + std::to_string(i), 2, 0});
  for (int j = 1; j <= m; ++j) g.push_back(Generator{"y" + std::to_string(j), 3, 0});
  auto a = make_algebra(std::move(g));
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::bernoulli_distribution keep(0.5);
  std::vector<Element> d(a->size(), Element(a));
  for (int j = 0; j < m; ++j) {
    for (int p = 0; p < n; ++p) {
      for (int q = p; q < n; ++q) {
        if (!keep(rng)) continue;
        d[n + j] += Rational(coeff(rng)) * (Element::generator(a, p) * Element::generator(a, q));
      }
    }
  }
  return SullivanModel(a, Derivation(a, std::move(d)));
}

}  // namespace testing
