#include <doctest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "sullivan/error.hpp"
#include "sullivan/invar.hpp"

using namespace sullivan;

namespace {

SparseVec random_combination(const std::vector<SparseVec>& pool, std::mt19937& rng) {
  std::uniform_int_distribution<int> c(-5, 5);
  SparseVec out;
  for (const auto& v : pool) axpy(out, c(rng), v);
  return out;
}

// Longest non-zero product of independent random elements of span(pool).
int random_oracle(const std::vector<SparseVec>& pool, const Multiplication& mul, std::mt19937& rng, int cap = 12) {
  int best = 0;
  for (int trial = 0; trial < 3; ++trial) {
    SparseVec p = random_combination(pool, rng);
    int r = p.empty() ? 0 : 1;
    while (r > 0 && r < cap) {
      auto next = mul(p, random_combination(pool, rng));
      if (next.empty()) break;
      p = std::move(next);
      ++r;
    }
    best = std::max(best, r);
  }
  return best;
}

int cl_oracle(const CohomologyRing& ring, std::mt19937& rng) {
  std::vector<SparseVec> pool;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    if (ring.degree(i) > 0) pool.push_back(unit_vector(i));
  }
  return random_oracle(pool, [&](const auto& a, const auto& b) { return ring.multiply(a, b); }, rng);
}

int zcl_oracle(const CohomologyRing& ring, std::mt19937& rng) {
  TensorSquareRing t(ring);
  auto kernel = zero_divisor_kernel(t);
  return random_oracle(kernel, [&](const auto& a, const auto& b) { return t.multiply(a, b); }, rng);
}

SullivanModel f0_model() {
  auto a = testing::algebra({{"x1", 2}, {"x2", 2}, {"y1", 3}, {"y2", 3}});
  return testing::model(a, [&](auto& d) {
    d[2] = testing::gen(a, "x1") * testing::gen(a, "x1");
    d[3] = testing::gen(a, "x2") * testing::gen(a, "x2");
  });
}

const Bound* find(const std::vector<Bound>& list, const std::string& source) {
  const Bound* best = nullptr;
  for (const auto& b : list) {
    if (b.source == source && (!best || b.value < best->value)) best = &b;
  }
  return best;
}

}  // namespace

TEST_CASE("longest_product on a truncated polynomial ring") {
  // Q[t]/(t^4): basis 1, t, t^2, t^3 with t^i·t^j = t^{i+j}
  Multiplication mul = [](const SparseVec& a, const SparseVec& b) {
    std::map<std::size_t, Rational> acc;
    for (const auto& [i, ci] : a)
      for (const auto& [j, cj] : b)
        if (i + j <= 3) acc[i + j] += ci * cj;
    SparseVec out;
    for (auto& [k, c] : acc)
      if (sgn(c) != 0) out.emplace_back(k, c);
    return out;
  };
  auto r = longest_product({{}, unit_vector(1), unit_vector(2), unit_vector(3)}, mul);
  CHECK(r.length == 3);
  CHECK(r.witness == std::vector<std::size_t>{1, 1, 1});
  CHECK(longest_product({{}, {}}, mul).length == 0);
}

TEST_CASE("cuplength") {
  CHECK(cuplength(cohomology(testing::odd_sphere())) == 1);
  CHECK(cuplength(cohomology(testing::even_sphere())) == 1);

  auto e = elliptic_extension(testing::example1());
  auto q = quotient_A(e);
  auto hA = cohomology(q);
  auto hW = cohomology(e.extension);
  const int clA = cuplength(hA);
  CHECK(clA == cuplength(hW));
  CHECK(clA >= 3);
}

TEST_CASE("zero-divisor cuplength") {
  CHECK(zero_divisor_cuplength(testing::example1()) == 3);
  CHECK(zero_divisor_cuplength(testing::odd_sphere()) == 1);
  CHECK(zero_divisor_cuplength(testing::even_sphere()) == 2);
  auto a = testing::algebra({{"x", 2}, {"y", 3}});
  CHECK_THROWS_AS(zero_divisor_cuplength(testing::model(a, [](auto&) {})), NotComputable);
}

TEST_CASE("zcl witness multiplies out to a non-zero class") {
  auto h = cohomology(testing::example1());
  CohomologyRing ring(h);
  TensorSquareRing t(ring);
  auto r = zero_divisor_cuplength_search(ring);
  REQUIRE(r.length == 3);
  SparseVec p = t.zero_divisor(r.witness[0]);
  for (std::size_t k = 1; k < r.witness.size(); ++k) p = t.multiply(p, t.zero_divisor(r.witness[k]));
  CHECK(p == r.product);
  CHECK_FALSE(p.empty());
  CHECK(t.mu(t.zero_divisor(r.witness[0])).empty());
}

TEST_CASE("cl and zcl agree with the random-combination oracle") {
  std::mt19937 rng(2024);
  std::vector<SullivanModel> models = {testing::example1(), testing::odd_sphere(), testing::even_sphere(),
                                       f0_model()};
  auto e = elliptic_extension(testing::example1());
  for (const auto& m : models) {
    auto h = cohomology(m);
    REQUIRE(h.size() <= 64);
    CohomologyRing ring(h);
    CHECK(cuplength(ring) == cl_oracle(ring, rng));
    CHECK(zero_divisor_cuplength_search(ring).length == zcl_oracle(ring, rng));
  }
  auto hA = cohomology(quotient_A(e));
  CohomologyRing ringA(hA);
  CHECK(cuplength(ringA) == cl_oracle(ringA, rng));
}

TEST_CASE("L invariant") {
  CHECK(L_invariant(testing::example1()).value == 2);
  CHECK(L_invariant(testing::example2()).value == 2);
  CHECK(L_invariant(testing::odd_sphere()).value == 0);

  auto a = testing::algebra({{"x1", 2}, {"x2", 2}, {"y1", 5}});
  auto cubic = testing::model(a, [&](auto& d) {
    d[2] = testing::gen(a, "x1") * testing::gen(a, "x1") * testing::gen(a, "x2");
  });
  CHECK_THROWS_AS(L_invariant(cubic), NotComputable);
}

TEST_CASE("L is exhaustive: no non-zero triple of odd classes in example1") {
  auto q = quotient_A(elliptic_extension(testing::example1()));
  auto h = bigraded_cohomology(q);
  CohomologyRing ring(h);
  std::vector<std::size_t> odd;
  for (std::size_t i = 0; i < h.size(); ++i)
    if (h.cls(i).block.first % 2) odd.push_back(i);
  bool pair = false;
  for (auto i : odd)
    for (auto j : odd) {
      if (!ring.product(i, j).empty()) pair = true;
      for (auto k : odd) CHECK(ring.multiply(ring.product(i, j), unit_vector(k)).empty());
    }
  CHECK(pair);
}

TEST_CASE("L is invariant under permuting and scaling the basis") {
  const std::string swapped[] = {"x4", "x2", "x1", "x3"};
  CHECK(L_invariant(testing::example2(), swapped).value == 2);
  const std::string names[] = {"a", "b", "c", "e"};
  std::vector<std::vector<Rational>> P = {{2, 0, 0, 0}, {0, -1, 0, 0}, {0, 0, make_rational(1, 3), 0}, {0, 0, 0, 5}};
  CHECK(L_invariant(change_even_basis(testing::example2(), names, P)).value == 2);
}

TEST_CASE("category of pure elliptic models") {
  auto c1 = cat_pure(testing::example1());
  CHECK(c1.value == 3);
  CHECK(c1.method == "coformal");
  CHECK(cat_pure(f0_model()).value == 2);
  CHECK(cat_pure(testing::even_sphere()).value == 1);

  auto a = testing::algebra({{"x", 2}, {"y", 5}});
  auto cubic = testing::model(a, [&](auto& d) { d[1] = testing::gen(a, "x") * testing::gen(a, "x") * testing::gen(a, "x"); });
  auto cc = cat_pure(cubic);
  CHECK(cc.method == "homogeneous");
  CHECK(cc.value == 2);  // n(k-2)+m = 1 + 1
  CHECK(cuplength(cohomology(cubic)) == 2);

  auto b = testing::algebra({{"x", 2}, {"y1", 3}, {"y2", 5}});
  auto mixed = testing::model(b, [&](auto& d) {
    d[1] = testing::gen(b, "x") * testing::gen(b, "x");
    d[2] = testing::gen(b, "x") * testing::gen(b, "x") * testing::gen(b, "x");
  });
  CHECK_THROWS_AS(cat_pure(mixed), NotComputable);
}

TEST_CASE("TC bounds: example1 closes at 5") {
  auto r = tc_bounds(testing::example1());
  CHECK_FALSE(r.inconsistent);
  REQUIRE(r.low);
  REQUIRE(r.high);
  CHECK(*r.low == 5);
  CHECK(*r.high == 5);
  CHECK(r.exact);
  REQUIRE(find(r.upper, "theorem42"));
  CHECK(find(r.upper, "theorem42")->value == 5);
  CHECK(find(r.upper, "theorem42")->detail.find("Z=x1,x2,y1,y2") == 0);
  CHECK(find(r.lower, "theorem51")->value == 5);
  CHECK(find(r.lower, "zcl")->value == 3);
  CHECK(find(r.upper, "theorem42_homogeneous")->value == 5);
}

TEST_CASE("TC bounds: example2 leaves [7, 9] without certificates") {
  auto r = tc_bounds(testing::example2());
  CHECK(find(r.lower, "theorem51")->value == 7);
  CHECK(find(r.upper, "prop51")->value == 9);
  CHECK(find(r.upper, "theorem42")->value == 9);
  CHECK(*r.high == 9);
  CHECK(*r.low == 7);
  CHECK_FALSE(r.exact);

  BoundOptions opt;
  opt.certified.push_back({9, "theorem53", "certificate"});
  auto closed = tc_bounds(testing::example2(), opt);
  CHECK(closed.exact);
  CHECK(*closed.low == 9);
}

TEST_CASE("TC bounds: spheres") {
  auto odd = tc_bounds(testing::odd_sphere());
  CHECK(*odd.low == 1);
  CHECK(*odd.high == 1);
  CHECK(find(odd.lower, "zcl")->value == 1);

  auto even = tc_bounds(testing::even_sphere());
  CHECK(even.exact);
  CHECK(*even.low == 2);
  CHECK(find(even.upper, "theorem41")->value == 2);
  CHECK(find(even.lower, "zcl")->value == 2);
  CHECK(is_factored_f0(testing::even_sphere()));
  CHECK_FALSE(is_factored_f0(testing::example1()));
}

TEST_CASE("asserted formality closes the interval") {
  BoundOptions opt;
  opt.assert_formal = true;
  auto r = tc_bounds(f0_model(), opt);
  CHECK(r.exact);
  CHECK(*r.low == 4);
}
