#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "sullivan/cohom.hpp"
#include "sullivan/error.hpp"
#include "sullivan/invar.hpp"
#include "sullivan/witness.hpp"

using namespace sullivan;

namespace {

DiagonalContext adjoined(const SullivanModel& m) { return DiagonalContext(elliptic_extension(m), true); }

DiagonalContext identified(const SullivanModel& m) {
  auto e = identify_extension(m);
  REQUIRE(e);
  return DiagonalContext(*e, false);
}

SullivanModel free_pair() {
  auto a = testing::algebra({{"x", 2}, {"y", 3}});
  return testing::model(a, [](auto&) {});
}

// Λ(x1, x2, y) with dy = x1·x2
SullivanModel cross_model() {
  auto a = testing::algebra({{"x1", 2}, {"x2", 2}, {"y", 3}});
  return testing::model(a, [&](auto& d) { d[2] = testing::gen(a, "x1") * testing::gen(a, "x2"); });
}

SullivanModel family_model() {
  auto a = testing::algebra({{"x1", 2}, {"x2", 2}, {"y1", 3}, {"y2", 3}});
  return testing::model(a, [&](auto& d) {
    d[2] = testing::gen(a, "x1") * testing::gen(a, "x1");
    d[3] = testing::gen(a, "x2") * testing::gen(a, "x1");
  });
}

Element ww(const DiagonalContext& ctx, const char* name) {
  return Element::generator(ctx.square().model.algebra(), name);
}

// Independent oracle: the class of Ω_A by elimination in A⊗A'.
bool nonzero_in_AA(const DiagonalContext& ctx, const Element& e) {
  CohomologyTable h(ctx.quotient_square(), ctx.quotient_square_d(), *e.degree(), Grading::none);
  return !h.coordinates(e).empty();
}

Rational abs_of(Rational r) { return sgn(r) < 0 ? Rational(-r) : r; }

}  // namespace

TEST_CASE("ω for Λ(x, u) and Λ(x, u, y)") {
  auto sphere = *identify_extension(testing::even_sphere());
  auto x = Element::generator(sphere.extension.algebra(), "x");
  CHECK(omega_single(sphere) == -x);

  auto e = elliptic_extension(free_pair());
  auto W = e.extension.algebra();
  CHECK(omega_single(e) == -(Element::generator(W, "y") * Element::generator(W, "x")));
}

TEST_CASE("ω for example1 maps to the fundamental cocycle") {
  auto e = elliptic_extension(testing::example1());
  auto w = omega_single(e);
  auto q = quotient_A(e);
  CHECK(q.phi.apply(w) == q.top_monomial());
  CHECK(e.extension.d(w).is_zero());
}

TEST_CASE("ω needs a quadratic differential") {
  auto a = testing::algebra({{"x", 2}, {"y", 5}});
  auto cubic = testing::model(a, [&](auto& d) { d[1] = testing::gen(a, "x") * testing::gen(a, "x") * testing::gen(a, "x"); });
  CHECK_THROWS_AS(omega_single(elliptic_extension(cubic)), NotComputable);
}

TEST_CASE("Ω for n = 1, m = 0") {
  auto ctx = identified(testing::even_sphere());
  auto c = omega_diagonal(ctx);
  CHECK(c.power == 1);
  CHECK(c.product == -(ww(ctx, "x") - ww(ctx, "x'")));
  CHECK(sgn(c.scalar) != 0);
  CHECK(c.model_lower_bound == 1);
}

TEST_CASE("Ω for n = 1, m = 1 with dy = 0") {
  auto ctx = adjoined(free_pair());
  auto c = omega_diagonal(ctx);
  CHECK(c.power == 2);
  auto expected = -((ww(ctx, "y") - ww(ctx, "y'")) * (ww(ctx, "x") - ww(ctx, "x'")));
  CHECK(c.product == expected);
  CHECK(c.model_lower_bound == 1);
  CHECK(nonzero_in_AA(ctx, omega_A(ctx)));
}

TEST_CASE("Ω for example1") {
  auto ctx = adjoined(testing::example1());
  auto c = omega_diagonal(ctx);
  CHECK(c.power == 5);
  CHECK(c.blocks[0].terms.size() > 1);
  CHECK(ctx.square().model.d(c.product).is_zero());
  CHECK_NOTHROW(verify_certificate(ctx, c));
}

TEST_CASE("Ω on random coformal models") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 1 + trial % 3, m = trial / 4 % 3 + 1;
    auto ctx = adjoined(testing::random_coformal(n, m, rng));
    auto c = omega_diagonal(ctx);
    CHECK(c.power == n + m);
    auto oa = omega_A(ctx);
    CHECK(ctx.image(c.product) == (n % 2 ? -oa : oa));
    if (n + m <= 3) CHECK(nonzero_in_AA(ctx, oa));
  }
}

TEST_CASE("tampered certificates are rejected") {
  auto ctx = adjoined(free_pair());
  auto c = omega_diagonal(ctx);
  auto bad = c;
  bad.scalar += 1;
  CHECK_THROWS_AS(verify_certificate(ctx, bad), ConstructionError);
  bad = c;
  bad.blocks[0].terms[0].factors[0] = ww(ctx, "x");
  CHECK_THROWS_AS(verify_certificate(ctx, bad), ConstructionError);
  bad = c;
  bad.power += 1;
  CHECK_THROWS_AS(verify_certificate(ctx, bad), ConstructionError);
}

TEST_CASE("lifting classes through φ") {
  auto ctx = adjoined(testing::example1());
  const auto& q = ctx.quotient();
  auto h = cohomology(q);
  for (const auto& cls : h.classes()) {
    auto lift = lift_cocycle(ctx, cls.rep);
    CHECK(ctx.extension().extension.d(lift).is_zero());
    CHECK(q.phi.apply(lift) == cls.rep);
  }
  CHECK_THROWS_AS(lift_cocycle(ctx, Element::generator(q.algebra, "y3")), StructuralError);
}

TEST_CASE("L-witness certificate on example1") {
  auto ctx = adjoined(testing::example1());
  const auto& q = ctx.quotient();
  auto h = bigraded_cohomology(q);
  auto z1 = h.coordinates(Element::generator(q.algebra, "x1"));
  auto z2 = h.coordinates(Element::generator(q.algebra, "x2") * Element::generator(q.algebra, "y3"));
  REQUIRE(z1.size() == 1);
  REQUIRE(z2.size() == 1);
  const std::size_t classes[] = {z1[0].first, z2[0].first};
  auto c = theorem51_certificate(ctx, classes);
  CHECK(c.power == 7);
  CHECK(c.model_lower_bound == 5);
  CHECK(sgn(c.scalar) != 0);

  // Ω_A·∏(z_k − z_k') = 2^r·Ω_A·∏z_k in A⊗A'
  auto oa = omega_A(ctx);
  auto zz = Element::one(ctx.quotient_square());
  auto zd = zz;
  for (auto k : classes) {
    const auto& rep = h.cls(k).rep;
    zz = zz * ctx.image_left(rep);
    zd = zd * (ctx.image_left(rep) - ctx.image_right(rep));
  }
  CHECK(oa * zd == Rational(4) * (oa * zz));

  auto best = theorem51_certificate(ctx);
  CHECK(best.power == 7);

  const std::size_t even[] = {0};
  CHECK_THROWS_AS(theorem51_certificate(ctx, even), StructuralError);
  const std::size_t twice[] = {z1[0].first, z1[0].first};
  CHECK_THROWS_AS(theorem51_certificate(ctx, twice), StructuralError);
}

TEST_CASE("β for n = 1 with dy = 0") {
  auto ctx = adjoined(free_pair());
  auto bp = lemma54_beta(ctx);
  auto x = ww(ctx, "x"), xp = ww(ctx, "x'"), y = ww(ctx, "y"), yp = ww(ctx, "y'");
  CHECK(bp.theta_hat.is_zero());
  CHECK(bp.theta == (x - xp) * yp + make_rational(1, 2) * (xp * (y - yp)));
  CHECK(bp.beta.value == bp.theta);
  CHECK(ctx.square().model.d(bp.beta.value).is_zero());
}

TEST_CASE("β for n = 2 with dy = x1·x2") {
  auto ctx = adjoined(cross_model());
  auto bp = lemma54_beta(ctx);
  CHECK(ctx.square().model.d(bp.beta.value).is_zero());
  CHECK(bp.beta.terms.size() == 1 + 2 + 4);
  for (const auto& t : bp.beta.terms) {
    CHECK(t.factors.size() == 2);
    for (const auto& f : t.factors) CHECK(ctx.square().mu.apply(f).is_zero());
  }
  const auto& aa = ctx.quotient_square();
  auto g = [&](const char* s) { return Element::generator(aa, s); };
  auto expected = -make_rational(1, 2) *
                  (g("x1'") * (g("x2") - g("x2'")) * (g("y") - g("y'")) + g("x2'") * (g("x1") - g("x1'")) * (g("y") - g("y'")));
  CHECK(ctx.image(bp.gamma) == expected);
}

TEST_CASE("β needs m = 1") {
  CHECK_THROWS_AS(lemma54_beta(adjoined(testing::example1())), StructuralError);
}

TEST_CASE("Ω·β certificates") {
  auto c1 = theorem53_certificate(adjoined(free_pair()));
  CHECK(c1.power == 3);
  CHECK(c1.scalar == 2);

  auto c2 = theorem53_certificate(adjoined(cross_model()));
  CHECK(c2.power == 5);
  CHECK(abs_of(c2.scalar) == 4);

  auto c3 = theorem53_certificate(identified(testing::example1()));
  CHECK(c3.power == 5);
  CHECK(c3.model_lower_bound == 5);
}

TEST_CASE("Ω·β on example2 read as an m = 1 extension") {
  auto ctx = identified(testing::example2());
  REQUIRE(ctx.extension().n() == 4);
  REQUIRE(ctx.extension().m() == 1);
  auto c = theorem53_certificate(ctx);
  CHECK(c.power == 9);
  CHECK(abs_of(c.scalar) == 16);
  CHECK(c.model_lower_bound == 9);
}

TEST_CASE("Ω·β on random m = 1 extensions") {
  std::mt19937 rng(11);
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 3; ++trial) {
      auto ctx = adjoined(testing::random_coformal(n, 1, rng));
      auto c = theorem53_certificate(ctx);
      CHECK(c.power == 2 * n + 1);
      CHECK(abs_of(c.scalar) == Rational(1 << n));
    }
  }
}

TEST_CASE("special family") {
  auto ctx = adjoined(family_model());
  auto p = find_family_partition(ctx);
  REQUIRE(p);
  CHECK(p->xn == 1);
  CHECK(p->y1 == 0);
  auto c = special_family_certificate(ctx);
  CHECK(c.power == 6);
  CHECK(abs_of(c.scalar) == 4);
  CHECK(c.model_lower_bound == 4);
  CHECK(nonzero_in_AA(ctx, c.image));

  // dy1 = x1·x2 and dy2 = x1·x2 leave no admissible x_n with y1 free of it
  auto a = testing::algebra({{"x1", 2}, {"x2", 2}, {"x3", 2}, {"y1", 3}, {"y2", 3}});
  auto bad = testing::model(a, [&](auto& d) {
    d[3] = testing::gen(a, "x1") * testing::gen(a, "x2");
    d[4] = testing::gen(a, "x2") * testing::gen(a, "x3") + testing::gen(a, "x1") * testing::gen(a, "x3");
  });
  auto bctx = adjoined(bad);
  CHECK(find_family_partition(bctx));  // x3 works: dy1 free of x3, dy2 divisible by x3
  auto worse = testing::model(a, [&](auto& d) {
    d[3] = testing::gen(a, "x1") * testing::gen(a, "x2");
    d[4] = testing::gen(a, "x2") * testing::gen(a, "x3") + testing::gen(a, "x1") * testing::gen(a, "x1");
  });
  CHECK_THROWS_AS(special_family_certificate(adjoined(worse)), NotComputable);
}

TEST_CASE("special family with n = 2 and larger m") {
  auto a = testing::algebra({{"x1", 2}, {"x2", 2}, {"y1", 3}, {"y2", 3}, {"y3", 3}});
  // dy1 = 0 after the change of variables available for n = 2
  auto m = testing::model(a, [&](auto& d) {
    d[3] = testing::gen(a, "x2") * testing::gen(a, "x1");
    d[4] = testing::gen(a, "x2") * testing::gen(a, "x2") - testing::gen(a, "x2") * testing::gen(a, "x1");
  });
  auto c = special_family_certificate(adjoined(m));
  CHECK(c.power == 7);  // m + 4
}

TEST_CASE("a product of y-differences absorbs primes") {
  auto a = testing::algebra({{"y1", 3}, {"y2", 5}, {"y3", 3}});
  const std::size_t one[] = {1};
  CHECK(lemma52_check(a, one));
  const std::size_t all[] = {0, 1, 2};
  CHECK(lemma52_check(a, all));
  auto single = testing::algebra({{"y", 3}});
  const std::size_t first[] = {0};
  CHECK(lemma52_check(single, first));
}
