// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "sullivan/cli.hpp"
#include "sullivan/cohom.hpp"
#include "sullivan/error.hpp"
#include "sullivan/invar.hpp"
#include "sullivan/witness.hpp"

using namespace sullivan;

namespace {

struct Failure {
  std::string what;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

std::string value(const cli::Report& r, const std::string& key) {
  for (const auto& [k, v] : r.entries()) {
    if (k == key) return v;
  }
  return "<missing>";
}

void expect_value(const cli::Report& r, const std::string& key, const std::string& want) {
  const auto got = value(r, key);
  expect(got == want, key + " = " + got + ", expected " + want);
}

std::string data(const std::string& name) { return std::string(SULLIVAN_DATA_DIR) + "/" + name; }

Rational abs_of(Rational r) { return sgn(r) < 0 ? Rational(-r) : r; }

bool is_power_of_two_times(const Rational& s, int n) { return abs_of(s) == Rational(1L << n); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int failures = 0;

void criterion(int number, const std::string& title, const std::function<std::string()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string summary;
  bool ok = true;
  try {
    summary = body();
  } catch (const Failure& f) {
    ok = false;
    summary = f.what;
  } catch (const std::exception& e) {
    ok = false;
    summary = std::string("exception: ") + e.what();
  }
  if (!ok) ++failures;
  std::printf("%s %d %s: %s (%.2fs)\n", ok ? "PASS" : "FAIL", number, title.c_str(), summary.c_str(),
              seconds_since(t0));
  std::fflush(stdout);
}

// Random pure coformal model with n even and m >= n odd generators that is elliptic.
SullivanModel random_elliptic(int n, int m, std::mt19937& rng) {
  while (true) {
    auto model = testing::random_coformal(n, m, rng);
    if (is_elliptic(model) == Ellipticity::yes) return model;
  }
}

std::vector<SullivanModel> shipped_models() {
  std::vector<std::string> paths;
  for (const auto& e : std::filesystem::directory_iterator(SULLIVAN_DATA_DIR)) paths.push_back(e.path().string());
  std::sort(paths.begin(), paths.end());
  std::vector<SullivanModel> out;
  for (const auto& p : paths) out.push_back(cli::parse_model_file(p).model());
  return out;
}

std::string c1() {
  const auto t0 = std::chrono::steady_clock::now();
  auto f = cli::parse_model_file(data("example1.model"));
  auto inv = cli::run("invariants", f);
  expect_value(inv, "invariants.chi_pi", "-1");
  expect_value(inv, "invariants.cat", "3");
  expect_value(inv, "invariants.zcl", "3");
  expect_value(inv, "invariants.L.basis.0.order", "x1,x2");
  expect_value(inv, "invariants.L.basis.0", "2");
  auto b = cli::run("bounds", f);
  expect_value(b, "bounds.interval", "[5,5]");
  expect_value(b, "bounds.exact", "true");
  const double t = seconds_since(t0);
  expect(t < 30, "took " + std::to_string(t) + "s");
  return "chi_pi=-1 cat=3 zcl=3 L=2 TC=[5,5]";
}

std::string c2() {
  const auto t0 = std::chrono::steady_clock::now();
  auto f = cli::parse_model_file(data("example2.model"));
  auto inv = cli::run("invariants", f);
  expect_value(inv, "invariants.L", "2");
  auto b = cli::run("bounds", f);
  expect_value(b, "bounds.lower.theorem51", "7");
  expect_value(b, "bounds.upper.prop51", "9");
  expect_value(b, "bounds.interval", "[9,9]");
  cli::Options o;
  o.construction = "theorem53";
  auto w = cli::run("witness", f, o);
  expect_value(w, "witness.power", "9");
  const auto s = value(w, "witness.scalar");
  expect(s == "16" || s == "-16", "scalar " + s);
  const double t = seconds_since(t0);
  expect(t < 300, "took " + std::to_string(t) + "s");
  return "L=2, dim V^odd+L=7, certificate power 9 scalar " + s + ", dim W=9, TC=[9,9]";
}

std::string c3() {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> size(1, 3), odd(0, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = size(rng), m = odd(rng);
    DiagonalContext ctx(elliptic_extension(testing::random_coformal(n, m, rng)), true);
    const std::string tag = "trial " + std::to_string(trial) + " (n=" + std::to_string(n) +
                            ", m=" + std::to_string(m) + "): ";
    auto c = omega_diagonal(ctx);
    const auto& omega = c.blocks.at(0).value;
    expect(ctx.square().model.d(omega).is_zero(), tag + "dΩ != 0");
    const auto oa = omega_A(ctx);
    expect(ctx.image(omega) == (n % 2 ? -oa : oa), tag + "(φ⊗φ)(Ω) != (-1)^n Ω_A");
    const auto pairing = ctx.image_right(ctx.quotient().top_monomial());
    const auto lambda = ctx.top_multiple(oa * pairing);
    expect(lambda && sgn(*lambda) != 0, tag + "[Ω_A][ω'_A] is not a non-zero multiple of the top class");
  }
  return "50/50 random models";
}

std::string c4() {
  std::mt19937 rng(99);
  int count = 0;
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 6; ++trial, ++count) {
      DiagonalContext ctx(elliptic_extension(testing::random_coformal(n, 1, rng)), true);
      const std::string tag = "n=" + std::to_string(n) + " trial " + std::to_string(trial) + ": ";
      auto beta = lemma54_beta(ctx);
      expect(ctx.square().model.d(beta.beta.value).is_zero(), tag + "dβ != 0");
      auto c = theorem53_certificate(ctx);
      const auto lambda = ctx.top_multiple(ctx.image(c.product));
      expect(lambda.has_value(), tag + "image is not a multiple of the top class");
      expect(*lambda == c.scalar, tag + "scalar mismatch");
      expect(is_power_of_two_times(*lambda, n), tag + "scalar " + to_string(*lambda) + " is not ±2^n");
    }
  }
  return std::to_string(count) + "/" + std::to_string(count) + " random m=1 extensions";
}

std::string c5() {
  const int degrees[] = {3, 5, 3, 7};
  int checks = 0;
  for (int m = 1; m <= 4; ++m) {
    std::vector<Generator> g;
    for (int j = 0; j < m; ++j) g.push_back(Generator{"y" + std::to_string(j + 1), degrees[j], 0});
    auto alg = make_algebra(std::move(g));
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      std::vector<std::size_t> subset;
      for (int j = 0; j < m; ++j) {
        if (mask & (1u << j)) subset.push_back(static_cast<std::size_t>(j));
      }
      expect(lemma52_check(alg, subset), "m=" + std::to_string(m) + " mask " + std::to_string(mask));
      ++checks;
    }
  }
  return std::to_string(checks) + " subsets";
}

std::string c6() {
  std::mt19937 rng(6);
  auto mixed = testing::algebra({{"a", 1}, {"b", 2}, {"c", 3}, {"e", 4}, {"f", 5}});
  std::uniform_int_distribution<int> deg(0, 9);
  for (int k = 0; k < 1000; ++k) {
    const int p = deg(rng), q = deg(rng);
    auto a = testing::random_element(mixed, p, rng);
    auto b = testing::random_element(mixed, q, rng);
    const auto ab = a * b, ba = b * a;
    expect(ab == ((p * q) % 2 ? -ba : ba), "commutativity, check " + std::to_string(k));
  }
  for (int k = 0; k < 1000; ++k) {
    auto a = testing::random_element(mixed, deg(rng), rng);
    auto b = testing::random_element(mixed, deg(rng), rng);
    auto c = testing::random_element(mixed, deg(rng), rng);
    expect((a * b) * c == a * (b * c), "associativity, check " + std::to_string(k));
  }
  std::vector<SullivanModel> models;
  for (int i = 0; i < 10; ++i) models.push_back(elliptic_extension(testing::random_coformal(2, 2, rng)).extension);
  std::uniform_int_distribution<int> low(1, 8);
  for (int k = 0; k < 1000; ++k) {
    const auto& m = models[static_cast<std::size_t>(k) % models.size()];
    const int p = low(rng);
    auto a = testing::random_element(m.algebra(), p, rng);
    auto b = testing::random_element(m.algebra(), low(rng), rng);
    expect(m.d(a * b) == m.d(a) * b + (p % 2 ? -(a * m.d(b)) : a * m.d(b)), "Leibniz, check " + std::to_string(k));
  }
  for (int k = 0; k < 1000; ++k) {
    const auto& m = models[static_cast<std::size_t>(k) % models.size()];
    auto a = testing::random_element(m.algebra(), low(rng) + 2, rng);
    expect(m.d(m.d(a)).is_zero(), "d^2, check " + std::to_string(k));
  }
  return "4 x 1000 checks";
}

std::string c7() {
  std::ostringstream out;
  std::vector<std::string> paths;
  for (const auto& e : std::filesystem::directory_iterator(SULLIVAN_DATA_DIR)) paths.push_back(e.path().string());
  std::sort(paths.begin(), paths.end());
  for (const auto& p : paths) {
    const auto file = cli::parse_model_file(p);
    const auto m = file.model();
    const auto basis = file.bases.empty() ? std::vector<std::string>{} : file.bases.front();
    const auto e = elliptic_extension(m, basis);
    const auto q = quotient_A(e);
    const auto hw = cohomology(e.extension, q.top_degree);
    const auto ha = cohomology(q);
    for (int n = 0; n <= q.top_degree; ++n) {
      expect(hw.dim(n) == ha.dim(n), std::filesystem::path(p).filename().string() + " degree " + std::to_string(n) +
                                         ": " + std::to_string(hw.dim(n)) + " vs " + std::to_string(ha.dim(n)));
    }
    out << std::filesystem::path(p).stem().string() << "(D=" << q.top_degree << ") ";
  }
  return out.str() + "all degrees equal";
}

std::string c8() {
  auto odd = cli::run("bounds", cli::parse_model_file(data("odd_sphere.model")));
  expect_value(odd, "bounds.lower.zcl", "1");
  expect_value(odd, "bounds.interval", "[1,1]");
  auto even = cli::run("bounds", cli::parse_model_file(data("even_sphere.model")));
  expect_value(even, "bounds.lower.zcl", "2");
  expect_value(even, "bounds.lower.theorem41", "2");
  expect_value(even, "bounds.upper.theorem41", "2");
  expect_value(even, "bounds.interval", "[2,2]");
  return "odd sphere [1,1], even sphere [2,2]";
}

std::string c9() {
  std::vector<SullivanModel> corpus = shipped_models();
  std::mt19937 rng(9);
  const std::pair<int, int> shapes[] = {{1, 1}, {1, 2}, {2, 2}, {2, 2}, {2, 3}, {3, 3}};
  for (const auto& [n, m] : shapes) corpus.push_back(random_elliptic(n, m, rng));
  for (int i = 0; i < 4; ++i) {
    corpus.push_back(elliptic_extension(testing::random_coformal(1 + i % 2, 1 + i / 2, rng)).extension);
  }
  int certificates = 0;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const auto& m = corpus[k];
    const std::string tag = "model " + std::to_string(k) + ": ";
    const int zcl = zero_divisor_cuplength(m);
    const auto report = tc_bounds(m);
    expect(report.high.has_value(), tag + "no upper bound");
    std::vector<WitnessCertificate> certs;
    if (auto e = identify_extension(m)) {
      DiagonalContext ctx(*e, false);
      if (e->m() == 1) certs.push_back(theorem53_certificate(ctx));
      if (find_family_partition(ctx)) certs.push_back(special_family_certificate(ctx));
    }
    if (m.flags().coformal) certs.push_back(theorem51_certificate(DiagonalContext(elliptic_extension(m), true)));
    for (const auto& c : certs) {
      ++certificates;
      expect(zcl <= c.model_lower_bound, tag + c.construction + " bound " + std::to_string(c.model_lower_bound) +
                                             " below zcl " + std::to_string(zcl));
      expect(c.model_lower_bound <= *report.high, tag + c.construction + " bound " +
                                                     std::to_string(c.model_lower_bound) + " above upper bound " +
                                                     std::to_string(*report.high));
    }
    expect(!report.inconsistent, tag + "bounds inconsistent");
  }
  return std::to_string(corpus.size()) + " models, " + std::to_string(certificates) + " certificates";
}

}  // namespace

int main() {
  criterion(1, "example1 pipeline", c1);
  criterion(2, "example2 pipeline", c2);
  criterion(3, "Omega suite", c3);
  criterion(4, "beta and m=1 certificate suite", c4);
  criterion(5, "y-difference product identity", c5);
  criterion(6, "algebra laws", c6);
  criterion(7, "quasi-isomorphism rank check", c7);
  criterion(8, "sphere sanity values", c8);
  criterion(9, "bound chain", c9);
  return failures == 0 ? 0 : 1;
}
