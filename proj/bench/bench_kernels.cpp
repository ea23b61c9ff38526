// Serial reference vs OpenMP kernels, plus two end-to-end timings.
// Usage: bench_kernels [repetitions]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "sullivan/cli.hpp"
#include "sullivan/cohom.hpp"
#include "sullivan/kernels.hpp"
#include "sullivan/witness.hpp"

using namespace sullivan;

namespace {

Element random_element(const AlgebraPtr& a, int degree, std::mt19937& rng, int terms) {
  Element e(a);
  auto basis = a->monomials_of_degree(degree);
  std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
  std::uniform_int_distribution<int> coeff(-9, 9);
  for (int k = 0; k < terms; ++k) e.add_term(basis[pick(rng)], coeff(rng));
  return e;
}

template <class F>
double best_of(int reps, F f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-24s %12.2f %12.2f %8.2fx\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::atoi(argv[1]) : 3;
  std::mt19937 rng(1);
  std::vector<Generator> g;
  for (int i = 1; i <= 4; ++i) g.push_back(Generator{"x" + std::to_string(i), 2, 0});
  for (int j = 1; j <= 6; ++j) g.push_back(Generator{"y" + std::to_string(j), 3, 0});
  auto a = make_algebra(std::move(g));
  std::vector<Element> d(a->size(), Element(a));
  for (int j = 0; j < 6; ++j) {
    d[4 + j] = Element::generator(a, j % 4) * Element::generator(a, (j + 1) % 4);
  }
  Derivation der(a, d);

  auto p = random_element(a, 16, rng, 600);
  auto q = random_element(a, 17, rng, 600);
  auto basis = a->monomials_of_degree(17);
  std::vector<Element> reps_list;
  for (int k = 0; k < 40; ++k) reps_list.push_back(random_element(a, 4 + k % 6, rng, 30));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < reps_list.size(); ++i)
    for (std::size_t j = 0; j < reps_list.size(); ++j) pairs.emplace_back(i, j);

  std::printf("threads: %d, best of %d, milliseconds\n", kernels::max_threads(), reps);
  std::printf("%-24s %12s %12s %9s\n", "kernel", "serial", "openmp", "speedup");
  row("multiply", best_of(reps, [&] { kernels::serial::multiply(p, q); }),
      best_of(reps, [&] { kernels::multiply(p, q); }));
  row("apply_derivation", best_of(reps, [&] { kernels::serial::apply_derivation(der, q); }),
      best_of(reps, [&] { kernels::apply_derivation(der, q); }));
  row("apply_to_basis", best_of(reps, [&] { kernels::serial::apply_to_basis(der, basis); }),
      best_of(reps, [&] { kernels::apply_to_basis(der, basis); }));
  row("pairwise_products", best_of(reps, [&] { kernels::serial::pairwise_products(reps_list, pairs); }),
      best_of(reps, [&] { kernels::pairwise_products(reps_list, pairs); }));

  const std::string dir = SULLIVAN_DATA_DIR;
  auto ex1 = cli::parse_model_file(dir + "/example1.model").model();
  auto ex2 = cli::parse_model_file(dir + "/example2.model").model();
  std::printf("\n%-40s %12s\n", "end to end", "ms");
  std::printf("%-40s %12.2f\n", "bigraded H(A) of example1",
              best_of(1, [&] { bigraded_cohomology(quotient_A(elliptic_extension(ex1))); }));
  std::printf("%-40s %12.2f\n", "m=1 certificate on example2",
              best_of(1, [&] { theorem53_certificate(DiagonalContext(*identify_extension(ex2), false)); }));
  std::printf("%-40s %12.2f\n", "L-witness certificate on example2",
              best_of(1, [&] { theorem51_certificate(DiagonalContext(elliptic_extension(ex2), true)); }));
  return 0;
}
