#include "sullivan/algebra.hpp"

#include <limits>
#include <numeric>

#include "sullivan/error.hpp"

namespace sullivan {

bool Monomial::is_one() const {
  for (auto e : exps_) {
    if (e != 0) return false;
  }
  return true;
}

int Monomial::word_length() const { return std::accumulate(exps_.begin(), exps_.end(), 0); }

std::size_t Monomial::hash() const {
  std::size_t h = 1469598103934665603ull;
  for (auto e : exps_) {
    h ^= e;
    h *= 1099511628211ull;
  }
  return h;
}

Algebra::Algebra(std::vector<Generator> gens) : gens_(std::move(gens)) {
  odd_.reserve(gens_.size());
  max_exp_.reserve(gens_.size());
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    const auto& g = gens_[i];
    if (g.degree < 1) {
      throw StructuralError("generator '" + g.name + "' must have positive degree");
    }
    if (g.name.empty()) throw StructuralError("generator with empty name");
    if (!by_name_.emplace(g.name, i).second) {
      throw StructuralError("duplicate generator name '" + g.name + "'");
    }
    odd_.push_back(g.odd() ? 1 : 0);
    if (g.odd()) {
      max_exp_.push_back(1);
    } else if (g.cap > 0) {
      max_exp_.push_back(static_cast<Monomial::Exponent>(g.cap));
    } else {
      max_exp_.push_back(std::numeric_limits<Monomial::Exponent>::max());
    }
  }
}

std::optional<std::size_t> Algebra::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::size_t Algebra::index(std::string_view name) const {
  auto i = find(name);
  if (!i) throw StructuralError("unknown generator '" + std::string(name) + "'");
  return *i;
}

int Algebra::degree(const Monomial& m) const {
  int d = 0;
  for (std::size_t i = 0; i < gens_.size(); ++i) d += m[i] * gens_[i].degree;
  return d;
}

bool Algebra::finite() const {
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    if (!odd_[i] && gens_[i].cap <= 0) return false;
  }
  return true;
}

int Algebra::top_degree() const {
  if (!finite()) throw StructuralError("top degree of an infinite-dimensional algebra");
  int d = 0;
  for (std::size_t i = 0; i < gens_.size(); ++i) d += max_exp_[i] * gens_[i].degree;
  return d;
}

Monomial Algebra::generator_monomial(std::size_t i) const {
  Monomial m(gens_.size());
  m[i] = 1;
  return m;
}

int Algebra::multiply(const Monomial& a, const Monomial& b, Monomial& out) const {
  const std::size_t n = gens_.size();
  if (out.size() != n) out.resize(n);
  // Bring each odd factor of b left past the odd factors of a with larger index.
  int odd_after = 0;
  int parity = 0;
  for (std::size_t i = n; i-- > 0;) {
    const unsigned e = static_cast<unsigned>(a[i]) + b[i];
    if (e > max_exp_[i]) return 0;
    out[i] = static_cast<Monomial::Exponent>(e);
    if (odd_[i]) {
      if (b[i]) parity ^= (odd_after & 1);
      if (a[i]) ++odd_after;
    }
  }
  return parity ? -1 : 1;
}

namespace {

void enumerate(const Algebra& alg, std::size_t i, int remaining, Monomial& cur,
               const std::function<bool(const Monomial&)>* keep, std::vector<Monomial>& out) {
  if (remaining == 0) {
    if (!keep || (*keep)(cur)) out.push_back(cur);
    return;
  }
  if (i == alg.size()) return;
  const int deg = alg.gen(i).degree;
  const int limit = std::min<int>(alg.max_exponent(i), remaining / deg);
  for (int e = 0; e <= limit; ++e) {
    cur[i] = static_cast<Monomial::Exponent>(e);
    enumerate(alg, i + 1, remaining - e * deg, cur, keep, out);
  }
  cur[i] = 0;
}

}  // namespace

std::vector<Monomial> Algebra::monomials_of_degree(int degree) const {
  std::vector<Monomial> out;
  if (degree < 0) return out;
  Monomial cur(gens_.size());
  enumerate(*this, 0, degree, cur, nullptr, out);
  return out;
}

std::vector<Monomial> Algebra::monomials_of_degree(
    int degree, const std::function<bool(const Monomial&)>& keep) const {
  std::vector<Monomial> out;
  if (degree < 0) return out;
  Monomial cur(gens_.size());
  enumerate(*this, 0, degree, cur, &keep, out);
  return out;
}

std::string Algebra::format(const Monomial& m) const {
  std::string s;
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    if (m[i] == 0) continue;
    if (!s.empty()) s += '*';
    s += gens_[i].name;
    if (m[i] > 1) s += '^' + std::to_string(m[i]);
  }
  return s.empty() ? "1" : s;
}

bool operator==(const Algebra& a, const Algebra& b) {
  if (a.gens_.size() != b.gens_.size()) return false;
  for (std::size_t i = 0; i < a.gens_.size(); ++i) {
    const auto& x = a.gens_[i];
    const auto& y = b.gens_[i];
    if (x.name != y.name || x.degree != y.degree || a.max_exp_[i] != b.max_exp_[i]) return false;
  }
  return true;
}

AlgebraPtr make_algebra(std::vector<Generator> gens) {
  return std::make_shared<const Algebra>(std::move(gens));
}

bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

}  // namespace sullivan
