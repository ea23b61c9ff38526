#include "sullivan/cli.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sullivan/cohom.hpp"
#include "sullivan/error.hpp"
#include "sullivan/invar.hpp"
#include "sullivan/witness.hpp"

namespace sullivan::cli {

namespace {

bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

bool valid_name(std::string_view s) {
  return !s.empty() && name_start(s[0]) && std::all_of(s.begin(), s.end(), name_char);
}

class ExpressionParser {
 public:
  ExpressionParser(const AlgebraPtr& alg, std::string_view text, int line, int column)
      : alg_(alg), s_(text), line_(line), col0_(column) {}

  // Top-level summands with their start offsets.
  std::vector<std::pair<Element, std::size_t>> summands() {
    std::vector<std::pair<Element, std::size_t>> out;
    skip();
    if (i_ >= s_.size()) fail("empty expression", i_);
    bool neg = false;
    if (peek() == '-' || peek() == '+') {
      neg = get() == '-';
      skip();
    }
    while (true) {
      const std::size_t start = i_;
      Element t = term();
      out.emplace_back(neg ? -t : t, start);
      skip();
      if (i_ >= s_.size()) break;
      const char c = get();
      if (c != '+' && c != '-') fail(std::string("unexpected '") + c + "'", i_ - 1);
      neg = c == '-';
      skip();
    }
    return out;
  }

  Element parse() {
    Element out(alg_);
    for (auto& [t, pos] : summands()) out += t;
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, std::size_t pos) const {
    throw ParseError(msg, line_, col0_ + static_cast<int>(pos));
  }
  char peek() const { return i_ < s_.size() ? s_[i_] : '\0'; }
  char get() { return s_[i_++]; }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  Element expr() {
    Element out(alg_);
    bool neg = false;
    skip();
    if (peek() == '-' || peek() == '+') {
      neg = get() == '-';
      skip();
    }
    while (true) {
      Element t = term();
      out += neg ? -t : t;
      skip();
      if (peek() != '+' && peek() != '-') return out;
      neg = get() == '-';
    }
  }

  Element term() {
    Element out = power();
    skip();
    while (peek() == '*') {
      get();
      out = out * power();
      skip();
    }
    return out;
  }

  Element power() {
    skip();
    if (peek() == '-') {
      get();
      return -power();
    }
    Element base = atom();
    skip();
    if (peek() != '^') return base;
    get();
    skip();
    const std::size_t start = i_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) get();
    if (start == i_) fail("expected an exponent after '^'", start);
    const int e = std::stoi(std::string(s_.substr(start, i_ - start)));
    Element out = Element::one(alg_);
    for (int k = 0; k < e; ++k) out = out * base;
    return out;
  }

  Element atom() {
    skip();
    const std::size_t start = i_;
    const char c = peek();
    if (c == '(') {
      get();
      Element e = expr();
      skip();
      if (peek() != ')') fail("expected ')'", i_);
      get();
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (std::isdigit(static_cast<unsigned char>(peek()))) get();
      if (peek() == '/' && i_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_ + 1]))) {
        get();
        while (std::isdigit(static_cast<unsigned char>(peek()))) get();
      }
      Rational r;
      try {
        r = parse_rational(s_.substr(start, i_ - start));
      } catch (const std::exception&) {
        fail("bad number", start);
      }
      return Element::scalar(alg_, r);
    }
    if (name_start(c)) {
      while (name_char(peek())) get();
      const std::string name(s_.substr(start, i_ - start));
      const auto idx = alg_->find(name);
      if (!idx) fail("unknown generator '" + name + "'", start);
      return Element::generator(alg_, *idx);
    }
    if (i_ >= s_.size()) fail("unexpected end of expression", i_);
    fail(std::string("unexpected '") + c + "'", i_);
  }

  const AlgebraPtr& alg_;
  std::string_view s_;
  std::size_t i_ = 0;
  int line_;
  int col0_;
};

struct Token {
  std::string text;
  int column;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    out.push_back(Token{std::string(line.substr(start, i - start)), static_cast<int>(start) + 1});
  }
  return out;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

std::vector<std::string> even_names(const SullivanModel& m) {
  std::vector<std::string> out;
  for (auto i : m.even_generators()) out.push_back(m.algebra()->gen(i).name);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

Element parse_expression(const AlgebraPtr& alg, std::string_view text, int line, int column) {
  return ExpressionParser(alg, text, line, column).parse();
}

SullivanModel ModelFile::model() const {
  SullivanModel m(algebra, Derivation(algebra, differential));
  if (change) return change_even_basis(m, change->names, change->matrix);
  return m;
}

ModelFile parse_model(std::string_view text) {
  struct Line {
    int number;
    std::string raw;
    std::vector<Token> tokens;
  };
  std::vector<Line> lines;
  {
    std::istringstream in{std::string(text)};
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
      ++number;
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      const auto hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      auto tokens = tokenize(raw);
      if (!tokens.empty()) lines.push_back(Line{number, raw, std::move(tokens)});
    }
  }

  // Generators first, so differentials may mention later declarations.
  std::vector<Generator> gens;
  std::set<std::string> seen;
  std::optional<int> default_degree;
  auto parse_int = [](const Token& t, int line) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(t.text, &used);
      if (used == t.text.size()) return v;
    } catch (const std::exception&) {
    }
    throw ParseError("expected an integer, got '" + t.text + "'", line, t.column);
  };
  for (const auto& l : lines) {
    const auto& t = l.tokens;
    if (t[0].text == "degree") {
      if (t.size() != 2) throw ParseError("usage: degree <n>", l.number, t[0].column);
      default_degree = parse_int(t[1], l.number);
      if (*default_degree <= 0) throw ParseError("degrees must be positive", l.number, t[1].column);
    } else if (t[0].text == "gen") {
      if (t.size() < 2) throw ParseError("usage: gen <name>... [degree]", l.number, t[0].column);
      std::size_t last = t.size();
      std::optional<int> deg = default_degree;
      if (std::isdigit(static_cast<unsigned char>(t.back().text[0])) || t.back().text[0] == '-') {
        deg = parse_int(t.back(), l.number);
        if (*deg <= 0) throw ParseError("degrees must be positive", l.number, t.back().column);
        --last;
      }
      if (!deg) throw ParseError("no degree given and no default set", l.number, t[0].column);
      if (last < 2) throw ParseError("usage: gen <name>... [degree]", l.number, t[0].column);
      for (std::size_t k = 1; k < last; ++k) {
        if (!valid_name(t[k].text)) throw ParseError("invalid generator name '" + t[k].text + "'", l.number, t[k].column);
        if (!seen.insert(t[k].text).second) {
          throw ParseError("generator '" + t[k].text + "' declared twice", l.number, t[k].column);
        }
        gens.push_back(Generator{t[k].text, *deg, 0});
      }
    }
  }
  if (gens.empty()) throw ParseError("no generators declared", 1, 1);

  ModelFile f;
  f.algebra = make_algebra(std::move(gens));
  const auto& alg = f.algebra;
  f.differential.assign(alg->size(), Element(alg));
  std::vector<std::optional<std::pair<int, int>>> d_line(alg->size());

  for (std::size_t li = 0; li < lines.size(); ++li) {
    const auto& l = lines[li];
    const auto& t = l.tokens;
    const std::string& kw = t[0].text;
    if (kw == "degree" || kw == "gen") continue;
    if (kw == "d") {
      const auto eq = l.raw.find('=');
      if (t.size() < 3 || eq == std::string::npos) throw ParseError("usage: d <name> = <expression>", l.number, t[0].column);
      const auto idx = alg->find(t[1].text);
      if (!idx) throw ParseError("unknown generator '" + t[1].text + "'", l.number, t[1].column);
      if (t[2].text != "=") throw ParseError("expected '='", l.number, t[2].column);
      if (d_line[*idx]) throw ParseError("d(" + t[1].text + ") given twice", l.number, t[1].column);
      d_line[*idx] = std::make_pair(l.number, t[1].column);
      const int want = alg->gen(*idx).degree + 1;
      const int col = static_cast<int>(eq) + 2;
      ExpressionParser p(alg, std::string_view(l.raw).substr(eq + 1), l.number, col);
      Element img(alg);
      for (auto& [term, pos] : p.summands()) {
        for (const auto& [m, c] : term.terms()) {
          const int deg = alg->degree(m);
          if (deg != want) {
            throw ParseError("degree mismatch: term '" + alg->format(m) + "' has degree " + std::to_string(deg) +
                                 ", d(" + t[1].text + ") needs degree " + std::to_string(want),
                             l.number, col + static_cast<int>(pos));
          }
        }
        img += term;
      }
      f.differential[*idx] = std::move(img);
    } else if (kw == "basis") {
      std::vector<std::string> names;
      for (std::size_t k = 1; k < t.size(); ++k) names.push_back(t[k].text);
      f.bases.push_back(std::move(names));
    } else if (kw == "change") {
      if (f.change) throw ParseError("only one change block is allowed", l.number, t[0].column);
      BasisChange ch;
      for (std::size_t k = 1; k < t.size(); ++k) {
        if (!valid_name(t[k].text)) throw ParseError("invalid generator name '" + t[k].text + "'", l.number, t[k].column);
        ch.names.push_back(t[k].text);
      }
      for (std::size_t r = 0; r < ch.names.size(); ++r) {
        if (li + 1 >= lines.size() || lines[li + 1].tokens[0].text != "row") {
          throw ParseError("change block needs " + std::to_string(ch.names.size()) + " row lines", l.number, t[0].column);
        }
        ++li;
        std::vector<Rational> row;
        for (std::size_t k = 1; k < lines[li].tokens.size(); ++k) {
          const auto& tok = lines[li].tokens[k];
          try {
            row.push_back(parse_rational(tok.text));
          } catch (const std::exception&) {
            throw ParseError("bad matrix entry '" + tok.text + "'", lines[li].number, tok.column);
          }
        }
        ch.matrix.push_back(std::move(row));
      }
      f.change = std::move(ch);
    } else if (kw == "row") {
      throw ParseError("row outside a change block", l.number, t[0].column);
    } else if (kw == "formal") {
      if (t.size() != 1) throw ParseError("formal takes no arguments", l.number, t[1].column);
      f.formal = true;
    } else if (kw == "family") {
      if (t.size() != 3) throw ParseError("usage: family <x_n> <y_1>", l.number, t[0].column);
      f.family = FamilyHint{t[1].text, t[2].text};
    } else {
      throw ParseError("unknown keyword '" + kw + "'", l.number, t[0].column);
    }
  }

  // d∘d = 0, reported at the offending d line.
  Derivation d(alg, f.differential);
  for (std::size_t g = 0; g < alg->size(); ++g) {
    if (!d.apply(d.image(g)).is_zero()) {
      const auto where = d_line[g].value_or(std::make_pair(1, 1));
      throw ParseError("d^2 != 0 on generator '" + alg->gen(g).name + "'", where.first, where.second);
    }
  }

  // Blocks that refer to the (possibly changed) even generators.
  auto locate = [&](const std::string& kw) {
    for (const auto& l : lines) {
      if (l.tokens[0].text == kw) return std::make_pair(l.number, l.tokens[0].column);
    }
    return std::make_pair(1, 1);
  };
  std::optional<SullivanModel> model;
  try {
    model = f.model();
  } catch (const Error& e) {
    const auto [ln, col] = locate(f.change ? "change" : "d");
    throw ParseError(e.what(), ln, col);
  }
  const auto evens = even_names(*model);
  int basis_seen = 0;
  for (const auto& l : lines) {
    if (l.tokens[0].text != "basis") continue;
    const auto& b = f.bases[static_cast<std::size_t>(basis_seen++)];
    std::set<std::string> used;
    for (std::size_t k = 0; k < b.size(); ++k) {
      const auto& tok = l.tokens[k + 1];
      if (std::find(evens.begin(), evens.end(), b[k]) == evens.end()) {
        throw ParseError("basis entry '" + b[k] + "' is not an even generator", l.number, tok.column);
      }
      if (!used.insert(b[k]).second) throw ParseError("basis entry '" + b[k] + "' repeated", l.number, tok.column);
    }
    if (b.size() != evens.size()) {
      throw ParseError("basis must list all " + std::to_string(evens.size()) + " even generators", l.number,
                       l.tokens[0].column);
    }
  }
  if (f.family) {
    const auto [ln, col] = locate("family");
    const auto& a = *model->algebra();
    const auto xn = a.find(f.family->xn);
    const auto y1 = a.find(f.family->y1);
    if (!xn || a.is_odd(*xn)) throw ParseError("family: '" + f.family->xn + "' is not an even generator", ln, col);
    if (!y1 || !a.is_odd(*y1)) throw ParseError("family: '" + f.family->y1 + "' is not an odd generator", ln, col);
  }
  return f;
}

ModelFile parse_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

std::string serialize(const ModelFile& f) {
  std::ostringstream out;
  const auto& alg = *f.algebra;
  for (const auto& g : alg.generators()) out << "gen " << g.name << ' ' << g.degree << '\n';
  for (std::size_t g = 0; g < alg.size(); ++g) {
    if (!f.differential[g].is_zero()) out << "d " << alg.gen(g).name << " = " << f.differential[g].to_string() << '\n';
  }
  if (f.change) {
    out << "change " << join(f.change->names, " ") << '\n';
    for (const auto& row : f.change->matrix) {
      out << "row";
      for (const auto& v : row) out << ' ' << to_string(v);
      out << '\n';
    }
  }
  for (const auto& b : f.bases) out << "basis " << join(b, " ") << '\n';
  if (f.formal) out << "formal\n";
  if (f.family) out << "family " << f.family->xn << ' ' << f.family->y1 << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------

void Report::append(const Report& other) {
  entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
  exit_code = std::max(exit_code, other.exit_code);
}

std::string Report::text() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + v + '\n';
  return out;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const NotComputable*>(&e)) return 2;
  if (dynamic_cast<const ConstructionError*>(&e)) return 3;
  return 1;
}

namespace {

const char* ellipticity_name(Ellipticity e) {
  switch (e) {
    case Ellipticity::yes:
      return "yes";
    case Ellipticity::no:
      return "no";
    default:
      return "unknown";
  }
}

std::vector<std::vector<std::string>> all_bases(const ModelFile& f, const Options& o) {
  auto b = f.bases;
  b.insert(b.end(), o.bases.begin(), o.bases.end());
  return b;
}

std::string interval(const TCBoundReport& r) {
  auto show = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string("?"); };
  return "[" + show(r.low) + "," + show(r.high) + "]";
}

Report validate_section(const SullivanModel& m) {
  Report r;
  const auto& alg = *m.algebra();
  std::vector<std::string> odd;
  for (auto i : m.odd_generators()) odd.push_back(alg.gen(i).name);
  r.add("model.generators", static_cast<long>(alg.size()));
  r.add("model.even", join(even_names(m), ","));
  r.add("model.odd", join(odd, ","));
  r.add("model.pure", m.flags().pure);
  r.add("model.coformal", m.flags().coformal);
  r.add("model.minimal", m.flags().minimal);
  r.add("model.word_length", m.flags().word_length ? std::to_string(*m.flags().word_length) : std::string("mixed"));
  r.add("model.chi_pi", static_cast<long>(chi_pi(m)));
  if (m.flags().pure) {
    const auto e = is_elliptic(m);
    r.add("model.elliptic", ellipticity_name(e));
    if (e == Ellipticity::yes) r.add("model.formal_dimension", static_cast<long>(formal_dimension(m)));
    r.add("model.extension_shape", identify_extension(m).has_value());
  } else {
    r.add("model.elliptic", "unknown");
  }
  return r;
}

std::string class_text(const CohomologyTable& h, std::size_t i) { return h.cls(i).rep.to_string(); }

Report cohomology_section(const SullivanModel& m, const ModelFile& f, const Options& o) {
  Report r;
  if (o.bigraded) {
    const auto bases = all_bases(f, o);
    auto e = bases.empty() ? elliptic_extension(m) : elliptic_extension(m, bases.front());
    auto q = quotient_A(e);
    auto h = bigraded_cohomology(q);
    r.add("cohomology.A.top_degree", static_cast<long>(q.top_degree));
    r.add("cohomology.A.total", static_cast<long>(h.size()));
    for (int n = 0; n <= q.top_degree; ++n) {
      if (h.dim(n)) r.add("cohomology.A.dim." + std::to_string(n), static_cast<long>(h.dim(n)));
    }
    std::map<Bidegree, std::size_t> bi;
    for (const auto& c : h.classes()) ++bi[c.block];
    for (const auto& [b, k] : bi) {
      r.add("cohomology.A.bidim." + std::to_string(b.first) + "." + std::to_string(b.second), static_cast<long>(k));
    }
    for (std::size_t i = 0; i < h.size(); ++i) {
      const auto& c = h.cls(i);
      r.add("cohomology.A.class." + std::to_string(i),
            std::to_string(c.degree) + " (" + std::to_string(c.block.first) + "," + std::to_string(c.block.second) +
                ") " + class_text(h, i));
    }
    return r;
  }
  auto h = cohomology(m, o.max_degree);
  r.add("cohomology.max_degree", static_cast<long>(h.max_degree()));
  r.add("cohomology.total", static_cast<long>(h.size()));
  for (int n = 0; n <= h.max_degree(); ++n) {
    if (h.dim(n)) r.add("cohomology.dim." + std::to_string(n), static_cast<long>(h.dim(n)));
  }
  for (std::size_t i = 0; i < h.size(); ++i) {
    r.add("cohomology.class." + std::to_string(i), std::to_string(h.cls(i).degree) + " " + class_text(h, i));
  }
  return r;
}

// Runs `body`; a NotComputable refusal is recorded under `key` and flagged.
template <class F>
void attempt(Report& r, const std::string& key, F body) {
  try {
    body();
  } catch (const NotComputable& e) {
    r.add(key + ".refused", e.what());
    r.exit_code = 2;
  }
}

Report invariants_section(const SullivanModel& m, const ModelFile& f, const Options& o) {
  Report r;
  r.add("invariants.chi_pi", static_cast<long>(chi_pi(m)));
  attempt(r, "invariants.cat", [&] {
    const auto c = cat_pure(m);
    r.add("invariants.cat", static_cast<long>(c.value));
    r.add("invariants.cat.method", c.method);
  });
  attempt(r, "invariants.cl", [&] { r.add("invariants.cl", static_cast<long>(cuplength(cohomology(m)))); });
  attempt(r, "invariants.zcl", [&] { r.add("invariants.zcl", static_cast<long>(zero_divisor_cuplength(m))); });
  const auto bases = all_bases(f, o);
  attempt(r, "invariants.L", [&] {
    const auto primary = bases.empty() ? std::vector<std::string>{} : bases.front();
    r.add("invariants.L", static_cast<long>(L_invariant(m, primary).value));
    for (std::size_t i = 0; i < bases.size(); ++i) {
      const std::string key = "invariants.L.basis." + std::to_string(i);
      r.add(key, static_cast<long>(L_invariant(m, bases[i]).value));
      r.add(key + ".order", join(bases[i], ","));
    }
  });
  return r;
}

std::optional<FamilyPartition> hint_partition(const ModelFile& f, const DiagonalContext& ctx) {
  if (!f.family) return std::nullopt;
  const auto& e = ctx.extension();
  const auto& alg = *e.extension.algebra();
  FamilyPartition p;
  bool fx = false, fy = false;
  for (std::size_t k = 0; k < e.x.size(); ++k) {
    if (alg.gen(e.x[k]).name == f.family->xn) p.xn = k, fx = true;
  }
  for (std::size_t j = 0; j < e.y.size(); ++j) {
    if (alg.gen(e.y[j]).name == f.family->y1) p.y1 = j, fy = true;
  }
  if (!fx || !fy) throw NotComputable("family conditions unsatisfied: hint does not name an x and a y of the extension");
  return p;
}

struct Built {
  WitnessCertificate cert;
  std::string extension;  // "identified" or "adjoined"
  std::size_t n = 0, m = 0;
};

Built build_witness(const SullivanModel& m, const ModelFile& f, const Options& o, std::string construction) {
  if (!m.flags().pure) throw NotComputable("witness constructions need a pure model");
  const auto bases = all_bases(f, o);
  auto adjoined = [&] {
    return DiagonalContext(bases.empty() ? elliptic_extension(m) : elliptic_extension(m, bases.front()), true);
  };
  auto identified = [&]() -> DiagonalContext {
    auto e = identify_extension(m);
    if (!e) throw NotComputable("model is not of the form Λ(x_i, u_i, y_j) with du_i = x_i^2");
    return DiagonalContext(*e, false);
  };

  if (construction == "auto") {
    if (auto e = identify_extension(m)) {
      DiagonalContext ctx(*e, false);
      try {
        if (e->m() == 1) construction = "theorem53";
        else if (hint_partition(f, ctx) || find_family_partition(ctx)) construction = "family4";
      } catch (const NotComputable&) {
      }
    }
    if (construction == "auto") construction = m.flags().coformal ? "theorem51" : "omega";
  }

  auto finish = [](WitnessCertificate c, const DiagonalContext& ctx, const char* how) {
    return Built{std::move(c), how, ctx.extension().n(), ctx.extension().m()};
  };
  if (construction == "omega") {
    auto ctx = adjoined();
    return finish(omega_diagonal(ctx), ctx, "adjoined");
  }
  if (construction == "theorem51") {
    auto ctx = adjoined();
    return finish(theorem51_certificate(ctx), ctx, "adjoined");
  }
  if (construction == "theorem53") {
    auto ctx = identified();
    return finish(theorem53_certificate(ctx), ctx, "identified");
  }
  if (construction == "family4") {
    auto ctx = identified();
    return finish(special_family_certificate(ctx, hint_partition(f, ctx)), ctx, "identified");
  }
  throw StructuralError("unknown construction '" + construction + "'");
}

Report witness_section(const Built& b, bool full) {
  Report r;
  const auto& c = b.cert;
  r.add("witness.construction", c.construction);
  r.add("witness.extension", b.extension);
  r.add("witness.n", static_cast<long>(b.n));
  r.add("witness.m", static_cast<long>(b.m));
  r.add("witness.power", static_cast<long>(c.power));
  r.add("witness.model_lower_bound", static_cast<long>(c.model_lower_bound));
  r.add("witness.scalar", to_string(c.scalar));
  r.add("witness.blocks", static_cast<long>(c.blocks.size()));
  for (std::size_t i = 0; i < c.blocks.size(); ++i) {
    const auto& bl = c.blocks[i];
    const std::string key = "witness.block." + std::to_string(i);
    r.add(key + ".name", bl.name);
    r.add(key + ".power", static_cast<long>(bl.power));
    r.add(key + ".kernel_terms", static_cast<long>(bl.terms.size()));
    r.add(key + ".size", static_cast<long>(bl.value.size()));
    if (full) r.add(key + ".value", bl.value.to_string());
  }
  r.add("witness.product.size", static_cast<long>(c.product.size()));
  if (full) {
    r.add("witness.cofactor", c.cofactor.to_string());
    r.add("witness.product", c.product.to_string());
    r.add("witness.pairing", c.pairing.to_string());
  }
  r.add("witness.image", c.image.to_string());
  r.add("witness.verified", true);
  return r;
}

Report bounds_section(const SullivanModel& m, const ModelFile& f, const Options& o, const std::vector<Built>& certs) {
  BoundOptions opt;
  opt.assert_formal = f.formal;
  opt.bases = all_bases(f, o);
  for (const auto& b : certs) {
    opt.certified.push_back(Bound{b.cert.model_lower_bound, b.cert.construction,
                                  "power " + std::to_string(b.cert.power) + " on the " + b.extension +
                                      " extension, scalar " + to_string(b.cert.scalar)});
  }
  const auto rep = tc_bounds(m, opt);
  Report r;
  auto emit = [&](const std::vector<Bound>& list, const std::string& side, bool lower) {
    std::map<std::string, const Bound*> best;
    std::vector<std::string> order;
    for (const auto& b : list) {
      auto it = best.find(b.source);
      if (it == best.end()) {
        order.push_back(b.source);
        best[b.source] = &b;
      } else if (lower ? b.value > it->second->value : b.value < it->second->value) {
        it->second = &b;
      }
    }
    for (const auto& s : order) {
      r.add("bounds." + side + "." + s, static_cast<long>(best[s]->value));
      if (!best[s]->detail.empty()) r.add("bounds." + side + "." + s + ".detail", best[s]->detail);
    }
  };
  emit(rep.lower, "lower", true);
  emit(rep.upper, "upper", false);
  r.add("bounds.interval", interval(rep));
  r.add("bounds.exact", rep.exact);
  r.add("bounds.inconsistent", rep.inconsistent);
  for (std::size_t i = 0; i < rep.notes.size(); ++i) r.add("bounds.note." + std::to_string(i), rep.notes[i]);
  return r;
}

// Certificates that `bounds` registers: the m = 1 and special-family
// constructions when the model already has the extension shape.
std::vector<Built> automatic_certificates(const SullivanModel& m, const ModelFile& f, const Options& o, Report& r) {
  std::vector<Built> out;
  if (!o.certify || !m.flags().pure) return out;
  auto e = identify_extension(m);
  if (!e) return out;
  try {
    DiagonalContext ctx(*e, false);
    if (e->m() == 1) {
      out.push_back(build_witness(m, f, o, "theorem53"));
    } else if (hint_partition(f, ctx) || find_family_partition(ctx)) {
      out.push_back(build_witness(m, f, o, "family4"));
    }
  } catch (const NotComputable& err) {
    r.add("bounds.certificate.refused", err.what());
  }
  return out;
}

}  // namespace

Report run(const std::string& command, const ModelFile& file, const Options& options) {
  const SullivanModel m = file.model();
  if (command == "validate") return validate_section(m);
  if (command == "cohomology") return cohomology_section(m, file, options);
  if (command == "invariants") return invariants_section(m, file, options);
  if (command == "bounds") {
    Report r;
    const auto certs = automatic_certificates(m, file, options, r);
    r.append(bounds_section(m, file, options, certs));
    return r;
  }
  if (command == "witness") return witness_section(build_witness(m, file, options, options.construction), options.full);
  if (command == "report") {
    Report r = validate_section(m);
    attempt(r, "cohomology", [&] {
      Options o = options;
      o.bigraded = false;
      r.append(cohomology_section(m, file, o));
    });
    r.append(invariants_section(m, file, options));
    std::vector<Built> certs;
    attempt(r, "witness", [&] {
      certs.push_back(build_witness(m, file, options, options.construction));
      r.append(witness_section(certs.back(), options.full));
    });
    attempt(r, "bounds", [&] { r.append(bounds_section(m, file, options, certs)); });
    // Partial reports are still reports.
    r.exit_code = 0;
    return r;
  }
  throw StructuralError("unknown command '" + command + "'");
}

}  // namespace sullivan::cli
