#include <doctest.h>

#include <functional>

#include "helpers.hpp"
#include "setforge/formula.hpp"
#include "setforge/levy_catalog.hpp"
#include "setforge/parse.hpp"

using namespace setforge;

namespace {

Formula delta0_body() {
  return Formula::member(Term::var("y"), Term::constant(3));
}

}  // namespace

TEST_CASE("classify basics") {
  // x subseteq y
  Formula subset = Formula::bounded_forall("z", Term::var("x"),
                                           Formula::member(Term::var("z"), Term::var("y")));
  CHECK(classify(subset) == LevyClass::delta0());

  Formula sigma1 = Formula::exists("y", delta0_body());
  CHECK(classify(sigma1) == LevyClass::sigma(1));
  CHECK(classify(Formula::negation(sigma1)) == LevyClass::pi(1));

  Formula sigma2 = Formula::exists("a", Formula::forall("b", delta0_body()));
  CHECK(classify(sigma2) == LevyClass::sigma(2));
  CHECK(classify(Formula::forall("a", Formula::exists("b", delta0_body()))) ==
        LevyClass::pi(2));

  // Bounded quantifiers are transparent.
  Formula under_bounded = Formula::bounded_forall(
      "u", Term::var("x"), Formula::exists("y", delta0_body()));
  CHECK(classify(under_bounded) == LevyClass::sigma(1));
}

TEST_CASE("classify lattice") {
  CHECK(LevyClass::delta0().subsumed_by(LevyClass::sigma(1)));
  CHECK(LevyClass::delta0().subsumed_by(LevyClass::pi(3)));
  CHECK(LevyClass::sigma(1).subsumed_by(LevyClass::pi(2)));
  CHECK(LevyClass::pi(1).subsumed_by(LevyClass::sigma(2)));
  CHECK(!LevyClass::sigma(1).subsumed_by(LevyClass::pi(1)));
  CHECK(!LevyClass::sigma(2).subsumed_by(LevyClass::sigma(1)));
}

TEST_CASE("the twelve catalog predicates are Delta0") {
  auto entries = catalog::lemma_catalog();
  REQUIRE(entries.size() == 12);
  for (const auto& e : entries) {
    CAPTURE(e.name);
    CHECK(classify(e.formula) == LevyClass::delta0());
  }
}

TEST_CASE("collection normalization: Lemma shape") {
  // ball x z (ex y psi)  ->  ex Y (ball x z (bex y Y psi))
  Formula psi = Formula::member(Term::var("y"), Term::var("x"));
  Formula phi = Formula::bounded_forall("x", Term::var("z"),
                                        Formula::exists("y", psi));
  Formula n = normalize_collection(phi);
  CHECK(classify(n) == LevyClass::sigma(1));
  CHECK(is_prenex(n));
  REQUIRE(n.kind() == Formula::Kind::Exists);
  Formula inner = n.body();
  REQUIRE(inner.kind() == Formula::Kind::BoundedForall);
  CHECK(inner.quant_var() == "x");
  Formula inner2 = inner.body();
  REQUIRE(inner2.kind() == Formula::Kind::BoundedExists);
  CHECK(inner2.quant_var() == "y");
  CHECK(inner2.quant_bound() == Term::var(n.quant_var()));
  CHECK(inner2.body() == psi);
}

TEST_CASE("collection normalization: Delta0 unchanged") {
  Formula d = alpha_normalize(catalog::is_function("x"));
  CHECK(normalize_collection(d) == d);
  Formula s = parse_formula("(ball z x (mem z y))");
  CHECK(normalize_collection(s) == s);
}

TEST_CASE("collection normalization: doubly nested") {
  // ball x z (ex y (ball u y (ex v psi)))
  Formula psi = Formula::member(Term::var("v"), Term::var("u"));
  Formula phi = Formula::bounded_forall(
      "x", Term::var("z"),
      Formula::exists(
          "y", Formula::bounded_forall(
                   "u", Term::var("y"), Formula::exists("v", psi))));
  CHECK(classify(phi) == LevyClass::sigma(1));
  Formula n = normalize_collection(phi);
  CHECK(classify(n) == LevyClass::sigma(1));
  CHECK(is_prenex(n));
  // All unbounded quantifiers lead and are existential.
  std::size_t prefix = 0;
  Formula cur = n;
  while (cur.kind() == Formula::Kind::Exists) {
    ++prefix;
    cur = cur.body();
  }
  CHECK(prefix == 2);
  CHECK(classify(cur) == LevyClass::delta0());
}

TEST_CASE("normalization preserves classification on random formulas") {
  testutil::FormulaGen gen(20250810);
  for (int i = 0; i < 300; ++i) {
    Formula f = gen(4);
    Formula n = normalize_collection(f);
    CAPTURE(print_formula(f));
    CHECK(classify(n) == classify(f));
    CHECK(is_prenex(n));
  }
}

TEST_CASE("tie classes normalize coherently") {
  Formula s1 = Formula::exists("a", delta0_body());
  Formula p1 = Formula::forall("b", delta0_body());
  Formula conj = Formula::conj(s1, p1);
  CHECK(classify(conj) == LevyClass::sigma(2));
  CHECK(classify(normalize_collection(conj)) == LevyClass::sigma(2));
  // A Pi2 context around a tie must still come out Pi2.
  Formula pi2 = Formula::forall("c", Formula::exists("d", delta0_body()));
  Formula mixed = Formula::disj(conj, pi2);
  CHECK(classify(mixed) == classify(normalize_collection(mixed)));
}

TEST_CASE("atom registry") {
  AtomRegistry reg;
  Formula sub = catalog::subset("x", "y");
  AtomId id = reg.register_atom("subset", sub, {"x", "y"});
  CHECK(reg.by_name("subset") == id);
  // Same formula again: same id under any name.
  AtomId id2 = reg.register_atom("inc", catalog::subset("x", "y"), {"x", "y"});
  CHECK(id2 == id);
  CHECK(reg.size() == 1);

  // Arity mismatch.
  CHECK_THROWS_AS(reg.register_atom("bad", sub, {"x"}), malformed_error);
  // Non-Delta0 rejected.
  CHECK_THROWS_AS(
      reg.register_atom("worse", Formula::exists("y", delta0_body()), {}),
      malformed_error);

  // Expansion round-trips to the definition.
  Formula atom = Formula::atom(id, {Term::var("a"), Term::var("b")});
  Formula expanded = expand_levy_atoms(atom, reg);
  CHECK(classify(expanded) == LevyClass::delta0());
  Formula expect = Formula::bounded_forall(
      "cs_z", Term::var("a"), Formula::member(Term::var("cs_z"), Term::var("b")));
  CHECK(expanded == expect);
}

TEST_CASE("equality as a Levy atom") {
  auto id = AtomRegistry::global().by_name("eqv");
  REQUIRE(id.has_value());
  Formula atom = Formula::atom(*id, {Term::constant(3), Term::constant(3)});
  Formula expanded = expand_levy_atoms(atom);
  CHECK(classify(expanded) == LevyClass::delta0());
  CHECK(free_vars(expanded).empty());
}

TEST_CASE("nested atoms expand to a fixpoint") {
  AtomRegistry reg;
  AtomId sub = reg.register_atom("subset", catalog::subset("x", "y"), {"x", "y"});
  // eq via the subset atom, both directions.
  Formula eq_def = Formula::conj(
      Formula::atom(sub, {Term::var("x"), Term::var("y")}),
      Formula::atom(sub, {Term::var("y"), Term::var("x")}));
  AtomId eq = reg.register_atom("eqv2", eq_def, {"x", "y"});
  Formula use = Formula::atom(eq, {Term::var("a"), Term::var("b")});
  Formula out = expand_levy_atoms(use, reg);
  // Fully atom-free.
  std::function<bool(const Formula&)> atom_free = [&](const Formula& f) {
    switch (f.kind()) {
      case Formula::Kind::Atom: return false;
      case Formula::Kind::Member:
      case Formula::Kind::Equal: return true;
      case Formula::Kind::Not: return atom_free(f.body());
      case Formula::Kind::And:
      case Formula::Kind::Or:
        return atom_free(f.left()) && atom_free(f.right());
      default: return atom_free(f.body());
    }
  };
  CHECK(atom_free(out));
  CHECK(classify(out) == LevyClass::delta0());
  CHECK(free_vars(out) == std::set<std::string>{"a", "b"});
}

TEST_CASE("expansion preserves classification") {
  auto sub = AtomRegistry::global().by_name("subset");
  REQUIRE(sub.has_value());
  Formula f = Formula::exists(
      "w", Formula::conj(Formula::atom(*sub, {Term::var("w"), Term::var("u")}),
                         Formula::forall("t", Formula::atom(*sub, {Term::var("t"),
                                                                   Term::var("w")}))));
  CHECK(classify(expand_levy_atoms(f)) == classify(f));
}

TEST_CASE("substitute and free_vars") {
  Formula f = Formula::member(Term::var("x"), Term::var("y"));
  Formula g = substitute(f, "x", Term::constant(3));
  CHECK(g == Formula::member(Term::constant(3), Term::var("y")));
  CHECK(free_vars(catalog::subset("x", "y")) ==
        std::set<std::string>{"x", "y"});

  // Capture avoidance: substituting y under a binder named y renames it.
  Formula h = Formula::exists("y", Formula::member(Term::var("x"), Term::var("y")));
  Formula hs = substitute(h, "x", Term::var("y"));
  CHECK(free_vars(hs) == std::set<std::string>{"y"});
  CHECK(hs.quant_var() != "y");
}

TEST_CASE("Goedel codes round-trip") {
  testutil::FormulaGen gen(424242);
  for (int i = 0; i < 1000; ++i) {
    Formula f = gen(3);
    Nat code = godel_code(f);
    CHECK(decode_formula(code) == f);
  }
  // Injectivity spot check via a small corpus.
  std::vector<Formula> corpus;
  testutil::FormulaGen gen2(7);
  for (int i = 0; i < 50; ++i) corpus.push_back(gen2(2));
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (std::size_t j = i + 1; j < corpus.size(); ++j)
      if (!(corpus[i] == corpus[j]))
        CHECK(godel_code(corpus[i]) != godel_code(corpus[j]));
}

TEST_CASE("cantor pairing round-trips") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    Nat a(static_cast<unsigned long>(rng() % 100000));
    Nat b(static_cast<unsigned long>(rng() % 100000));
    auto [x, y] = cantor_unpair(cantor_pair(a, b));
    CHECK(x == a);
    CHECK(y == b);
  }
}

TEST_CASE("parser and printer round-trip") {
  Formula subset_text = parse_formula("(ball z x (mem z y))");
  CHECK(classify(subset_text) == LevyClass::delta0());
  CHECK(parse_formula(print_formula(subset_text)) == subset_text);

  // Registered atoms as heads, model and signature constants.
  Formula f = parse_formula("(and (subset #1 #3) (mem @p @c))");
  CHECK(f.kind() == Formula::Kind::And);
  CHECK(parse_formula(print_formula(f)) == f);

  Formula g = parse_formula("(imp (mem a b) (eq a b))");
  CHECK(g.kind() == Formula::Kind::Or);

  testutil::FormulaGen gen(5150);
  for (int i = 0; i < 200; ++i) {
    Formula r = gen(3);
    CHECK(parse_formula(print_formula(r)) == r);
  }

  CHECK_THROWS_AS(parse_formula("(mem a"), malformed_error);
  CHECK_THROWS_AS(parse_formula("(frob a b)"), malformed_error);
  CHECK_THROWS_AS(parse_formula("(atom nosuch a)"), malformed_error);
}

TEST_CASE("alpha normalization") {
  Formula raw = Formula::conj(
      Formula::exists("x", Formula::member(Term::var("x"), Term::var("u"))),
      Formula::exists("x", Formula::member(Term::var("x"), Term::var("v"))));
  CHECK(!is_alpha_normal(raw));
  Formula norm = alpha_normalize(raw);
  CHECK(is_alpha_normal(norm));
  CHECK(free_vars(norm) == free_vars(raw));
  CHECK(classify(norm) == classify(raw));

  CHECK_THROWS_AS(Formula::bounded_forall("x", Term::var("x"), delta0_body()),
                  malformed_error);
}
