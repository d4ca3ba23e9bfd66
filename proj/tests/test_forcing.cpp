#include <doctest.h>

#include <map>
#include <random>

#include "helpers.hpp"
#include "setforge/extension.hpp"
#include "setforge/forcing.hpp"
#include "setforge/parse.hpp"

using namespace setforge;
using hf::Code;

namespace {

Name sigma_a() {  // { <0-check, a> } over the V poset
  return Name::single(Name(), 1);
}

// Truth of an atomic relation between evaluated names under a filter mask.
bool holds_semantically(const FinitePoset& P, std::uint64_t mask,
                        const Name& s, const Name& t, ForcingKind k) {
  Code sv = evaluate_with_mask(P, mask, s);
  Code tv = evaluate_with_mask(P, mask, t);
  switch (k) {
    case ForcingKind::MemberF: return hf::contains(tv, sv);
    case ForcingKind::EqualF: return sv == tv;
    case ForcingKind::SubsetF: return hf::is_subset(sv, tv);
  }
  return false;
}

std::vector<std::uint64_t> maximal_filters(const FinitePoset& P) {
  std::vector<std::uint64_t> out;
  for (std::size_t m : P.minimal_elements()) {
    std::uint64_t mask = 0;
    for (std::size_t q = 0; q < P.size(); ++q)
      if (P.leq(m, q)) mask |= std::uint64_t{1} << q;
    out.push_back(mask);
  }
  return out;
}

}  // namespace

TEST_CASE("atomic forcing on the V poset") {
  hf::InstalledPoset P = testutil::v_poset();
  Name sigma = sigma_a();
  Name one = check_name(1, 0);

  CHECK(forces_atomic(P, 1, sigma, one, ForcingKind::EqualF));
  CHECK(!forces_atomic(P, 0, sigma, one, ForcingKind::EqualF));
  CHECK(!forces_atomic(P, 2, sigma, one, ForcingKind::EqualF));
  // Below b, sigma evaluates to the empty set.
  CHECK(forces_atomic(P, 2, sigma, Name(), ForcingKind::EqualF));

  // Reflexivity at every condition, for a sample of names.
  ForcingContext ctx(P.poset);
  for (const Name& n : enumerate_names_structural(P.poset, 2, 2)) {
    std::size_t id = ctx.intern(n);
    CHECK(ctx.force_mask(ForcingKind::EqualF, id, id) == P.poset.all_mask());
  }
}

TEST_CASE("fundamental theorem, persistence and density on <=3 conditions") {
  for (const auto& P : testutil::all_posets_up_to(3)) {
    ForcingContext ctx(P.poset);
    std::vector<Name> names = enumerate_names_structural(P.poset, 2, 2);
    std::vector<std::size_t> ids;
    for (const Name& n : names) ids.push_back(ctx.intern(n));
    std::vector<std::uint64_t> filters = maximal_filters(P.poset);
    const std::uint64_t all = P.poset.all_mask();

    // Cache evaluations per filter.
    std::vector<std::map<std::size_t, Code>> vals(filters.size());
    auto value = [&](std::size_t fi, std::size_t ni) {
      auto it = vals[fi].find(ni);
      if (it != vals[fi].end()) return it->second;
      Code v = evaluate_with_mask(P.poset, filters[fi], names[ni]);
      vals[fi].emplace(ni, v);
      return v;
    };

    for (std::size_t i = 0; i < names.size(); ++i) {
      for (std::size_t j = 0; j < names.size(); ++j) {
        for (ForcingKind k :
             {ForcingKind::MemberF, ForcingKind::EqualF, ForcingKind::SubsetF}) {
          std::uint64_t mask = ctx.force_mask(k, ids[i], ids[j]);

          // Persistence: forcing is downward closed.
          for (std::size_t p = 0; p < P.poset.size(); ++p) {
            if (mask & (std::uint64_t{1} << p))
              CHECK((P.poset.below_mask(p) & ~mask) == 0);
          }
          // Density: a non-forcing condition has an extension forcing the
          // negation (no further extension forces the relation).
          for (std::size_t p = 0; p < P.poset.size(); ++p) {
            if (mask & (std::uint64_t{1} << p)) continue;
            bool refuted = false;
            for (std::size_t q = 0; q < P.poset.size(); ++q) {
              if (!P.poset.leq(q, p)) continue;
              if ((P.poset.below_mask(q) & mask) == 0) refuted = true;
            }
            CHECK(refuted);
          }
          // Fundamental theorem: truth under every maximal filter equals
          // some filter condition forcing it.
          for (std::size_t fi = 0; fi < filters.size(); ++fi) {
            bool truth = false;
            switch (k) {
              case ForcingKind::MemberF:
                truth = hf::contains(value(fi, j), value(fi, i));
                break;
              case ForcingKind::EqualF:
                truth = value(fi, i) == value(fi, j);
                break;
              case ForcingKind::SubsetF:
                truth = hf::is_subset(value(fi, i), value(fi, j));
                break;
            }
            bool forced = (filters[fi] & mask) != 0;
            if (truth != forced) {
              CAPTURE(P.poset.size());
              CAPTURE(names[i].str());
              CAPTURE(names[j].str());
              REQUIRE(truth == forced);
            }
          }
          (void)all;
        }
      }
    }
  }
}

TEST_CASE("compiled forcing classification") {
  Formula member = Formula::member(Term::var("x"), Term::var("y"));
  CompiledForcing cf = compile_forcing(member);
  CHECK(cf.complexity == LevyClass::sigma(1));
  REQUIRE(cf.pi_form.has_value());
  CHECK(classify(cf.sigma_form) == LevyClass::sigma(1));
  CHECK(classify(*cf.pi_form) == LevyClass::pi(1));
  // Parameters: the condition, the notion, the order, plus the names.
  auto fv = free_vars(cf.sigma_form);
  CHECK(fv.count(CompiledForcing::kCond));
  CHECK(fv.count(CompiledForcing::kP));
  CHECK(fv.count(CompiledForcing::kL));
  CHECK(fv.count("x"));
  CHECK(fv.count("y"));

  // Delta0 sources with bounded quantifiers keep the Delta1 pair.
  Formula bounded = Formula::bounded_exists(
      "z", Term::var("x"), Formula::member(Term::var("z"), Term::var("y")));
  CompiledForcing cb = compile_forcing(bounded);
  CHECK(classify(cb.sigma_form) == LevyClass::sigma(1));
  REQUIRE(cb.pi_form.has_value());
  CHECK(classify(*cb.pi_form) == LevyClass::pi(1));

  // Levy atoms expand before compilation.
  CompiledForcing cs = compile_forcing(parse_formula("(subset x y)"));
  CHECK(classify(cs.sigma_form) == LevyClass::sigma(1));

  // Sigma(n) and Pi(n) sources keep their level.
  Formula ex = Formula::exists("w", member);
  CompiledForcing ce = compile_forcing(ex);
  CHECK(ce.complexity == LevyClass::sigma(1));
  CHECK(!ce.pi_form.has_value());
  CHECK(compile_forcing(Formula::negation(ex)).complexity == LevyClass::pi(1));
  Formula s2 = Formula::exists("w", Formula::forall("v", member));
  CHECK(compile_forcing(s2).complexity == LevyClass::sigma(2));
  CHECK(compile_forcing(Formula::forall("w", Formula::exists("v", member)))
            .complexity == LevyClass::pi(2));

  CHECK(classify(Formula::exists(
            "T", name_predicate_sigma("t", "PP"))) == LevyClass::sigma(1));
}

TEST_CASE("compound forcing matches brute-force truth") {
  hf::InstalledPoset P = testutil::v_poset();
  ForcingContext ctx(P.poset);
  Name sigma = sigma_a();
  Name one = check_name(1, 0);

  Formula eq = parse_formula("(eq s t)");
  std::vector<std::pair<std::string, Name>> b1 = {{"s", sigma}, {"t", one}};
  CHECK(forces(P, 1, eq, b1, 8) == Answer::True);
  CHECK(forces(P, 2, eq, b1, 8) == Answer::False);
  CHECK(forces(P, 0, eq, b1, 8) == Answer::False);

  // Identity at every condition.
  Formula triv = parse_formula("(eq #0 #0)");
  for (unsigned long p = 0; p < 3; ++p)
    CHECK(forces(P, p, triv, {}, 8) == Answer::True);

  // An existential witnessed by sigma itself.
  Formula ex = parse_formula("(ex x (eq x s))");
  for (unsigned long p = 0; p < 3; ++p)
    CHECK(forces(P, p, ex, {{"s", sigma}}, 64) == Answer::True);

  // Random Delta0 compounds: p forces phi iff phi holds under every
  // maximal filter containing p.
  std::mt19937_64 rng(1900);
  std::vector<Name> pool = enumerate_names_structural(P.poset, 2, 2);
  auto rand_name = [&]() { return pool[rng() % pool.size()]; };
  for (int round = 0; round < 60; ++round) {
    std::vector<std::pair<std::string, Name>> binds = {
        {"n0", rand_name()}, {"n1", rand_name()}, {"n2", rand_name()}};
    auto atom = [&](int d) {
      (void)d;
      std::string a = "n" + std::to_string(rng() % 3);
      std::string b = "n" + std::to_string(rng() % 3);
      return rng() % 2 ? Formula::member(Term::var(a), Term::var(b))
                       : Formula::equal(Term::var(a), Term::var(b));
    };
    std::function<Formula(int)> build = [&](int depth) -> Formula {
      if (depth == 0) return atom(0);
      switch (rng() % 5) {
        case 0: return Formula::negation(build(depth - 1));
        case 1: return Formula::conj(build(depth - 1), build(depth - 1));
        case 2: return Formula::disj(build(depth - 1), build(depth - 1));
        case 3: {
          std::string bv = "u" + std::to_string(depth);
          Formula body = rng() % 2
                             ? Formula::member(Term::var(bv), Term::var("n1"))
                             : Formula::equal(Term::var(bv), Term::var("n2"));
          return Formula::bounded_exists(bv, Term::var("n0"), body);
        }
        default: {
          std::string bv = "w" + std::to_string(depth);
          Formula body = Formula::member(Term::var(bv), Term::var("n2"));
          return Formula::bounded_forall(bv, Term::var("n" + std::to_string(rng() % 3)),
                                         body);
        }
      }
    };
    Formula phi = alpha_normalize(build(2));
    for (std::size_t p = 0; p < 3; ++p) {
      Answer forced = forces(P, P.poset.label(p), phi, binds, 8);
      REQUIRE(forced != Answer::OutOfBudget);
      // Brute force: evaluate names under each maximal filter containing p
      // and check the sentence semantically.
      bool all_true = true;
      for (std::uint64_t mask : maximal_filters(P.poset)) {
        if (!(mask & (std::uint64_t{1} << p))) continue;
        Formula grounded = phi;
        for (const auto& [var, n] : binds) {
          grounded = substitute(
              grounded, var,
              Term::constant(evaluate_with_mask(P.poset, mask, n)));
        }
        if (hf::eval(grounded, 4) != Answer::True) all_true = false;
      }
      CAPTURE(print_formula(phi));
      CHECK((forced == Answer::True) == all_true);
    }
  }
}

TEST_CASE("forcing memo is shared across queries") {
  hf::InstalledPoset P = testutil::v_poset();
  ForcingContext ctx(P.poset);
  std::size_t a = ctx.intern(sigma_a());
  std::size_t b = ctx.intern(check_name(1, 0));
  std::uint64_t m1 = ctx.force_mask(ForcingKind::EqualF, a, b);
  std::uint64_t m2 = ctx.force_mask(ForcingKind::EqualF, a, b);
  CHECK(m1 == m2);
  CHECK(ctx.pool_size() >= 2);
  CHECK_THROWS_AS(forces_atomic(P, 9, Name(), Name(), ForcingKind::EqualF),
                  contract_error);
}
