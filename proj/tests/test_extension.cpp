#include <doctest.h>

#include <map>
#include <random>

#include "helpers.hpp"
#include "setforge/extension.hpp"
#include "setforge/generic.hpp"
#include "setforge/parse.hpp"

using namespace setforge;
using hf::Code;

namespace {

GenericFilter filter_from_mask(const FinitePoset& P, std::uint64_t mask) {
  std::vector<Nat> seq;
  for (std::size_t i = 0; i < P.size(); ++i)
    if (mask & (std::uint64_t{1} << i)) seq.push_back(P.label(i));
  std::vector<Nat> labels = P.labels();
  auto contains = [labels](const Nat& q) {
    return std::find(labels.begin(), labels.end(), q) != labels.end();
  };
  FinitePoset copy = P;
  auto decide = [copy, mask](const Nat& q) -> std::optional<bool> {
    auto i = copy.index_of(q);
    if (!i) return std::nullopt;
    return (mask & (std::uint64_t{1} << *i)) != 0;
  };
  return GenericFilter("test-mask", std::move(seq), contains, decide);
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

TEST_CASE("evaluate_recursive") {
  hf::InstalledPoset P = testutil::v_poset();
  GenericFilter G = build_generic(hf::oracle(), P.handle());  // {max, a}
  CHECK(evaluate_recursive(G, Name()) == 0);
  Name sigma = Name::single(Name(), 1);
  CHECK(evaluate_recursive(G, sigma) == 1);
  Name sigma_b = Name::single(Name(), 2);
  CHECK(evaluate_recursive(G, sigma_b) == 0);

  for (unsigned long x = 0; x < 256; ++x)
    CHECK(evaluate_recursive(G, check_name(x, 0)) == x);
}

TEST_CASE("eq_G and in_G") {
  hf::InstalledPoset P = testutil::v_poset();
  ForcingContext ctx(P.poset);
  GenericFilter Ga = filter_from_mask(P.poset, 0b011);  // {max, a}
  GenericFilter Gb = filter_from_mask(P.poset, 0b101);  // {max, b}
  Name sigma = Name::single(Name(), 1);

  CHECK(eq_g(ctx, Ga, sigma, sigma));
  CHECK(eq_g(ctx, Ga, sigma, check_name(1, 0)));
  CHECK(!eq_g(ctx, Ga, sigma, check_name(0, 0)));
  CHECK(eq_g(ctx, Gb, sigma, check_name(0, 0)));
  CHECK(in_g(ctx, Ga, Name(), sigma));
  CHECK(!in_g(ctx, Gb, Name(), sigma));
}

TEST_CASE("quotient over trivial forcing is the ground fragment") {
  hf::InstalledPoset P = testutil::trivial_poset();
  GenericFilter G = build_generic(hf::oracle(), P.handle());
  QuotientPresentation Q =
      build_quotient(hf::presentation(), P, G, 2, 2);

  // Index 0 is the class of the least name, the empty one.
  CHECK(Q.representative(0).is_empty());
  CHECK(Q.canonical_embedding(0) == 0);

  // The embedding is injective and preserves/reflects membership on the
  // codes whose check names fall inside the bounds.
  std::vector<unsigned long> codes = {0, 1, 2, 3};
  std::map<unsigned long, std::size_t> embed;
  for (unsigned long x : codes) embed[x] = Q.canonical_embedding(x);
  for (unsigned long x : codes) {
    for (unsigned long y : codes) {
      if (x != y) CHECK(embed[x] != embed[y]);
      CHECK(Q.membership(embed[x], embed[y]) == hf::contains(y, x));
    }
  }

  // Trivial forcing adds nothing: every class is hit by a check name.
  for (std::size_t i = 0; i < Q.size(); ++i) {
    Code v = evaluate_recursive(G, Q.representative(i));
    CHECK(Q.canonical_embedding(v) == i);
  }

  // Escaping the bounds is an error.
  CHECK_THROWS_AS(Q.canonical_embedding(Code(1) << 10), contract_error);
}

TEST_CASE("quotient classes merge names the filter identifies") {
  hf::InstalledPoset P = testutil::v_poset();
  GenericFilter G = build_generic(hf::oracle(), P.handle());  // {max, a}
  QuotientPresentation Q = build_quotient(hf::presentation(), P, G, 2, 2);
  Name sigma = Name::single(Name(), 1);
  auto ci = Q.class_of(sigma);
  auto cj = Q.class_of(check_name(1, 0));
  REQUIRE(ci.has_value());
  REQUIRE(cj.has_value());
  CHECK(*ci == *cj);
  CHECK(Q.class_of(Name()) == std::size_t{0});
}

TEST_CASE("quotient-vs-evaluation isomorphism on <=3 conditions") {
  for (const auto& P : testutil::all_posets_up_to(3)) {
    for (std::uint64_t mask : maximal_filters(P.poset)) {
      GenericFilter G = filter_from_mask(P.poset, mask);
      QuotientPresentation Q = build_quotient(hf::presentation(), P, G, 2, 2);
      // Distinct classes get distinct values; membership transfers.
      std::vector<Code> vals;
      for (std::size_t i = 0; i < Q.size(); ++i)
        vals.push_back(evaluate_recursive(G, Q.representative(i)));
      for (std::size_t i = 0; i < Q.size(); ++i) {
        for (std::size_t j = 0; j < Q.size(); ++j) {
          if (i != j) CHECK(vals[i] != vals[j]);
          CHECK(Q.membership(i, j) == hf::contains(vals[j], vals[i]));
        }
      }
    }
  }
}

TEST_CASE("diagram queries agree with direct evaluation") {
  hf::InstalledPoset P = testutil::v_poset();
  GenericFilter G = build_generic(hf::oracle(), P.handle());
  auto rec = std::make_shared<RecordingOracle>(
      restrict_oracle(hf::oracle(), QueryLevel::delta0()));
  Presentation pres{rec, Permutation(), false};
  QuotientPresentation Q = build_quotient(pres, P, G, 2, 2);
  CHECK(rec->count_above(QueryLevel::delta0()) == 0);
  CHECK(rec->total() > 0);

  std::vector<Code> vals;
  for (std::size_t i = 0; i < Q.size(); ++i)
    vals.push_back(evaluate_recursive(G, Q.representative(i)));

  // Small Delta0 sentences over quotient indices.
  std::mt19937_64 rng(777);
  auto idx = [&]() { return Term::constant(rng() % Q.size()); };
  std::function<Formula(int)> build = [&](int depth) -> Formula {
    if (depth == 0) {
      return rng() % 2 ? Formula::member(idx(), idx())
                       : Formula::equal(idx(), idx());
    }
    switch (rng() % 5) {
      case 0: return Formula::negation(build(depth - 1));
      case 1: return Formula::conj(build(depth - 1), build(depth - 1));
      case 2: return Formula::disj(build(depth - 1), build(depth - 1));
      case 3: {
        std::string v = "q" + std::to_string(depth);
        return Formula::bounded_exists(
            v, idx(), Formula::member(Term::var(v), idx()));
      }
      default: {
        std::string v = "r" + std::to_string(depth);
        return Formula::bounded_forall(
            v, idx(), Formula::member(Term::var(v), idx()));
      }
    }
  };
  for (int round = 0; round < 300; ++round) {
    Formula s = alpha_normalize(build(1 + static_cast<int>(rng() % 3)));
    Answer got = Q.diagram_query(s, QueryLevel::delta0(), 4);
    // The independent route: translate indices through the evaluation map.
    std::function<Formula(const Formula&)> translate = [&](const Formula& f) -> Formula {
      switch (f.kind()) {
        case Formula::Kind::Member:
        case Formula::Kind::Equal: {
          auto tr = [&](const Term& t) {
            if (t.kind() == Term::Kind::Const)
              return Term::constant(vals[t.code().get_ui()]);
            return t;
          };
          return f.kind() == Formula::Kind::Member
                     ? Formula::member(tr(f.lhs()), tr(f.rhs()))
                     : Formula::equal(tr(f.lhs()), tr(f.rhs()));
        }
        case Formula::Kind::Not:
          return Formula::negation(translate(f.body()));
        case Formula::Kind::And:
          return Formula::conj(translate(f.left()), translate(f.right()));
        case Formula::Kind::Or:
          return Formula::disj(translate(f.left()), translate(f.right()));
        case Formula::Kind::BoundedExists: {
          Term b = f.quant_bound().kind() == Term::Kind::Const
                       ? Term::constant(vals[f.quant_bound().code().get_ui()])
                       : f.quant_bound();
          return Formula::bounded_exists(f.quant_var(), b, translate(f.body()));
        }
        case Formula::Kind::BoundedForall: {
          Term b = f.quant_bound().kind() == Term::Kind::Const
                       ? Term::constant(vals[f.quant_bound().code().get_ui()])
                       : f.quant_bound();
          return Formula::bounded_forall(f.quant_var(), b, translate(f.body()));
        }
        default:
          return f;
      }
    };
    Answer expect = hf::eval(translate(s), 1);
    CAPTURE(print_formula(s));
    CHECK(got == expect);
  }

  // Sigma1: something equals a given class.
  Formula ex = parse_formula("(ex x (eq x #2))");
  CHECK(Q.diagram_query(ex, QueryLevel::sigma(1), 64) == Answer::True);
  CHECK_THROWS_AS(Q.diagram_query(ex, QueryLevel::delta0(), 8), level_violation);
}
