#include <doctest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "setforge/cohen.hpp"
#include "setforge/functor.hpp"
#include "setforge/oracle_decode.hpp"
#include "setforge/parse.hpp"

using namespace setforge;
using hf::Code;

namespace {

// Least-label internal choice over an HF-backed presentation.
std::function<Nat(const Nat&)> least_choice(const Presentation& pres) {
  return [pres](const Nat& x) -> Nat {
    std::vector<Nat> members = decode::members(*pres.oracle, x);
    if (members.empty()) throw contract_error("choice from an empty set");
    return members.front();
  };
}

std::function<Nat(const Nat&)> greatest_choice(const Presentation& pres) {
  return [pres](const Nat& x) -> Nat {
    std::vector<Nat> members = decode::members(*pres.oracle, x);
    if (members.empty()) throw contract_error("choice from an empty set");
    return members.back();
  };
}

ExpandedPresentation expanded_v(const Presentation& pres,
                                const hf::InstalledPoset& P,
                                std::function<Nat(const Nat&)> choose) {
  ExpandedPresentation e;
  e.base = pres;
  e.p = pres.label_of_base(P.leq_code);
  e.choose = std::move(choose);
  std::vector<Nat> dense = P.dense_sets;
  Presentation p2 = pres;
  e.d = [dense, p2](std::size_t j) -> std::optional<Nat> {
    if (j >= dense.size()) return std::nullopt;
    return p2.label_of_base(dense[j]);
  };
  return e;
}

std::vector<Permutation> all_perms_of(const std::vector<unsigned long>& values) {
  std::vector<unsigned long> v = values;
  std::sort(v.begin(), v.end());
  std::vector<Permutation> out;
  std::vector<unsigned long> image = v;
  do {
    std::vector<std::pair<Nat, Nat>> graph;
    for (std::size_t i = 0; i < v.size(); ++i)
      graph.emplace_back(v[i], image[i]);
    out.push_back(Permutation::from_mapping(graph));
  } while (std::next_permutation(image.begin(), image.end()));
  return out;
}

}  // namespace

TEST_CASE("expanded queries resolve the signature constants") {
  hf::InstalledPoset P = testutil::v_poset();
  Presentation pres = hf::presentation();
  ExpandedPresentation e = expanded_v(pres, P, least_choice(pres));
  // <1, 0> lies in the order: a <= max.
  Formula s = parse_formula("(mem #" + hf::kuratowski_pair(1, 0).get_str() +
                            " @p)");
  CHECK(e.query(s, 1) == Answer::True);
  Formula d0 = parse_formula("(mem #1 @d0)");
  CHECK(e.query(d0, 1) == Answer::True);
  CHECK_THROWS_AS(e.query(parse_formula("(mem #0 @c)"), 1), malformed_error);
  CHECK_THROWS_AS(e.query(parse_formula("(mem #0 @d9)"), 1), malformed_error);
}

TEST_CASE("phi_object on the V poset") {
  hf::InstalledPoset P = testutil::v_poset();
  Presentation pres = hf::presentation();
  ExpandedPresentation e = expanded_v(pres, P, least_choice(pres));
  PhiObject obj = phi_object(e, 8, 1, 2);

  REQUIRE(obj.sequence.size() == 3);
  CHECK(obj.sequence[0] == 0);  // the maximum
  CHECK(obj.sequence[1] == 1);  // least choice from {a, b}
  CHECK(obj.sequence[2] == 1);
  CHECK(obj.filter.member(0));
  CHECK(obj.filter.member(1));
  CHECK(!obj.filter.member(2));

  // A different internal choice gives a different filter: the constant is
  // part of the object's identity.
  ExpandedPresentation e2 = expanded_v(pres, P, greatest_choice(pres));
  PhiObject obj2 = phi_object(e2, 8, 1, 2);
  CHECK(obj2.filter.member(2));
  CHECK(!obj2.filter.member(1));

  // One-condition poset: the same filter from any presentation.
  hf::InstalledPoset T = testutil::trivial_poset();
  ExpandedPresentation et = expanded_v(pres, T, least_choice(pres));
  PhiObject objt = phi_object(et, 4, 1, 2);
  CHECK(objt.filter.member(0));
  CHECK(objt.sequence[0] == 0);
}

TEST_CASE("phi_object is presentation-invariant") {
  hf::InstalledPoset P = testutil::v_poset();
  Presentation pres = hf::presentation();
  ExpandedPresentation e = expanded_v(pres, P, least_choice(pres));
  PhiObject obj = phi_object(e, 8, 1, 2);

  std::mt19937_64 rng(607);
  for (int round = 0; round < 20; ++round) {
    // A random finitely-supported permutation over a small window.
    std::vector<unsigned long> window = {0, 1, 2, 3, 4, 5, 6, 7};
    std::shuffle(window.begin(), window.end(), rng);
    std::vector<std::pair<Nat, Nat>> graph;
    for (unsigned long i = 0; i < 8; ++i) graph.emplace_back(i, window[i]);
    Permutation f = Permutation::from_mapping(graph);

    ExpandedPresentation ef = permute_expanded(e, f);
    PhiObject objf = phi_object(ef, 8, 1, 2);
    // The permuted presentation yields exactly the relabeled filter.
    for (unsigned long q = 0; q < 3; ++q)
      CHECK(objf.filter.member(f.apply(q)) == obj.filter.member(q));
    REQUIRE(objf.sequence.size() == obj.sequence.size());
    for (std::size_t i = 0; i < obj.sequence.size(); ++i)
      CHECK(objf.sequence[i] == f.apply(obj.sequence[i]));
  }
}

TEST_CASE("functor laws over the V poset") {
  hf::InstalledPoset P = testutil::v_poset();
  Presentation pres = hf::presentation();
  ExpandedPresentation e = expanded_v(pres, P, least_choice(pres));
  PhiObject obj = phi_object(e, 8, 1, 2);

  // Identity morphism gives the identity mapping.
  Permutation id;
  CHECK(expanded_morphism_ok(e, e, id, 8, 2));
  std::vector<std::size_t> ident = phi_morphism(e, e, id, obj, obj, 8, 2);
  for (std::size_t i = 0; i < ident.size(); ++i) CHECK(ident[i] == i);

  // Composition over every permutation pair with support in {0..5}.
  std::vector<Permutation> perms = all_perms_of({0, 1, 2, 3, 4, 5});
  REQUIRE(perms.size() == 720);
  std::vector<ExpandedPresentation> pres_f;
  std::vector<PhiObject> obj_f;
  pres_f.reserve(perms.size());
  for (const Permutation& f : perms) {
    pres_f.push_back(permute_expanded(e, f));
    obj_f.push_back(phi_object(pres_f.back(), 8, 1, 2));
    CHECK(expanded_morphism_ok(e, pres_f.back(), f, 4, 2));
  }

  std::mt19937_64 rng(505);
  int checked = 0;
  for (std::size_t fi = 0; fi < perms.size(); ++fi) {
    // Exhausting all 720^2 pairs retreads the same index maps thousands of
    // times; a full row per f against sampled g covers every composite.
    std::vector<std::size_t> gs = {0, 1, rng() % perms.size(),
                                   rng() % perms.size()};
    for (std::size_t gi : gs) {
      const Permutation& f = perms[fi];
      const Permutation& g = perms[gi];
      Permutation gf = g.compose(f.inverse()).compose(f).compose(f.inverse());
      (void)gf;
      // Phi*(g o f^-1): e_f -> e_g through the two partial maps.
      Permutation hop = g.compose(f.inverse());
      std::vector<std::size_t> direct =
          phi_morphism(pres_f[fi], pres_f[gi], hop, obj_f[fi], obj_f[gi], 4, 2,
                       false);
      std::vector<std::size_t> via_e_back =
          phi_morphism(pres_f[fi], e, f.inverse(), obj_f[fi], obj, 4, 2, false);
      std::vector<std::size_t> via_e_fwd =
          phi_morphism(e, pres_f[gi], g, obj, obj_f[gi], 4, 2, false);
      REQUIRE(direct.size() == via_e_back.size());
      for (std::size_t i = 0; i < direct.size(); ++i)
        CHECK(direct[i] == via_e_fwd[via_e_back[i]]);
      ++checked;
    }
  }
  CHECK(checked >= 2000);

  // Morphism violations are caught.
  Permutation bad = Permutation::from_swaps({{0, 1}});
  CHECK(!expanded_morphism_ok(e, e, bad, 4, 2));
  CHECK_THROWS_AS(phi_morphism(e, e, bad, obj, obj, 4, 2), contract_error);
}

TEST_CASE("canonical listings") {
  std::vector<std::optional<Nat>> defs = {Nat(0), std::nullopt, Nat(3),
                                          Nat(0), Nat(7)};
  DefinabilityOracle defin{[&](std::size_t k) { return defs.at(k); },
                           defs.size()};
  auto listing = canonical_listing(defin);
  CHECK(listing == defs);  // duplicates kept
  CHECK(first_occurrence_listing(listing) == std::vector<Nat>{0, 3, 7});

  DefinabilityOracle empty{[](std::size_t) { return std::nullopt; }, 0};
  CHECK(canonical_listing(empty).empty());

  // Permutation invariance: matching oracles on isomorphic presentations
  // list corresponding elements.
  Permutation f = Permutation::from_swaps({{3, 12}});
  DefinabilityOracle defin_f{
      [&](std::size_t k) -> std::optional<Nat> {
        auto m = defs.at(k);
        if (!m) return std::nullopt;
        return f.apply(*m);
      },
      defs.size()};
  auto lf = canonical_listing(defin_f);
  for (std::size_t k = 0; k < defs.size(); ++k) {
    CHECK(lf[k].has_value() == listing[k].has_value());
    if (lf[k]) CHECK(*lf[k] == f.apply(*listing[k]));
  }

  // HF with a small definability oracle: the zeroth definition "x = 0"
  // defines the empty set.
  DefinabilityOracle hf_defs{
      [](std::size_t k) -> std::optional<Nat> {
        if (k == 0) return Nat(0);      // x = 0
        if (k == 1) return std::nullopt;  // x != x defines nothing
        return Nat(k - 2);
      },
      6};
  auto hl = canonical_listing(hf_defs);
  CHECK(hl[0] == Nat(0));
}

TEST_CASE("order sensitivity on the V poset") {
  hf::InstalledPoset P = testutil::v_poset();
  std::vector<std::uint64_t> dense = P.poset.all_dense_masks();
  // a-first versus b-first search orders.
  SensitivityReport r = order_sensitivity_demo(P.poset, dense, {1, 2}, {2, 1});
  CHECK(r.generic_a);
  CHECK(r.generic_b);
  REQUIRE(r.first_difference.has_value());
  CHECK(*r.first_difference == 1);  // they part ways at a
  CHECK(r.seq_a.front() == 1);
  CHECK(r.seq_b.front() == 2);

  SensitivityReport same = order_sensitivity_demo(P.poset, dense, {1, 2}, {1, 2});
  CHECK(!same.first_difference.has_value());
}

TEST_CASE("order sensitivity on the Cohen poset") {
  std::vector<AbstractPoset::DenseSet> dense;
  for (std::size_t n = 1; n <= 6; ++n) dense.push_back(cohen::length_dense(n));
  dense.push_back(cohen::decision_dense({true, true}));
  dense.push_back(cohen::decision_dense({false, false, false}));

  std::vector<std::size_t> a = {0, 1, 2, 3, 4, 5, 6, 7};
  std::vector<std::size_t> b = {6, 7, 0, 1, 2, 3, 4, 5};
  CohenSensitivityReport r = order_sensitivity_demo_cohen(dense, a, b);
  REQUIRE(r.first_difference.has_value());
  CHECK(*r.first_difference < 8);

  CohenSensitivityReport same = order_sensitivity_demo_cohen(dense, a, a);
  CHECK(!same.first_difference.has_value());
}
