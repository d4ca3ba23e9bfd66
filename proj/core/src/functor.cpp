#include "setforge/functor.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "setforge/cohen.hpp"
#include "setforge/levy_catalog.hpp"

namespace setforge {

namespace {

Formula resolve_signature(const ExpandedPresentation& e, const Formula& f) {
  using K = Formula::Kind;
  auto term = [&](const Term& t) -> Term {
    switch (t.kind()) {
      case Term::Kind::SigP: return Term::constant(e.p);
      case Term::Kind::SigC:
        throw malformed_error(
            "the choice constant has no literal label; consult the choice "
            "capability instead");
      case Term::Kind::SigD: {
        auto lbl = e.d(t.d_index());
        if (!lbl)
          throw malformed_error("no dense-set constant d" +
                                std::to_string(t.d_index()));
        return Term::constant(*lbl);
      }
      default: return t;
    }
  };
  switch (f.kind()) {
    case K::Member: return Formula::member(term(f.lhs()), term(f.rhs()));
    case K::Equal: return Formula::equal(term(f.lhs()), term(f.rhs()));
    case K::Atom: {
      std::vector<Term> args;
      for (const Term& t : f.atom_args()) args.push_back(term(t));
      return Formula::atom(f.atom_id(), std::move(args));
    }
    case K::Not: return Formula::negation(resolve_signature(e, f.body()));
    case K::And:
      return Formula::conj(resolve_signature(e, f.left()),
                           resolve_signature(e, f.right()));
    case K::Or:
      return Formula::disj(resolve_signature(e, f.left()),
                           resolve_signature(e, f.right()));
    case K::BoundedExists:
      return Formula::bounded_exists(f.quant_var(), term(f.quant_bound()),
                                     resolve_signature(e, f.body()));
    case K::BoundedForall:
      return Formula::bounded_forall(f.quant_var(), term(f.quant_bound()),
                                     resolve_signature(e, f.body()));
    case K::Exists:
      return Formula::exists(f.quant_var(), resolve_signature(e, f.body()));
    case K::Forall:
      return Formula::forall(f.quant_var(), resolve_signature(e, f.body()));
  }
  throw error("unreachable");
}

}  // namespace

Answer ExpandedPresentation::query(const Formula& sentence, Budget budget) const {
  return base.oracle->query(resolve_signature(*this, sentence), budget);
}

ExpandedPresentation permute_expanded(const ExpandedPresentation& e,
                                      const Permutation& f) {
  ExpandedPresentation out;
  out.base = permute(e.base, f);
  out.p = f.apply(e.p);
  auto choose = e.choose;
  out.choose = [choose, f](const Nat& x) { return f.apply(choose(f.apply_inverse(x))); };
  auto d = e.d;
  out.d = [d, f](std::size_t j) -> std::optional<Nat> {
    auto lbl = d(j);
    if (!lbl) return std::nullopt;
    return f.apply(*lbl);
  };
  return out;
}

// ---------------------------------------------------------------------------
// phi_object
// ---------------------------------------------------------------------------

namespace {

// w is in the field of L and everything in the field sits below w:
// <w, w> in L, and every coordinate of every pair of L is <=-related to w.
Formula max_formula(const Nat& w, const Nat& L) {
  Formula w_in_field = Formula::bounded_exists(
      "mx_e", Term::constant(L),
      catalog::kuratowski_eq_t(Term::var("mx_e"), Term::constant(w),
                               Term::constant(w)));
  Formula below = Formula::bounded_exists(
      "mx_e2", Term::constant(L),
      catalog::kuratowski_eq_t(Term::var("mx_e2"), Term::var("mx_q"),
                               Term::constant(w)));
  Formula all_below = Formula::bounded_forall(
      "mx_f", Term::constant(L),
      Formula::bounded_forall(
          "mx_u", Term::var("mx_f"),
          Formula::bounded_forall("mx_q", Term::var("mx_u"), below)));
  return Formula::conj(w_in_field, all_below);
}

// x = { q in d : <q, ps> in L }
Formula selection_formula(const Nat& x, const Nat& d, const Nat& ps,
                          const Nat& L) {
  auto below_ps = [&](const std::string& q) {
    return Formula::bounded_exists(
        "sx_e", Term::constant(L),
        catalog::kuratowski_eq_t(Term::var("sx_e"), Term::var(q),
                                 Term::constant(ps)));
  };
  Formula fwd = Formula::bounded_forall(
      "sx_q", Term::constant(x),
      Formula::conj(Formula::member(Term::var("sx_q"), Term::constant(d)),
                    below_ps("sx_q")));
  Formula bwd = Formula::bounded_forall(
      "sx_r", Term::constant(d),
      Formula::disj(Formula::negation(below_ps("sx_r")),
                    Formula::member(Term::var("sx_r"), Term::constant(x))));
  return Formula::conj(fwd, bwd);
}

}  // namespace

PhiObject phi_object(const ExpandedPresentation& e, std::size_t steps,
                     unsigned rank_bound, std::size_t size_bound) {
  const DiagramOracle& o = *e.base.oracle;

  std::set<std::pair<Nat, Nat>> leq;
  for (const auto& pr : decode_pairs(o, e.p)) leq.insert(pr);
  std::vector<Nat> conditions;
  for (const auto& [a, b] : leq)
    if (a == b) conditions.push_back(a);
  std::sort(conditions.begin(), conditions.end());
  if (conditions.empty())
    throw contract_error("the order constant has no reflexive pairs");

  // The maximum, found through its Delta0 definition.
  std::optional<Nat> p0;
  for (const Nat& w : conditions) {
    if (decode::ask(o, alpha_normalize(max_formula(w, e.p)))) {
      p0 = w;
      break;
    }
  }
  if (!p0) throw contract_error("the forcing notion has no maximum element");

  std::vector<Nat> seq{*p0};
  for (std::size_t s = 0; s < steps; ++s) {
    auto d_label = e.d(s);
    if (!d_label) break;
    // x = { q in d_s : q <= p_s } is Delta0-definable from reachable
    // parameters; assemble its label and verify the defining property.
    std::vector<Nat> x_members;
    for (const Nat& q : decode::members(o, *d_label))
      if (leq.count({q, seq.back()})) x_members.push_back(q);
    std::vector<Nat> x_base;
    for (const Nat& q : x_members) x_base.push_back(e.base.base_of_label(q));
    Nat x_label = e.base.label_of_base(hf::encode_set(x_base));
    if (!decode::ask(o, alpha_normalize(selection_formula(x_label, *d_label,
                                                          seq.back(), e.p))))
      throw contract_error("selection set failed its defining property");
    // p_{s+1} = c(x), checked to choose from x.
    Nat chosen = e.choose(x_label);
    if (!decode::ask(o, decode::mem_cc(chosen, x_label)))
      throw contract_error("the choice capability picked outside its set");
    seq.push_back(chosen);
  }

  // Membership decisions from the decoded order.
  auto leq_ptr = std::make_shared<std::set<std::pair<Nat, Nat>>>(leq);
  auto conds_ptr = std::make_shared<std::vector<Nat>>(conditions);
  auto compatible = [leq_ptr, conds_ptr](const Nat& a, const Nat& b) {
    for (const Nat& r : *conds_ptr)
      if (leq_ptr->count({r, a}) && leq_ptr->count({r, b})) return true;
    return false;
  };
  std::vector<Nat> seq_copy = seq;
  auto decide = [seq_copy, leq_ptr, compatible](const Nat& q) -> std::optional<bool> {
    for (const Nat& p : seq_copy) {
      if (leq_ptr->count({p, q})) return true;
      if (!compatible(p, q)) return false;
    }
    return std::nullopt;
  };
  auto contains = [conds_ptr](const Nat& q) {
    return std::find(conds_ptr->begin(), conds_ptr->end(), q) != conds_ptr->end();
  };
  GenericFilter filter("expanded", seq, contains, decide);

  // Decode the notion down to base codes and build the extension fragment.
  std::vector<Nat> conditions_base;
  for (const Nat& q : conditions) conditions_base.push_back(e.base.base_of_label(q));
  std::vector<std::pair<Nat, Nat>> leq_base;
  for (const auto& [a, b] : leq)
    leq_base.emplace_back(e.base.base_of_label(a), e.base.base_of_label(b));
  hf::InstalledPoset installed = hf::install_poset(conditions_base, leq_base);

  Permutation from_base = e.base.from_base;
  std::vector<Nat> seq_base;
  for (const Nat& p : seq) seq_base.push_back(e.base.base_of_label(p));
  auto base_contains = [conditions_base](const Nat& q) {
    return std::find(conditions_base.begin(), conditions_base.end(), q) !=
           conditions_base.end();
  };
  auto base_decide = [from_base, decide](const Nat& q) {
    return decide(from_base.apply(q));
  };
  GenericFilter base_filter("expanded", seq_base, base_contains, base_decide);

  QuotientPresentation fragment =
      build_quotient(e.base, installed, base_filter, rank_bound, size_bound);
  return PhiObject{std::move(seq), std::move(filter), std::move(installed),
                   std::move(fragment)};
}

// ---------------------------------------------------------------------------
// Morphisms
// ---------------------------------------------------------------------------

bool expanded_morphism_ok(const ExpandedPresentation& e,
                          const ExpandedPresentation& e_star,
                          const Permutation& f, const Nat& label_bound,
                          std::size_t d_count) {
  if (f.apply(e.p) != e_star.p) return false;
  for (std::size_t j = 0; j < d_count; ++j) {
    auto a = e.d(j);
    auto b = e_star.d(j);
    if (a.has_value() != b.has_value()) return false;
    if (a && f.apply(*a) != *b) return false;
  }
  for (Nat a = 0; a < label_bound; ++a) {
    for (Nat b = 0; b < label_bound; ++b) {
      bool lhs = decode::ask(*e.base.oracle, decode::mem_cc(a, b));
      bool rhs = decode::ask(*e_star.base.oracle,
                             decode::mem_cc(f.apply(a), f.apply(b)));
      if (lhs != rhs) return false;
    }
  }
  // The choice capabilities correspond on the nonempty subsets of the
  // notion's field.
  std::vector<Nat> conditions_base;
  for (const auto& pr : decode_pairs(*e.base.oracle, e.p))
    if (pr.first == pr.second)
      conditions_base.push_back(e.base.base_of_label(pr.first));
  std::size_t n = conditions_base.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<Nat> subset;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::uint64_t{1} << i)) subset.push_back(conditions_base[i]);
    Nat x = e.base.label_of_base(hf::encode_set(subset));
    if (f.apply(e.choose(x)) != e_star.choose(f.apply(x))) return false;
  }
  return true;
}

namespace {

Name map_name(const Name& n, const ExpandedPresentation& e,
              const ExpandedPresentation& e_star, const Permutation& f) {
  std::vector<NameEntry> entries;
  for (const NameEntry& en : n.entries()) {
    Nat label = e.base.label_of_base(en.cond);
    Nat mapped = e_star.base.base_of_label(f.apply(label));
    entries.push_back({map_name(en.child, e, e_star, f), mapped});
  }
  return Name::make(std::move(entries));
}

}  // namespace

std::vector<std::size_t> phi_morphism(const ExpandedPresentation& e,
                                      const ExpandedPresentation& e_star,
                                      const Permutation& f,
                                      const PhiObject& obj,
                                      const PhiObject& obj_star,
                                      const Nat& label_bound,
                                      std::size_t d_count, bool verify) {
  if (verify && !expanded_morphism_ok(e, e_star, f, label_bound, d_count))
    throw contract_error("not an expanded-signature isomorphism");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < obj.fragment.size(); ++i) {
    Name mapped = map_name(obj.fragment.representative(i), e, e_star, f);
    auto idx = obj_star.fragment.class_of(mapped);
    if (!idx)
      throw contract_error("mapped class escapes the target fragment");
    out.push_back(*idx);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Canonical listings
// ---------------------------------------------------------------------------

std::vector<std::optional<Nat>> canonical_listing(const DefinabilityOracle& defin) {
  std::vector<std::optional<Nat>> out;
  out.reserve(defin.count);
  for (std::size_t k = 0; k < defin.count; ++k)
    out.push_back(defin.defined_element(k));
  return out;
}

std::vector<Nat> first_occurrence_listing(
    const std::vector<std::optional<Nat>>& listing) {
  std::vector<Nat> out;
  for (const auto& m : listing) {
    if (!m) continue;
    if (std::find(out.begin(), out.end(), *m) == out.end()) out.push_back(*m);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Order sensitivity
// ---------------------------------------------------------------------------

SensitivityReport order_sensitivity_demo(const FinitePoset& P,
                                         const std::vector<std::uint64_t>& dense_masks,
                                         const std::vector<std::size_t>& order_a,
                                         const std::vector<std::size_t>& order_b) {
  if (dense_masks.empty()) throw malformed_error("no dense sets listed");
  auto search_order = [&](const std::vector<std::size_t>& priority) {
    std::vector<std::size_t> order;
    for (std::size_t i : priority) {
      if (i >= P.size()) throw malformed_error("order index out of range");
      if (std::find(order.begin(), order.end(), i) == order.end())
        order.push_back(i);
    }
    std::vector<std::size_t> rest(P.size());
    for (std::size_t i = 0; i < P.size(); ++i) rest[i] = i;
    std::sort(rest.begin(), rest.end(), [&](std::size_t x, std::size_t y) {
      return P.label(x) < P.label(y);
    });
    for (std::size_t i : rest)
      if (std::find(order.begin(), order.end(), i) == order.end())
        order.push_back(i);
    return order;
  };

  auto run = [&](const std::vector<std::size_t>& priority, std::vector<Nat>& seq,
                 std::vector<std::pair<Nat, bool>>& filter, bool& generic) {
    std::vector<std::size_t> order = search_order(priority);
    std::optional<std::size_t> cur;
    for (std::uint64_t mask : dense_masks) {
      std::optional<std::size_t> next;
      for (std::size_t q : order) {
        if (!(mask & (std::uint64_t{1} << q))) continue;
        if (cur && !P.leq(q, *cur)) continue;
        next = q;
        break;
      }
      if (!next) throw contract_error("listed set is not dense below the sequence");
      cur = next;
      seq.push_back(P.label(*next));
    }
    std::uint64_t got = 0;
    for (std::size_t q = 0; q < P.size(); ++q)
      if (P.leq(*cur, q)) got |= std::uint64_t{1} << q;
    std::vector<std::size_t> idx(P.size());
    for (std::size_t i = 0; i < P.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
      return P.label(i) < P.label(j);
    });
    for (std::size_t i : idx)
      filter.emplace_back(P.label(i), (got & (std::uint64_t{1} << i)) != 0);
    generic = true;
    for (std::uint64_t mask : dense_masks)
      if ((mask & got) == 0) generic = false;
  };

  SensitivityReport r;
  run(order_a, r.seq_a, r.filter_a, r.generic_a);
  run(order_b, r.seq_b, r.filter_b, r.generic_b);
  for (std::size_t i = 0; i < r.filter_a.size(); ++i) {
    if (r.filter_a[i].second != r.filter_b[i].second) {
      r.first_difference = r.filter_a[i].first;
      break;
    }
  }
  return r;
}

CohenSensitivityReport order_sensitivity_demo_cohen(
    const std::vector<AbstractPoset::DenseSet>& dense,
    const std::vector<std::size_t>& order_a,
    const std::vector<std::size_t>& order_b) {
  auto run = [&](const std::vector<std::size_t>& order) {
    AbstractPoset P = cohen::poset();
    P.dense_stream = [&, order](std::size_t n) -> std::optional<AbstractPoset::DenseSet> {
      if (n >= order.size()) return std::nullopt;
      return dense.at(order[n]);
    };
    GenericFilter G = build_generic_abstract(P, order.size());
    return cohen::string_of(G.sequence().back());
  };
  CohenSensitivityReport r;
  r.branch_a = run(order_a);
  r.branch_b = run(order_b);
  for (std::size_t i = 0; i < std::min(r.branch_a.size(), r.branch_b.size()); ++i) {
    if (r.branch_a[i] != r.branch_b[i]) {
      r.first_difference = i;
      break;
    }
  }
  if (!r.first_difference && r.branch_a.size() != r.branch_b.size())
    r.first_difference = std::min(r.branch_a.size(), r.branch_b.size());
  return r;
}

}  // namespace setforge
