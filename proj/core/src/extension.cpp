#include "setforge/extension.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace setforge {

hf::Code evaluate_recursive(const GenericFilter& G, const Name& sigma) {
  std::vector<hf::Code> vals;
  for (const NameEntry& e : sigma.entries()) {
    if (G.member(e.cond)) vals.push_back(evaluate_recursive(G, e.child));
  }
  return hf::encode_set(vals);
}

hf::Code evaluate_with_mask(const FinitePoset& P, std::uint64_t filter_mask,
                            const Name& sigma) {
  std::vector<hf::Code> vals;
  for (const NameEntry& e : sigma.entries()) {
    std::size_t r = *P.index_of(e.cond);
    if (filter_mask & (std::uint64_t{1} << r))
      vals.push_back(evaluate_with_mask(P, filter_mask, e.child));
  }
  return hf::encode_set(vals);
}

namespace {

bool some_condition_forces(ForcingContext& ctx, const GenericFilter& G,
                           ForcingKind k, const Name& sigma, const Name& tau) {
  std::size_t a = ctx.intern(sigma);
  std::size_t b = ctx.intern(tau);
  std::uint64_t mask = ctx.force_mask(k, a, b);
  for (std::size_t p = 0; p < ctx.poset().size(); ++p) {
    if (!(mask & (std::uint64_t{1} << p))) continue;
    if (G.member(ctx.poset().label(p))) return true;
  }
  return false;
}

}  // namespace

bool eq_g(ForcingContext& ctx, const GenericFilter& G, const Name& sigma,
          const Name& tau) {
  return some_condition_forces(ctx, G, ForcingKind::EqualF, sigma, tau);
}

bool in_g(ForcingContext& ctx, const GenericFilter& G, const Name& sigma,
          const Name& tau) {
  return some_condition_forces(ctx, G, ForcingKind::MemberF, sigma, tau);
}

// ---------------------------------------------------------------------------
// QuotientPresentation
// ---------------------------------------------------------------------------

QuotientPresentation::QuotientPresentation(std::shared_ptr<ForcingContext> ctx,
                                           GenericFilter G,
                                           std::vector<Name> reps,
                                           unsigned rank_bound,
                                           std::size_t size_bound,
                                           Permutation label_map)
    : ctx_(std::move(ctx)),
      G_(std::move(G)),
      reps_(std::move(reps)),
      rank_bound_(rank_bound),
      size_bound_(size_bound),
      label_map_(std::move(label_map)) {
  for (std::size_t p = 0; p < ctx_->poset().size(); ++p) {
    const Nat& label = ctx_->poset().label(p);
    if (G_.member(label)) filter_labels_.push_back(label);
  }
}

std::optional<Nat> QuotientPresentation::representative_label(
    std::size_t i) const {
  auto code = reps_.at(i).try_code();
  if (!code) return std::nullopt;
  return label_map_.apply(*code);
}

bool QuotientPresentation::membership(std::size_t i, std::size_t j) const {
  return in_g(*ctx_, G_, reps_.at(i), reps_.at(j));
}

std::optional<std::size_t> QuotientPresentation::class_of(const Name& n) const {
  for (std::size_t i = 0; i < reps_.size(); ++i)
    if (eq_g(*ctx_, G_, reps_[i], n)) return i;
  return std::nullopt;
}

std::size_t QuotientPresentation::canonical_embedding(const hf::Code& x) const {
  Name check = check_name(x, ctx_->poset().label(ctx_->poset().max_index()));
  auto cls = class_of(check);
  if (!cls)
    throw contract_error("check name of " + x.get_str() +
                         " escapes the enumeration bounds");
  return *cls;
}

Answer QuotientPresentation::diagram_query(const Formula& s, QueryLevel level,
                                           Budget budget) const {
  QueryLevel need = required_level(s);
  if (!(need <= level))
    throw level_violation("diagram query needs " + need.str() +
                          " but was offered " + level.str());
  if (!is_closed(s)) throw malformed_error("diagram query has free variables");

  // Constants in the sentence are quotient indices; rebind them to the
  // representative names through fresh variables.
  std::vector<std::pair<std::string, Name>> bindings;
  std::map<Nat, std::string> seen;
  std::function<Formula(const Formula&)> rewrite = [&](const Formula& f) -> Formula {
    using K = Formula::Kind;
    auto term = [&](const Term& t) -> Term {
      if (t.kind() != Term::Kind::Const) return t;
      auto it = seen.find(t.code());
      if (it == seen.end()) {
        if (t.code() >= Nat(static_cast<unsigned long>(reps_.size())))
          throw malformed_error("quotient index out of range: " +
                                t.code().get_str());
        std::string var = "qi_" + t.code().get_str();
        bindings.emplace_back(var, reps_.at(t.code().get_ui()));
        it = seen.emplace(t.code(), var).first;
      }
      return Term::var(it->second);
    };
    switch (f.kind()) {
      case K::Member: return Formula::member(term(f.lhs()), term(f.rhs()));
      case K::Equal: return Formula::equal(term(f.lhs()), term(f.rhs()));
      case K::Atom: {
        std::vector<Term> args;
        for (const Term& t : f.atom_args()) args.push_back(term(t));
        return Formula::atom(f.atom_id(), std::move(args));
      }
      case K::Not: return Formula::negation(rewrite(f.body()));
      case K::And: return Formula::conj(rewrite(f.left()), rewrite(f.right()));
      case K::Or: return Formula::disj(rewrite(f.left()), rewrite(f.right()));
      case K::BoundedExists:
        return Formula::bounded_exists(f.quant_var(), term(f.quant_bound()),
                                       rewrite(f.body()));
      case K::BoundedForall:
        return Formula::bounded_forall(f.quant_var(), term(f.quant_bound()),
                                       rewrite(f.body()));
      case K::Exists: return Formula::exists(f.quant_var(), rewrite(f.body()));
      case K::Forall: return Formula::forall(f.quant_var(), rewrite(f.body()));
    }
    throw error("unreachable");
  };
  Formula bound_s = rewrite(s);

  // Truth in M[G]: some condition of the filter forces the sentence.
  bool saw_oob = false;
  for (const Nat& p : filter_labels_) {
    std::size_t idx = *ctx_->poset().index_of(p);
    Answer a = forces(*ctx_, idx, bound_s, bindings, budget);
    if (a == Answer::True) return Answer::True;
    if (a == Answer::OutOfBudget) saw_oob = true;
  }
  if (saw_oob || need == QueryLevel::full() ||
      (need.kind == QueryLevel::Kind::Sigma))
    return Answer::OutOfBudget;
  return Answer::False;
}

QuotientPresentation build_quotient(const Presentation& delta0,
                                    const hf::InstalledPoset& P,
                                    const GenericFilter& G, unsigned rank_bound,
                                    std::size_t size_bound) {
  auto ctx = std::make_shared<ForcingContext>(P.poset);
  std::vector<Name> names =
      enumerate_names_structural(P.poset, rank_bound, size_bound);
  std::sort(names.begin(), names.end(), [&](const Name& a, const Name& b) {
    return Name::compare_labels(a, b, delta0.from_base) < 0;
  });

  // Lemma-style validation through the oracle, at Delta0 level only. The
  // member scans grow with the bit length of the code, so the check covers
  // the names below a fixed size; the exhaustive certificate agreement has
  // its own suite.
  PosetHandle h = P.handle();
  PosetHandle h_pres{delta0.label_of_base(h.p), delta0.label_of_base(h.leq),
                     delta0.label_of_base(h.leq_complement),
                     delta0.label_of_base(h.perp),
                     delta0.label_of_base(h.dense_family)};
  for (const Name& n : names) {
    auto code = n.try_code();
    if (!code) continue;
    if (mpz_sizeinbase(code->get_mpz_t(), 2) > 2048) continue;
    IsNameResult r = is_name(delta0, h_pres, delta0.label_of_base(*code));
    if (!r.is_name)
      throw contract_error("enumerated object fails the name certificate");
  }

  std::vector<Name> reps;
  for (const Name& n : names) {
    bool fresh = true;
    for (const Name& r : reps) {
      if (eq_g(*ctx, G, r, n)) {
        fresh = false;
        break;
      }
    }
    if (fresh) reps.push_back(n);
  }
  return QuotientPresentation(std::move(ctx), G, std::move(reps), rank_bound,
                              size_bound, delta0.from_base);
}

}  // namespace setforge
