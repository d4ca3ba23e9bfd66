#include "setforge/forcing.hpp"

#include <algorithm>

#include "setforge/levy_catalog.hpp"

namespace setforge {

// ---------------------------------------------------------------------------
// ForcingContext
// ---------------------------------------------------------------------------

std::size_t ForcingContext::intern(const Name& n) {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto it = ids_.find(n);
  if (it != ids_.end()) return it->second;
  for (const NameEntry& e : n.entries()) {
    if (!P_.index_of(e.cond))
      throw contract_error("name mentions a non-condition: " + e.cond.get_str());
    intern(e.child);
  }
  std::size_t id = pool_.size();
  pool_.push_back(n);
  ids_.emplace(n, id);
  return id;
}

const Name& ForcingContext::name_of(std::size_t id) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  return pool_.at(id);
}

std::size_t ForcingContext::pool_size() const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  return pool_.size();
}

void ForcingContext::grow_memo() {
  std::size_t ncap = std::max(pool_.size(), cap_ * 2 + 8);
  std::vector<std::uint64_t> nval(3 * ncap * ncap);
  std::vector<unsigned char> nset(3 * ncap * ncap);
  for (int k = 0; k < 3; ++k) {
    for (std::size_t a = 0; a < cap_; ++a) {
      for (std::size_t b = 0; b < cap_; ++b) {
        std::size_t old = slot(k, a, b);
        if (!memo_set_[old]) continue;
        std::size_t fresh = (static_cast<std::size_t>(k) * ncap + a) * ncap + b;
        nval[fresh] = memo_val_[old];
        nset[fresh] = 1;
      }
    }
  }
  cap_ = ncap;
  memo_val_ = std::move(nval);
  memo_set_ = std::move(nset);
}

std::uint64_t ForcingContext::force_mask(ForcingKind k, std::size_t a,
                                         std::size_t b) {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  if (pool_.size() > cap_) grow_memo();
  std::size_t s = slot(static_cast<int>(k), a, b);
  if (memo_set_[s]) return memo_val_[s];
  std::uint64_t mask = compute(k, a, b);
  if (pool_.size() > cap_) {
    grow_memo();  // compute interned new children
    s = slot(static_cast<int>(k), a, b);
  }
  memo_val_[s] = mask;
  memo_set_[s] = 1;
  return mask;
}

std::uint64_t ForcingContext::compute(ForcingKind k, std::size_t a,
                                      std::size_t b) {
  const std::uint64_t all = P_.all_mask();
  switch (k) {
    case ForcingKind::SubsetF: {
      Name sigma = pool_.at(a);
      std::uint64_t mask = all;
      for (const NameEntry& e : sigma.entries()) {
        std::size_t rho = intern(e.child);
        std::size_t r = *P_.index_of(e.cond);
        std::uint64_t in_mask = force_mask(ForcingKind::MemberF, rho, b);
        for (std::size_t p = 0; p < P_.size(); ++p) {
          if ((P_.below_mask(p) & P_.below_mask(r) & ~in_mask) != 0)
            mask &= ~(std::uint64_t{1} << p);
        }
      }
      return mask;
    }
    case ForcingKind::EqualF:
      return force_mask(ForcingKind::SubsetF, a, b) &
             force_mask(ForcingKind::SubsetF, b, a);
    case ForcingKind::MemberF: {
      Name tau = pool_.at(b);
      std::uint64_t witnesses = 0;
      for (const NameEntry& e : tau.entries()) {
        std::size_t rho = intern(e.child);
        std::size_t r = *P_.index_of(e.cond);
        witnesses |= P_.below_mask(r) & force_mask(ForcingKind::EqualF, rho, a);
      }
      std::uint64_t mask = 0;
      for (std::size_t p = 0; p < P_.size(); ++p) {
        bool dense_below = true;
        std::uint64_t below_p = P_.below_mask(p);
        for (std::size_t q = 0; q < P_.size(); ++q) {
          if (!(below_p & (std::uint64_t{1} << q))) continue;
          if ((P_.below_mask(q) & witnesses) == 0) {
            dense_below = false;
            break;
          }
        }
        if (dense_below) mask |= std::uint64_t{1} << p;
      }
      return mask;
    }
  }
  throw error("unreachable");
}

bool ForcingContext::forces(ForcingKind k, std::size_t cond, std::size_t a,
                            std::size_t b) {
  return force_mask(k, a, b) & (std::uint64_t{1} << cond);
}

bool forces_atomic(const hf::InstalledPoset& P, const Nat& p_label,
                   const Name& sigma, const Name& tau, ForcingKind kind) {
  ForcingContext ctx(P.poset);
  auto p = P.poset.index_of(p_label);
  if (!p) throw contract_error("not a condition: " + p_label.get_str());
  return ctx.forces(kind, *p, ctx.intern(sigma), ctx.intern(tau));
}

// ---------------------------------------------------------------------------
// Formula compiler
// ---------------------------------------------------------------------------

namespace {

using catalog::kuratowski_eq_t;

Term V(const std::string& s) { return Term::var(s); }

class Compiler {
 public:
  Compiler() = default;

  struct Pair {
    Formula sig;
    Formula pi;
  };

  std::string fresh(const std::string& base) {
    return "fc_" + base + std::to_string(counter_++);
  }

  Term P() const { return V(CompiledForcing::kP); }
  Term L() const { return V(CompiledForcing::kL); }

  // exists e in L with e = <a, b>  (a is the stronger condition)
  Formula leq(const Term& a, const Term& b) {
    std::string e = fresh("e");
    return Formula::bounded_exists(e, L(), kuratowski_eq_t(V(e), a, b));
  }

  // The table F records <<i, q>, <a, b>> tuples.
  Formula present(const Term& F, int i, const Term& q, const Term& a,
                  const Term& b) {
    std::string e = fresh("e"), u = fresh("u"), w1 = fresh("w"), v = fresh("v"),
                w2 = fresh("w"), u1 = fresh("u"), ii = fresh("i");
    Formula w1_shape = Formula::bounded_exists(
        u1, V(w1),
        Formula::bounded_exists(
            ii, V(u1),
            Formula::conj(kuratowski_eq_t(V(w1), V(ii), q), tag(ii, i))));
    Formula w2_shape = kuratowski_eq_t(V(w2), a, b);
    Formula body = Formula::conj_all(
        {kuratowski_eq_t(V(e), V(w1), V(w2)), w1_shape, w2_shape});
    return Formula::bounded_exists(
        e, F,
        Formula::bounded_exists(
            u, V(e),
            Formula::bounded_exists(
                w1, V(u),
                Formula::bounded_exists(
                    v, V(e), Formula::bounded_exists(w2, V(v), body)))));
  }

  Formula tag(const std::string& ii, int i) {
    if (i == 0) return catalog::is_empty(ii);
    // ii = {0}: has an empty element and nothing else.
    std::string z1 = fresh("z"), z2 = fresh("z");
    return Formula::conj(
        Formula::bounded_exists(z1, V(ii), catalog::is_empty(z1)),
        Formula::bounded_forall(z2, V(ii), catalog::is_empty(z2)));
  }

  // Every element of every member of N is a pair into N x P.
  Formula name_closure(const Term& N) {
    std::string z = fresh("z"), e = fresh("e"), u = fresh("u"), aa = fresh("a"),
                v = fresh("v"), bb = fresh("b");
    Formula pair_ok = Formula::bounded_exists(
        u, V(e),
        Formula::bounded_exists(
            aa, V(u),
            Formula::bounded_exists(
                v, V(e),
                Formula::bounded_exists(
                    bb, V(v),
                    Formula::conj_all({kuratowski_eq_t(V(e), V(aa), V(bb)),
                                       Formula::member(V(aa), N),
                                       Formula::member(V(bb), P())})))));
    return Formula::bounded_forall(
        z, N, Formula::bounded_forall(e, V(z), pair_ok));
  }

  // for every <rho, r> in a and q' <= q, r: <1, q', rho, b> in F
  Formula sub_ok(const Term& F, const Term& q, const Term& a, const Term& b) {
    std::string e = fresh("e"), u = fresh("u"), rho = fresh("r"), v = fresh("v"),
                r = fresh("r"), qp = fresh("q");
    Formula inner = Formula::disj(
        Formula::negation(Formula::conj(leq(V(qp), q), leq(V(qp), V(r)))),
        present(F, 1, V(qp), V(rho), b));
    Formula guarded = Formula::disj(
        Formula::negation(kuratowski_eq_t(V(e), V(rho), V(r))),
        Formula::bounded_forall(qp, P(), inner));
    return Formula::bounded_forall(
        e, a,
        Formula::bounded_forall(
            u, V(e),
            Formula::bounded_forall(
                rho, V(u),
                Formula::bounded_forall(
                    v, V(e), Formula::bounded_forall(r, V(v), guarded)))));
  }

  // densely below q there are q2 with some <pi, s> in b, q2 <= s and
  // <0, q2, pi, rho>, <0, q2, rho, pi> in F
  Formula mem_ok(const Term& F, const Term& q, const Term& rho, const Term& b) {
    std::string q1 = fresh("q"), q2 = fresh("q"), e = fresh("e"), u = fresh("u"),
                pi = fresh("r"), v = fresh("v"), s = fresh("s");
    Formula wit = Formula::bounded_exists(
        e, b,
        Formula::bounded_exists(
            u, V(e),
            Formula::bounded_exists(
                pi, V(u),
                Formula::bounded_exists(
                    v, V(e),
                    Formula::bounded_exists(
                        s, V(v),
                        Formula::conj_all(
                            {kuratowski_eq_t(V(e), V(pi), V(s)),
                             leq(V(q2), V(s)),
                             present(F, 0, V(q2), V(pi), rho),
                             present(F, 0, V(q2), rho, V(pi))}))))));
    Formula step = Formula::disj(
        Formula::negation(leq(V(q1), q)),
        Formula::bounded_exists(q2, P(),
                                Formula::conj(leq(V(q2), V(q1)), wit)));
    return Formula::bounded_forall(q1, P(), step);
  }

  Formula iff(const Formula& x, const Formula& y) {
    return Formula::conj(Formula::disj(Formula::negation(x), y),
                         Formula::disj(Formula::negation(y), x));
  }

  // F solves the subset/membership recursion over N.
  Formula table_correct(const Term& F, const Term& N) {
    std::string q = fresh("q"), a = fresh("a"), b = fresh("b");
    Formula sub_row = iff(present(F, 0, V(q), V(a), V(b)),
                          sub_ok(F, V(q), V(a), V(b)));
    Formula mem_row = iff(present(F, 1, V(q), V(a), V(b)),
                          mem_ok(F, V(q), V(a), V(b)));
    return Formula::bounded_forall(
        q, P(),
        Formula::bounded_forall(
            a, N,
            Formula::bounded_forall(b, N,
                                    Formula::conj(sub_row, mem_row))));
  }

  // The Delta1 pair for an atomic forcing relation.
  Pair atomic(bool member, const Term& p, const Term& a, const Term& b) {
    std::string N = fresh("N"), F = fresh("F");
    auto record = [&](const Term& Fv) {
      return member ? present(Fv, 1, p, a, b)
                    : Formula::conj(present(Fv, 0, p, a, b),
                                    present(Fv, 0, p, b, a));
    };
    Formula premises = Formula::conj_all(
        {Formula::member(a, V(N)), Formula::member(b, V(N)),
         name_closure(V(N)), table_correct(V(F), V(N))});
    Formula sig = Formula::exists(
        N, Formula::exists(F, Formula::conj(premises, record(V(F)))));
    Formula pi = Formula::forall(
        N, Formula::forall(
               F, Formula::disj(Formula::negation(premises), record(V(F)))));
    return {sig, pi};
  }

  Pair delta0(const Formula& f, const Term& p) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Member:
        return atomic(true, p, f.lhs(), f.rhs());
      case K::Equal:
        return atomic(false, p, f.lhs(), f.rhs());
      case K::Atom:
        throw error("atoms are expanded before compilation");
      case K::Not: {
        std::string q = fresh("q");
        Pair inner = delta0(f.body(), V(q));
        auto wrap = [&](const Formula& g) {
          return Formula::bounded_forall(
              q, P(),
              Formula::disj(Formula::negation(leq(V(q), p)),
                            Formula::negation(g)));
        };
        return {wrap(inner.pi), wrap(inner.sig)};
      }
      case K::And: {
        Pair l = delta0(f.left(), p);
        Pair r = delta0(f.right(), p);
        return {Formula::conj(l.sig, r.sig), Formula::conj(l.pi, r.pi)};
      }
      case K::Or: {
        std::string q1 = fresh("q"), q2 = fresh("q");
        Pair l = delta0(f.left(), V(q2));
        Pair r = delta0(f.right(), V(q2));
        auto wrap = [&](const Formula& lg, const Formula& rg) {
          Formula found = Formula::bounded_exists(
              q2, P(),
              Formula::conj(leq(V(q2), V(q1)), Formula::disj(lg, rg)));
          return Formula::bounded_forall(
              q1, P(),
              Formula::disj(Formula::negation(leq(V(q1), p)), found));
        };
        return {wrap(l.sig, r.sig), wrap(l.pi, r.pi)};
      }
      case K::BoundedExists: {
        // Densely many q2 <= p with some <rho, r> in the bound, q2 <= r and
        // q2 forcing the body at rho.
        std::string q1 = fresh("q"), q2 = fresh("q"), e = fresh("e"),
                    u = fresh("u"), rho = fresh("r"), v = fresh("v"),
                    r = fresh("r");
        Formula body_s = substitute(f.body(), f.quant_var(), V(rho));
        Pair inner = delta0(body_s, V(q2));
        auto wrap = [&](const Formula& g) {
          Formula wit = Formula::bounded_exists(
              e, f.quant_bound(),
              Formula::bounded_exists(
                  u, V(e),
                  Formula::bounded_exists(
                      rho, V(u),
                      Formula::bounded_exists(
                          v, V(e),
                          Formula::bounded_exists(
                              r, V(v),
                              Formula::conj_all(
                                  {kuratowski_eq_t(V(e), V(rho), V(r)),
                                   leq(V(q2), V(r)), g}))))));
          Formula found = Formula::bounded_exists(
              q2, P(), Formula::conj(leq(V(q2), V(q1)), wit));
          return Formula::bounded_forall(
              q1, P(),
              Formula::disj(Formula::negation(leq(V(q1), p)), found));
        };
        return {wrap(inner.sig), wrap(inner.pi)};
      }
      case K::BoundedForall: {
        Formula desugared = Formula::negation(Formula::bounded_exists(
            f.quant_var(), f.quant_bound(), Formula::negation(f.body())));
        return delta0(desugared, p);
      }
      default:
        throw malformed_error("not a Delta0 formula");
    }
  }

  Formula any(const Formula& f, const Term& p) {
    using K = Formula::Kind;
    if (classify(f).is_delta0()) return delta0(f, p).sig;
    switch (f.kind()) {
      case K::Not: {
        std::string q = fresh("q");
        Formula inner = any(f.body(), V(q));
        return Formula::bounded_forall(
            q, P(),
            Formula::disj(Formula::negation(leq(V(q), p)),
                          Formula::negation(inner)));
      }
      case K::And:
        return Formula::conj(any(f.left(), p), any(f.right(), p));
      case K::Or: {
        std::string q1 = fresh("q"), q2 = fresh("q");
        Formula found = Formula::bounded_exists(
            q2, P(),
            Formula::conj(leq(V(q2), V(q1)),
                          Formula::disj(any(f.left(), V(q2)),
                                        any(f.right(), V(q2)))));
        return Formula::bounded_forall(
            q1, P(), Formula::disj(Formula::negation(leq(V(q1), p)), found));
      }
      case K::BoundedExists: {
        std::string q1 = fresh("q"), q2 = fresh("q"), e = fresh("e"),
                    u = fresh("u"), rho = fresh("r"), v = fresh("v"),
                    r = fresh("r");
        Formula body_s = substitute(f.body(), f.quant_var(), V(rho));
        Formula inner = any(body_s, V(q2));
        Formula wit = Formula::bounded_exists(
            e, f.quant_bound(),
            Formula::bounded_exists(
                u, V(e),
                Formula::bounded_exists(
                    rho, V(u),
                    Formula::bounded_exists(
                        v, V(e),
                        Formula::bounded_exists(
                            r, V(v),
                            Formula::conj_all(
                                {kuratowski_eq_t(V(e), V(rho), V(r)),
                                 leq(V(q2), V(r)), inner}))))));
        Formula found = Formula::bounded_exists(
            q2, P(), Formula::conj(leq(V(q2), V(q1)), wit));
        return Formula::bounded_forall(
            q1, P(), Formula::disj(Formula::negation(leq(V(q1), p)), found));
      }
      case K::BoundedForall:
        return any(Formula::negation(Formula::bounded_exists(
                       f.quant_var(), f.quant_bound(),
                       Formula::negation(f.body()))),
                   p);
      case K::Exists: {
        std::string q1 = fresh("q"), q2 = fresh("q"), t = fresh("t");
        Formula inner = any(substitute(f.body(), f.quant_var(), V(t)), V(q2));
        Formula wit = Formula::exists(
            t, Formula::conj(name_predicate_sigma(t, CompiledForcing::kP),
                             inner));
        Formula found = Formula::bounded_exists(
            q2, P(), Formula::conj(leq(V(q2), V(q1)), wit));
        return Formula::bounded_forall(
            q1, P(), Formula::disj(Formula::negation(leq(V(q1), p)), found));
      }
      case K::Forall:
        return any(Formula::negation(Formula::exists(
                       f.quant_var(), Formula::negation(f.body()))),
                   p);
      default:
        throw error("unreachable");
    }
  }

 private:
  unsigned counter_ = 0;
};

}  // namespace

Formula name_predicate_sigma(const std::string& x, const std::string& pvar) {
  // exists T: x in T and every element of every node of T is a pair whose
  // first coordinate is in T and whose condition is in the forcing notion.
  std::string T = "np_T", z = "np_z", e = "np_e", u = "np_u", a = "np_a",
              v = "np_v", b = "np_b";
  Formula pair_ok = Formula::bounded_exists(
      u, V(e),
      Formula::bounded_exists(
          a, V(u),
          Formula::bounded_exists(
              v, V(e),
              Formula::bounded_exists(
                  b, V(v),
                  Formula::conj_all({kuratowski_eq_t(V(e), V(a), V(b)),
                                     Formula::member(V(a), V(T)),
                                     Formula::member(V(b), V(pvar))})))));
  Formula closure = Formula::bounded_forall(
      z, V(T), Formula::bounded_forall(e, V(z), pair_ok));
  return Formula::exists(
      T, Formula::conj(Formula::member(V(x), V(T)), closure));
}

CompiledForcing compile_forcing(const Formula& phi, const AtomRegistry& reg) {
  Formula source = alpha_normalize(expand_levy_atoms(phi, reg));
  Compiler c;
  std::vector<std::string> params;
  for (const std::string& fv : free_vars(source)) params.push_back(fv);
  LevyClass cls = classify(source);
  Term p = V(CompiledForcing::kCond);
  if (cls.is_delta0()) {
    Compiler::Pair pr = c.delta0(source, p);
    Formula sig = alpha_normalize(pr.sig);
    return CompiledForcing{phi, sig, alpha_normalize(pr.pi), classify(sig),
                           std::move(params)};
  }
  Formula form = alpha_normalize(c.any(source, p));
  return CompiledForcing{phi, form, std::nullopt, classify(form),
                         std::move(params)};
}

// ---------------------------------------------------------------------------
// Deciding compound forcing over an installed poset
// ---------------------------------------------------------------------------

namespace {

class ForceEval {
 public:
  ForceEval(ForcingContext& ctx, const AtomRegistry& reg, Budget budget,
            const Nat& max_label)
      : ctx_(ctx), reg_(reg), budget_(budget), max_label_(max_label) {}

  void bind(const std::string& var, const Name& n) {
    env_[var] = ctx_.intern(n);
    seed(n);
  }

  Answer force(std::size_t cond, const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Member:
      case K::Equal: {
        std::size_t a = term_name(f.lhs());
        std::size_t b = term_name(f.rhs());
        ForcingKind k = f.kind() == K::Member ? ForcingKind::MemberF
                                              : ForcingKind::EqualF;
        return ctx_.forces(k, cond, a, b) ? Answer::True : Answer::False;
      }
      case K::Atom:
        return force(cond, expand_levy_atoms(f, reg_));
      case K::Not: {
        bool oob = false;
        for (std::size_t q : below(cond)) {
          Answer a = force(q, f.body());
          if (a == Answer::True) return Answer::False;
          if (a == Answer::OutOfBudget) oob = true;
        }
        return oob ? Answer::OutOfBudget : Answer::True;
      }
      case K::And: {
        Answer a = force(cond, f.left());
        if (a == Answer::False) return Answer::False;
        Answer b = force(cond, f.right());
        if (b == Answer::False) return Answer::False;
        if (a == Answer::OutOfBudget || b == Answer::OutOfBudget)
          return Answer::OutOfBudget;
        return Answer::True;
      }
      case K::Or:
        return densely(cond, [&](std::size_t q) -> Answer {
          Answer a = force(q, f.left());
          if (a == Answer::True) return Answer::True;
          Answer b = force(q, f.right());
          if (b == Answer::True) return Answer::True;
          if (a == Answer::OutOfBudget || b == Answer::OutOfBudget)
            return Answer::OutOfBudget;
          return Answer::False;
        });
      case K::BoundedExists: {
        std::size_t tau = term_name(f.quant_bound());
        Name tau_name = ctx_.name_of(tau);
        return densely(cond, [&](std::size_t q) -> Answer {
          bool oob = false;
          for (const NameEntry& e : tau_name.entries()) {
            std::size_t r = *ctx_.poset().index_of(e.cond);
            if (!ctx_.poset().leq(q, r)) continue;
            Answer a = with_binding(f.quant_var(), e.child,
                                    [&] { return force(q, f.body()); });
            if (a == Answer::True) return Answer::True;
            if (a == Answer::OutOfBudget) oob = true;
          }
          return oob ? Answer::OutOfBudget : Answer::False;
        });
      }
      case K::BoundedForall:
        return force(cond,
                     Formula::negation(Formula::bounded_exists(
                         f.quant_var(), f.quant_bound(),
                         Formula::negation(f.body()))));
      case K::Exists: {
        const std::vector<Name>& cands = candidates();
        return densely(cond, [&](std::size_t q) -> Answer {
          for (const Name& t : cands) {
            Answer a = with_binding(f.quant_var(), t,
                                    [&] { return force(q, f.body()); });
            if (a == Answer::True) return Answer::True;
          }
          return Answer::OutOfBudget;  // never refutable by finite search
        });
      }
      case K::Forall:
        return force(cond, Formula::negation(Formula::exists(
                               f.quant_var(), Formula::negation(f.body()))));
    }
    throw error("unreachable");
  }

 private:
  std::vector<std::size_t> below(std::size_t p) {
    std::vector<std::size_t> out;
    std::uint64_t mask = ctx_.poset().below_mask(p);
    for (std::size_t q = 0; q < ctx_.poset().size(); ++q)
      if (mask & (std::uint64_t{1} << q)) out.push_back(q);
    return out;
  }

  // "Densely below cond": every q <= cond has q' <= q where check(q') holds.
  template <typename Check>
  Answer densely(std::size_t cond, Check check) {
    bool oob = false;
    for (std::size_t q : below(cond)) {
      bool found = false;
      bool q_oob = false;
      for (std::size_t qp : below(q)) {
        Answer a = check(qp);
        if (a == Answer::True) {
          found = true;
          break;
        }
        if (a == Answer::OutOfBudget) q_oob = true;
      }
      if (found) continue;
      if (q_oob) {
        oob = true;
        continue;
      }
      return Answer::False;
    }
    return oob ? Answer::OutOfBudget : Answer::True;
  }

  std::size_t term_name(const Term& t) {
    if (t.kind() == Term::Kind::Var) {
      auto it = env_.find(t.var_name());
      if (it == env_.end())
        throw malformed_error("unbound variable in forcing: " + t.var_name());
      return it->second;
    }
    if (t.kind() == Term::Kind::Const) {
      Name n = check_name(t.code(), max_label_);
      std::size_t id = ctx_.intern(n);
      seed(n);
      return id;
    }
    throw malformed_error("signature constants have no forcing reading");
  }

  template <typename Fn>
  Answer with_binding(const std::string& var, const Name& n, Fn fn) {
    auto it = env_.find(var);
    std::optional<std::size_t> prev;
    if (it != env_.end()) prev = it->second;
    env_[var] = ctx_.intern(n);
    Answer a = fn();
    if (prev)
      env_[var] = *prev;
    else
      env_.erase(var);
    return a;
  }

  void seed(const Name& n) {
    if (std::find(seeds_.begin(), seeds_.end(), n) == seeds_.end())
      seeds_.push_back(n);
    for (const NameEntry& e : n.entries()) seed(e.child);
  }

  // Witness candidates for unbounded existentials: the seeds (bound names,
  // constants) plus the rank <= 2, <= 2 entries family, in code order,
  // truncated to the budget.
  const std::vector<Name>& candidates() {
    if (!cands_.empty() || budget_ == 0) return cands_;
    std::vector<Name> all = enumerate_names_structural(ctx_.poset(), 2, 2);
    for (const Name& s : seeds_) all.push_back(s);
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    if (all.size() > budget_) all.resize(budget_);
    cands_ = std::move(all);
    return cands_;
  }

  ForcingContext& ctx_;
  const AtomRegistry& reg_;
  Budget budget_;
  Nat max_label_;
  std::map<std::string, std::size_t> env_;
  std::vector<Name> seeds_;
  std::vector<Name> cands_;
};

}  // namespace

Answer forces(ForcingContext& ctx, std::size_t cond, const Formula& phi,
              const std::vector<std::pair<std::string, Name>>& bindings,
              Budget budget, const AtomRegistry& reg) {
  Formula f = alpha_normalize(expand_levy_atoms(phi, reg));
  Nat max_label = ctx.poset().label(ctx.poset().max_index());
  ForceEval ev(ctx, reg, budget, max_label);
  for (const auto& [var, n] : bindings) ev.bind(var, n);
  return ev.force(cond, f);
}

Answer forces(const hf::InstalledPoset& P, const Nat& p_label, const Formula& phi,
              const std::vector<std::pair<std::string, Name>>& bindings,
              Budget budget, const AtomRegistry& reg) {
  ForcingContext ctx(P.poset);
  auto p = P.poset.index_of(p_label);
  if (!p) throw contract_error("not a condition: " + p_label.get_str());
  return forces(ctx, *p, phi, bindings, budget, reg);
}

}  // namespace setforge
