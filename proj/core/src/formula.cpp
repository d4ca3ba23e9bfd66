#include "setforge/formula.hpp"

#include <algorithm>
#include <map>

namespace setforge {

// ---------------------------------------------------------------------------
// Term
// ---------------------------------------------------------------------------

Term Term::var(std::string name) {
  if (name.empty()) throw malformed_error("empty variable name");
  Term t;
  t.kind_ = Kind::Var;
  t.name_ = std::move(name);
  return t;
}

Term Term::constant(Nat code) {
  if (code < 0) throw malformed_error("negative model constant");
  Term t;
  t.kind_ = Kind::Const;
  t.code_ = std::move(code);
  return t;
}

Term Term::sig_p() {
  Term t;
  t.kind_ = Kind::SigP;
  return t;
}

Term Term::sig_c() {
  Term t;
  t.kind_ = Kind::SigC;
  return t;
}

Term Term::sig_d(std::uint64_t j) {
  Term t;
  t.kind_ = Kind::SigD;
  t.d_ = j;
  return t;
}

const std::string& Term::var_name() const {
  if (kind_ != Kind::Var) throw error("term is not a variable");
  return name_;
}

const Nat& Term::code() const {
  if (kind_ != Kind::Const) throw error("term is not a model constant");
  return code_;
}

std::uint64_t Term::d_index() const {
  if (kind_ != Kind::SigD) throw error("term is not a d-constant");
  return d_;
}

bool Term::operator==(const Term& o) const {
  if (kind_ != o.kind_) return false;
  switch (kind_) {
    case Kind::Var: return name_ == o.name_;
    case Kind::Const: return code_ == o.code_;
    case Kind::SigD: return d_ == o.d_;
    default: return true;
  }
}

// ---------------------------------------------------------------------------
// LevyClass
// ---------------------------------------------------------------------------

LevyClass LevyClass::sigma(unsigned n) {
  if (n == 0) throw malformed_error("Sigma(0) is spelled Delta0");
  return {Kind::Sigma, n};
}

LevyClass LevyClass::pi(unsigned n) {
  if (n == 0) throw malformed_error("Pi(0) is spelled Delta0");
  return {Kind::Pi, n};
}

bool LevyClass::subsumed_by(const LevyClass& o) const {
  if (is_delta0()) return true;
  if (o.is_delta0()) return false;
  if (level < o.level) return true;
  if (level > o.level) return false;
  return kind == o.kind;
}

std::string LevyClass::str() const {
  switch (kind) {
    case Kind::Delta0: return "Delta0";
    case Kind::Sigma: return "Sigma" + std::to_string(level);
    case Kind::Pi: return "Pi" + std::to_string(level);
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Formula nodes
// ---------------------------------------------------------------------------

struct FormulaNode {
  Formula::Kind kind;
  Term t1, t2;  // Member/Equal terms; quantifier bound lives in t1
  AtomId atom_id;
  std::vector<Term> args;
  std::string var;
  std::shared_ptr<const FormulaNode> a, b;

  static Formula wrap(std::shared_ptr<const FormulaNode> n) {
    return Formula(std::move(n));
  }
};

namespace {

std::shared_ptr<FormulaNode> mk(Formula::Kind k) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = k;
  return n;
}

const FormulaNode& deref(const std::shared_ptr<const FormulaNode>& p) {
  if (!p) throw error("empty formula handle");
  return *p;
}

}  // namespace

Formula Formula::member(Term lhs, Term rhs) {
  auto n = mk(Kind::Member);
  n->t1 = std::move(lhs);
  n->t2 = std::move(rhs);
  return FormulaNode::wrap(n);
}

Formula Formula::equal(Term lhs, Term rhs) {
  auto n = mk(Kind::Equal);
  n->t1 = std::move(lhs);
  n->t2 = std::move(rhs);
  return FormulaNode::wrap(n);
}

Formula Formula::atom(AtomId id, std::vector<Term> args) {
  auto n = mk(Kind::Atom);
  n->atom_id = id;
  n->args = std::move(args);
  return FormulaNode::wrap(n);
}

Formula Formula::negation(Formula body) {
  auto n = mk(Kind::Not);
  n->a = body.node_;
  return FormulaNode::wrap(n);
}

Formula Formula::conj(Formula l, Formula r) {
  auto n = mk(Kind::And);
  n->a = l.node_;
  n->b = r.node_;
  return FormulaNode::wrap(n);
}

Formula Formula::disj(Formula l, Formula r) {
  auto n = mk(Kind::Or);
  n->a = l.node_;
  n->b = r.node_;
  return FormulaNode::wrap(n);
}

static void check_bound(const std::string& var, const Term& bound) {
  if (bound.kind() == Term::Kind::Var && bound.var_name() == var)
    throw malformed_error("bound term mentions the bound variable: " + var);
}

Formula Formula::bounded_exists(std::string var, Term bound, Formula body) {
  check_bound(var, bound);
  auto n = mk(Kind::BoundedExists);
  n->var = std::move(var);
  n->t1 = std::move(bound);
  n->a = body.node_;
  return FormulaNode::wrap(n);
}

Formula Formula::bounded_forall(std::string var, Term bound, Formula body) {
  check_bound(var, bound);
  auto n = mk(Kind::BoundedForall);
  n->var = std::move(var);
  n->t1 = std::move(bound);
  n->a = body.node_;
  return FormulaNode::wrap(n);
}

Formula Formula::exists(std::string var, Formula body) {
  auto n = mk(Kind::Exists);
  n->var = std::move(var);
  n->a = body.node_;
  return FormulaNode::wrap(n);
}

Formula Formula::forall(std::string var, Formula body) {
  auto n = mk(Kind::Forall);
  n->var = std::move(var);
  n->a = body.node_;
  return FormulaNode::wrap(n);
}

Formula Formula::conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) throw malformed_error("empty conjunction");
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
  return acc;
}

Formula Formula::disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) throw malformed_error("empty disjunction");
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
  return acc;
}

Formula::Kind Formula::kind() const { return deref(node_).kind; }

const Term& Formula::lhs() const { return deref(node_).t1; }
const Term& Formula::rhs() const { return deref(node_).t2; }

AtomId Formula::atom_id() const { return deref(node_).atom_id; }
const std::vector<Term>& Formula::atom_args() const { return deref(node_).args; }

Formula Formula::body() const { return Formula(deref(node_).a); }

Formula Formula::left() const { return Formula(deref(node_).a); }

Formula Formula::right() const { return Formula(deref(node_).b); }

const std::string& Formula::quant_var() const { return deref(node_).var; }
const Term& Formula::quant_bound() const { return deref(node_).t1; }

bool Formula::operator==(const Formula& o) const {
  if (node_ == o.node_) return true;
  if (!node_ || !o.node_) return false;
  const FormulaNode& x = *node_;
  const FormulaNode& y = *o.node_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case Kind::Member:
    case Kind::Equal:
      return x.t1 == y.t1 && x.t2 == y.t2;
    case Kind::Atom:
      return x.atom_id == y.atom_id && x.args == y.args;
    case Kind::Not:
      return Formula(x.a) == Formula(y.a);
    case Kind::And:
    case Kind::Or:
      return Formula(x.a) == Formula(y.a) && Formula(x.b) == Formula(y.b);
    case Kind::BoundedExists:
    case Kind::BoundedForall:
      return x.var == y.var && x.t1 == y.t1 && Formula(x.a) == Formula(y.a);
    case Kind::Exists:
    case Kind::Forall:
      return x.var == y.var && Formula(x.a) == Formula(y.a);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

namespace {

// (s, p): least n with phi in Sigma(n) resp. Pi(n), counting Delta0 as 0.
struct ClassPair {
  unsigned s = 0, p = 0;
};

ClassPair class_pair(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Member:
    case K::Equal:
    case K::Atom:
      return {0, 0};
    case K::Not: {
      ClassPair c = class_pair(f.body());
      return {c.p, c.s};
    }
    case K::And:
    case K::Or: {
      ClassPair a = class_pair(f.left());
      ClassPair b = class_pair(f.right());
      return {std::max(a.s, b.s), std::max(a.p, b.p)};
    }
    case K::BoundedExists:
    case K::BoundedForall:
      // Set-bounded quantification is not counted.
      return class_pair(f.body());
    case K::Exists: {
      ClassPair c = class_pair(f.body());
      unsigned s = std::max(c.s, 1u);
      return {s, s + 1};
    }
    case K::Forall: {
      ClassPair c = class_pair(f.body());
      unsigned p = std::max(c.p, 1u);
      return {p + 1, p};
    }
  }
  throw error("unreachable");
}

}  // namespace

LevyClass classify(const Formula& phi) {
  ClassPair c = class_pair(phi);
  if (c.s == 0 && c.p == 0) return LevyClass::delta0();
  if (c.s < c.p) return LevyClass::sigma(c.s);
  if (c.p < c.s) return LevyClass::pi(c.p);
  return LevyClass::sigma(c.s);  // tie: both proper parts present
}

// ---------------------------------------------------------------------------
// Variables, substitution, alpha normalization
// ---------------------------------------------------------------------------

namespace {

void collect_vars(const Formula& f, std::set<std::string>& bound,
                  std::set<std::string>& free, std::set<std::string>& all) {
  using K = Formula::Kind;
  auto term = [&](const Term& t) {
    if (t.kind() == Term::Kind::Var) {
      all.insert(t.var_name());
      if (!bound.count(t.var_name())) free.insert(t.var_name());
    }
  };
  switch (f.kind()) {
    case K::Member:
    case K::Equal:
      term(f.lhs());
      term(f.rhs());
      return;
    case K::Atom:
      for (const Term& t : f.atom_args()) term(t);
      return;
    case K::Not:
      collect_vars(f.body(), bound, free, all);
      return;
    case K::And:
    case K::Or:
      collect_vars(f.left(), bound, free, all);
      collect_vars(f.right(), bound, free, all);
      return;
    case K::BoundedExists:
    case K::BoundedForall: {
      term(f.quant_bound());
      all.insert(f.quant_var());
      bool fresh = bound.insert(f.quant_var()).second;
      collect_vars(f.body(), bound, free, all);
      if (fresh) bound.erase(f.quant_var());
      return;
    }
    case K::Exists:
    case K::Forall: {
      all.insert(f.quant_var());
      bool fresh = bound.insert(f.quant_var()).second;
      collect_vars(f.body(), bound, free, all);
      if (fresh) bound.erase(f.quant_var());
      return;
    }
  }
}

}  // namespace

std::set<std::string> free_vars(const Formula& phi) {
  std::set<std::string> bound, free, all;
  collect_vars(phi, bound, free, all);
  return free;
}

namespace {

std::set<std::string> all_vars(const Formula& phi) {
  std::set<std::string> bound, free, all;
  collect_vars(phi, bound, free, all);
  return all;
}

/// Deterministic fresh-name source: base name plus an increasing suffix,
/// skipping every name in `used`.
class FreshNames {
 public:
  explicit FreshNames(std::set<std::string> used) : used_(std::move(used)) {}
  std::string fresh(const std::string& base) {
    std::string cand = base;
    while (used_.count(cand)) {
      cand = base + "_" + std::to_string(counter_++);
    }
    used_.insert(cand);
    return cand;
  }
  void reserve(const std::string& s) { used_.insert(s); }

 private:
  std::set<std::string> used_;
  unsigned counter_ = 0;
};

Term subst_term(const Term& t, const std::string& var, const Term& repl) {
  if (t.kind() == Term::Kind::Var && t.var_name() == var) return repl;
  return t;
}

Formula subst_impl(const Formula& f, const std::string& var, const Term& repl,
                   FreshNames& names) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Member:
      return Formula::member(subst_term(f.lhs(), var, repl),
                             subst_term(f.rhs(), var, repl));
    case K::Equal:
      return Formula::equal(subst_term(f.lhs(), var, repl),
                            subst_term(f.rhs(), var, repl));
    case K::Atom: {
      std::vector<Term> args;
      args.reserve(f.atom_args().size());
      for (const Term& t : f.atom_args()) args.push_back(subst_term(t, var, repl));
      return Formula::atom(f.atom_id(), std::move(args));
    }
    case K::Not:
      return Formula::negation(subst_impl(f.body(), var, repl, names));
    case K::And:
      return Formula::conj(subst_impl(f.left(), var, repl, names),
                           subst_impl(f.right(), var, repl, names));
    case K::Or:
      return Formula::disj(subst_impl(f.left(), var, repl, names),
                           subst_impl(f.right(), var, repl, names));
    case K::BoundedExists:
    case K::BoundedForall:
    case K::Exists:
    case K::Forall: {
      bool bounded =
          f.kind() == K::BoundedExists || f.kind() == K::BoundedForall;
      Term bound = bounded ? subst_term(f.quant_bound(), var, repl) : Term::var("_");
      std::string qv = f.quant_var();
      Formula body = f.body();
      if (qv == var) {
        // Shadowed: only the bound term (already substituted) changes.
      } else if (repl.kind() == Term::Kind::Var && repl.var_name() == qv) {
        // Capture: rename the binder first.
        std::string nv = names.fresh(qv);
        body = subst_impl(body, qv, Term::var(nv), names);
        body = subst_impl(body, var, repl, names);
        qv = nv;
      } else {
        body = subst_impl(body, var, repl, names);
      }
      switch (f.kind()) {
        case K::BoundedExists: return Formula::bounded_exists(qv, bound, body);
        case K::BoundedForall: return Formula::bounded_forall(qv, bound, body);
        case K::Exists: return Formula::exists(qv, body);
        default: return Formula::forall(qv, body);
      }
    }
  }
  throw error("unreachable");
}

}  // namespace

Formula substitute(const Formula& phi, const std::string& var, const Term& t) {
  std::set<std::string> used = all_vars(phi);
  if (t.kind() == Term::Kind::Var) used.insert(t.var_name());
  FreshNames names(std::move(used));
  return subst_impl(phi, var, t, names);
}

namespace {

Formula alpha_impl(const Formula& f, std::map<std::string, std::string>& ren,
                   FreshNames& names, std::set<std::string>& taken) {
  using K = Formula::Kind;
  auto term = [&](const Term& t) -> Term {
    if (t.kind() == Term::Kind::Var) {
      auto it = ren.find(t.var_name());
      if (it != ren.end()) return Term::var(it->second);
    }
    return t;
  };
  switch (f.kind()) {
    case K::Member:
      return Formula::member(term(f.lhs()), term(f.rhs()));
    case K::Equal:
      return Formula::equal(term(f.lhs()), term(f.rhs()));
    case K::Atom: {
      std::vector<Term> args;
      for (const Term& t : f.atom_args()) args.push_back(term(t));
      return Formula::atom(f.atom_id(), std::move(args));
    }
    case K::Not:
      return Formula::negation(alpha_impl(f.body(), ren, names, taken));
    case K::And:
      return Formula::conj(alpha_impl(f.left(), ren, names, taken),
                           alpha_impl(f.right(), ren, names, taken));
    case K::Or:
      return Formula::disj(alpha_impl(f.left(), ren, names, taken),
                           alpha_impl(f.right(), ren, names, taken));
    case K::BoundedExists:
    case K::BoundedForall:
    case K::Exists:
    case K::Forall: {
      bool bounded =
          f.kind() == K::BoundedExists || f.kind() == K::BoundedForall;
      Term bound = bounded ? term(f.quant_bound()) : Term::var("_");
      std::string qv = f.quant_var();
      std::string nv = taken.count(qv) ? names.fresh(qv) : qv;
      taken.insert(nv);
      names.reserve(nv);
      auto it = ren.find(qv);
      std::optional<std::string> prev;
      if (it != ren.end()) prev = it->second;
      ren[qv] = nv;
      Formula body = alpha_impl(f.body(), ren, names, taken);
      if (prev) ren[qv] = *prev; else ren.erase(qv);
      switch (f.kind()) {
        case K::BoundedExists: return Formula::bounded_exists(nv, bound, body);
        case K::BoundedForall: return Formula::bounded_forall(nv, bound, body);
        case K::Exists: return Formula::exists(nv, body);
        default: return Formula::forall(nv, body);
      }
    }
  }
  throw error("unreachable");
}

bool alpha_check(const Formula& f, std::set<std::string>& seen_binders,
                 const std::set<std::string>& free) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Member:
    case K::Equal:
    case K::Atom:
      return true;
    case K::Not:
      return alpha_check(f.body(), seen_binders, free);
    case K::And:
    case K::Or:
      return alpha_check(f.left(), seen_binders, free) &&
             alpha_check(f.right(), seen_binders, free);
    default: {
      const std::string& v = f.quant_var();
      if (free.count(v)) return false;
      if (!seen_binders.insert(v).second) return false;
      return alpha_check(f.body(), seen_binders, free);
    }
  }
}

}  // namespace

bool is_alpha_normal(const Formula& phi) {
  std::set<std::string> binders;
  return alpha_check(phi, binders, free_vars(phi));
}

Formula alpha_normalize(const Formula& phi) {
  if (is_alpha_normal(phi)) return phi;
  std::set<std::string> taken = free_vars(phi);
  FreshNames names(all_vars(phi));
  std::map<std::string, std::string> ren;
  return alpha_impl(phi, ren, names, taken);
}

bool is_atomic_sentence(const Formula& phi) {
  if (phi.kind() != Formula::Kind::Member && phi.kind() != Formula::Kind::Equal)
    return false;
  return phi.lhs().is_constant_like() && phi.rhs().is_constant_like();
}

bool is_closed(const Formula& phi) { return free_vars(phi).empty(); }

// ---------------------------------------------------------------------------
// Prenex normalization by collection
// ---------------------------------------------------------------------------

namespace {

Formula nnf(const Formula& f, bool positive) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Member:
    case K::Equal:
    case K::Atom:
      return positive ? f : Formula::negation(f);
    case K::Not:
      return nnf(f.body(), !positive);
    case K::And: {
      Formula a = nnf(f.left(), positive);
      Formula b = nnf(f.right(), positive);
      return positive ? Formula::conj(a, b) : Formula::disj(a, b);
    }
    case K::Or: {
      Formula a = nnf(f.left(), positive);
      Formula b = nnf(f.right(), positive);
      return positive ? Formula::disj(a, b) : Formula::conj(a, b);
    }
    case K::BoundedExists:
      return positive ? Formula::bounded_exists(f.quant_var(), f.quant_bound(),
                                                nnf(f.body(), true))
                      : Formula::bounded_forall(f.quant_var(), f.quant_bound(),
                                                nnf(f.body(), false));
    case K::BoundedForall:
      return positive ? Formula::bounded_forall(f.quant_var(), f.quant_bound(),
                                                nnf(f.body(), true))
                      : Formula::bounded_exists(f.quant_var(), f.quant_bound(),
                                                nnf(f.body(), false));
    case K::Exists:
      return positive ? Formula::exists(f.quant_var(), nnf(f.body(), true))
                      : Formula::forall(f.quant_var(), nnf(f.body(), false));
    case K::Forall:
      return positive ? Formula::forall(f.quant_var(), nnf(f.body(), true))
                      : Formula::exists(f.quant_var(), nnf(f.body(), false));
  }
  throw error("unreachable");
}

struct Quant {
  bool is_exists;
  std::string var;
};

struct Pren {
  std::vector<Quant> prefix;  // outermost first
  Formula matrix;
};

// Interleaves two prefixes, preserving each one's internal order, minimizing
// quantifier alternations. `sigma_first` chooses which kind leads. Left
// prefix quantifiers are emitted before right ones within a phase.
std::vector<Quant> merge_prefixes(const std::vector<Quant>& a,
                                  const std::vector<Quant>& b,
                                  bool sigma_first) {
  std::vector<Quant> out;
  std::size_t i = 0, j = 0;
  bool want_exists = sigma_first;
  while (i < a.size() || j < b.size()) {
    bool emitted = false;
    while (i < a.size() && a[i].is_exists == want_exists) {
      out.push_back(a[i++]);
      emitted = true;
    }
    while (j < b.size() && b[j].is_exists == want_exists) {
      out.push_back(b[j++]);
      emitted = true;
    }
    want_exists = !want_exists;
    (void)emitted;
  }
  return out;
}

struct BoundedQuant {
  bool is_exists;
  std::string var;
  Term bound;
};

// A conjunction of a proper Sigma(n) and a proper Pi(n) part can be put in
// prenex form leading with either kind; `prefer_sigma` tells such ties which
// way the enclosing context needs them to go.
Pren prenex(const Formula& f, FreshNames& names, bool prefer_sigma) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Member:
    case K::Equal:
    case K::Atom:
    case K::Not:  // NNF: negation sits on a Delta0 part
      return {{}, f};
    case K::And:
    case K::Or: {
      ClassPair cp = class_pair(f);
      bool lead_sigma = cp.s < cp.p ? true : cp.p < cp.s ? false : prefer_sigma;
      Pren pa = prenex(f.left(), names, lead_sigma);
      Pren pb = prenex(f.right(), names, lead_sigma);
      if (pa.prefix.empty() && pb.prefix.empty()) return {{}, f};
      std::vector<Quant> merged = merge_prefixes(pa.prefix, pb.prefix, lead_sigma);
      Formula m = f.kind() == K::And ? Formula::conj(pa.matrix, pb.matrix)
                                     : Formula::disj(pa.matrix, pb.matrix);
      return {std::move(merged), std::move(m)};
    }
    case K::BoundedExists:
    case K::BoundedForall: {
      Pren pb = prenex(f.body(), names, prefer_sigma);
      if (pb.prefix.empty()) {
        Formula m = f.kind() == K::BoundedExists
                        ? Formula::bounded_exists(f.quant_var(), f.quant_bound(),
                                                  pb.matrix)
                        : Formula::bounded_forall(f.quant_var(), f.quant_bound(),
                                                  pb.matrix);
        return {{}, std::move(m)};
      }
      // Hoist each unbounded quantifier over the bounded block, applying the
      // collection rewrite at every polarity mismatch. The bounded chain is
      // outermost-first; position 0 is this node's own quantifier.
      std::vector<BoundedQuant> chain;
      chain.push_back({f.kind() == K::BoundedExists, f.quant_var(),
                       f.quant_bound()});
      std::vector<Quant> out_prefix;
      for (const Quant& q : pb.prefix) {
        std::string carried = q.var;
        // Walk the chain from innermost to outermost.
        for (std::size_t pos = chain.size(); pos-- > 0;) {
          if (chain[pos].is_exists == q.is_exists) continue;  // commutes
          std::string collected = names.fresh(carried + "_C");
          chain.insert(chain.begin() + static_cast<std::ptrdiff_t>(pos) + 1,
                       {q.is_exists, carried, Term::var(collected)});
          carried = collected;
        }
        out_prefix.push_back({q.is_exists, carried});
      }
      Formula m = pb.matrix;
      for (std::size_t pos = chain.size(); pos-- > 0;) {
        m = chain[pos].is_exists
                ? Formula::bounded_exists(chain[pos].var, chain[pos].bound, m)
                : Formula::bounded_forall(chain[pos].var, chain[pos].bound, m);
      }
      return {std::move(out_prefix), std::move(m)};
    }
    case K::Exists: {
      Pren pb = prenex(f.body(), names, true);
      pb.prefix.insert(pb.prefix.begin(), {true, f.quant_var()});
      return pb;
    }
    case K::Forall: {
      Pren pb = prenex(f.body(), names, false);
      pb.prefix.insert(pb.prefix.begin(), {false, f.quant_var()});
      return pb;
    }
  }
  throw error("unreachable");
}

}  // namespace

bool is_prenex(const Formula& phi) {
  Formula cur = phi;
  while (cur.kind() == Formula::Kind::Exists ||
         cur.kind() == Formula::Kind::Forall) {
    cur = cur.body();
  }
  return classify(cur).is_delta0();
}

Formula normalize_collection(const Formula& phi) {
  Formula f = alpha_normalize(phi);
  LevyClass before = classify(f);
  if (before.is_delta0()) return f;
  FreshNames names(all_vars(f));
  Formula n = nnf(f, true);
  Pren pr = prenex(n, names, before.kind != LevyClass::Kind::Pi);
  Formula out = pr.matrix;
  for (std::size_t i = pr.prefix.size(); i-- > 0;) {
    out = pr.prefix[i].is_exists ? Formula::exists(pr.prefix[i].var, out)
                                 : Formula::forall(pr.prefix[i].var, out);
  }
  if (classify(out) != before)
    throw error("normalize_collection changed the class: " + before.str() +
                " -> " + classify(out).str());
  return out;
}

// ---------------------------------------------------------------------------
// Goedel coding
// ---------------------------------------------------------------------------

Nat cantor_pair(const Nat& a, const Nat& b) {
  Nat s = a + b;
  return s * (s + 1) / 2 + b;
}

std::pair<Nat, Nat> cantor_unpair(const Nat& z) {
  // w = floor((sqrt(8z+1)-1)/2)
  Nat t = 8 * z + 1;
  Nat r;
  mpz_sqrt(r.get_mpz_t(), t.get_mpz_t());
  Nat w = (r - 1) / 2;
  Nat b = z - w * (w + 1) / 2;
  Nat a = w - b;
  return {a, b};
}

// The code of a formula is its tagged, length-prefixed byte serialization
// read as one base-256 number behind a sentinel byte. Linear in the size of
// the formula, injective, and decodable; recursive pairing schemes square
// the code at every level and are useless past toy depth.

namespace {

void put_varint(std::string& out, std::size_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<char>(0x80 | (v & 0x7f)));
    v >>= 7;
  }
  out.push_back(static_cast<char>(v));
}

void put_nat(std::string& out, const Nat& v) {
  std::string bytes;
  Nat cur = v;
  while (cur > 0) {
    Nat rem = cur % 256;
    bytes.push_back(static_cast<char>(rem.get_ui()));
    cur /= 256;
  }
  put_varint(out, bytes.size());
  out += bytes;
}

void put_string(std::string& out, const std::string& s) {
  put_varint(out, s.size());
  out += s;
}

class ByteReader {
 public:
  explicit ByteReader(std::string bytes) : bytes_(std::move(bytes)) {}

  std::size_t varint() {
    std::size_t v = 0;
    unsigned shift = 0;
    while (true) {
      unsigned char b = next();
      v |= static_cast<std::size_t>(b & 0x7f) << shift;
      if (!(b & 0x80)) return v;
      shift += 7;
      if (shift > 56) throw malformed_error("runaway varint in formula code");
    }
  }

  Nat nat() {
    std::size_t len = varint();
    Nat out = 0;
    for (std::size_t i = len; i-- > 0;) {
      out <<= 8;
      out += static_cast<unsigned long>(static_cast<unsigned char>(at(pos_ + i)));
    }
    pos_ += len;
    return out;
  }

  std::string str() {
    std::size_t len = varint();
    std::string out;
    for (std::size_t i = 0; i < len; ++i) out.push_back(next());
    return out;
  }

  unsigned char next() { return static_cast<unsigned char>(at(pos_++)); }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  char at(std::size_t i) const {
    if (i >= bytes_.size()) throw malformed_error("truncated formula code");
    return bytes_[i];
  }
  std::string bytes_;
  std::size_t pos_ = 0;
};

void put_term(std::string& out, const Term& t) {
  out.push_back(static_cast<char>(t.kind()));
  switch (t.kind()) {
    case Term::Kind::Var: put_string(out, t.var_name()); break;
    case Term::Kind::Const: put_nat(out, t.code()); break;
    case Term::Kind::SigD: put_varint(out, t.d_index()); break;
    default: break;
  }
}

Term read_term(ByteReader& r) {
  unsigned char tag = r.next();
  switch (tag) {
    case 0: return Term::var(r.str());
    case 1: return Term::constant(r.nat());
    case 2: return Term::sig_p();
    case 3: return Term::sig_c();
    case 4: return Term::sig_d(r.varint());
    default: throw malformed_error("bad term tag in formula code");
  }
}

void put_formula(std::string& out, const Formula& f) {
  using K = Formula::Kind;
  out.push_back(static_cast<char>(f.kind()));
  switch (f.kind()) {
    case K::Member:
    case K::Equal:
      put_term(out, f.lhs());
      put_term(out, f.rhs());
      return;
    case K::Atom:
      put_varint(out, f.atom_id().value);
      put_varint(out, f.atom_args().size());
      for (const Term& t : f.atom_args()) put_term(out, t);
      return;
    case K::Not:
      put_formula(out, f.body());
      return;
    case K::And:
    case K::Or:
      put_formula(out, f.left());
      put_formula(out, f.right());
      return;
    case K::BoundedExists:
    case K::BoundedForall:
      put_string(out, f.quant_var());
      put_term(out, f.quant_bound());
      put_formula(out, f.body());
      return;
    case K::Exists:
    case K::Forall:
      put_string(out, f.quant_var());
      put_formula(out, f.body());
      return;
  }
  throw error("unreachable");
}

Formula read_formula(ByteReader& r) {
  using K = Formula::Kind;
  unsigned char tag = r.next();
  if (tag > 9) throw malformed_error("bad formula tag in code");
  K kind = static_cast<K>(tag);
  switch (kind) {
    case K::Member:
    case K::Equal: {
      Term a = read_term(r), b = read_term(r);
      return kind == K::Member ? Formula::member(a, b) : Formula::equal(a, b);
    }
    case K::Atom: {
      std::uint32_t id = static_cast<std::uint32_t>(r.varint());
      std::size_t n = r.varint();
      std::vector<Term> args;
      for (std::size_t i = 0; i < n; ++i) args.push_back(read_term(r));
      return Formula::atom(AtomId{id}, std::move(args));
    }
    case K::Not:
      return Formula::negation(read_formula(r));
    case K::And:
    case K::Or: {
      Formula a = read_formula(r), b = read_formula(r);
      return kind == K::And ? Formula::conj(a, b) : Formula::disj(a, b);
    }
    case K::BoundedExists:
    case K::BoundedForall: {
      std::string v = r.str();
      Term bound = read_term(r);
      Formula body = read_formula(r);
      return kind == K::BoundedExists ? Formula::bounded_exists(v, bound, body)
                                      : Formula::bounded_forall(v, bound, body);
    }
    case K::Exists:
    case K::Forall: {
      std::string v = r.str();
      Formula body = read_formula(r);
      return kind == K::Exists ? Formula::exists(v, body)
                               : Formula::forall(v, body);
    }
  }
  throw error("unreachable");
}

Nat bytes_to_nat(const std::string& bytes) {
  Nat out = 1;  // sentinel preserves leading zero bytes
  for (unsigned char b : bytes) {
    out <<= 8;
    out += static_cast<unsigned long>(b);
  }
  return out;
}

std::string nat_to_bytes(Nat code) {
  std::string rev;
  while (code > 1) {
    Nat rem = code % 256;
    rev.push_back(static_cast<char>(rem.get_ui()));
    code /= 256;
  }
  if (code != 1) throw malformed_error("missing sentinel in formula code");
  std::reverse(rev.begin(), rev.end());
  return rev;
}

}  // namespace

Nat godel_code(const Term& t) {
  std::string out;
  put_term(out, t);
  return bytes_to_nat(out);
}

Term decode_term(const Nat& code) {
  ByteReader r(nat_to_bytes(code));
  Term t = read_term(r);
  if (!r.done()) throw malformed_error("trailing bytes in term code");
  return t;
}

Nat godel_code(const Formula& phi) {
  std::string out;
  put_formula(out, phi);
  return bytes_to_nat(out);
}

Formula decode_formula(const Nat& code) {
  ByteReader r(nat_to_bytes(code));
  Formula f = read_formula(r);
  if (!r.done()) throw malformed_error("trailing bytes in formula code");
  return f;
}

// ---------------------------------------------------------------------------
// Atom registry
// ---------------------------------------------------------------------------

namespace {

// Canonical key: the definition with parameters renamed to x0..xk, coded.
Nat atom_key(const Formula& definition, const std::vector<std::string>& params) {
  Formula canon = alpha_normalize(definition);
  for (std::size_t i = 0; i < params.size(); ++i) {
    canon = substitute(canon, params[i], Term::var("xk_" + std::to_string(i)));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    canon = substitute(canon, "xk_" + std::to_string(i),
                       Term::var("x" + std::to_string(i)));
  }
  return godel_code(alpha_normalize(canon));
}

}  // namespace

AtomId AtomRegistry::register_atom(const std::string& name,
                                   const Formula& definition,
                                   const std::vector<std::string>& params) {
  Formula def = alpha_normalize(definition);
  if (!classify(def).is_delta0())
    throw malformed_error("registered atom must be Delta0: " + name);
  std::set<std::string> fv = free_vars(def);
  if (fv != std::set<std::string>(params.begin(), params.end()) ||
      fv.size() != params.size())
    throw malformed_error("atom arity mismatch: " + name);
  Nat key = atom_key(def, params);
  std::lock_guard<std::mutex> lock(mu_);
  for (const auto& [k, id] : by_key_) {
    if (k == key) {
      bool known = false;
      for (const auto& [n, i] : by_name_)
        if (n == name && i == id) known = true;
      if (!known) by_name_.emplace_back(name, id);
      return id;
    }
  }
  AtomId id{static_cast<std::uint32_t>(atoms_.size())};
  atoms_.push_back(AtomInfo{name, def, params});
  by_key_.emplace_back(std::move(key), id);
  by_name_.emplace_back(name, id);
  return id;
}

const AtomInfo& AtomRegistry::info(AtomId id) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (id.value >= atoms_.size())
    throw contract_error("unregistered Levy atom id " + std::to_string(id.value));
  return atoms_[id.value];
}

std::optional<AtomId> AtomRegistry::by_name(const std::string& name) const {
  std::lock_guard<std::mutex> lock(mu_);
  for (const auto& [n, id] : by_name_)
    if (n == name) return id;
  return std::nullopt;
}

std::size_t AtomRegistry::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return atoms_.size();
}

namespace detail {
void preload_catalog(AtomRegistry& reg);  // defined in levy_catalog.cpp
}

AtomRegistry& AtomRegistry::global() {
  static AtomRegistry* reg = [] {
    auto* r = new AtomRegistry();
    detail::preload_catalog(*r);
    return r;
  }();
  return *reg;
}

Formula expand_levy_atoms(const Formula& phi, const AtomRegistry& reg) {
  using K = Formula::Kind;
  switch (phi.kind()) {
    case K::Member:
    case K::Equal:
      return phi;
    case K::Atom: {
      const AtomInfo& info = reg.info(phi.atom_id());
      if (info.params.size() != phi.atom_args().size())
        throw contract_error("atom argument count mismatch: " + info.name);
      // Stage through reserved names so arg/param name overlaps are safe.
      Formula out = alpha_normalize(info.definition);
      for (std::size_t i = 0; i < info.params.size(); ++i) {
        out = substitute(out, info.params[i],
                         Term::var("arg_stage_" + std::to_string(i)));
      }
      for (std::size_t i = 0; i < info.params.size(); ++i) {
        out = substitute(out, "arg_stage_" + std::to_string(i),
                         phi.atom_args()[i]);
      }
      return expand_levy_atoms(out, reg);  // nested atoms expand to fixpoint
    }
    case K::Not:
      return Formula::negation(expand_levy_atoms(phi.body(), reg));
    case K::And:
      return Formula::conj(expand_levy_atoms(phi.left(), reg),
                           expand_levy_atoms(phi.right(), reg));
    case K::Or:
      return Formula::disj(expand_levy_atoms(phi.left(), reg),
                           expand_levy_atoms(phi.right(), reg));
    case K::BoundedExists:
      return Formula::bounded_exists(phi.quant_var(), phi.quant_bound(),
                                     expand_levy_atoms(phi.body(), reg));
    case K::BoundedForall:
      return Formula::bounded_forall(phi.quant_var(), phi.quant_bound(),
                                     expand_levy_atoms(phi.body(), reg));
    case K::Exists:
      return Formula::exists(phi.quant_var(), expand_levy_atoms(phi.body(), reg));
    case K::Forall:
      return Formula::forall(phi.quant_var(), expand_levy_atoms(phi.body(), reg));
  }
  throw error("unreachable");
}

}  // namespace setforge
